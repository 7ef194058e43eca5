"""Exception hierarchy for seqcert."""

from __future__ import annotations


class SeqcertError(Exception):
    """Base class for all seqcert errors."""


class NonConvergentPairing(SeqcertError):
    """The dual pairing series is not certified absolutely convergent."""


class NoMajorant(SeqcertError):
    """No summable tail majorant can be derived for a series."""


class DomainViolation(SeqcertError):
    """A point lies outside the domain of a function (e.g. a negative
    coordinate fed to a square-root term)."""


class NegativeScale(SeqcertError):
    """Convex expressions only admit nonnegative scaling factors."""


class NonConvexBehavior(SeqcertError):
    """Difference quotients violated convex monotonicity beyond the noise
    floor; the input is either non-convex or buggy."""


class DomainLimited(SeqcertError):
    """Only one side of a directional derivative is evaluable because the
    base point sits on the boundary of the domain."""


class PartialNotDifferentiable(SeqcertError):
    """A reduced-problem partial derivative does not exist."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"partial derivative {index} does not exist")


class Unbounded(SeqcertError):
    """Iterates of the reduced minimizer diverged beyond the safety bound."""


class MaxSweeps(SeqcertError):
    """The reduced minimizer hit its sweep limit before converging."""


class InfeasiblePoint(SeqcertError):
    """The candidate point violates the constraint system."""


class ScenarioError(SeqcertError):
    """A scenario file failed to parse or validate."""
