"""Finite-dimensional reduction and a brute-force minimization oracle.

The reduced problem pins every coordinate beyond k to the anchor's value
and minimizes over the first k coordinates only.  Because anchored
truncations of a rectangular feasible set stay feasible, the reduced
minimum is a certified upper bound for the full problem, nonincreasing in
k.  The minimizer is found by cyclic coordinate descent with an exact
line search: the one-coordinate restriction of the objective is evaluated
through exact finite differences (no series truncation), so the search is
immune to cancellation noise and independent of the certificate pipeline
it cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .certify import SetDescriptor, coordinate_interval, set_membership
from .derivative import DerivOptions, dir_deriv
from .errors import (
    DomainViolation,
    InfeasiblePoint,
    MaxSweeps,
    PartialNotDifferentiable,
    Unbounded,
)
from .funcs import DirStatus, FunctionExpr, analytic_dir_deriv, delta_along_basis, evaluate
from .seqspace import Point, SeriesValue, basis_vector


@dataclass(frozen=True)
class OracleOptions:
    max_sweeps: int = 10_000
    sweep_tol: float = 1e-12
    line_tol: float = 1e-12
    bound: float = 1e6


@dataclass(frozen=True)
class ReducedProblem:
    """Minimize y -> f(x* + P^k(y - x*)) over the feasible box slice."""

    k: int
    anchor: Point
    f: FunctionExpr
    feasible_set: SetDescriptor

    def embed(self, y) -> Point:
        """Splice the k free coordinates over the anchor."""
        if len(y) != self.k:
            raise ValueError(f"expected {self.k} coordinates, got {len(y)}")
        prefix = tuple(float(v) for v in y) + self.anchor.prefix[self.k :]
        return Point(prefix, self.anchor.tail)

    def start(self) -> list[float]:
        return [self.anchor.coordinate(i) for i in range(1, self.k + 1)]


def build_reduced(
    f: FunctionExpr, s: SetDescriptor, x_star: Point, k: int
) -> ReducedProblem:
    if k < 1:
        raise ValueError(f"reduction dimension must be >= 1, got {k}")
    ok, wit = set_membership(s, x_star)
    if ok is not True:
        detail = f"coordinate {wit}" if ok is False else "tail not certified"
        raise InfeasiblePoint(f"anchor is not a certified member of the set ({detail})")
    return ReducedProblem(k, x_star, f, s)


def grad_reduced(prob: ReducedProblem, y) -> list[float]:
    """Gradient of the reduced objective, from per-coordinate derivatives.

    Raises PartialNotDifferentiable at a kink coordinate; falls back to the
    monotone-quotient scan when no closed form applies.
    """
    x = prob.embed(y)
    out = []
    for i in range(1, prob.k + 1):
        dv = analytic_dir_deriv(prob.f, x, i)
        if dv.status is DirStatus.EXISTS:
            out.append(dv.value)
            continue
        if dv.status is DirStatus.NOT_DIFFERENTIABLE:
            raise PartialNotDifferentiable(i)
        res = dir_deriv(prob.f, x, basis_vector(i), DerivOptions())
        if not res.exists:
            raise PartialNotDifferentiable(i)
        out.append(res.value)
    return out


def _phi(prob: ReducedProblem, x: Point, i: int, t: float) -> float:
    """Exact f(x + t e_i) - f(x); +inf outside the domain."""
    if t == 0.0:
        return 0.0
    try:
        return delta_along_basis(prob.f, x, i, t)
    except DomainViolation:
        return math.inf


def _line_minimize(
    prob: ReducedProblem, x: Point, i: int, lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Ternary search for the convex one-coordinate restriction on [lo, hi].

    Returns (t, phi(t)).  0 is assumed to lie in [lo, hi] with phi(0) = 0
    finite, which keeps the infeasible ends identifiable: the domain is an
    interval around 0, so when both probes are infeasible the live segment
    is whichever third contains 0.

    The stopping width is relative to the interval's magnitude: near the
    search cap the ulp of the endpoints exceeds any absolute tolerance, so
    an absolute test would never trigger.
    """
    while hi - lo > tol * (1.0 + max(abs(lo), abs(hi))):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        v1 = _phi(prob, x, i, m1)
        v2 = _phi(prob, x, i, m2)
        if math.isinf(v1) and math.isinf(v2):
            if m1 >= 0.0:
                hi = m1
            elif m2 <= 0.0:
                lo = m2
            else:
                lo, hi = m1, m2
        elif v1 < v2:
            hi = m2
        else:
            lo = m1
    t = 0.5 * (lo + hi)
    v = _phi(prob, x, i, t)
    if math.isinf(v):
        return 0.0, 0.0
    return t, v


def minimize_reduced(
    prob: ReducedProblem, opts: OracleOptions = OracleOptions()
) -> tuple[list[float], SeriesValue, int]:
    """Cyclic coordinate descent with exact line searches.

    Returns (minimizer, certified objective value, sweeps used).  Raises
    Unbounded when a coordinate runs to the search cap and MaxSweeps when
    the sweep budget is exhausted before the decrease test triggers.
    """
    y = prob.start()
    feasible_start = evaluate(prob.f, prob.embed(y))
    if math.isinf(feasible_start.value):
        raise DomainViolation("objective is infinite at the starting point")

    b = opts.bound
    sweeps = 0
    while sweeps < opts.max_sweeps:
        sweeps += 1
        decrease = 0.0
        for i in range(1, prob.k + 1):
            x = prob.embed(y)
            lo_set, hi_set = coordinate_interval(prob.feasible_set, i)
            lo = max(lo_set - y[i - 1], -b)
            hi = min(hi_set - y[i - 1], b)
            if hi <= lo:
                continue
            t, v = _line_minimize(prob, x, i, lo, hi, opts.line_tol)
            if v < 0.0:
                # margin matched to the line search's relative stopping width
                cap_margin = 4 * opts.line_tol * (1.0 + b)
                at_cap = (
                    (lo == -b and t <= lo + cap_margin)
                    or (hi == b and t >= hi - cap_margin)
                )
                if at_cap:
                    raise Unbounded(
                        f"coordinate {i} runs to the search cap {b:g} while still descending"
                    )
                y[i - 1] += t
                decrease += -v
            if abs(y[i - 1]) > b:
                raise Unbounded(f"coordinate {i} left the search box")
        if decrease <= opts.sweep_tol * (1.0 + abs(feasible_start.value)):
            final = evaluate(prob.f, prob.embed(y))
            return y, final, sweeps
    raise MaxSweeps(f"no convergence within {opts.max_sweeps} sweeps")
