"""Numeric directional derivatives of convex functions, with sound bounds.

For a convex function the difference quotient (f(x + t h) - f(x)) / t is
nonincreasing as t decreases to 0 and nondecreasing as t increases to 0, so
each one-sided derivative is bracketed by a monotone sequence of quotients.
Verdicts (does the two-sided derivative exist?) use those monotone bounds
only; Richardson extrapolation sharpens the reported value but never feeds
a decision.  Differences along finitely supported directions are computed
exactly (no series, no cancellation), so quotients stay trustworthy down to
machine scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import (
    DomainLimited,
    DomainViolation,
    NonConvexBehavior,
)
from .funcs import (
    Constant,
    DirStatus,
    FunctionExpr,
    LimsupSeminorm,
    LinearFunctional,
    Scale,
    SeparableSeries,
    Sum,
    analytic_dir_deriv,
    delta_along,
    evaluate,
)
from .seqspace import Point, basis_vector

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class DerivOptions:
    """Step schedule and matching tolerance for quotient evaluation.

    t0 = None picks 1e-2 * max(1, |x_n|) for single-coordinate directions
    and 1e-2 otherwise; steps is the number of halvings; tol_match decides
    left-right agreement; noise_scale * eps * (|f(x)|+1) / t is the scale
    below which quotient movement is considered numeric noise.  Setting
    prefer_analytic False forces the quotient scan even along basis
    directions (used for independent cross-checks of the closed forms).
    """

    t0: Optional[float] = None
    steps: int = 40
    tol_match: float = 1e-7
    noise_scale: float = 16.0
    prefer_analytic: bool = True


@dataclass(frozen=True)
class DirDerivResult:
    """One-sided derivative estimates along a direction.

    ``right`` and ``left`` are certified monotone bounds (min of right
    quotients, max of left quotients); ``exists`` holds when both are finite
    and within tol_match of each other, in which case ``value`` carries the
    extrapolated estimate.  ``quotients_log`` records every (t, quotient)
    pair evaluated, negative t on the left side.
    """

    right: float
    left: float
    exists: bool
    value: Optional[float]
    noise_floor: float
    quotients_log: tuple[tuple[float, float], ...]
    method: str = "numeric"


def _support(h: Point) -> Optional[list[int]]:
    """Indices of nonzero coordinates when h is finitely supported."""
    if not h.is_finitely_supported():
        return None
    return [i + 1 for i, v in enumerate(h.prefix) if v != 0.0]


def _is_basis(h: Point) -> Optional[int]:
    sup = _support(h)
    if sup is not None and len(sup) == 1 and h.prefix[sup[0] - 1] == 1.0:
        return sup[0]
    return None


def _delta_finite(f: FunctionExpr, x: Point, h: Point, support: list[int], t: float) -> float:
    """f(x + t h) - f(x) for finitely supported h: an exact finite sum.

    Only the touched coordinates contribute for every leaf of the grammar
    (a finite perturbation never moves a limsup).
    """
    if isinstance(f, (Constant, LimsupSeminorm)):
        return 0.0
    if isinstance(f, LinearFunctional):
        return t * sum(f.p.coordinate(n) * h.coordinate(n) for n in support)
    if isinstance(f, SeparableSeries):
        return sum(
            f.weight.value_at(n) * f.inner.delta(n, x.coordinate(n), t * h.coordinate(n))
            for n in support
        )
    if isinstance(f, Scale):
        return f.lam * _delta_finite(f.inner, x, h, support, t) if f.lam else 0.0
    if isinstance(f, Sum):
        return sum(_delta_finite(g, x, h, support, t) for g in f.terms)
    raise TypeError(f"unknown function expression {type(f).__name__}")


def _quotient(f: FunctionExpr, x: Point, h: Point, support: Optional[list[int]], t: float) -> float:
    if support is not None:
        return _delta_finite(f, x, h, support, t) / t
    sv = delta_along(f, x, h, t, tol=abs(t) * 1e-13)
    return sv.value / t


class _Side:
    """Monotone quotient scan on one side of 0."""

    __slots__ = ("bound", "report", "log", "alive", "touched")

    def __init__(self):
        self.bound: Optional[float] = None
        self.report: Optional[float] = None
        self.log: list[tuple[float, float]] = []
        self.alive = False
        self.touched = False


def _scan_side(
    f: FunctionExpr,
    x: Point,
    h: Point,
    support: Optional[list[int]],
    t0: float,
    sign: int,
    opts: DerivOptions,
    fx_mag: float,
) -> _Side:
    """Evaluate quotients at t = sign * t0 * 2^-j with early stopping.

    Right side (sign=+1): quotients must be nonincreasing up to noise;
    left side (sign=-1): nondecreasing.  Violations beyond 10x the noise
    floor mean the input was not convex (or the evaluator is broken).
    Early stopping applies only to series-backed quotients, whose error
    grows like 1/t; exact finite differences stay trustworthy at every
    step, so those scans run the full ladder.
    """
    side = _Side()
    qs: list[float] = []
    prev: Optional[float] = None
    for j in range(opts.steps + 1):
        t = sign * t0 * 2.0**-j
        nf = opts.noise_scale * _EPS * (fx_mag + 1.0) / abs(t)
        try:
            q = _quotient(f, x, h, support, t)
        except DomainViolation:
            # Convex domains are intervals along a line: larger |t| failing
            # says nothing about smaller |t|, so keep shrinking.
            continue
        side.touched = True
        side.log.append((t, q))
        if prev is not None:
            drift = (q - prev) if sign > 0 else (prev - q)
            if drift > 10.0 * nf:
                raise NonConvexBehavior(
                    f"difference quotients moved the wrong way at t={t:.3e} "
                    f"(drift {drift:.3e} vs noise floor {nf:.3e})"
                )
            if support is None and abs(q - prev) <= nf:
                qs.append(q)
                prev = q
                break
        qs.append(q)
        prev = q
    if not qs:
        return side
    side.alive = True
    side.bound = min(qs) if sign > 0 else max(qs)
    side.report = _extrapolate(qs, sign)
    return side


def _extrapolate(qs: list[float], sign: int) -> float:
    """Richardson-style limit estimate from the last geometric-looking gaps."""
    if len(qs) < 3:
        return qs[-1]
    g1 = qs[-2] - qs[-1]
    g0 = qs[-3] - qs[-2]
    if g0 == 0.0 or g1 == 0.0:
        return qs[-1]
    rho = g1 / g0
    if not (0.0 < rho < 0.9):
        return qs[-1]
    return qs[-1] - g1 * rho / (1.0 - rho)


def dir_deriv(
    f: FunctionExpr, x: Point, h: Point, opts: DerivOptions = DerivOptions()
) -> DirDerivResult:
    """Directional derivative of f at x along h, with an existence verdict.

    Uses the closed-form path when h is a basis vector and the expression
    has one (method "analytic"); otherwise scans monotone difference
    quotients on both sides.  A side whose every probe leaves the domain is
    reported at its extended-real limit (+inf on the right would mean the
    right side is infeasible; in this grammar only -inf arises, from sqrt
    boundaries); the verdict is then "does not exist".
    """
    n = _is_basis(h)
    if n is not None and opts.prefer_analytic:
        dv = analytic_dir_deriv(f, x, n)
        if dv.status is not DirStatus.UNAVAILABLE:
            left = -math.inf if dv.left is None else dv.left
            right = math.inf if dv.right is None else dv.right
            exists = (
                math.isfinite(left)
                and math.isfinite(right)
                and abs(right - left) <= opts.tol_match
            )
            return DirDerivResult(
                right=right,
                left=left,
                exists=exists,
                value=dv.value if exists else None,
                noise_floor=0.0,
                quotients_log=(),
                method="analytic",
            )

    fx = evaluate(f, x)
    if not math.isfinite(fx.value):
        raise DomainViolation("f(x) is not finite; directional derivatives need a base value")
    fx_mag = abs(fx.value)

    support = _support(h)
    if opts.t0 is not None:
        t0 = opts.t0
    elif support is not None and len(support) == 1:
        t0 = 1e-2 * max(1.0, abs(x.coordinate(support[0])))
    else:
        t0 = 1e-2
    right = _scan_side(f, x, h, support, t0, +1, opts, fx_mag)
    left = _scan_side(f, x, h, support, t0, -1, opts, fx_mag)
    if not right.alive and not left.alive:
        raise DomainLimited("no feasible step on either side of 0")

    r_bound = right.bound if right.alive else math.inf
    l_bound = left.bound if left.alive else -math.inf
    exists = (
        math.isfinite(r_bound)
        and math.isfinite(l_bound)
        and abs(r_bound - l_bound) <= opts.tol_match
    )
    value = None
    if exists:
        value = 0.5 * (right.report + left.report)
    if support is not None:
        # Exact finite differences: only rounding of the quotient itself.
        worst = max(abs(r_bound) if right.alive else 0.0,
                    abs(l_bound) if left.alive else 0.0)
        nf = opts.noise_scale * _EPS * (1.0 + worst)
    else:
        # Series-backed quotients: error scales like 1/t at the smallest
        # step actually accepted.
        ts = [abs(t) for side in (right, left) for (t, _) in side.log]
        smallest_t = min(ts) if ts else t0 * 2.0 ** -(opts.steps)
        nf = opts.noise_scale * _EPS * (fx_mag + 1.0) / smallest_t
    return DirDerivResult(
        right=r_bound,
        left=l_bound,
        exists=exists,
        value=value,
        noise_floor=nf,
        quotients_log=tuple(left.log[::-1] + right.log),
        method="numeric",
    )


def dir_deriv_profile(
    f: FunctionExpr, x: Point, direction_count: int, opts: DerivOptions = DerivOptions()
) -> list[DirDerivResult]:
    """dir_deriv along e_1 .. e_N; errors are re-raised tagged by index."""
    if direction_count < 1:
        raise ValueError("direction count must be >= 1")
    out = []
    for n in range(1, direction_count + 1):
        try:
            out.append(dir_deriv(f, x, basis_vector(n), opts))
        except (DomainViolation, DomainLimited, NonConvexBehavior) as exc:
            raise type(exc)(f"direction {n}: {exc}") from exc
    return out
