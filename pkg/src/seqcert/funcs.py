"""A closed grammar of convex functions on sequence spaces.

Leaves are a limsup seminorm, separable series sum(w_n * u_n(x_n)) with
per-index scalar convex pieces, and continuous linear functionals; sums and
nonnegative scalings combine them.  Everything in the grammar evaluates
through certified series and has closed-form one-sided derivatives along
basis directions, which is what the optimality and differentiability
certificates are built from.

Per-index coefficients (series weights, scalar parameters) use the same
closed forms as point tails: constant, geometric, or harmonic in the index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .errors import (
    DomainViolation,
    NegativeScale,
    NoMajorant,
)
from .seqspace import (
    DEFAULT_SERIES_TOL,
    DualPoint,
    Point,
    SeriesValue,
    TailKind,
    TailRule,
    _tail_atom_from_json,
    certified_series,
    dual_from_json,
    dual_to_json,
    limsup_abs,
    pair,
    point_axpy,
)
from .symseq import DIVERGENT, SUMMABLE, SymSeq, SymTerm, classify


def _as_form(v) -> TailRule:
    """Coerce a per-index coefficient: numbers become constant forms."""
    if isinstance(v, TailRule):
        return v
    return TailRule.const(float(v))


def _form_nonneg(form: TailRule) -> bool:
    """True when the closed form is >= 0 at every index n >= 1."""
    if form.kind is TailKind.ZERO:
        return True
    if form.kind in (TailKind.CONST, TailKind.HARMONIC):
        return form.c >= 0.0
    # geometric: sign alternates unless the ratio is nonnegative
    return form.c == 0.0 or (form.c >= 0.0 and form.r >= 0.0)


def _abs_seq(seq: SymSeq) -> SymSeq:
    terms = [SymTerm(abs(t.coef), abs(t.ratio), t.npow) for t in seq.terms]
    return SymSeq(tuple(terms), exact=seq.exact)


def _sqrt_majorant(seq: SymSeq) -> SymSeq:
    """A closed form dominating sqrt(|seq(n)|), via sqrt(a+b) <= sqrt a + sqrt b."""
    out = SymSeq.zero()
    for t in seq.terms:
        atom = SymSeq((SymTerm(abs(t.coef), abs(t.ratio), t.npow),), exact=seq.exact)
        out = out + atom.sqrt()
    return out


class ScalarKind(str, Enum):
    ABS = "abs"
    SQUARE = "square"
    AFFINE_QUAD = "affine_quad"
    NEG_SQRT = "neg_sqrt"
    LINEAR = "linear"


@dataclass(frozen=True)
class ScalarConvex:
    """One scalar convex piece u_n, with per-index parameters.

    Variants: |t|; t^2; a*t^2 + b*t with a >= 0; -c*sqrt(t) on t >= 0 with
    c >= 0; b*t.  Parameters a, b, c are closed forms in the index n.
    """

    kind: ScalarKind
    a: TailRule = TailRule.zero()
    b: TailRule = TailRule.zero()
    c: TailRule = TailRule.zero()

    def __post_init__(self):
        if self.kind is ScalarKind.AFFINE_QUAD and not _form_nonneg(self.a):
            raise ValueError("quadratic coefficient must be >= 0 at every index")
        if self.kind is ScalarKind.NEG_SQRT and not _form_nonneg(self.c):
            raise ValueError("square-root coefficient must be >= 0 at every index")

    @staticmethod
    def abs_() -> ScalarConvex:
        return ScalarConvex(ScalarKind.ABS)

    @staticmethod
    def square() -> ScalarConvex:
        return ScalarConvex(ScalarKind.SQUARE)

    @staticmethod
    def affine_quad(a, b) -> ScalarConvex:
        return ScalarConvex(ScalarKind.AFFINE_QUAD, a=_as_form(a), b=_as_form(b))

    @staticmethod
    def neg_sqrt(c) -> ScalarConvex:
        return ScalarConvex(ScalarKind.NEG_SQRT, c=_as_form(c))

    @staticmethod
    def linear(b) -> ScalarConvex:
        return ScalarConvex(ScalarKind.LINEAR, b=_as_form(b))

    # -- pointwise evaluation ------------------------------------------------

    def value(self, n: int, t: float) -> float:
        if self.kind is ScalarKind.ABS:
            return abs(t)
        if self.kind is ScalarKind.SQUARE:
            return t * t
        if self.kind is ScalarKind.AFFINE_QUAD:
            return self.a.value_at(n) * t * t + self.b.value_at(n) * t
        if self.kind is ScalarKind.LINEAR:
            return self.b.value_at(n) * t
        if t < 0.0:
            raise DomainViolation(f"sqrt piece needs t >= 0, got {t} at index {n}")
        return -self.c.value_at(n) * math.sqrt(t)

    def one_sided(self, n: int, t: float) -> tuple[Optional[float], Optional[float]]:
        """(left, right) derivatives at t; None marks a side outside the domain."""
        if self.kind is ScalarKind.ABS:
            if t > 0.0:
                return 1.0, 1.0
            if t < 0.0:
                return -1.0, -1.0
            return -1.0, 1.0
        if self.kind is ScalarKind.SQUARE:
            return 2.0 * t, 2.0 * t
        if self.kind is ScalarKind.AFFINE_QUAD:
            d = 2.0 * self.a.value_at(n) * t + self.b.value_at(n)
            return d, d
        if self.kind is ScalarKind.LINEAR:
            d = self.b.value_at(n)
            return d, d
        c = self.c.value_at(n)
        if t < 0.0:
            raise DomainViolation(f"sqrt piece needs t >= 0, got {t} at index {n}")
        if c == 0.0:
            return 0.0, 0.0
        if t == 0.0:
            # right derivative of -c*sqrt at the boundary is -infinity
            return None, -math.inf
        d = -c / (2.0 * math.sqrt(t))
        return d, d

    def delta(self, n: int, t0: float, dt: float) -> float:
        """u(t0 + dt) - u(t0), in a cancellation-free arrangement."""
        if dt == 0.0:
            return 0.0
        if self.kind is ScalarKind.ABS:
            if t0 >= 0.0 and t0 + dt >= 0.0:
                return dt
            if t0 <= 0.0 and t0 + dt <= 0.0:
                return -dt
            return abs(t0 + dt) - abs(t0)
        if self.kind is ScalarKind.SQUARE:
            return dt * (2.0 * t0 + dt)
        if self.kind is ScalarKind.AFFINE_QUAD:
            return self.a.value_at(n) * dt * (2.0 * t0 + dt) + self.b.value_at(n) * dt
        if self.kind is ScalarKind.LINEAR:
            return self.b.value_at(n) * dt
        t1 = t0 + dt
        if t0 < 0.0 or t1 < 0.0:
            raise DomainViolation(f"sqrt piece needs t >= 0 along the segment at index {n}")
        c = self.c.value_at(n)
        if c == 0.0:
            return 0.0
        root_sum = math.sqrt(t1) + math.sqrt(t0)
        if root_sum == 0.0:
            return 0.0
        return -c * dt / root_sum


# ---------------------------------------------------------------------------
# Function expressions
# ---------------------------------------------------------------------------


class FunctionExpr:
    """Base class for the convex function grammar; immutable values."""

    __slots__ = ()


@dataclass(frozen=True)
class Constant(FunctionExpr):
    """A constant offset; convex, derivative zero everywhere.

    Lets affine constraints like 1 - x_1 live in the grammar.
    """

    c: float


@dataclass(frozen=True)
class LimsupSeminorm(FunctionExpr):
    """p(x) = limsup |x_n|: finite prefixes never affect the value."""


@dataclass(frozen=True)
class SeparableSeries(FunctionExpr):
    """f(x) = sum over n of weight(n) * inner_n(x_n).

    The weight is a closed form in n and must be nonnegative at every index
    unless the inner piece is linear (where signs fold into the slope).
    """

    weight: TailRule
    inner: ScalarConvex

    def __post_init__(self):
        if self.inner.kind is not ScalarKind.LINEAR and not _form_nonneg(self.weight):
            raise ValueError("series weight must be >= 0 at every index")


@dataclass(frozen=True)
class LinearFunctional(FunctionExpr):
    """f(x) = <p, x> for a dual element p."""

    p: DualPoint


@dataclass(frozen=True)
class Sum(FunctionExpr):
    terms: tuple[FunctionExpr, ...]

    def __init__(self, terms: Sequence[FunctionExpr]):
        object.__setattr__(self, "terms", tuple(terms))


@dataclass(frozen=True)
class Scale(FunctionExpr):
    lam: float
    inner: FunctionExpr

    def __post_init__(self):
        if self.lam < 0.0:
            raise NegativeScale(f"scale factor must be >= 0, got {self.lam}")


def combine_sum(fs: Sequence[FunctionExpr]) -> FunctionExpr:
    flat: list[FunctionExpr] = []
    for f in fs:
        if isinstance(f, Sum):
            flat.extend(f.terms)
        else:
            flat.append(f)
    return Sum(tuple(flat))


def scale(lam: float, f: FunctionExpr) -> FunctionExpr:
    if lam < 0.0:
        raise NegativeScale(f"scale factor must be >= 0, got {lam}")
    return Scale(float(lam), f)


def _dual_neg(p: DualPoint) -> DualPoint:
    tail = tuple(
        TailRule(a.kind, c=-a.c, r=a.r) if a.kind is not TailKind.ZERO else a
        for a in p.tail
    )
    return DualPoint(tuple(-v for v in p.prefix), tail)


def subtract_linear(f: FunctionExpr, p: DualPoint) -> FunctionExpr:
    """The convex function x -> f(x) - <p, x>."""
    return combine_sum([f, LinearFunctional(_dual_neg(p))])


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _separable_domain_rank(f: SeparableSeries, x: Point) -> int:
    """Domain screening for sqrt pieces; returns the rank from which the
    tail's sign is settled (tail start otherwise)."""
    start = x.tail_start
    if f.inner.kind is not ScalarKind.NEG_SQRT:
        return start
    for n in range(1, start):
        if x.coordinate(n) < 0.0:
            raise DomainViolation(f"coordinate {n} is negative under a sqrt piece")
    seq = x.tail_symseq()
    if not seq.terms:
        return start
    try:
        sgn, rank = seq.eventual_sign(start)
    except ValueError as exc:
        raise DomainViolation(f"tail sign oscillates under a sqrt piece: {exc}") from exc
    if sgn < 0:
        raise DomainViolation("tail is eventually negative under a sqrt piece")
    for n in range(start, rank):
        if seq.value_at(n) < 0.0:
            raise DomainViolation(f"coordinate {n} is negative under a sqrt piece")
    return max(start, rank)


def _separable_tail_forms(
    f: SeparableSeries, x: Point, start: int
) -> tuple[Optional[SymSeq], int, Optional[SymSeq]]:
    """Closed forms for the series terms beyond the explicit region.

    Returns (exact_tail, valid_from, majorant); exactly one of exact_tail /
    majorant is non-None except when both fail (no certificate possible).
    """
    w = f.weight.to_symseq()
    xx = x.tail_symseq()
    kind = f.inner.kind
    if kind is ScalarKind.LINEAR:
        return w * f.inner.b.to_symseq() * xx, start, None
    if kind is ScalarKind.SQUARE:
        return w * xx * xx, start, None
    if kind is ScalarKind.AFFINE_QUAD:
        aa = f.inner.a.to_symseq()
        bb = f.inner.b.to_symseq()
        return w * (aa * xx * xx + bb * xx), start, None
    if kind is ScalarKind.ABS:
        if len(xx.terms) <= 1:
            return w * _abs_seq(xx), start, None
        try:
            sgn, rank = xx.eventual_sign(start)
        except ValueError:
            return None, start, _abs_seq(w) * _abs_seq(xx)
        return w.scaled(sgn) * xx, max(start, rank), None
    # NEG_SQRT: exact only for a single positive atom, else a sqrt majorant
    cc = f.inner.c.to_symseq()
    if not xx.terms:
        return SymSeq.zero(), start, None
    if len(xx.terms) == 1 and xx.terms[0].coef > 0 and xx.terms[0].ratio > 0:
        return (w * cc * xx.sqrt()).scaled(-1), start, None
    return None, start, _abs_seq(w) * _abs_seq(cc) * _sqrt_majorant(xx)


def _evaluate_separable(f: SeparableSeries, x: Point, tol: float) -> SeriesValue:
    rank = _separable_domain_rank(f, x)

    def term_at(n: int) -> float:
        return f.weight.value_at(n) * f.inner.value(n, x.coordinate(n))

    exact, valid_from, major = _separable_tail_forms(f, x, rank)
    if exact is not None:
        label = classify(exact)
        if label == SUMMABLE:
            return certified_series(term_at, valid_from, tol, tail=exact)
        if label == DIVERGENT:
            try:
                sgn, _ = exact.eventual_sign(valid_from)
            except ValueError:
                raise DomainViolation(
                    "series diverges with oscillating sign; no extended value"
                )
            if sgn > 0:
                return SeriesValue(math.inf, 0.0, 0)
            raise DomainViolation("series diverges to -infinity; not a proper value")
        raise NoMajorant("series is at best conditionally convergent")
    if major is not None:
        label = classify(major)
        if label == SUMMABLE:
            return certified_series(term_at, valid_from, tol, majorant=major)
        # A divergent majorant of nonnegative-term series still means +inf
        # only when the terms themselves are certifiably bounded below; we
        # have no such bound here, so refuse.
        raise NoMajorant(f"series majorant is {label}")
    raise NoMajorant("series terms have no certifiable closed form")


def evaluate(f: FunctionExpr, x: Point, tol: float = DEFAULT_SERIES_TOL) -> SeriesValue:
    """Certified value of f at x; value may be +inf in the extended sense.

    Raises DomainViolation when x lies outside the domain of f (negative
    coordinate under a sqrt piece, or a series with no proper extended
    value), and NonConvergentPairing for unpairable linear functionals.
    """
    if isinstance(f, Constant):
        return SeriesValue(f.c, 0.0, 0)
    if isinstance(f, LimsupSeminorm):
        return SeriesValue(limsup_abs(x), 0.0, 0)
    if isinstance(f, LinearFunctional):
        return pair(f.p, x, tol)
    if isinstance(f, SeparableSeries):
        return _evaluate_separable(f, x, tol)
    if isinstance(f, Scale):
        if f.lam == 0.0:
            return SeriesValue(0.0, 0.0, 0)
        sub = evaluate(f.inner, x, tol / max(f.lam, 1.0))
        if math.isinf(sub.value):
            return SeriesValue(math.inf, 0.0, sub.terms_used)
        return SeriesValue(f.lam * sub.value, f.lam * sub.error_bound, sub.terms_used)
    if isinstance(f, Sum):
        if not f.terms:
            return SeriesValue(0.0, 0.0, 0)
        budget = tol / len(f.terms)
        total, err, used = 0.0, 0.0, 0
        hit_inf = False
        for g in f.terms:
            sv = evaluate(g, x, budget)
            used += sv.terms_used
            if math.isinf(sv.value):
                hit_inf = True
            else:
                total += sv.value
                err += sv.error_bound
        if hit_inf:
            return SeriesValue(math.inf, 0.0, used)
        return SeriesValue(total, err, used)
    raise TypeError(f"unknown function expression {type(f).__name__}")


# ---------------------------------------------------------------------------
# Directional derivatives along basis directions
# ---------------------------------------------------------------------------


class DirStatus(str, Enum):
    EXISTS = "exists"
    NOT_DIFFERENTIABLE = "not_differentiable"
    UNAVAILABLE = "unavailable"


@dataclass(frozen=True)
class DirValue:
    """Outcome of a closed-form directional derivative query.

    ``left`` and ``right`` are the one-sided derivatives (None marks a side
    that does not exist, e.g. at a domain boundary); ``value`` is set only
    when both sides exist, are finite, and agree.
    """

    status: DirStatus
    value: Optional[float] = None
    left: Optional[float] = None
    right: Optional[float] = None

    @staticmethod
    def exists(v: float) -> DirValue:
        return DirValue(DirStatus.EXISTS, value=v, left=v, right=v)

    @staticmethod
    def kink(left: Optional[float], right: Optional[float]) -> DirValue:
        return DirValue(DirStatus.NOT_DIFFERENTIABLE, left=left, right=right)


def _one_sided_basis(
    f: FunctionExpr, x: Point, n: int
) -> tuple[Optional[float], Optional[float]]:
    """Closed-form (left, right) derivatives of t -> f(x + t e_n) at 0."""
    if isinstance(f, Constant):
        return 0.0, 0.0
    if isinstance(f, LimsupSeminorm):
        # A one-coordinate change never moves a limsup.
        return 0.0, 0.0
    if isinstance(f, LinearFunctional):
        v = f.p.coordinate(n)
        return v, v
    if isinstance(f, SeparableSeries):
        w = f.weight.value_at(n)
        left, right = f.inner.one_sided(n, x.coordinate(n))
        # Nonnegative weights preserve the side order; zero kills both sides.
        if w == 0.0:
            return 0.0, 0.0
        lw = None if left is None else w * left
        rw = None if right is None else w * right
        if w < 0.0:
            lw, rw = rw, lw
        return lw, rw
    if isinstance(f, Scale):
        if f.lam == 0.0:
            return 0.0, 0.0
        left, right = _one_sided_basis(f.inner, x, n)
        return (
            None if left is None else f.lam * left,
            None if right is None else f.lam * right,
        )
    if isinstance(f, Sum):
        lsum, rsum = 0.0, 0.0
        for g in f.terms:
            left, right = _one_sided_basis(g, x, n)
            if left is None:
                lsum = None
            elif lsum is not None:
                lsum += left
            if right is None:
                rsum = None
            elif rsum is not None:
                rsum += right
        return lsum, rsum
    raise TypeError(f"unknown function expression {type(f).__name__}")


def analytic_dir_deriv(f: FunctionExpr, x: Point, n: int) -> DirValue:
    """Closed-form derivative of f at x along the n-th basis direction.

    One-sided derivatives of the whole expression are computed separately
    and compared, so a kink in one summand is reported only when the sum
    genuinely has one.
    """
    if n < 1:
        raise ValueError(f"basis index must be >= 1, got {n}")
    left, right = _one_sided_basis(f, x, n)
    if left is None or right is None:
        return DirValue.kink(left, right)
    if math.isinf(left) or math.isinf(right):
        return DirValue.kink(left, right)
    if left == right:
        return DirValue.exists(right)
    return DirValue.kink(left, right)


# ---------------------------------------------------------------------------
# Exact differences (the cancellation-free probe path)
# ---------------------------------------------------------------------------


def delta_along_basis(f: FunctionExpr, x: Point, n: int, t: float) -> float:
    """f(x + t*e_n) - f(x), computed exactly as a finite expression.

    Along a basis direction only finitely many series terms move, so the
    difference needs no series evaluation at all; each scalar piece uses a
    cancellation-free arrangement.  This is what makes numeric difference
    quotients trustworthy at machine scale.
    """
    if isinstance(f, (Constant, LimsupSeminorm)):
        return 0.0
    if isinstance(f, LinearFunctional):
        return f.p.coordinate(n) * t
    if isinstance(f, SeparableSeries):
        return f.weight.value_at(n) * f.inner.delta(n, x.coordinate(n), t)
    if isinstance(f, Scale):
        return f.lam * delta_along_basis(f.inner, x, n, t) if f.lam else 0.0
    if isinstance(f, Sum):
        return sum(delta_along_basis(g, x, n, t) for g in f.terms)
    raise TypeError(f"unknown function expression {type(f).__name__}")


def _limsup_const_coeff(x: Point) -> float:
    c = 0.0
    for a in x.tail:
        if a.kind is TailKind.CONST:
            c += a.c
    return c


def delta_along(
    f: FunctionExpr, x: Point, h: Point, t: float, tol: float = DEFAULT_SERIES_TOL
) -> SeriesValue:
    """f(x + t*h) - f(x) as a certified value, for a general direction h.

    Differences are taken term by term before summation, so the result's
    error bound does not inherit the catastrophic cancellation of
    subtracting two full series evaluations.
    """
    if isinstance(f, Constant):
        return SeriesValue(0.0, 0.0, 0)
    if isinstance(f, LimsupSeminorm):
        cx = _limsup_const_coeff(x)
        ch = _limsup_const_coeff(h)
        return SeriesValue(abs(cx + t * ch) - abs(cx), 0.0, 0)
    if isinstance(f, LinearFunctional):
        sv = pair(f.p, h, tol / max(abs(t), 1.0))
        return SeriesValue(t * sv.value, abs(t) * sv.error_bound, sv.terms_used)
    if isinstance(f, Scale):
        if f.lam == 0.0:
            return SeriesValue(0.0, 0.0, 0)
        sv = delta_along(f.inner, x, h, t, tol / max(f.lam, 1.0))
        return SeriesValue(f.lam * sv.value, f.lam * sv.error_bound, sv.terms_used)
    if isinstance(f, Sum):
        if not f.terms:
            return SeriesValue(0.0, 0.0, 0)
        budget = tol / len(f.terms)
        total, err, used = 0.0, 0.0, 0
        for g in f.terms:
            sv = delta_along(g, x, h, t, budget)
            total += sv.value
            err += sv.error_bound
            used += sv.terms_used
        return SeriesValue(total, err, used)
    if not isinstance(f, SeparableSeries):
        raise TypeError(f"unknown function expression {type(f).__name__}")

    xt = point_axpy(x, t, h)
    rank = max(_separable_domain_rank(f, x), _separable_domain_rank(f, xt))

    def term_at(n: int) -> float:
        return f.weight.value_at(n) * f.inner.delta(n, x.coordinate(n), t * h.coordinate(n))

    w_abs = _abs_seq(f.weight.to_symseq())
    h_abs = _abs_seq(h.tail_symseq()).scaled(abs(t))
    x_abs = _abs_seq(x.tail_symseq())
    kind = f.inner.kind
    if kind is ScalarKind.ABS:
        major = w_abs * h_abs
    elif kind is ScalarKind.LINEAR:
        major = w_abs * _abs_seq(f.inner.b.to_symseq()) * h_abs
    elif kind is ScalarKind.SQUARE:
        major = w_abs * h_abs * (x_abs.scaled(2) + h_abs)
    elif kind is ScalarKind.AFFINE_QUAD:
        a_abs = _abs_seq(f.inner.a.to_symseq())
        b_abs = _abs_seq(f.inner.b.to_symseq())
        major = w_abs * (a_abs * h_abs * (x_abs.scaled(2) + h_abs) + b_abs * h_abs)
    else:
        # |sqrt(u+d) - sqrt(u)| <= sqrt(|d|) on the nonnegative domain
        c_abs = _abs_seq(f.inner.c.to_symseq())
        major = w_abs * c_abs * _sqrt_majorant(h_abs)
    start = max(rank, h.tail_start, x.tail_start)
    if classify(major) != SUMMABLE:
        raise NoMajorant("difference terms have no summable majorant")
    return certified_series(term_at, start, tol, majorant=major)


# ---------------------------------------------------------------------------
# JSON codecs
# ---------------------------------------------------------------------------


def _form_to_json(form: TailRule):
    """Per-index coefficients: constants as bare numbers, else tail objects."""
    if form.kind is TailKind.CONST:
        return form.c
    if form.kind is TailKind.ZERO:
        return 0.0
    d: dict = {"kind": form.kind.value, "c": form.c}
    if form.kind is TailKind.GEOMETRIC:
        d["r"] = form.r
    return d


def _form_from_json(obj) -> TailRule:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return TailRule.const(float(obj))
    return _tail_atom_from_json(obj)


def scalar_to_json(u: ScalarConvex) -> dict:
    if u.kind is ScalarKind.ABS:
        return {"kind": "abs"}
    if u.kind is ScalarKind.SQUARE:
        return {"kind": "square"}
    if u.kind is ScalarKind.AFFINE_QUAD:
        return {"kind": "affine_quad", "a": _form_to_json(u.a), "b": _form_to_json(u.b)}
    if u.kind is ScalarKind.NEG_SQRT:
        return {"kind": "neg_sqrt", "c": _form_to_json(u.c)}
    return {"kind": "linear", "b": _form_to_json(u.b)}


def _expect_fields(obj: dict, what: str, required: set, optional: set = frozenset()):
    if not isinstance(obj, dict):
        raise ValueError(f"{what} must be a JSON object, got {type(obj).__name__}")
    missing = required - set(obj)
    if missing:
        raise ValueError(f"{what} is missing fields: {sorted(missing)}")
    unknown = set(obj) - required - optional
    if unknown:
        raise ValueError(f"{what} has unknown fields: {sorted(unknown)}")


def scalar_from_json(obj: dict) -> ScalarConvex:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("scalar piece must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "abs":
        _expect_fields(obj, "abs piece", {"kind"})
        return ScalarConvex.abs_()
    if kind == "square":
        _expect_fields(obj, "square piece", {"kind"})
        return ScalarConvex.square()
    if kind == "affine_quad":
        _expect_fields(obj, "affine_quad piece", {"kind", "a", "b"})
        return ScalarConvex.affine_quad(_form_from_json(obj["a"]), _form_from_json(obj["b"]))
    if kind == "neg_sqrt":
        _expect_fields(obj, "neg_sqrt piece", {"kind", "c"})
        return ScalarConvex.neg_sqrt(_form_from_json(obj["c"]))
    if kind == "linear":
        _expect_fields(obj, "linear piece", {"kind", "b"})
        return ScalarConvex.linear(_form_from_json(obj["b"]))
    raise ValueError(f"unknown scalar piece kind {kind!r}")


def function_to_json(f: FunctionExpr) -> dict:
    if isinstance(f, Constant):
        return {"kind": "constant", "c": f.c}
    if isinstance(f, LimsupSeminorm):
        return {"kind": "limsup"}
    if isinstance(f, LinearFunctional):
        return {"kind": "linear_functional", "p": dual_to_json(f.p)}
    if isinstance(f, SeparableSeries):
        return {
            "kind": "separable",
            "weight": _form_to_json(f.weight),
            "inner": scalar_to_json(f.inner),
        }
    if isinstance(f, Scale):
        return {"kind": "scale", "lam": f.lam, "inner": function_to_json(f.inner)}
    if isinstance(f, Sum):
        return {"kind": "sum", "terms": [function_to_json(g) for g in f.terms]}
    raise TypeError(f"unknown function expression {type(f).__name__}")


def function_from_json(obj: dict) -> FunctionExpr:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("function must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "constant":
        _expect_fields(obj, "constant", {"kind", "c"})
        return Constant(float(obj["c"]))
    if kind == "limsup":
        _expect_fields(obj, "limsup", {"kind"})
        return LimsupSeminorm()
    if kind == "linear_functional":
        _expect_fields(obj, "linear_functional", {"kind", "p"})
        return LinearFunctional(dual_from_json(obj["p"]))
    if kind == "separable":
        _expect_fields(obj, "separable", {"kind", "weight", "inner"})
        return SeparableSeries(_form_from_json(obj["weight"]), scalar_from_json(obj["inner"]))
    if kind == "scale":
        _expect_fields(obj, "scale", {"kind", "lam", "inner"})
        return Scale(float(obj["lam"]), function_from_json(obj["inner"]))
    if kind == "sum":
        _expect_fields(obj, "sum", {"kind", "terms"})
        if not isinstance(obj["terms"], list):
            raise ValueError("sum terms must be a list")
        return Sum([function_from_json(t) for t in obj["terms"]])
    raise ValueError(f"unknown function kind {kind!r}")
