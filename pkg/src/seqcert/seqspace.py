"""Points, dual elements, projections, and certified series on sequence spaces.

Points are exact objects: a finite prefix of coordinates plus a closed-form
tail, so every coordinate, pairing, and series below is evaluated against an
analytic expression rather than a truncation someone eyeballed.  All types
are immutable values and all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence

from .errors import DomainViolation, NoMajorant, NonConvergentPairing
from .symseq import SUMMABLE, SymSeq, classify, tail_sum

#: Relative slop applied per explicitly summed term to cover accumulated
#: floating-point rounding in otherwise-certified sums.
_ULP = 2.2e-16

DEFAULT_SERIES_TOL = 1e-12


class TailKind(str, Enum):
    ZERO = "zero"
    CONST = "const"
    GEOMETRIC = "geometric"
    HARMONIC = "harmonic"


@dataclass(frozen=True)
class TailRule:
    """Closed-form rule for coordinates beyond a point's prefix.

    The value at (1-based) index n is 0, c, c*r**n, or c/n depending on the
    kind.  Geometric rules require |r| < 1 so that tails stay bounded and
    geometric-type series over them stay summable.
    """

    kind: TailKind
    c: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        if self.kind is TailKind.GEOMETRIC and not abs(self.r) < 1.0:
            raise ValueError(f"geometric tail needs |r| < 1, got r={self.r}")
        if self.kind is not TailKind.GEOMETRIC and self.r != 0.0:
            raise ValueError(f"tail kind {self.kind.value!r} takes no ratio")
        if self.kind is TailKind.ZERO and self.c != 0.0:
            raise ValueError("zero tail takes no coefficient")

    @staticmethod
    def zero() -> TailRule:
        return TailRule(TailKind.ZERO)

    @staticmethod
    def const(c: float) -> TailRule:
        return TailRule(TailKind.CONST, c=float(c))

    @staticmethod
    def geometric(c: float, r: float) -> TailRule:
        return TailRule(TailKind.GEOMETRIC, c=float(c), r=float(r))

    @staticmethod
    def harmonic(c: float) -> TailRule:
        return TailRule(TailKind.HARMONIC, c=float(c))

    def value_at(self, n: int) -> float:
        if self.kind is TailKind.ZERO:
            return 0.0
        if self.kind is TailKind.CONST:
            return self.c
        if self.kind is TailKind.HARMONIC:
            return self.c / n
        return self.c * self.r**n

    def to_symseq(self) -> SymSeq:
        if self.kind is TailKind.ZERO:
            return SymSeq.zero()
        if self.kind is TailKind.CONST:
            return SymSeq.constant(self.c)
        if self.kind is TailKind.HARMONIC:
            return SymSeq.harmonic(self.c)
        return SymSeq.geometric(self.c, self.r)


def _canonical_tail(atoms: Iterable[TailRule]) -> tuple[TailRule, ...]:
    """Merge same-shape atoms, drop vanishing ones, order deterministically."""
    const_c = 0.0
    harm_c = 0.0
    geo: dict[float, float] = {}
    for a in atoms:
        if a.kind is TailKind.ZERO:
            continue
        elif a.kind is TailKind.CONST:
            const_c += a.c
        elif a.kind is TailKind.HARMONIC:
            harm_c += a.c
        else:
            geo[a.r] = geo.get(a.r, 0.0) + a.c
    out: list[TailRule] = []
    if const_c != 0.0:
        out.append(TailRule.const(const_c))
    for r in sorted(geo):
        if geo[r] != 0.0 and r != 0.0:
            out.append(TailRule.geometric(geo[r], r))
    if harm_c != 0.0:
        out.append(TailRule.harmonic(harm_c))
    return tuple(out)


def _coerce_tail(tail) -> tuple[TailRule, ...]:
    if isinstance(tail, TailRule):
        return _canonical_tail((tail,))
    return _canonical_tail(tail)


@dataclass(frozen=True)
class Point:
    """A sequence-space element: finite prefix plus closed-form tail.

    ``prefix[i]`` holds coordinate i+1; the tail atoms (summed together)
    give every coordinate beyond ``len(prefix)``.  A single TailRule is
    accepted anywhere a tail is expected; sums of atoms arise from point
    arithmetic and are kept in canonical form so equality is structural.
    """

    prefix: tuple[float, ...] = ()
    tail: tuple[TailRule, ...] = ()

    def __init__(self, prefix: Sequence[float] = (), tail=()):
        object.__setattr__(self, "prefix", tuple(float(v) for v in prefix))
        object.__setattr__(self, "tail", _coerce_tail(tail))

    @staticmethod
    def zero() -> Point:
        return Point((), ())

    @property
    def tail_start(self) -> int:
        """First index governed by the tail rule."""
        return len(self.prefix) + 1

    def coordinate(self, n: int) -> float:
        if n < 1:
            raise ValueError(f"coordinate index must be >= 1, got {n}")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return sum(a.value_at(n) for a in self.tail)

    def tail_symseq(self) -> SymSeq:
        out = SymSeq.zero()
        for a in self.tail:
            out = out + a.to_symseq()
        return out

    def is_finitely_supported(self) -> bool:
        return not self.tail

    def __repr__(self) -> str:
        tails = ",".join(
            f"{a.kind.value}({a.c:g}" + (f",{a.r:g})" if a.r else ")")
            for a in self.tail
        ) or "zero"
        return f"Point(prefix={list(self.prefix)!r}, tail={tails})"


@dataclass(frozen=True)
class DualPoint:
    """A dual element in the same prefix-plus-tail representation.

    Pairings against points are certified series; combinations whose
    convergence the tail rules cannot guarantee are rejected rather than
    summed hopefully.
    """

    prefix: tuple[float, ...] = ()
    tail: tuple[TailRule, ...] = ()

    def __init__(self, prefix: Sequence[float] = (), tail=()):
        object.__setattr__(self, "prefix", tuple(float(v) for v in prefix))
        object.__setattr__(self, "tail", _coerce_tail(tail))

    @staticmethod
    def zero() -> DualPoint:
        return DualPoint((), ())

    @property
    def tail_start(self) -> int:
        return len(self.prefix) + 1

    def coordinate(self, n: int) -> float:
        if n < 1:
            raise ValueError(f"coordinate index must be >= 1, got {n}")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return sum(a.value_at(n) for a in self.tail)

    def tail_symseq(self) -> SymSeq:
        out = SymSeq.zero()
        for a in self.tail:
            out = out + a.to_symseq()
        return out

    def is_finitely_supported(self) -> bool:
        return not self.tail


class SpaceKind(str, Enum):
    RN = "rn"
    ELL1 = "ell1"
    ELLINF = "ellinf"


@dataclass(frozen=True)
class SpaceDescriptor:
    """Which sequence space we are working in, and what its basis offers.

    The coordinate basis is topological for the metric space of all
    sequences and for ell1 (projection norms uniformly bounded, constant 1
    for the canonical ell1 basis); it is not a topological basis for
    ellinf, which is why differentiability claims there are capped.
    """

    kind: SpaceKind
    basis_is_topological: bool
    basis_constant: Optional[float] = None

    @staticmethod
    def rn() -> SpaceDescriptor:
        return SpaceDescriptor(SpaceKind.RN, True, None)

    @staticmethod
    def ell1() -> SpaceDescriptor:
        return SpaceDescriptor(SpaceKind.ELL1, True, 1.0)

    @staticmethod
    def ellinf() -> SpaceDescriptor:
        return SpaceDescriptor(SpaceKind.ELLINF, False, None)


@dataclass(frozen=True)
class SeriesValue:
    """A numeric sum together with a proven bound on its error."""

    value: float
    error_bound: float
    terms_used: int

    def __post_init__(self):
        if self.error_bound < 0:
            raise ValueError("error bound must be nonnegative")


# ---------------------------------------------------------------------------
# Basis vectors and projections
# ---------------------------------------------------------------------------


def coordinate(x: Point, n: int) -> float:
    """Coordinate functional: the n-th coordinate of x (1-based)."""
    return x.coordinate(n)


def basis_vector(n: int) -> Point:
    """The n-th coordinate basis vector (0, ..., 0, 1, 0, ...)."""
    if n < 1:
        raise ValueError(f"basis index must be >= 1, got {n}")
    return Point((0.0,) * (n - 1) + (1.0,), ())


def dual_basis_vector(n: int) -> DualPoint:
    """The n-th coordinate functional as a dual element."""
    if n < 1:
        raise ValueError(f"basis index must be >= 1, got {n}")
    return DualPoint((0.0,) * (n - 1) + (1.0,), ())


def project(x: Point, k: int, anchor: Point = Point((), ())) -> Point:
    """Anchored projection: anchor + P^k(x - anchor).

    The first k coordinates come from x, everything beyond from the anchor.
    With the zero anchor this is the plain truncation P^k(x).  The result is
    exactly representable (prefix out to max(k, both prefixes), tail of the
    anchor), and the operation is idempotent for fixed k and anchor.
    """
    if k < 0:
        raise ValueError(f"projection rank must be >= 0, got {k}")
    m = max(k, len(anchor.prefix))
    prefix = tuple(
        x.coordinate(n) if n <= k else anchor.coordinate(n) for n in range(1, m + 1)
    )
    return Point(prefix, anchor.tail)


# ---------------------------------------------------------------------------
# Point arithmetic
# ---------------------------------------------------------------------------


def point_add(x: Point, y: Point) -> Point:
    m = max(len(x.prefix), len(y.prefix))
    prefix = tuple(x.coordinate(n) + y.coordinate(n) for n in range(1, m + 1))
    # Any atom whose region starts inside the other prefix still evaluates
    # identically there because prefixes were extended to the common length.
    return Point(prefix, x.tail + y.tail)


def point_scale(c: float, x: Point) -> Point:
    c = float(c)
    scaled = tuple(
        TailRule(a.kind, c=c * a.c, r=a.r) if a.kind is not TailKind.ZERO else a
        for a in x.tail
    )
    return Point(tuple(c * v for v in x.prefix), scaled)


def point_sub(x: Point, y: Point) -> Point:
    return point_add(x, point_scale(-1.0, y))


def point_axpy(x: Point, t: float, h: Point) -> Point:
    """x + t*h, exact in the representation."""
    return point_add(x, point_scale(t, h))


def points_equal(x: Point, y: Point, upto: int = 0) -> bool:
    """Structural equality of canonical forms (exact, all coordinates).

    ``upto`` > 0 additionally demands the first coordinates match exactly,
    which is redundant but cheap insurance in tests.
    """
    if x.prefix == y.prefix and x.tail == y.tail:
        return True
    m = max(len(x.prefix), len(y.prefix))
    if any(x.coordinate(n) != y.coordinate(n) for n in range(1, max(m, upto) + 1)):
        return False
    return x.tail == y.tail or (point_sub(x, y).tail_symseq().is_zero)


# ---------------------------------------------------------------------------
# Membership and norms
# ---------------------------------------------------------------------------


def in_ell1(x: Point) -> bool:
    """Absolute summability, decided from the tail rule."""
    return classify(x.tail_symseq()) == SUMMABLE


def in_ellinf(x: Point) -> bool:
    """Boundedness; every representable tail is bounded."""
    return True


def in_space(x: Point, space: SpaceDescriptor) -> bool:
    if space.kind is SpaceKind.ELL1:
        return in_ell1(x)
    return True


def _abs_majorant(seq: SymSeq) -> SymSeq:
    terms = [
        type(t)(abs(t.coef), abs(t.ratio), t.npow) for t in seq.terms if t.coef != 0
    ]
    return SymSeq(tuple(terms), exact=seq.exact)


def ell1_norm(x: Point, tol: float = DEFAULT_SERIES_TOL) -> SeriesValue:
    """Certified sum of |coordinates|; rejects points outside ell1."""
    if not in_ell1(x):
        raise DomainViolation("point is not absolutely summable")
    major = _abs_majorant(x.tail_symseq())
    k = len(x.prefix)
    # Grow the explicit region until the majorant tail drops below budget.
    while True:
        try:
            mval, merr, _ = tail_sum(major, k + 1, tol / 4)
        except ValueError as exc:
            raise DomainViolation(f"tail not summable: {exc}") from exc
        if mval + merr <= tol / 2 or not major.terms:
            break
        k = max(2 * k, 16)
        if k > 1 << 26:
            raise ArithmeticError("ell1 norm explicit region exploded")
    value = sum(abs(x.coordinate(n)) for n in range(1, k + 1))
    err = (mval + merr) + value * (k + 1) * _ULP
    return SeriesValue(value + mval, err, k)


def sup_abs(x: Point, upto: int = 0) -> float:
    """Supremum of |coordinates|: exact, via the closed-form tail.

    The tail's |value| is maximized over an explicit window plus its limit;
    window length grows until the tail envelope is monotone decreasing.
    """
    best = max((abs(v) for v in x.prefix), default=0.0)
    seq = x.tail_symseq()
    start = x.tail_start
    # Beyond some rank every atom's magnitude is nonincreasing, so scanning
    # to that rank plus the limit value covers the supremum.
    horizon = max(start + 64, 128, upto)
    for n in range(start, horizon + 1):
        best = max(best, abs(seq.value_at(n)))
    best = max(best, abs(limsup_abs(x)))
    return best


def limsup_abs(x: Point) -> float:
    """limsup |x_n|: the magnitude of the constant tail component.

    Geometric and harmonic components vanish at infinity, so the limit of
    the tail exists and equals the summed constant coefficients.
    """
    c = 0.0
    for a in x.tail:
        if a.kind is TailKind.CONST:
            c += a.c
    return abs(c)


# ---------------------------------------------------------------------------
# Pairings, metric, certified series
# ---------------------------------------------------------------------------


def pair(p: DualPoint, x: Point, tol: float = DEFAULT_SERIES_TOL) -> SeriesValue:
    """Duality pairing <p, x> = sum of p_n * x_n, certified to tol.

    Raises NonConvergentPairing when the closed forms do not guarantee an
    absolutely convergent series (for example two constant tails over the
    space of all sequences).
    """
    k0 = max(len(p.prefix), len(x.prefix))
    prod = p.tail_symseq() * x.tail_symseq()
    try:
        tval, terr, used = tail_sum(prod, k0 + 1, tol / 2)
    except ValueError as exc:
        raise NonConvergentPairing(
            f"pairing series not certified absolutely convergent ({exc})"
        ) from exc
    head = sum(p.coordinate(n) * x.coordinate(n) for n in range(1, k0 + 1))
    err = terr + (abs(head) + abs(tval)) * (k0 + 2) * _ULP
    return SeriesValue(head + tval, err, k0 + used)


def metric_rn(x: Point, y: Point, tol: float = DEFAULT_SERIES_TOL) -> SeriesValue:
    """Frechet-style metric on the space of all sequences.

    d(x, y) = sum over n of 2^-n * |x_n - y_n| / (1 + |x_n - y_n|); each term
    is below 2^-n, so the tail beyond K is bounded by 2^-K.
    """
    k = max(len(x.prefix), len(y.prefix), int(-math.log2(max(tol, 1e-300))) + 3)
    total = 0.0
    for n in range(1, k + 1):
        d = abs(x.coordinate(n) - y.coordinate(n))
        total += 2.0 ** (-n) * d / (1.0 + d)
    tail = 2.0 ** (-k)
    return SeriesValue(total + tail / 2, tail / 2 + total * k * _ULP, k)


def certified_series(
    term_at: Callable[[int], float],
    tail_start: int,
    tol: float = DEFAULT_SERIES_TOL,
    *,
    tail: SymSeq | None = None,
    majorant: SymSeq | None = None,
) -> SeriesValue:
    """Sum of term_at(n) over n >= 1 with a proven error bound.

    Terms below ``tail_start`` are evaluated directly.  Beyond it, either
    ``tail`` gives the terms' exact closed form (summed analytically), or
    ``majorant`` bounds |term_at(n)| by a summable closed form, in which
    case the explicit region is extended until the majorant's remainder
    fits inside tol.  With neither, no certificate is possible.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if tail is not None:
        if classify(tail) != SUMMABLE:
            raise NoMajorant(f"series tail is {classify(tail)}")
        tval, terr, used = tail_sum(tail, tail_start, tol / 2)
        head = sum(term_at(n) for n in range(1, tail_start))
        err = terr + (abs(head) + abs(tval)) * (tail_start + 1) * _ULP
        return SeriesValue(head + tval, err, tail_start - 1 + used)
    if majorant is not None:
        if classify(majorant) != SUMMABLE:
            raise NoMajorant(f"series majorant is {classify(majorant)}")
        k = tail_start - 1
        while True:
            mval, merr, _ = tail_sum(majorant, k + 1, tol / 4)
            if mval + merr <= tol / 2 or not majorant.terms:
                break
            k = max(2 * k, 16)
            if k > 1 << 26:
                raise NoMajorant("majorant decays too slowly to certify")
        head = sum(term_at(n) for n in range(1, k + 1))
        err = (mval + merr) + abs(head) * (k + 1) * _ULP
        return SeriesValue(head, err, k)
    raise NoMajorant("no closed-form tail or majorant supplied")


# ---------------------------------------------------------------------------
# JSON round-trip
# ---------------------------------------------------------------------------

_TAIL_KEYS = {"kind", "c", "r"}


def _tail_to_json(atoms: tuple[TailRule, ...]):
    def one(a: TailRule) -> dict:
        d: dict = {"kind": a.kind.value}
        if a.kind in (TailKind.CONST, TailKind.HARMONIC):
            d["c"] = a.c
        elif a.kind is TailKind.GEOMETRIC:
            d["c"] = a.c
            d["r"] = a.r
        return d

    if not atoms:
        return {"kind": "zero"}
    if len(atoms) == 1:
        return one(atoms[0])
    return [one(a) for a in atoms]


def _tail_from_json(obj) -> tuple[TailRule, ...]:
    if isinstance(obj, list):
        return _canonical_tail(_tail_atom_from_json(a) for a in obj)
    return _canonical_tail((_tail_atom_from_json(obj),))


def _tail_atom_from_json(obj) -> TailRule:
    if not isinstance(obj, dict):
        raise ValueError(f"tail must be an object, got {type(obj).__name__}")
    unknown = set(obj) - _TAIL_KEYS
    if unknown:
        raise ValueError(f"unknown tail fields: {sorted(unknown)}")
    kind = obj.get("kind")
    allowed = {"zero": {"kind"}, "const": {"kind", "c"}, "harmonic": {"kind", "c"}}
    if kind in allowed and set(obj) != allowed[kind]:
        raise ValueError(f"{kind} tail takes exactly fields {sorted(allowed[kind])}")
    if kind == "zero":
        return TailRule.zero()
    if kind == "const":
        return TailRule.const(float(obj["c"]))
    if kind == "harmonic":
        return TailRule.harmonic(float(obj["c"]))
    if kind == "geometric":
        return TailRule.geometric(float(obj["c"]), float(obj["r"]))
    raise ValueError(f"unknown tail kind {kind!r}")


def point_to_json(x: Point) -> dict:
    return {"prefix": list(x.prefix), "tail": _tail_to_json(x.tail)}


def point_from_json(obj: dict) -> Point:
    if not isinstance(obj, dict):
        raise ValueError("point must be a JSON object")
    unknown = set(obj) - {"prefix", "tail"}
    if unknown:
        raise ValueError(f"unknown point fields: {sorted(unknown)}")
    prefix = obj.get("prefix", [])
    if not isinstance(prefix, list):
        raise ValueError("point prefix must be a list")
    return Point([float(v) for v in prefix], _tail_from_json(obj.get("tail", {"kind": "zero"})))


def dual_to_json(p: DualPoint) -> dict:
    return {"prefix": list(p.prefix), "tail": _tail_to_json(p.tail)}


def dual_from_json(obj: dict) -> DualPoint:
    pt = point_from_json(obj)
    return DualPoint(pt.prefix, pt.tail)


def space_to_json(s: SpaceDescriptor) -> dict:
    return {"kind": s.kind.value}


def space_from_json(obj: dict) -> SpaceDescriptor:
    if not isinstance(obj, dict):
        raise ValueError("space must be a JSON object")
    unknown = set(obj) - {"kind"}
    if unknown:
        raise ValueError(f"unknown space fields: {sorted(unknown)}")
    kind = obj.get("kind")
    if kind == "rn":
        return SpaceDescriptor.rn()
    if kind == "ell1":
        return SpaceDescriptor.ell1()
    if kind == "ellinf":
        return SpaceDescriptor.ellinf()
    raise ValueError(f"unknown space kind {kind!r}")
