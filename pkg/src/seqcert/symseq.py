"""Closed-form sequence algebra: finite sums of terms ``c * rho**n * n**(-s)``.

Every coordinate tail, series weight, and basis-direction derivative that the
function grammar produces is, beyond a finite prefix, a sequence of this
shape.  The algebra supports exact arithmetic (Fraction coefficients where
the inputs allow it), an identically-zero test valid for *all* indices, an
eventual-sign decision procedure, and rigorously bounded tail sums.  These
three capabilities are what turn "for all n" claims into finite checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

Number = Union[Fraction, float]

#: Terms whose exact coefficient cancellation we trust for all-n claims carry
#: Fraction data end to end; any float contamination drops exactness.


def _to_number(x) -> Number:
    """Floats convert to exact Fractions (every float is a rational)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite coefficient {x!r}")
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as a coefficient")


def exact_sqrt(q: Number) -> tuple[Number, bool]:
    """Square root, exact when the operand is a perfect rational square.

    Returns (root, exact).  Inexact roots come back as floats.
    """
    if isinstance(q, Fraction):
        if q < 0:
            raise ValueError("sqrt of negative value")
        rn = math.isqrt(q.numerator)
        rd = math.isqrt(q.denominator)
        if rn * rn == q.numerator and rd * rd == q.denominator:
            return Fraction(rn, rd), True
        return math.sqrt(float(q)), False
    if q < 0:
        raise ValueError("sqrt of negative value")
    return math.sqrt(q), False


@dataclass(frozen=True)
class SymTerm:
    """One term ``coef * ratio**n * n**(-npow)`` of a closed-form sequence."""

    coef: Number
    ratio: Number
    npow: Fraction

    def value_at(self, n: int) -> float:
        if self.coef == 0:
            return 0.0
        r = float(self.ratio)
        # r**n with r possibly negative and n large: compute via magnitude.
        if r == 0.0:
            power = 1.0 if n == 0 else 0.0
        else:
            logmag = n * math.log(abs(r))
            if logmag < -745.0:
                power = 0.0
            else:
                power = math.exp(logmag)
            if r < 0 and n % 2 == 1:
                power = -power
        return float(self.coef) * power * float(n) ** (-float(self.npow))

    @property
    def is_exact(self) -> bool:
        return isinstance(self.coef, Fraction) and isinstance(self.ratio, Fraction)


class SymSeq:
    """A finite sum of :class:`SymTerm`, canonicalized by (ratio, npow) key.

    ``exact`` is True when every coefficient survived in rational arithmetic,
    which is what entitles a zero test to the ANALYTIC grade.
    """

    __slots__ = ("terms", "exact")

    def __init__(self, terms: Iterable[SymTerm] = (), exact: bool = True):
        merged: dict[tuple, SymTerm] = {}
        all_exact = exact
        for t in terms:
            if not t.is_exact:
                all_exact = False
            key = (float(t.ratio), float(t.npow))
            if key in merged:
                old = merged[key]
                coef = old.coef + t.coef
                merged[key] = SymTerm(coef, old.ratio, old.npow)
            else:
                merged[key] = t
        self.terms = tuple(
            t for t in merged.values() if not (t.is_exact and t.coef == 0)
        )
        self.exact = all_exact

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> SymSeq:
        return SymSeq(())

    @staticmethod
    def constant(c) -> SymSeq:
        return SymSeq((SymTerm(_to_number(c), Fraction(1), Fraction(0)),))

    @staticmethod
    def geometric(c, r) -> SymSeq:
        return SymSeq((SymTerm(_to_number(c), _to_number(r), Fraction(0)),))

    @staticmethod
    def harmonic(c) -> SymSeq:
        return SymSeq((SymTerm(_to_number(c), Fraction(1), Fraction(1)),))

    @staticmethod
    def term(c, r, s) -> SymSeq:
        return SymSeq((SymTerm(_to_number(c), _to_number(r), Fraction(s)),))

    # -- algebra -----------------------------------------------------------

    def __add__(self, other: SymSeq) -> SymSeq:
        return SymSeq(self.terms + other.terms, exact=self.exact and other.exact)

    def __neg__(self) -> SymSeq:
        return SymSeq(
            tuple(SymTerm(-t.coef, t.ratio, t.npow) for t in self.terms),
            exact=self.exact,
        )

    def __sub__(self, other: SymSeq) -> SymSeq:
        return self + (-other)

    def scaled(self, c) -> SymSeq:
        c = _to_number(c)
        return SymSeq(
            tuple(SymTerm(t.coef * c, t.ratio, t.npow) for t in self.terms),
            exact=self.exact,
        )

    def __mul__(self, other: SymSeq) -> SymSeq:
        out = []
        for a in self.terms:
            for b in other.terms:
                out.append(SymTerm(a.coef * b.coef, a.ratio * b.ratio, a.npow + b.npow))
        return SymSeq(tuple(out), exact=self.exact and other.exact)

    def sqrt(self) -> SymSeq:
        """Square root of a single-term, eventually positive sequence."""
        if len(self.terms) != 1:
            raise ValueError("sqrt needs a single-term sequence")
        t = self.terms[0]
        if t.coef <= 0 or t.ratio <= 0:
            raise ValueError("sqrt needs positive coefficient and ratio")
        rc, ec = exact_sqrt(t.coef)
        rr, er = exact_sqrt(t.ratio)
        return SymSeq(
            (SymTerm(rc if ec else rc, rr if er else rr, t.npow / 2),),
            exact=self.exact and ec and er,
        )

    def reciprocal(self) -> SymSeq:
        if len(self.terms) != 1:
            raise ValueError("reciprocal needs a single-term sequence")
        t = self.terms[0]
        if t.coef == 0 or t.ratio == 0:
            raise ValueError("reciprocal of a vanishing term")
        coef = Fraction(1) / t.coef if isinstance(t.coef, Fraction) else 1.0 / t.coef
        ratio = Fraction(1) / t.ratio if isinstance(t.ratio, Fraction) else 1.0 / t.ratio
        return SymSeq((SymTerm(coef, ratio, -t.npow),), exact=self.exact)

    # -- queries -----------------------------------------------------------

    def value_at(self, n: int) -> float:
        return sum(t.value_at(n) for t in self.terms)

    @property
    def is_zero(self) -> bool:
        """Identically zero for all n; trustworthy only with ``exact``."""
        if self.exact:
            return all(t.coef == 0 for t in self.terms)
        return all(abs(float(t.coef)) <= 1e-14 for t in self.terms)

    def eventual_sign(self, start: int = 1) -> tuple[int, int]:
        """Sign of the sequence for all n >= some rank.

        Returns ``(sign, valid_from)`` with sign in {-1, 0, +1}: the sequence
        has that strict sign for every n >= valid_from (sign 0 means
        identically zero from ``start``).  Raises ValueError when no single
        eventual sign exists (alternating dominant term).
        """
        live = [t for t in self.terms if t.coef != 0]
        if not live:
            return 0, start
        # Dominance order: larger |ratio| wins; ties broken by smaller npow.
        live.sort(key=lambda t: (-abs(float(t.ratio)), float(t.npow)))
        dom = live[0]
        if float(dom.ratio) < 0:
            # Check a same-magnitude positive-ratio partner that could mask it.
            raise ValueError("alternating dominant term; no eventual sign")
        rest = live[1:]
        sign = 1 if dom.coef > 0 else -1
        n = max(start, 2)
        for _ in range(200):
            if self._dominates(dom, rest, n):
                return sign, n
            n *= 2
        raise ValueError("could not certify dominance rank")

    @staticmethod
    def _dominates(dom: SymTerm, rest: list[SymTerm], n: int) -> bool:
        """Certify |dom(m)| > sum |rest(m)| for all m >= n.

        Each ratio q_i(m) = |rest_i(m)| / |dom(m)| must be < 1/len(rest) at m=n
        and nonincreasing beyond it; the step factor is
        (|r_i|/|r_d|) * (1 + 1/m)**(s_d - s_i), monotone in m, so checking it
        at m=n covers all larger m.
        """
        if not rest:
            return True
        dv = abs(dom.value_at(n))
        if dv == 0.0:
            return False
        budget = 1.0 / (len(rest) + 1)
        for t in rest:
            q = abs(t.value_at(n)) / dv
            if not q < budget:
                return False
            rr = abs(float(t.ratio)) / abs(float(dom.ratio))
            p = float(dom.npow - t.npow)
            step = rr * (1.0 + 1.0 / n) ** p
            if not step <= 1.0:
                return False
        return True

    def __repr__(self) -> str:
        if not self.terms:
            return "SymSeq(0)"
        bits = [
            f"{float(t.coef):g}*({float(t.ratio):g})^n*n^-{float(t.npow):g}"
            for t in self.terms
        ]
        return "SymSeq(" + " + ".join(bits) + (")" if self.exact else ", inexact)")


# ---------------------------------------------------------------------------
# Certified tail summation
# ---------------------------------------------------------------------------

SUMMABLE = "summable"
DIVERGENT = "divergent"
NOT_ABSOLUTE = "not_absolute"


def classify_term(t: SymTerm) -> str:
    if t.coef == 0:
        return SUMMABLE
    r = abs(float(t.ratio))
    s = float(t.npow)
    if r < 1.0:
        return SUMMABLE
    if r > 1.0:
        return DIVERGENT
    if float(t.ratio) > 0:
        return SUMMABLE if s > 1.0 else DIVERGENT
    # ratio == -1: alternating
    if s > 1.0:
        return SUMMABLE
    return NOT_ABSOLUTE if s > 0.0 else DIVERGENT


def classify(seq: SymSeq) -> str:
    worst = SUMMABLE
    for t in seq.terms:
        c = classify_term(t)
        if c == DIVERGENT:
            return DIVERGENT
        if c == NOT_ABSOLUTE:
            worst = NOT_ABSOLUTE
    return worst


def _power_tail(s: float, shift: float, k: int) -> tuple[float, float]:
    """``sum_{m>k} (m+shift)**(-s)`` for s > 1, with a rigorous error bound.

    Four-term Euler-Maclaurin expansion at m = k+1; the remainder of the
    expansion for a completely monotone integrand is bounded by the first
    omitted correction.
    """
    x = k + 1 + shift
    val = x ** (1 - s) / (s - 1) + 0.5 * x ** (-s) + (s / 12.0) * x ** (-s - 1)
    val -= (s * (s + 1) * (s + 2) / 720.0) * x ** (-s - 3)
    err = (s * (s + 1) * (s + 2) * (s + 3) * (s + 4) / 30240.0) * x ** (-s - 5)
    # Also account for one rounding ulp per arithmetic step.
    err += 8 * abs(val) * 2.2e-16
    return val, err


def _geometric_tail_start(coef: float, r: float, p: float, budget: float) -> int:
    """Smallest k so that |sum_{n>k} coef * r**n * n**p| <= budget.

    Uses the ratio test: once |r|(1+1/n)**p <= q < 1 for all n >= k, the
    remainder is bounded by |term(k+1)| / (1-q).
    """
    a = abs(coef)
    if a == 0.0:
        return 1
    r = abs(r)
    q = (1.0 + r) / 2.0
    k = 4
    while r * (1.0 + 1.0 / k) ** p > q:
        k *= 2
        if k > 1 << 40:
            raise ArithmeticError("ratio test failed to stabilize")
    while True:
        t = a * r ** (k + 1) * float(k + 1) ** p
        if t / (1.0 - q) <= budget or t == 0.0:
            return k
        k = int(k * 1.5) + 1
        if k > 1 << 40:
            raise ArithmeticError("geometric tail did not reach budget")


def tail_sum(seq: SymSeq, start: int, tol: float) -> tuple[float, float, int]:
    """``sum_{n>=start} seq(n)`` with certified absolute error <= tol.

    Returns (value, error_bound, terms_used).  Raises ValueError labelled
    with the classification when the sum is divergent or only conditionally
    convergent (callers translate to their domain-specific errors).
    """
    label = classify(seq)
    if label != SUMMABLE:
        raise ValueError(label)
    live = [t for t in seq.terms if t.coef != 0]
    if not live:
        return 0.0, 0.0, 0
    budget = tol / (2 * len(live))
    value = 0.0
    err = 0.0
    used = 0
    for t in live:
        c = float(t.coef)
        r = float(t.ratio)
        s = float(t.npow)
        if abs(r) < 1.0:
            k = max(start - 1, _geometric_tail_start(c, r, -s, budget))
            part = sum(t.value_at(n) for n in range(start, k + 1))
            q = (1.0 + abs(r)) / 2.0
            rem = abs(c) * abs(r) ** (k + 1) * float(k + 1) ** (-s) / (1.0 - q)
            value += part
            err += rem + abs(part) * (k - start + 2) * 2.2e-16
            used = max(used, k - start + 1)
        elif r > 0:
            # ratio == 1, s > 1: explicit head + Euler-Maclaurin tail
            k = max(start + 15, 64)
            part = sum(t.value_at(n) for n in range(start, k + 1))
            tail, terr = _power_tail(s, 0.0, k)
            value += part + c * tail
            err += abs(c) * terr + abs(part) * (k - start + 2) * 2.2e-16
            used = max(used, k - start + 1)
        else:
            # ratio == -1, s > 1: split into even/odd power tails
            k = max(start + 15, 64)
            if k % 2 == 1:
                k += 1
            part = sum(t.value_at(n) for n in range(start, k + 1))
            # even n = 2m > k  =>  m > k/2 ; odd n = 2m-1 > k  =>  m > k/2
            half = k // 2
            ev, e1 = _power_tail(s, 0.0, half)
            od, e2 = _power_tail(s, -0.5, half)
            tail = (2.0 ** (-s)) * (ev - od)
            value += part + c * tail
            err += abs(c) * (2.0 ** (-s)) * (e1 + e2)
            err += abs(part) * (k - start + 2) * 2.2e-16
            used = max(used, k - start + 1)
    return value, err, used
