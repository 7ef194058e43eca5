"""Certificate-producing decision procedures for optimality on sequence spaces.

Each check answers a "for all n" or "for all x" question with an explicit
verdict and an explicit grade: ANALYTIC_ALL_N when the claim was settled by
exact closed-form reasoning over every index, NUMERIC_FIRST_N when only
finitely many indices were sampled.  INCONCLUSIVE is a first-class verdict:
when a hypothesis (qualification, pseudo-semicontinuity, existence of the
directional derivatives) cannot be established, the procedures refuse to
convert stationarity into claims in either direction.

Positive verdicts never rest on extrapolation; negative verdicts always
carry a machine-checkable witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional, Sequence, Union

from .derivative import DerivOptions, dir_deriv, dir_deriv_profile
from .errors import (
    DomainViolation,
    InfeasiblePoint,
    NoMajorant,
    NonConvergentPairing,
)
from .funcs import (
    Constant,
    DirStatus,
    FunctionExpr,
    LimsupSeminorm,
    LinearFunctional,
    ScalarConvex,
    ScalarKind,
    Scale,
    SeparableSeries,
    Sum,
    _expect_fields,
    _form_from_json,
    _form_to_json,
    analytic_dir_deriv,
    evaluate,
    function_from_json,
    function_to_json,
    scalar_from_json,
    scalar_to_json,
)
from .sampling import random_direction, random_point, rng_from_seed
from .seqspace import (
    DualPoint,
    Point,
    SeriesValue,
    SpaceDescriptor,
    TailKind,
    TailRule,
    in_ell1,
    limsup_abs,
    point_from_json,
    point_sub,
    point_to_json,
    project,
)
from .symseq import SUMMABLE, SymSeq, classify, tail_sum


# ---------------------------------------------------------------------------
# Feasible sets
# ---------------------------------------------------------------------------


class SetKind(str, Enum):
    WHOLE_SPACE = "whole_space"
    POSITIVE_CONE_ELL1 = "positive_cone_ell1"
    BOX = "box"


@dataclass(frozen=True)
class SetDescriptor:
    """A convex feasible set with closed-form coordinate structure.

    All three variants are coordinate rectangles, which is what makes the
    projection-stability half of qualification automatic: replacing a tail
    of coordinates by the anchor's cannot leave the set.

    Box bounds are points; when ``bound_count`` is set the bounds apply to
    coordinates 1..bound_count only and the rest are free (a finite slab,
    e.g. {x : x_1 >= 1}).  A missing bound means that side is free.
    """

    kind: SetKind
    lower: Optional[Point] = None
    upper: Optional[Point] = None
    bound_count: Optional[int] = None

    @staticmethod
    def whole_space() -> SetDescriptor:
        return SetDescriptor(SetKind.WHOLE_SPACE)

    @staticmethod
    def positive_cone_ell1() -> SetDescriptor:
        return SetDescriptor(SetKind.POSITIVE_CONE_ELL1)

    @staticmethod
    def box(
        lower: Optional[Point],
        upper: Optional[Point],
        bound_count: Optional[int] = None,
    ) -> SetDescriptor:
        if lower is None and upper is None:
            return SetDescriptor.whole_space()
        return SetDescriptor(SetKind.BOX, lower=lower, upper=upper, bound_count=bound_count)


def _coords_vs_zero(x: Point, strict: bool) -> tuple[Optional[bool], Optional[int]]:
    """Are all coordinates >= 0 (or > 0)?

    Returns (True, None) when certified, (False, n) with a concrete witness
    index, (None, None) when the tail sign cannot be certified either way.
    """
    for n in range(1, x.tail_start):
        v = x.coordinate(n)
        if v < 0.0 or (strict and v == 0.0):
            return False, n
    seq = x.tail_symseq()
    if not seq.terms:
        if strict:
            return False, x.tail_start
        return True, None
    try:
        sgn, rank = seq.eventual_sign(x.tail_start)
    except ValueError:
        # no certified eventual sign: look for a concrete violation
        for n in range(x.tail_start, x.tail_start + 256):
            v = seq.value_at(n)
            if v < 0.0 or (strict and v == 0.0):
                return False, n
        return None, None
    if sgn < 0:
        return False, rank
    for n in range(x.tail_start, rank):
        v = seq.value_at(n)
        if v < 0.0 or (strict and v == 0.0):
            return False, n
    if sgn == 0 and strict:
        return False, max(x.tail_start, rank)
    return True, None


def _diff_vs_zero(x: Point, bound: Point, strict: bool) -> tuple[Optional[bool], Optional[int]]:
    return _coords_vs_zero(point_sub(x, bound), strict)


def _bounded_index(s: SetDescriptor, n: int) -> bool:
    return s.bound_count is None or n <= s.bound_count


def coordinate_interval(s: SetDescriptor, n: int) -> tuple[float, float]:
    """The feasible interval for coordinate n (closed ends where finite)."""
    if s.kind is SetKind.WHOLE_SPACE:
        return -math.inf, math.inf
    if s.kind is SetKind.POSITIVE_CONE_ELL1:
        return 0.0, math.inf
    lo = -math.inf
    hi = math.inf
    if _bounded_index(s, n):
        if s.lower is not None:
            lo = s.lower.coordinate(n)
        if s.upper is not None:
            hi = s.upper.coordinate(n)
    return lo, hi


def set_membership(s: SetDescriptor, x: Point) -> tuple[Optional[bool], Optional[int]]:
    """Membership with a witness coordinate on failure.

    Tri-state like _coords_vs_zero: None means the tail comparison could
    not be certified in either direction.
    """
    if s.kind is SetKind.WHOLE_SPACE:
        return True, None
    if s.kind is SetKind.POSITIVE_CONE_ELL1:
        if not in_ell1(x):
            return False, 0
        return _coords_vs_zero(x, strict=False)
    if s.bound_count is not None:
        for n in range(1, s.bound_count + 1):
            lo, hi = coordinate_interval(s, n)
            if not (lo <= x.coordinate(n) <= hi):
                return False, n
        return True, None
    if s.lower is not None:
        ok, n = _diff_vs_zero(x, s.lower, strict=False)
        if ok is not True:
            return ok, n
    if s.upper is not None:
        ok, n = _diff_vs_zero(s.upper, x, strict=False)
        if ok is not True:
            return ok, n
    return True, None


def set_to_json(s: SetDescriptor) -> dict:
    if s.kind is SetKind.BOX:
        out: dict = {"kind": "box"}
        if s.lower is not None:
            out["lower"] = point_to_json(s.lower)
        if s.upper is not None:
            out["upper"] = point_to_json(s.upper)
        if s.bound_count is not None:
            out["bound_count"] = s.bound_count
        return out
    return {"kind": s.kind.value}


def set_from_json(obj: dict) -> SetDescriptor:
    if not isinstance(obj, dict):
        raise ValueError("set must be a JSON object")
    unknown = set(obj) - {"kind", "lower", "upper", "bound_count"}
    if unknown:
        raise ValueError(f"unknown set fields: {sorted(unknown)}")
    kind = obj.get("kind")
    if kind == "whole_space":
        return SetDescriptor.whole_space()
    if kind == "positive_cone_ell1":
        return SetDescriptor.positive_cone_ell1()
    if kind == "box":
        lower = point_from_json(obj["lower"]) if "lower" in obj else None
        upper = point_from_json(obj["upper"]) if "upper" in obj else None
        bc = obj.get("bound_count")
        if bc is not None and (not isinstance(bc, int) or bc < 1):
            raise ValueError("bound_count must be a positive integer")
        return SetDescriptor.box(lower, upper, bc)
    raise ValueError(f"unknown set kind {kind!r}")


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


class Verdict(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


class GradeKind(str, Enum):
    ANALYTIC_ALL_N = "analytic_all_n"
    NUMERIC_FIRST_N = "numeric_first_n"


@dataclass(frozen=True)
class Grade:
    kind: GradeKind
    n: Optional[int] = None

    @staticmethod
    def analytic() -> Grade:
        return Grade(GradeKind.ANALYTIC_ALL_N)

    @staticmethod
    def numeric(n: int) -> Grade:
        return Grade(GradeKind.NUMERIC_FIRST_N, n)

    def combine(self, other: Grade) -> Grade:
        """The weaker of two grades: any sampling makes the whole claim sampled."""
        if self.kind is GradeKind.ANALYTIC_ALL_N:
            return other
        if other.kind is GradeKind.ANALYTIC_ALL_N:
            return self
        return Grade.numeric(min(self.n or 0, other.n or 0))

    def render(self) -> str:
        if self.kind is GradeKind.ANALYTIC_ALL_N:
            return "analytic_all_n"
        return f"numeric_first_n({self.n})"


@dataclass(frozen=True)
class Certificate:
    """Verdict plus the evidence that justifies it.

    FAILS always carries a witness dict concrete enough to recheck by hand:
    a coordinate index with its offending value, or a probe point with both
    function values.
    """

    verdict: Verdict
    grade: Grade
    reason: Optional[str] = None
    witness: Optional[dict] = None
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "grade": self.grade.render(),
            "reason": self.reason,
            "witness": self.witness,
            "evidence": self.evidence,
        }


@dataclass(frozen=True)
class CertifyOptions:
    """Shared knobs: how many indices to sample, match tolerance, depths."""

    coords: int = 64
    tol: float = 1e-7
    psc_depth: int = 32
    probe_count: int = 10
    seed: int = 42
    deriv: DerivOptions = DerivOptions()


# ---------------------------------------------------------------------------
# Qualification
# ---------------------------------------------------------------------------


def check_qualification(s: SetDescriptor, x_star: Point, n_max: int = 64) -> Certificate:
    """Is the feasible set qualified at the anchor?

    Two conditions: every truncation P^k(x*) lies in the relative interior
    of the truncated set, and anchored projections never leave the set.
    The second holds for all three variants because they are coordinate
    rectangles; the first reduces to strict coordinate inequalities checked
    in closed form over all k.
    """
    ok_member, wit = set_membership(s, x_star)
    if ok_member is None:
        return Certificate(
            Verdict.INCONCLUSIVE,
            Grade.numeric(n_max),
            reason="anchor membership could not be certified from the tail forms",
        )
    if not ok_member:
        return Certificate(
            Verdict.FAILS,
            Grade.analytic(),
            reason="anchor is not in the set",
            witness={"condition": "membership", "k": wit},
        )
    if s.kind is SetKind.WHOLE_SPACE:
        return Certificate(
            Verdict.HOLDS,
            Grade.analytic(),
            evidence={"interior": "whole space", "stability": "trivial"},
        )
    if s.kind is SetKind.POSITIVE_CONE_ELL1:
        ok, wit = _coords_vs_zero(x_star, strict=True)
        if ok is None:
            return Certificate(
                Verdict.INCONCLUSIVE,
                Grade.numeric(n_max),
                reason="interior condition could not be certified from the tail forms",
            )
        if not ok:
            return Certificate(
                Verdict.FAILS,
                Grade.analytic(),
                reason="a truncation touches the cone boundary",
                witness={"condition": "interior", "k": wit},
            )
        return Certificate(
            Verdict.HOLDS,
            Grade.analytic(),
            evidence={
                "interior": "all coordinates strictly positive",
                "stability": "coordinate rectangle",
            },
        )
    # Box: strict inequalities against both bounds wherever they apply.
    if s.bound_count is not None:
        for n in range(1, s.bound_count + 1):
            lo, hi = coordinate_interval(s, n)
            v = x_star.coordinate(n)
            if not (lo < v < hi):
                return Certificate(
                    Verdict.FAILS,
                    Grade.analytic(),
                    reason="anchor touches a box face",
                    witness={"condition": "interior", "k": n},
                )
    else:
        for bound, label in ((s.lower, "lower"), (s.upper, "upper")):
            if bound is None:
                continue
            diff = point_sub(x_star, bound) if label == "lower" else point_sub(bound, x_star)
            ok, wit = _coords_vs_zero(diff, strict=True)
            if ok is None:
                return Certificate(
                    Verdict.INCONCLUSIVE,
                    Grade.numeric(n_max),
                    reason="interior condition could not be certified from the tail forms",
                )
            if not ok:
                return Certificate(
                    Verdict.FAILS,
                    Grade.analytic(),
                    reason=f"anchor touches the {label} box face",
                    witness={"condition": "interior", "k": wit},
                )
    return Certificate(
        Verdict.HOLDS,
        Grade.analytic(),
        evidence={"interior": "strictly inside all faces", "stability": "coordinate rectangle"},
    )


# ---------------------------------------------------------------------------
# Pseudo-semicontinuity
# ---------------------------------------------------------------------------


def anchored_truncation(x_star: Point, x: Point, k: int) -> Point:
    """x* + P^k(x - x*): the probe points of the pseudo-semicontinuity test."""
    return project(x, k, x_star)


def _limsup_weight(f: FunctionExpr) -> float:
    """Total nonnegative coefficient of limsup parts inside the expression."""
    if isinstance(f, LimsupSeminorm):
        return 1.0
    if isinstance(f, Scale):
        return f.lam * _limsup_weight(f.inner)
    if isinstance(f, Sum):
        return sum(_limsup_weight(g) for g in f.terms)
    return 0.0


def default_psc_probes(x_star: Point, opts: CertifyOptions) -> list[Point]:
    """Zero point, the anchor, a one-coordinate bump, then random points."""
    bump_prefix = list(x_star.prefix) or [x_star.coordinate(1)]
    bump_prefix[0] += 1.0
    probes = [Point((), ()), x_star, Point(bump_prefix, x_star.tail)]
    rng = rng_from_seed(opts.seed)
    probes.extend(random_point(rng) for _ in range(opts.probe_count))
    return probes


def check_psc(
    f: FunctionExpr,
    s: SetDescriptor,
    x_star: Point,
    probes: Optional[Sequence[Point]] = None,
    depth: int = 32,
    tol: float = 1e-7,
) -> Certificate:
    """Does limsup_k f(x* + P^k(x - x*)) <= f(x) hold for all x?

    Analytic rule: every series and linear part converges along anchored
    truncations to its value (absolutely convergent tails), so the whole
    expression is pseudo-semicontinuous exactly when its limsup parts are,
    which happens iff the anchor's limsup vanishes or those parts have
    weight zero.  Supplied probes are re-checked numerically at depths up
    to ``depth`` as confirming evidence; a probe counterexample overrides.
    """
    lam = _limsup_weight(f)
    p_star = limsup_abs(x_star)
    if lam == 0.0 or p_star == 0.0:
        confirm = None
        if probes:
            confirm = check_psc_numeric(f, s, x_star, probes, depth, tol)
            if confirm.verdict is Verdict.FAILS:
                return confirm
        return Certificate(
            Verdict.HOLDS,
            Grade.analytic(),
            evidence={
                "rule": "series and linear parts converge along anchored truncations",
                "limsup_weight": lam,
                "limsup_at_anchor": p_star,
                "probes_checked": (
                    confirm.evidence.get("probes_checked") if confirm else 0
                ),
            },
        )
    # The zero point is always a counterexample in this regime.
    zero = Point((), ())
    ks = sorted({max(1, depth // 2), depth})
    values = []
    for k in ks:
        z = anchored_truncation(x_star, zero, k)
        try:
            values.append({"k": k, "f_at_truncation": evaluate(f, z).value})
        except (DomainViolation, NonConvergentPairing, NoMajorant):
            continue
    f_zero = evaluate(f, zero).value
    return Certificate(
        Verdict.FAILS,
        Grade.analytic(),
        reason="limsup part with nonvanishing anchor limsup",
        witness={
            "probe": point_to_json(zero),
            "limsup_at_anchor": p_star,
            "limsup_at_probe": 0.0,
            "f_at_probe": f_zero,
            "f_along_truncations": values,
        },
        evidence={"limsup_weight": lam},
    )


def check_psc_numeric(
    f: FunctionExpr,
    s: SetDescriptor,
    x_star: Point,
    probes: Sequence[Point],
    depth: int,
    tol: float,
) -> Certificate:
    """Sampled pseudo-semicontinuity: max over deep truncations vs f(x)."""
    checked = 0
    for x in probes:
        ok_member, _ = set_membership(s, x)
        if ok_member is not True:
            continue
        try:
            fx = evaluate(f, x)
        except (DomainViolation, NonConvergentPairing, NoMajorant):
            continue
        checked += 1
        if math.isinf(fx.value):
            continue
        for k in range(max(1, depth // 2), depth + 1):
            z = anchored_truncation(x_star, x, k)
            fz = evaluate(f, z)
            if fz.value - fz.error_bound > fx.value + fx.error_bound + tol:
                return Certificate(
                    Verdict.FAILS,
                    Grade.numeric(depth),
                    reason="a truncation exceeds the probe value",
                    witness={
                        "probe": point_to_json(x),
                        "k": k,
                        "f_at_truncation": fz.value,
                        "f_at_probe": fx.value,
                    },
                )
    return Certificate(
        Verdict.HOLDS, Grade.numeric(depth), evidence={"probes_checked": checked}
    )


# ---------------------------------------------------------------------------
# Closed-form derivative profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _SymProfile:
    """Closed form of n -> f'(x*; e_n), valid for n >= valid_from.

    status: "ok" (tail holds the form), "kink" (derivative missing at
    kink_at), or "numeric" (no closed form; fall back to sampling).
    """

    status: str
    valid_from: int = 1
    tail: Optional[SymSeq] = None
    kink_at: Optional[int] = None


def _form_first_nonzero(form: TailRule, start: int) -> Optional[int]:
    if form.kind is TailKind.ZERO or form.c == 0.0:
        return None
    if form.kind is TailKind.GEOMETRIC and form.r == 0.0:
        return None
    return start


def _deriv_symbolic(f: FunctionExpr, x: Point) -> _SymProfile:
    if isinstance(f, (Constant, LimsupSeminorm)):
        return _SymProfile("ok", 1, SymSeq.zero())
    if isinstance(f, LinearFunctional):
        return _SymProfile("ok", f.p.tail_start, f.p.tail_symseq())
    if isinstance(f, Scale):
        sub = _deriv_symbolic(f.inner, x)
        if sub.status != "ok":
            return sub
        return _SymProfile("ok", sub.valid_from, sub.tail.scaled(f.lam))
    if isinstance(f, Sum):
        parts = [_deriv_symbolic(g, x) for g in f.terms]
        for p in parts:
            if p.status == "kink":
                return p
        if any(p.status == "numeric" for p in parts):
            return _SymProfile("numeric")
        total = SymSeq.zero()
        for p in parts:
            total = total + p.tail
        return _SymProfile("ok", max((p.valid_from for p in parts), default=1), total)
    if not isinstance(f, SeparableSeries):
        return _SymProfile("numeric")

    start = x.tail_start
    w = f.weight.to_symseq()
    xx = x.tail_symseq()
    kind = f.inner.kind
    if kind is ScalarKind.SQUARE:
        return _SymProfile("ok", start, w * xx.scaled(2))
    if kind is ScalarKind.AFFINE_QUAD:
        aa = f.inner.a.to_symseq()
        bb = f.inner.b.to_symseq()
        return _SymProfile("ok", start, w * (aa * xx.scaled(2) + bb))
    if kind is ScalarKind.LINEAR:
        return _SymProfile("ok", start, w * f.inner.b.to_symseq())
    if kind is ScalarKind.ABS:
        if not w.terms:
            return _SymProfile("ok", start, SymSeq.zero())
        if not xx.terms:
            n0 = _form_first_nonzero(f.weight, start)
            if n0 is None:
                return _SymProfile("ok", start, SymSeq.zero())
            return _SymProfile("kink", kink_at=n0)
        try:
            sgn, rank = xx.eventual_sign(start)
        except ValueError:
            return _SymProfile("numeric")
        if sgn == 0:
            return _SymProfile("kink", kink_at=start)
        for n in range(start, rank):
            if xx.value_at(n) == 0.0 and f.weight.value_at(n) != 0.0:
                return _SymProfile("kink", kink_at=n)
        return _SymProfile("ok", rank, w.scaled(sgn))
    # NEG_SQRT
    cc = f.inner.c.to_symseq()
    if not cc.terms or not w.terms:
        return _SymProfile("ok", start, SymSeq.zero())
    if not xx.terms:
        n0 = _form_first_nonzero(f.weight, start)
        return _SymProfile("kink", kink_at=n0 if n0 is not None else start)
    if len(xx.terms) == 1 and xx.terms[0].coef > 0 and xx.terms[0].ratio > 0:
        inv_root = xx.sqrt().reciprocal()
        return _SymProfile("ok", start, (w * cc * inv_root).scaled(-0.5))
    return _SymProfile("numeric")


def _analytic_profile(
    f: FunctionExpr, x_star: Point, n_max: int
) -> tuple[list[Optional[float]], Optional[int]]:
    """Values of f'(x*; e_n) for n <= n_max via closed forms.

    Returns (values, first_kink_index); values hold None past a kink.
    """
    values: list[Optional[float]] = []
    kink = None
    for n in range(1, n_max + 1):
        dv = analytic_dir_deriv(f, x_star, n)
        if dv.status is DirStatus.EXISTS:
            values.append(dv.value)
        else:
            values.append(None)
            if kink is None:
                kink = n
    return values, kink


# ---------------------------------------------------------------------------
# Top-level certifiers
# ---------------------------------------------------------------------------


def _stationarity(
    f: FunctionExpr, x_star: Point, opts: CertifyOptions
) -> tuple[str, Grade, Optional[dict], dict]:
    """Decide f'(x*; e_n) = 0 for all n.

    Returns (outcome, grade, witness, evidence) with outcome in
    {"holds", "fails", "kink", "unresolved"}.  The evidence table carries
    both the closed-form values and an independent numeric scan whose
    verdict-bearing entries are monotone quotient bounds.
    """
    sym = _deriv_symbolic(f, x_star)
    values, kink = _analytic_profile(f, x_star, opts.coords)
    numeric = dir_deriv_profile(
        f, x_star, opts.coords, replace(opts.deriv, prefer_analytic=False)
    )
    table = []
    for i, (av, nres) in enumerate(zip(values, numeric), start=1):
        table.append(
            {
                "n": i,
                "analytic": av,
                "numeric": nres.value if nres.exists else None,
                "left": nres.left,
                "right": nres.right,
            }
        )
    evidence = {"derivatives": table, "symbolic": sym.status}

    if sym.status == "kink" or kink is not None:
        at = kink if kink is not None else sym.kink_at
        return "kink", Grade.numeric(opts.coords), {"n": at}, evidence

    if sym.status == "ok":
        # Exact zero: closed-form tail vanishes identically and every head
        # index below its validity rank is exactly zero.
        head = list(values)
        for n in range(opts.coords + 1, sym.valid_from):
            dv = analytic_dir_deriv(f, x_star, n)
            if dv.status is not DirStatus.EXISTS:
                return "kink", Grade.numeric(opts.coords), {"n": n}, evidence
            head.append(dv.value)
        head_zero = all(v == 0.0 for v in head[: sym.valid_from - 1])
        if sym.tail.is_zero and sym.tail.exact and head_zero:
            return "holds", Grade.analytic(), None, evidence
        # Locate a concrete violation beyond tolerance, if any.
        for i, v in enumerate(head, start=1):
            if v is not None and abs(v) > opts.tol:
                return (
                    "fails",
                    Grade.numeric(opts.coords),
                    {"n": i, "derivative": v},
                    evidence,
                )
        if not sym.tail.is_zero:
            try:
                sgn, rank = sym.tail.eventual_sign(sym.valid_from)
            except ValueError:
                sgn, rank = 0, sym.valid_from
            if sgn != 0:
                for n in range(rank, rank + 4096):
                    v = sym.tail.value_at(n)
                    if abs(v) > opts.tol:
                        return (
                            "fails",
                            Grade.numeric(opts.coords),
                            {"n": n, "derivative": v},
                            evidence,
                        )
        return "holds", Grade.numeric(opts.coords), None, evidence

    # No closed form: decide from the monotone quotient bounds alone.
    # The derivative lies in [left, right], so a bound clear of zero is a
    # sound nonzero claim and an interval inside [-tol, tol] a sound zero.
    for i, nres in enumerate(numeric, start=1):
        if not nres.exists:
            return "kink", Grade.numeric(opts.coords), {"n": i}, evidence
        if nres.left > opts.tol or nres.right < -opts.tol:
            side = nres.left if nres.left > opts.tol else nres.right
            return (
                "fails",
                Grade.numeric(opts.coords),
                {"n": i, "derivative_bound": side},
                evidence,
            )
        if max(abs(nres.left), abs(nres.right)) > opts.tol:
            return (
                "unresolved",
                Grade.numeric(opts.coords),
                {"n": i, "bounds": [nres.left, nres.right]},
                evidence,
            )
    return "holds", Grade.numeric(opts.coords), None, evidence


def certify_min(
    f: FunctionExpr,
    s: SetDescriptor,
    x_star: Point,
    opts: CertifyOptions = CertifyOptions(),
    probes: Optional[Sequence[Point]] = None,
) -> Certificate:
    """Is x* a global minimizer of f over the set?

    Pipeline: qualification, pseudo-semicontinuity, stationarity of all
    basis directional derivatives, plus a probe sweep for counterexamples.
    HOLDS needs all three hypotheses; a probe that beats the anchor, or a
    nonzero derivative under established qualification, gives FAILS with a
    witness; anything else that blocks the decision gives INCONCLUSIVE.
    """
    qual = check_qualification(s, x_star, opts.coords)
    all_probes = list(probes) if probes is not None else []
    all_probes.extend(default_psc_probes(x_star, opts))
    psc = check_psc(f, s, x_star, all_probes, opts.psc_depth, opts.tol)
    stat, stat_grade, stat_witness, stat_evidence = _stationarity(f, x_star, opts)

    f_star = evaluate(f, x_star)
    probe_log = []
    found_probe = None
    for x in all_probes:
        ok_member, _ = set_membership(s, x)
        if ok_member is not True:
            probe_log.append({"probe": point_to_json(x), "skipped": "not a certified member"})
            continue
        try:
            fx = evaluate(f, x)
        except (DomainViolation, NonConvergentPairing, NoMajorant) as exc:
            probe_log.append({"probe": point_to_json(x), "skipped": type(exc).__name__})
            continue
        probe_log.append({"probe": point_to_json(x), "f": fx.value})
        if math.isinf(fx.value):
            continue
        margin = f_star.value - f_star.error_bound - (fx.value + fx.error_bound)
        if margin > opts.tol and found_probe is None:
            found_probe = {
                "probe": point_to_json(x),
                "f_at_probe": fx.value,
                "f_at_anchor": f_star.value,
            }

    evidence = {
        "qualification": qual.to_json(),
        "psc": psc.to_json(),
        "stationarity": stat_evidence,
        "f_at_anchor": f_star.value,
        "probe_log": probe_log,
    }

    if found_probe is not None:
        return Certificate(
            Verdict.FAILS,
            Grade.numeric(opts.coords),
            reason="a feasible probe point has a smaller value",
            witness=found_probe,
            evidence=evidence,
        )
    if stat == "fails" and qual.verdict is Verdict.HOLDS:
        return Certificate(
            Verdict.FAILS,
            stat_grade,
            reason="a basis directional derivative is nonzero",
            witness=stat_witness,
            evidence=evidence,
        )
    if stat == "kink":
        return Certificate(
            Verdict.INCONCLUSIVE,
            stat_grade,
            reason=f"directional derivative does not exist at n={stat_witness['n']}",
            evidence=evidence,
        )
    if stat == "unresolved":
        return Certificate(
            Verdict.INCONCLUSIVE,
            stat_grade,
            reason="a derivative bound straddles the tolerance",
            evidence=evidence,
        )
    if qual.verdict is not Verdict.HOLDS:
        return Certificate(
            Verdict.INCONCLUSIVE,
            qual.grade,
            reason="qualification not established",
            evidence=evidence,
        )
    if psc.verdict is not Verdict.HOLDS:
        return Certificate(
            Verdict.INCONCLUSIVE,
            psc.grade,
            reason="pseudo-semicontinuity not established and no better probe found",
            evidence=evidence,
        )
    if stat == "fails":
        # Unreachable given qualification HOLDS above, kept for clarity.
        return Certificate(
            Verdict.FAILS, stat_grade, reason="stationarity fails", witness=stat_witness,
            evidence=evidence,
        )
    grade = qual.grade.combine(psc.grade).combine(stat_grade)
    return Certificate(Verdict.HOLDS, grade, evidence=evidence)


def subgradient_test(
    f: FunctionExpr,
    x_star: Point,
    p: DualPoint,
    opts: CertifyOptions = CertifyOptions(),
) -> Certificate:
    """Is p a subgradient of f at x*?

    Reduces to f'(x*; e_n) = p_n for every n, under pseudo-semicontinuity
    of f with respect to x* (whole-space setting).
    """
    psc = check_psc(f, SetDescriptor.whole_space(), x_star, depth=opts.psc_depth, tol=opts.tol)
    if psc.verdict is not Verdict.HOLDS:
        return Certificate(
            Verdict.INCONCLUSIVE,
            psc.grade,
            reason="pseudo-semicontinuity not established",
            evidence={"psc": psc.to_json()},
        )
    sym = _deriv_symbolic(f, x_star)
    values, kink = _analytic_profile(f, x_star, opts.coords)
    if kink is not None or sym.status == "kink":
        at = kink if kink is not None else sym.kink_at
        return Certificate(
            Verdict.INCONCLUSIVE,
            Grade.numeric(opts.coords),
            reason=f"directional derivative does not exist at n={at}",
        )
    table = [
        {"n": i, "derivative": v, "dual": p.coordinate(i)}
        for i, v in enumerate(values, start=1)
    ]
    evidence = {"matches": table, "psc": psc.to_json()}
    for i, v in enumerate(values, start=1):
        if v is None:
            continue
        if abs(v - p.coordinate(i)) > opts.tol:
            return Certificate(
                Verdict.FAILS,
                Grade.numeric(opts.coords),
                reason="derivative and dual coordinate disagree",
                witness={"n": i, "derivative": v, "dual": p.coordinate(i)},
                evidence=evidence,
            )
    if sym.status == "ok":
        diff = sym.tail - p.tail_symseq()
        start = max(sym.valid_from, p.tail_start)
        head = list(values)
        for n in range(opts.coords + 1, start):
            dv = analytic_dir_deriv(f, x_star, n)
            if dv.status is not DirStatus.EXISTS:
                return Certificate(
                    Verdict.INCONCLUSIVE,
                    Grade.numeric(opts.coords),
                    reason=f"directional derivative does not exist at n={n}",
                )
            if abs(dv.value - p.coordinate(n)) > opts.tol:
                return Certificate(
                    Verdict.FAILS,
                    Grade.numeric(opts.coords),
                    reason="derivative and dual coordinate disagree",
                    witness={"n": n, "derivative": dv.value, "dual": p.coordinate(n)},
                    evidence=evidence,
                )
            head.append(dv.value)
        exact_head = all(
            head[i - 1] is not None and head[i - 1] == p.coordinate(i)
            for i in range(1, start)
        )
        if diff.is_zero and diff.exact and exact_head:
            return Certificate(Verdict.HOLDS, Grade.analytic(), evidence=evidence)
        if not diff.is_zero:
            try:
                sgn, rank = diff.eventual_sign(start)
            except ValueError:
                sgn, rank = 0, start
            if sgn != 0:
                for n in range(rank, rank + 4096):
                    v = diff.value_at(n)
                    if abs(v) > opts.tol:
                        return Certificate(
                            Verdict.FAILS,
                            Grade.numeric(opts.coords),
                            reason="derivative and dual coordinate disagree in the tail",
                            witness={
                                "n": n,
                                "derivative": sym.tail.value_at(n),
                                "dual": p.coordinate(n),
                            },
                            evidence=evidence,
                        )
    return Certificate(Verdict.HOLDS, Grade.numeric(opts.coords), evidence=evidence)


# ---------------------------------------------------------------------------
# Gateaux detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GateauxDerivative:
    """The assembled derivative: h -> sum of f'(x*; e_n) * h_n.

    ``known`` holds the leading coefficients; ``tail`` their closed form
    beyond that (None when only the sampled prefix is known, in which case
    apply is defined for directions supported inside the prefix).
    """

    known: tuple[float, ...]
    tail: Optional[SymSeq] = None

    def coefficient(self, n: int) -> float:
        if n <= len(self.known):
            return self.known[n - 1]
        if self.tail is None:
            raise NonConvergentPairing(
                f"coefficient {n} is beyond the sampled prefix and no closed form is known"
            )
        return self.tail.value_at(n)

    def apply(self, h: Point, tol: float = 1e-12) -> SeriesValue:
        """Certified pairing of the coefficient sequence with h."""
        k0 = max(len(self.known), h.tail_start - 1)
        if self.tail is None:
            if not h.is_finitely_supported() or len(h.prefix) > len(self.known):
                raise NonConvergentPairing(
                    "direction reaches past the sampled coefficients"
                )
            head = sum(
                self.coefficient(n) * h.coordinate(n) for n in range(1, k0 + 1)
            )
            return SeriesValue(head, abs(head) * (k0 + 1) * 2.2e-16, k0)
        prod = self.tail * h.tail_symseq()
        try:
            tval, terr, used = tail_sum(prod, k0 + 1, tol / 2)
        except ValueError as exc:
            raise NonConvergentPairing(
                f"derivative pairing not certified convergent ({exc})"
            ) from exc
        head = sum(self.coefficient(n) * h.coordinate(n) for n in range(1, k0 + 1))
        err = terr + (abs(head) + abs(tval)) * (k0 + 2) * 2.2e-16
        return SeriesValue(head + tval, err, k0 + used)


def _contains_limsup(f: FunctionExpr) -> bool:
    return _limsup_weight(f) != 0.0


def gateaux_detect(
    f: FunctionExpr,
    space: SpaceDescriptor,
    x_star: Point,
    opts: CertifyOptions = CertifyOptions(),
    witness_directions: Sequence[Point] = (),
) -> tuple[Certificate, Optional[GateauxDerivative]]:
    """Is f Gateaux-differentiable at x*, and what is the derivative?

    On a topological-basis space, existence of every basis directional
    derivative settles the question and the derivative is assembled from
    those coefficients (then validated against direct directional
    derivatives on sample directions).  Without a topological basis the
    basis directions prove nothing positive: the verdict is INCONCLUSIVE
    unless some supplied direction exhibits left != right, which is FAILS.
    """
    deriv_opts = opts.deriv
    if not space.basis_is_topological:
        _, kink = _analytic_profile(f, x_star, min(opts.coords, 16))
        for h in witness_directions:
            res = dir_deriv(f, x_star, h, deriv_opts)
            if not res.exists:
                return (
                    Certificate(
                        Verdict.FAILS,
                        Grade.numeric(opts.coords),
                        reason="a direction with unequal one-sided derivatives",
                        witness={
                            "direction": point_to_json(h),
                            "left": res.left,
                            "right": res.right,
                        },
                        evidence={"basis_kink": kink},
                    ),
                    None,
                )
        if kink is not None:
            return (
                Certificate(
                    Verdict.FAILS,
                    Grade.analytic(),
                    reason="a basis directional derivative is missing",
                    witness={"n": kink},
                ),
                None,
            )
        return (
            Certificate(
                Verdict.INCONCLUSIVE,
                Grade.numeric(opts.coords),
                reason="basis is not topological; existence along basis directions is not sufficient",
                evidence={"basis_derivatives_exist": True},
            ),
            None,
        )

    if _contains_limsup(f):
        return (
            Certificate(
                Verdict.INCONCLUSIVE,
                Grade.numeric(opts.coords),
                reason="expression has a limsup part, which is not continuous on this space",
            ),
            None,
        )

    values, kink = _analytic_profile(f, x_star, opts.coords)
    if kink is not None:
        dv = analytic_dir_deriv(f, x_star, kink)
        return (
            Certificate(
                Verdict.FAILS,
                Grade.analytic(),
                reason="directional derivative missing along a basis direction",
                witness={"n": kink, "left": dv.left, "right": dv.right},
            ),
            None,
        )
    sym = _deriv_symbolic(f, x_star)
    if sym.status == "kink":
        dv = analytic_dir_deriv(f, x_star, sym.kink_at)
        return (
            Certificate(
                Verdict.FAILS,
                Grade.analytic(),
                reason="directional derivative missing along a basis direction",
                witness={"n": sym.kink_at, "left": dv.left, "right": dv.right},
            ),
            None,
        )

    if sym.status == "ok":
        known = list(values[: sym.valid_from - 1])
        for n in range(opts.coords + 1, sym.valid_from):
            dv = analytic_dir_deriv(f, x_star, n)
            if dv.status is not DirStatus.EXISTS:
                return (
                    Certificate(
                        Verdict.FAILS,
                        Grade.analytic(),
                        reason="directional derivative missing along a basis direction",
                        witness={"n": n, "left": dv.left, "right": dv.right},
                    ),
                    None,
                )
            known.append(dv.value)
        deriv = GateauxDerivative(known=tuple(known), tail=sym.tail)
        grade = Grade.analytic()
    else:
        deriv = GateauxDerivative(known=tuple(values), tail=None)
        grade = Grade.numeric(opts.coords)

    # Validate the assembly against direct directional derivatives.
    rng = rng_from_seed(opts.seed)
    samples = []
    attempts = 0
    while len(samples) < 3 and attempts < 40:
        attempts += 1
        h = random_direction(rng, summable=True)
        try:
            applied = deriv.apply(h)
            direct = dir_deriv(f, x_star, h, deriv_opts)
        except (NonConvergentPairing, NoMajorant, DomainViolation):
            continue
        if not direct.exists:
            continue
        gap = abs(applied.value - direct.value)
        samples.append({"gap": gap})
        if gap > max(opts.tol, 1e-6):
            return (
                Certificate(
                    Verdict.INCONCLUSIVE,
                    grade,
                    reason="assembled derivative disagrees with a direct directional derivative",
                    evidence={"validation_gap": gap},
                ),
                None,
            )
    cert = Certificate(
        Verdict.HOLDS,
        grade,
        evidence={
            "coefficients_head": [deriv.coefficient(n) for n in range(1, 9)],
            "validation_samples": samples,
        },
    )
    return cert, deriv


# ---------------------------------------------------------------------------
# Term-wise differentiation of function series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagonalFamily:
    """The family f_k(x) = weight(k) * inner_k(x_k): one coordinate each."""

    weight: TailRule
    inner: ScalarConvex


@dataclass(frozen=True)
class ScaledFamily:
    """The family f_k(x) = coeffs(k) * base(x): shared shape, scaled."""

    coeffs: TailRule
    base: FunctionExpr


SeriesFamily = Union[DiagonalFamily, ScaledFamily, Sequence[FunctionExpr]]


def family_to_json(family: SeriesFamily) -> dict:
    if isinstance(family, DiagonalFamily):
        return {
            "kind": "diagonal",
            "weight": _form_to_json(family.weight),
            "inner": scalar_to_json(family.inner),
        }
    if isinstance(family, ScaledFamily):
        return {
            "kind": "scaled",
            "coeffs": _form_to_json(family.coeffs),
            "base": function_to_json(family.base),
        }
    return {"kind": "list", "terms": [function_to_json(g) for g in family]}


def family_from_json(obj: dict) -> SeriesFamily:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("family must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "diagonal":
        _expect_fields(obj, "diagonal family", {"kind", "weight", "inner"})
        return DiagonalFamily(_form_from_json(obj["weight"]), scalar_from_json(obj["inner"]))
    if kind == "scaled":
        _expect_fields(obj, "scaled family", {"kind", "coeffs", "base"})
        return ScaledFamily(_form_from_json(obj["coeffs"]), function_from_json(obj["base"]))
    if kind == "list":
        _expect_fields(obj, "family list", {"kind", "terms"})
        if not isinstance(obj["terms"], list):
            raise ValueError("family terms must be a list")
        return [function_from_json(t) for t in obj["terms"]]
    raise ValueError(f"unknown family kind {kind!r}")


def _interval_differentiable(
    f: FunctionExpr, x: Point, n: int, a: float
) -> tuple[bool, Optional[str]]:
    """Is t -> f(x + t e_n) differentiable for every |t| < a, each term of f?"""
    if isinstance(f, (Constant, LimsupSeminorm, LinearFunctional)):
        return True, None
    if isinstance(f, Scale):
        return _interval_differentiable(f.inner, x, n, a) if f.lam else (True, None)
    if isinstance(f, Sum):
        for g in f.terms:
            ok, why = _interval_differentiable(g, x, n, a)
            if not ok:
                return ok, why
        return True, None
    if isinstance(f, SeparableSeries):
        if f.weight.value_at(n) == 0.0:
            return True, None
        v = x.coordinate(n)
        kind = f.inner.kind
        if kind is ScalarKind.ABS:
            if abs(v) >= a:
                return True, None
            return False, f"kink of |.| inside the interval at n={n}"
        if kind is ScalarKind.NEG_SQRT:
            if f.inner.c.value_at(n) == 0.0 or v - a >= 0.0:
                return True, None
            return False, f"sqrt boundary inside the interval at n={n}"
        return True, None
    raise TypeError(f"unknown function expression {type(f).__name__}")


def _scalar_deriv_bound(u: ScalarConvex, n: int, center: float, a: float) -> float:
    """sup of |u'| over the open interval (center-a, center+a) in its domain."""
    if u.kind is ScalarKind.ABS:
        return 1.0
    if u.kind is ScalarKind.SQUARE:
        return 2.0 * (abs(center) + a)
    if u.kind is ScalarKind.AFFINE_QUAD:
        return 2.0 * abs(u.a.value_at(n)) * (abs(center) + a) + abs(u.b.value_at(n))
    if u.kind is ScalarKind.LINEAR:
        return abs(u.b.value_at(n))
    c = abs(u.c.value_at(n))
    if c == 0.0:
        return 0.0
    lo = center - a
    if lo <= 0.0:
        return math.inf
    return c / (2.0 * math.sqrt(lo))


def _expr_deriv_bound(f: FunctionExpr, x: Point, n: int, a: float) -> float:
    if isinstance(f, (Constant, LimsupSeminorm)):
        return 0.0
    if isinstance(f, LinearFunctional):
        return abs(f.p.coordinate(n))
    if isinstance(f, Scale):
        return f.lam * _expr_deriv_bound(f.inner, x, n, a) if f.lam else 0.0
    if isinstance(f, Sum):
        return sum(_expr_deriv_bound(g, x, n, a) for g in f.terms)
    if isinstance(f, SeparableSeries):
        w = abs(f.weight.value_at(n))
        return w * _scalar_deriv_bound(f.inner, n, x.coordinate(n), a) if w else 0.0
    raise TypeError(f"unknown function expression {type(f).__name__}")


def series_differentiate(
    family: SeriesFamily,
    x_star: Point,
    radii: TailRule = TailRule.const(1.0),
    opts: CertifyOptions = CertifyOptions(),
) -> tuple[Certificate, tuple[float, ...]]:
    """Differentiate a series of convex functions term by term at x*.

    Verifies, along each basis direction n with interval half-width
    radii(n): (i) every term is differentiable on the interval, (ii) the
    derivative series converges, (iii) uniformly so over the interval.
    On HOLDS the per-direction derivative of the sum is the sum of the
    term derivatives, returned for n up to opts.coords.

    Raises NoMajorant when the derivative tail has no summable bound.
    """
    n_max = opts.coords
    radii_vals = [radii.value_at(n) for n in range(1, n_max + 1)]
    if any(a <= 0.0 for a in radii_vals):
        raise ValueError("interval radii must be positive")

    if isinstance(family, DiagonalFamily):
        # Term k moves only coordinate k: along e_n just one term is live,
        # so pointwise and uniform convergence of the derivative series are
        # immediate and only condition (i) needs work.
        f_equiv = SeparableSeries(family.weight, family.inner)
        for n, a in enumerate(radii_vals, start=1):
            ok, why = _interval_differentiable(f_equiv, x_star, n, a)
            if not ok:
                return (
                    Certificate(
                        Verdict.FAILS,
                        Grade.numeric(n_max),
                        reason=why,
                        witness={"n": n},
                    ),
                    (),
                )
        values = []
        for n in range(1, n_max + 1):
            dv = analytic_dir_deriv(f_equiv, x_star, n)
            if dv.status is not DirStatus.EXISTS:
                return (
                    Certificate(
                        Verdict.FAILS,
                        Grade.numeric(n_max),
                        reason="term derivative missing at the anchor",
                        witness={"n": n},
                    ),
                    (),
                )
            values.append(dv.value)
        cert = Certificate(
            Verdict.HOLDS,
            Grade.analytic(),
            evidence={
                "rule": "one live term per direction; tail of the derivative series is identically zero",
            },
        )
        return cert, tuple(values)

    if isinstance(family, ScaledFamily):
        base_values, kink = _analytic_profile(family.base, x_star, n_max)
        if kink is not None:
            return (
                Certificate(
                    Verdict.FAILS,
                    Grade.numeric(n_max),
                    reason="base derivative missing at the anchor",
                    witness={"n": kink},
                ),
                (),
            )
        coeff_seq = family.coeffs.to_symseq()
        if classify(coeff_seq) != SUMMABLE:
            if any(v != 0.0 for v in base_values):
                raise NoMajorant(
                    "coefficient series is not absolutely summable and the base derivative is nonzero"
                )
            return (
                Certificate(
                    Verdict.HOLDS,
                    Grade.numeric(n_max),
                    evidence={"rule": "base derivative vanishes at every sampled n"},
                ),
                tuple(0.0 for _ in base_values),
            )
        for n, a in enumerate(radii_vals, start=1):
            ok, why = _interval_differentiable(family.base, x_star, n, a)
            if not ok:
                return (
                    Certificate(
                        Verdict.FAILS, Grade.numeric(n_max), reason=why, witness={"n": n}
                    ),
                    (),
                )
            if not math.isfinite(_expr_deriv_bound(family.base, x_star, n, a)):
                raise NoMajorant(
                    f"no finite derivative envelope on the interval at n={n}"
                )
        total, terr, _ = tail_sum(coeff_seq, 1, 1e-12)
        values = tuple(total * v for v in base_values)
        cert = Certificate(
            Verdict.HOLDS,
            Grade.analytic(),
            evidence={
                "rule": "summable coefficients times a bounded derivative envelope",
                "coefficient_sum": total,
            },
        )
        return cert, values

    # Finite explicit list of terms.
    terms = list(family)
    for n, a in enumerate(radii_vals, start=1):
        for idx, g in enumerate(terms):
            ok, why = _interval_differentiable(g, x_star, n, a)
            if not ok:
                return (
                    Certificate(
                        Verdict.FAILS,
                        Grade.numeric(n_max),
                        reason=why,
                        witness={"term": idx, "n": n},
                    ),
                    (),
                )
    values = []
    for n in range(1, n_max + 1):
        acc = 0.0
        for idx, g in enumerate(terms):
            dv = analytic_dir_deriv(g, x_star, n)
            if dv.status is not DirStatus.EXISTS:
                return (
                    Certificate(
                        Verdict.FAILS,
                        Grade.numeric(n_max),
                        reason="term derivative missing at the anchor",
                        witness={"term": idx, "n": n},
                    ),
                    (),
                )
            acc += dv.value
        values.append(acc)
    cert = Certificate(
        Verdict.HOLDS,
        Grade.analytic(),
        evidence={"rule": "finite family; conditions (ii) and (iii) are finite sums"},
    )
    return cert, tuple(values)


# ---------------------------------------------------------------------------
# KKT
# ---------------------------------------------------------------------------


def kkt_certify(
    f: FunctionExpr,
    inequalities: Sequence[FunctionExpr],
    equalities: Sequence[FunctionExpr],
    s: SetDescriptor,
    x_star: Point,
    lam: Sequence[float],
    nu: Sequence[float],
    opts: CertifyOptions = CertifyOptions(),
) -> Certificate:
    """Do the supplied multipliers certify x* as a constrained minimizer?

    Checks feasibility, qualification, pseudo-semicontinuity of every
    function, complementary slackness, and per-coordinate stationarity of
    f' + sum(lam_j g_j') + sum(nu_k h_k').  The implication runs one way:
    any hypothesis failure is INCONCLUSIVE, never a non-optimality claim.
    """
    if len(lam) != len(inequalities) or len(nu) != len(equalities):
        raise ValueError("multiplier counts must match constraint counts")

    ok_member, wit = set_membership(s, x_star)
    if ok_member is None:
        return Certificate(
            Verdict.INCONCLUSIVE,
            Grade.numeric(opts.coords),
            reason="anchor membership could not be certified from the tail forms",
        )
    if not ok_member:
        raise InfeasiblePoint(f"anchor outside the base set (coordinate {wit})")
    g_vals = []
    for j, g in enumerate(inequalities):
        gv = evaluate(g, x_star)
        g_vals.append(gv.value)
        if gv.value - gv.error_bound > opts.tol:
            raise InfeasiblePoint(f"inequality {j} is violated: g(x*) = {gv.value:.6g}")
    h_vals = []
    for j, h in enumerate(equalities):
        hv = evaluate(h, x_star)
        h_vals.append(hv.value)
        if abs(hv.value) - hv.error_bound > opts.tol:
            raise InfeasiblePoint(f"equality {j} is violated: h(x*) = {hv.value:.6g}")

    evidence: dict = {"g_values": g_vals, "h_values": h_vals}

    for j, l in enumerate(lam):
        if l < 0.0:
            return Certificate(
                Verdict.INCONCLUSIVE,
                Grade.numeric(opts.coords),
                reason=f"multiplier {j} is negative; hypothesis not satisfied",
                evidence=evidence,
            )

    qual = check_qualification(s, x_star, opts.coords)
    evidence["qualification"] = qual.to_json()
    if qual.verdict is not Verdict.HOLDS:
        return Certificate(
            Verdict.INCONCLUSIVE,
            qual.grade,
            reason="qualification not established",
            evidence=evidence,
        )
    for name, fn in [("objective", f)] + [
        (f"inequality_{j}", g) for j, g in enumerate(inequalities)
    ] + [(f"equality_{j}", h) for j, h in enumerate(equalities)]:
        psc = check_psc(fn, s, x_star, depth=opts.psc_depth, tol=opts.tol)
        if psc.verdict is not Verdict.HOLDS:
            evidence["psc_failure"] = {name: psc.to_json()}
            return Certificate(
                Verdict.INCONCLUSIVE,
                psc.grade,
                reason=f"pseudo-semicontinuity not established for {name}",
                evidence=evidence,
            )

    slack = [l * gv for l, gv in zip(lam, g_vals)]
    evidence["complementary_slackness"] = slack
    for j, sv in enumerate(slack):
        if abs(sv) > opts.tol:
            return Certificate(
                Verdict.INCONCLUSIVE,
                Grade.numeric(opts.coords),
                reason=f"complementary slackness fails for inequality {j}",
                witness={"j": j, "lambda_times_g": sv},
                evidence=evidence,
            )

    # Stationarity of the Lagrangian derivative, coordinate by coordinate.
    parts: list[tuple[float, FunctionExpr]] = [(1.0, f)]
    parts.extend((l, g) for l, g in zip(lam, inequalities))
    parts.extend((v, h) for v, h in zip(nu, equalities))

    analytic_ok = True
    combined_tail = SymSeq.zero()
    valid_from = 1
    for coeff, fn in parts:
        sym = _deriv_symbolic(fn, x_star)
        if sym.status == "kink":
            return Certificate(
                Verdict.INCONCLUSIVE,
                Grade.numeric(opts.coords),
                reason=f"directional derivative missing at n={sym.kink_at}",
                evidence=evidence,
            )
        if sym.status != "ok":
            analytic_ok = False
            break
        combined_tail = combined_tail + sym.tail.scaled(coeff)
        valid_from = max(valid_from, sym.valid_from)

    table = []
    worst = 0.0
    worst_n = None
    for n in range(1, opts.coords + 1):
        acc = 0.0
        missing = None
        for coeff, fn in parts:
            dv = analytic_dir_deriv(fn, x_star, n)
            if dv.status is not DirStatus.EXISTS:
                missing = n
                break
            acc += coeff * dv.value
        if missing is not None:
            return Certificate(
                Verdict.INCONCLUSIVE,
                Grade.numeric(opts.coords),
                reason=f"directional derivative missing at n={missing}",
                evidence=evidence,
            )
        table.append({"n": n, "lagrangian_derivative": acc})
        if abs(acc) > worst:
            worst, worst_n = abs(acc), n
    evidence["stationarity"] = table[:16]

    if worst > opts.tol:
        return Certificate(
            Verdict.INCONCLUSIVE,
            Grade.numeric(opts.coords),
            reason=f"stationarity fails at n={worst_n}; sufficiency cannot conclude",
            witness={"n": worst_n, "lagrangian_derivative": worst},
            evidence=evidence,
        )

    head_exact = valid_from - 1 <= opts.coords and all(
        row["lagrangian_derivative"] == 0.0 for row in table[: valid_from - 1]
    )
    if analytic_ok and combined_tail.is_zero and combined_tail.exact and head_exact:
        return Certificate(Verdict.HOLDS, Grade.analytic(), evidence=evidence)
    if analytic_ok and not combined_tail.is_zero:
        try:
            sgn, rank = combined_tail.eventual_sign(valid_from)
        except ValueError:
            sgn, rank = 0, valid_from
        if sgn != 0:
            for n in range(rank, rank + 4096):
                v = combined_tail.value_at(n)
                if abs(v) > opts.tol:
                    return Certificate(
                        Verdict.INCONCLUSIVE,
                        Grade.numeric(opts.coords),
                        reason=f"stationarity fails at n={n}; sufficiency cannot conclude",
                        witness={"n": n, "lagrangian_derivative": v},
                        evidence=evidence,
                    )
    return Certificate(Verdict.HOLDS, Grade.numeric(opts.coords), evidence=evidence)
