"""Points, anchored projections, pairings, and their JSON forms."""

import math

import mpmath
import pytest

from seqcert.seqspace import (
    DualPoint,
    Point,
    SpaceDescriptor,
    TailRule,
    basis_vector,
    dual_from_json,
    dual_to_json,
    ell1_norm,
    in_ell1,
    in_ellinf,
    limsup_abs,
    pair,
    point_add,
    point_axpy,
    point_from_json,
    point_scale,
    point_sub,
    point_to_json,
    points_equal,
    project,
    space_from_json,
    space_to_json,
    sup_abs,
)

mpmath.mp.dps = 30


# coordinates and tails -------------------------------------------------------


def test_prefix_then_tail_coordinates():
    x = Point([3.0, -1.0], (TailRule.geometric(1.0, 0.5),))
    assert x.coordinate(1) == 3.0
    assert x.coordinate(2) == -1.0
    # tails are indexed by the absolute position n, not the offset past
    # the prefix: coordinate 3 is 0.5^3, not 0.5^1
    assert x.coordinate(3) == pytest.approx(0.5**3)
    assert x.coordinate(10) == pytest.approx(0.5**10)


def test_tail_indexing_is_independent_of_prefix_length():
    bare = Point([], (TailRule.harmonic(1.0),))
    padded = Point([bare.coordinate(1), bare.coordinate(2)], (TailRule.harmonic(1.0),))
    for n in range(1, 12):
        assert padded.coordinate(n) == bare.coordinate(n)


def test_composite_tail_sums_atoms():
    x = Point([], (TailRule.geometric(1.0, 0.5), TailRule.harmonic(2.0)))
    assert x.coordinate(4) == pytest.approx(0.5**4 + 2.0 / 4)


def test_coordinate_index_must_be_positive():
    with pytest.raises(ValueError):
        Point([1.0], ()).coordinate(0)


def test_zero_and_finite_support():
    z = Point.zero()
    assert z.is_finitely_supported()
    assert Point([1.0, 2.0], ()).is_finitely_supported()
    assert not Point([], (TailRule.const(1.0),)).is_finitely_supported()


def test_basis_vector_is_biorthogonal_prefix():
    e3 = basis_vector(3)
    for n in range(1, 8):
        assert e3.coordinate(n) == (1.0 if n == 3 else 0.0)


# arithmetic ------------------------------------------------------------------


def test_point_add_and_sub_coordinatewise():
    x = Point([1.0], (TailRule.geometric(1.0, 0.5),))
    y = Point([2.0, 3.0], (TailRule.harmonic(1.0),))
    s = point_add(x, y)
    d = point_sub(x, y)
    for n in range(1, 10):
        assert s.coordinate(n) == pytest.approx(x.coordinate(n) + y.coordinate(n))
        assert d.coordinate(n) == pytest.approx(x.coordinate(n) - y.coordinate(n))


def test_point_scale_and_axpy():
    x = Point([1.0, -2.0], (TailRule.geometric(3.0, 0.25),))
    h = Point([0.5], (TailRule.harmonic(-1.0),))
    y = point_axpy(x, 2.0, h)
    for n in range(1, 10):
        assert point_scale(1.5, x).coordinate(n) == pytest.approx(1.5 * x.coordinate(n))
        assert y.coordinate(n) == pytest.approx(x.coordinate(n) + 2.0 * h.coordinate(n))


def test_exact_cancellation_of_equal_tails():
    x = Point([], (TailRule.geometric(1.0, 0.5),))
    d = point_sub(x, x)
    assert d.is_finitely_supported()
    assert points_equal(d, Point.zero(), upto=32)


# projections -----------------------------------------------------------------


def test_plain_projection_truncates():
    x = Point([], (TailRule.harmonic(1.0),))
    p = project(x, 3)
    assert [p.coordinate(n) for n in range(1, 6)] == [1.0, 0.5, 1 / 3, 0.0, 0.0]


def test_anchored_projection_keeps_anchor_tail():
    x = Point([], (TailRule.const(2.0),))
    anchor = Point([], (TailRule.harmonic(1.0),))
    p = project(x, 2, anchor)
    assert p.coordinate(1) == 2.0
    assert p.coordinate(2) == 2.0
    for n in range(3, 9):
        assert p.coordinate(n) == anchor.coordinate(n)


def test_projection_idempotent_and_nested():
    x = Point([1.0, 2.0], (TailRule.geometric(1.0, 0.5),))
    anchor = Point([], (TailRule.harmonic(0.5),))
    p4 = project(x, 4, anchor)
    assert points_equal(project(p4, 4, anchor), p4, upto=20)
    # nesting: projecting deeper after k keeps the first k coordinates
    p6 = project(x, 6, anchor)
    for n in range(1, 5):
        assert p6.coordinate(n) == p4.coordinate(n)


def test_projection_rank_zero_gives_the_anchor():
    x = Point([7.0], (TailRule.const(1.0),))
    anchor = Point([], (TailRule.harmonic(0.5),))
    assert points_equal(project(x, 0, anchor), anchor, upto=12)
    with pytest.raises(ValueError):
        project(x, -1)


# norms, memberships, pairing -------------------------------------------------


def test_ell1_norm_against_reference():
    x = Point([1.0, -2.0], (TailRule.geometric(1.0, 0.5),))
    got = ell1_norm(x)
    ref = 3.0 + float(mpmath.nsum(lambda n: mpmath.mpf(0.5) ** n, [3, mpmath.inf]))
    assert abs(got.value - ref) <= got.error_bound + 1e-12


def test_in_ell1_detects_divergence():
    assert in_ell1(Point([], (TailRule.geometric(1.0, 0.5),)))
    assert not in_ell1(Point([], (TailRule.harmonic(1.0),)))
    assert not in_ell1(Point([], (TailRule.const(0.1),)))


def test_in_ellinf_bounded_tails():
    assert in_ellinf(Point([5.0], (TailRule.const(2.0),)))
    assert in_ellinf(Point([], (TailRule.harmonic(7.0),)))


def test_sup_and_limsup():
    x = Point([5.0, -7.0], (TailRule.const(2.0), TailRule.harmonic(1.0)))
    assert sup_abs(x, upto=16) == 7.0
    # the transient harmonic part decays; only the constant survives
    assert limsup_abs(x) == pytest.approx(2.0)
    assert limsup_abs(Point([9.0], (TailRule.harmonic(3.0),))) == 0.0


def test_pair_against_reference():
    p = DualPoint([1.0, 2.0], (TailRule.geometric(1.0, 0.5),))
    x = Point([3.0], (TailRule.harmonic(1.0),))
    got = pair(p, x)
    ref = float(
        3
        + 2 * mpmath.mpf(1) / 2
        + mpmath.nsum(lambda n: mpmath.mpf(0.5) ** n / n, [3, mpmath.inf])
    )
    assert abs(got.value - ref) <= got.error_bound + 1e-12


def test_pair_rejects_divergent_pairing():
    p = DualPoint([], (TailRule.const(1.0),))
    x = Point([], (TailRule.const(1.0),))
    with pytest.raises(Exception):
        pair(p, x)


# JSON ------------------------------------------------------------------------


def test_point_json_round_trip():
    pts = [
        Point.zero(),
        Point([1.5, -2.0], ()),
        Point([], (TailRule.geometric(1.0, 0.5),)),
        Point([0.25], (TailRule.geometric(1.0, -0.5), TailRule.harmonic(2.0))),
        Point([], (TailRule.const(3.0),)),
    ]
    for x in pts:
        back = point_from_json(point_to_json(x))
        assert points_equal(back, x, upto=24)


def test_point_json_rejects_unknown_fields():
    with pytest.raises(ValueError):
        point_from_json({"prefix": [], "tail": {"kind": "zero"}, "extra": 1})
    with pytest.raises(ValueError):
        point_from_json({"prefix": [], "tail": {"kind": "const", "c": 1.0, "r": 2.0}})
    with pytest.raises(ValueError):
        point_from_json({"prefix": [], "tail": {"kind": "wavelet", "c": 1.0}})


def test_dual_json_round_trip():
    p = DualPoint([1.0], (TailRule.geometric(2.0, 0.25),))
    q = dual_from_json(dual_to_json(p))
    assert list(q.prefix) == list(p.prefix)
    assert q.tail == p.tail


def test_space_json_round_trip():
    for s in (SpaceDescriptor.rn(), SpaceDescriptor.ell1(), SpaceDescriptor.ellinf()):
        assert space_from_json(space_to_json(s)) == s
    with pytest.raises(ValueError):
        space_from_json({"kind": "hilbert"})


def test_tail_normalization_drops_zero_atoms():
    x = Point([], (TailRule.zero(), TailRule.geometric(1.0, 0.5)))
    assert x.coordinate(2) == pytest.approx(0.25)
    assert math.isfinite(sup_abs(x, upto=8))
