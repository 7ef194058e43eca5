"""Finite-dimensional reduction and the coordinate-descent oracle.

The oracle is the independent check for the certifiers, so these tests pin
it against problems with hand-computable minima before anything trusts it.
"""

import math

import pytest

from seqcert.certify import SetDescriptor
from seqcert.errors import DomainViolation, InfeasiblePoint, MaxSweeps, Unbounded
from seqcert.funcs import (
    LimsupSeminorm,
    ScalarConvex,
    SeparableSeries,
    Sum,
    evaluate,
)
from seqcert.reduce import OracleOptions, build_reduced, grad_reduced, minimize_reduced
from seqcert.seqspace import Point, TailRule

BETA = 0.5


def quad_with_harmonic_drift():
    # term n: beta^n (t^2 - t/n), minimized at t = 1/(2n)
    return SeparableSeries(
        TailRule.geometric(1.0, BETA),
        ScalarConvex.affine_quad(1.0, TailRule.harmonic(-1.0)),
    )


def harmonic_half_anchor():
    return Point([], (TailRule.harmonic(0.5),))


def test_embed_keeps_anchor_past_k():
    anchor = harmonic_half_anchor()
    prob = build_reduced(quad_with_harmonic_drift(), SetDescriptor.whole_space(), anchor, 3)
    x = prob.embed([9.0, 8.0, 7.0])
    assert x.coordinate(1) == 9.0
    assert x.coordinate(3) == 7.0
    for n in (4, 5, 11):
        assert x.coordinate(n) == anchor.coordinate(n)


def test_start_is_anchor_truncation():
    anchor = harmonic_half_anchor()
    prob = build_reduced(quad_with_harmonic_drift(), SetDescriptor.whole_space(), anchor, 2)
    assert prob.start() == [0.5, 0.25]


def test_build_rejects_bad_rank_and_infeasible_anchor():
    f = quad_with_harmonic_drift()
    with pytest.raises(ValueError):
        build_reduced(f, SetDescriptor.whole_space(), harmonic_half_anchor(), 0)
    with pytest.raises(InfeasiblePoint):
        build_reduced(f, SetDescriptor.positive_cone_ell1(), Point([-1.0], ()), 2)


def test_minimize_finds_known_quadratic_minimum_from_perturbed_start():
    # same tail as the true minimizer but wrong first two coordinates;
    # descent has real work to do
    anchor = Point([0.9, -0.4], (TailRule.harmonic(0.5),))
    prob = build_reduced(quad_with_harmonic_drift(), SetDescriptor.whole_space(), anchor, 2)
    y, value, sweeps = minimize_reduced(prob)
    assert y[0] == pytest.approx(0.5, abs=1e-6)
    assert y[1] == pytest.approx(0.25, abs=1e-6)
    true_min = evaluate(quad_with_harmonic_drift(), harmonic_half_anchor())
    assert value.value == pytest.approx(true_min.value, abs=1e-9)
    assert sweeps >= 1


def test_minimize_dimensions_one_through_eight():
    f = quad_with_harmonic_drift()
    anchor = harmonic_half_anchor()
    ref = evaluate(f, anchor)
    for k in (1, 2, 4, 8):
        prob = build_reduced(f, SetDescriptor.whole_space(), anchor, k)
        y, value, _ = minimize_reduced(prob)
        for i, yi in enumerate(y, start=1):
            assert yi == pytest.approx(0.5 / i, abs=1e-6)
        assert value.value == pytest.approx(ref.value, abs=1e-6)


def test_values_nonincreasing_in_k():
    # minimizing over nested larger truncation sets can only improve
    f = quad_with_harmonic_drift()
    anchor = Point([0.7], (TailRule.harmonic(0.5),))  # first coordinate off-optimal
    prev = math.inf
    for k in (1, 2, 4, 8):
        prob = build_reduced(f, SetDescriptor.whole_space(), anchor, k)
        _, value, _ = minimize_reduced(prob)
        assert value.value <= prev + 1e-10
        prev = value.value


def test_cone_constraint_clips_at_zero():
    # strictly increasing linear objective on the positive cone: the
    # reduced minimum sits on the boundary y = 0
    f = SeparableSeries(TailRule.geometric(1.0, BETA), ScalarConvex.linear(1.0))
    anchor = Point([], (TailRule.geometric(1.0, BETA * BETA),))
    prob = build_reduced(f, SetDescriptor.positive_cone_ell1(), anchor, 3)
    y, value, _ = minimize_reduced(prob)
    for yi in y:
        assert yi == pytest.approx(0.0, abs=1e-6)
    zeroed = prob.embed([0.0, 0.0, 0.0])
    assert value.value == pytest.approx(evaluate(f, zeroed).value, abs=1e-9)


def test_unbounded_linear_descent():
    f = SeparableSeries(TailRule.const(1.0), ScalarConvex.linear(-1.0))
    prob = build_reduced(f, SetDescriptor.whole_space(), Point.zero(), 1)
    with pytest.raises(Unbounded):
        minimize_reduced(prob)


def test_max_sweeps_budget():
    anchor = Point([0.9], (TailRule.harmonic(0.5),))
    prob = build_reduced(quad_with_harmonic_drift(), SetDescriptor.whole_space(), anchor, 1)
    with pytest.raises(MaxSweeps):
        minimize_reduced(prob, OracleOptions(max_sweeps=1))


def test_infinite_start_raises():
    f = SeparableSeries(TailRule.const(1.0), ScalarConvex.square())
    anchor = Point([], (TailRule.const(1.0),))  # sum of ones squared diverges
    prob = build_reduced(f, SetDescriptor.whole_space(), anchor, 2)
    with pytest.raises(DomainViolation):
        minimize_reduced(prob)


def test_grad_reduced_matches_closed_form():
    f = quad_with_harmonic_drift()
    anchor = harmonic_half_anchor()
    prob = build_reduced(f, SetDescriptor.whole_space(), anchor, 3)
    g = grad_reduced(prob, [1.0, 1.0, 1.0])
    for i, gi in enumerate(g, start=1):
        want = BETA**i * (2.0 - 1.0 / i)
        assert gi == pytest.approx(want, rel=1e-9)


def test_grad_reduced_at_stationary_point_is_zero():
    f = quad_with_harmonic_drift()
    anchor = harmonic_half_anchor()
    prob = build_reduced(f, SetDescriptor.whole_space(), anchor, 4)
    g = grad_reduced(prob, prob.start())
    for gi in g:
        assert abs(gi) < 1e-12


def test_limsup_part_is_inert_in_reduction():
    # the limsup of the embedded point never moves with y, so the oracle
    # sees only the series part
    f = Sum((LimsupSeminorm(), quad_with_harmonic_drift()))
    anchor = Point([0.9], (TailRule.harmonic(0.5),))
    prob = build_reduced(f, SetDescriptor.whole_space(), anchor, 1)
    y, _, _ = minimize_reduced(prob)
    assert y[0] == pytest.approx(0.5, abs=1e-6)
