"""The expression grammar: certified evaluation, exact one-coordinate
deltas, closed-form directional derivatives, and the JSON codec.

Every derived constant is checked against an mpmath reference computed
in-test, never against a value the code itself produced.
"""

import math

import mpmath
import pytest

from seqcert.errors import DomainViolation, NegativeScale
from seqcert.funcs import (
    Constant,
    DirStatus,
    LimsupSeminorm,
    LinearFunctional,
    ScalarConvex,
    Scale,
    SeparableSeries,
    Sum,
    analytic_dir_deriv,
    delta_along_basis,
    evaluate,
    function_from_json,
    function_to_json,
    scale,
)
from seqcert.seqspace import DualPoint, Point, TailRule, basis_vector, point_axpy

mpmath.mp.dps = 40

BETA = 0.5


def example3_objective():
    return Sum(
        (
            LimsupSeminorm(),
            SeparableSeries(
                TailRule.geometric(1.0, BETA),
                ScalarConvex.affine_quad(1.0, TailRule.harmonic(-1.0)),
            ),
        )
    )


def example3_anchor():
    return Point([], (TailRule.harmonic(0.5),))


def example4_objective():
    return Sum(
        (
            SeparableSeries(TailRule.const(1.0), ScalarConvex.linear(1.0)),
            SeparableSeries(TailRule.geometric(1.0, BETA), ScalarConvex.neg_sqrt(2.0)),
        )
    )


def example4_anchor():
    return Point([], (TailRule.geometric(1.0, BETA * BETA),))


def example5_objective():
    return Sum(
        (
            LimsupSeminorm(),
            SeparableSeries(
                TailRule.geometric(1.0, BETA), ScalarConvex.affine_quad(1.0, -2.0)
            ),
        )
    )


# evaluation against references ------------------------------------------------


def test_weighted_quadratic_series_value():
    # sum beta^n ((1/2n)^2 - (1/2n)/n) = -(1/4) Li_2(beta)
    ref = float(-mpmath.polylog(2, mpmath.mpf(1) / 2) / 4)
    got = evaluate(example3_objective(), example3_anchor())
    assert abs(got.value - ref) <= got.error_bound + 1e-12
    assert got.value == pytest.approx(-0.1455601316162531, abs=1e-12)


def test_weighted_sqrt_objective_value():
    # sum beta^{2n} - 2 sum beta^n sqrt(beta^{2n}) = -beta^2/(1-beta^2)
    got = evaluate(example4_objective(), example4_anchor())
    assert got.value == pytest.approx(-1.0 / 3.0, abs=1e-9)


def test_limsup_quadratic_values_at_ones_and_half():
    g = example5_objective()
    ones = Point([], (TailRule.const(1.0),))
    half = Point([], (TailRule.const(0.5),))
    assert evaluate(g, ones).value == pytest.approx(0.0, abs=1e-9)
    assert evaluate(g, half).value == pytest.approx(-0.25, abs=1e-9)


def test_quadratic_at_first_basis_vector():
    f = SeparableSeries(TailRule.geometric(1.0, BETA), ScalarConvex.square())
    got = evaluate(f, basis_vector(1))
    assert got.value == pytest.approx(BETA, abs=1e-12)


def test_constant_and_linear_functional():
    c = Constant(2.5)
    assert evaluate(c, Point.zero()).value == 2.5
    lf = LinearFunctional(DualPoint([-1.0], ()))
    x = Point([3.0, 9.0], ())
    assert evaluate(lf, x).value == pytest.approx(-3.0)
    g = Sum((Constant(1.0), lf))
    assert evaluate(g, x).value == pytest.approx(-2.0)


def test_divergent_series_evaluates_to_plus_infinity():
    f = SeparableSeries(TailRule.const(1.0), ScalarConvex.square())
    got = evaluate(f, Point([], (TailRule.const(1.0),)))
    assert got.value == math.inf


def test_sqrt_domain_violation():
    f = example4_objective()
    with pytest.raises(DomainViolation):
        evaluate(f, Point([-0.1], (TailRule.geometric(1.0, 0.25),)))


def test_scale_doubles_and_rejects_negative():
    f = SeparableSeries(TailRule.geometric(1.0, BETA), ScalarConvex.square())
    x = Point([], (TailRule.const(1.0),))
    assert evaluate(scale(2.0, f), x).value == pytest.approx(
        2.0 * evaluate(f, x).value
    )
    with pytest.raises(NegativeScale):
        scale(-1.0, f)
    with pytest.raises(NegativeScale):
        Scale(-0.5, f)


def test_limsup_ignores_prefix():
    p = LimsupSeminorm()
    assert evaluate(p, Point([100.0], (TailRule.harmonic(1.0),))).value == 0.0
    assert evaluate(p, Point([0.0], (TailRule.const(0.75),))).value == 0.75


# exact one-coordinate deltas ----------------------------------------------


def test_delta_along_basis_matches_closed_form():
    f = example3_objective()
    x = example3_anchor()
    n, t = 3, 1e-6
    # only the n-th series term moves; limsup ignores finite changes
    xn = mpmath.mpf(x.coordinate(n))
    ref = float(
        mpmath.mpf(BETA) ** n * ((xn + t) ** 2 - (xn + t) / n - (xn**2 - xn / n))
    )
    # the delta is evaluated in double precision from the expanded form, so
    # allow rounding of order eps * |x_n| / t relative to the true value
    assert delta_along_basis(f, x, n, t) == pytest.approx(ref, rel=1e-9)


def test_delta_along_basis_is_cancellation_free():
    # at t = 1e-9 a subtraction of full evaluations would lose ~7 digits;
    # the exact delta keeps the quotient pinned at the closed form
    f = SeparableSeries(TailRule.geometric(1.0, BETA), ScalarConvex.square())
    x = Point([], (TailRule.const(1.0),))
    t = 1e-9
    q = delta_along_basis(f, x, 2, t) / t
    assert q == pytest.approx(BETA**2 * (2.0 + t), rel=1e-9)


def test_delta_along_basis_domain_violation():
    f = example4_objective()
    with pytest.raises(DomainViolation):
        delta_along_basis(f, Point.zero(), 1, -1.0)


# closed-form directional derivatives ---------------------------------------


def test_square_derivative_exists():
    f = SeparableSeries(TailRule.geometric(1.0, BETA), ScalarConvex.square())
    x = Point([], (TailRule.const(1.0),))
    dv = analytic_dir_deriv(f, x, 3)
    assert dv.status is DirStatus.EXISTS
    assert dv.value == pytest.approx(2.0 * BETA**3)


def test_abs_kink_at_zero_coordinate():
    f = SeparableSeries(TailRule.const(1.0), ScalarConvex.abs_())
    dv = analytic_dir_deriv(f, Point([1.0], ()), 2)
    assert dv.status is DirStatus.NOT_DIFFERENTIABLE
    assert dv.left == pytest.approx(-1.0)
    assert dv.right == pytest.approx(1.0)


def test_abs_away_from_zero_is_signed():
    f = SeparableSeries(TailRule.const(1.0), ScalarConvex.abs_())
    dv = analytic_dir_deriv(f, Point([-2.0], ()), 1)
    assert dv.status is DirStatus.EXISTS
    assert dv.value == pytest.approx(-1.0)


def test_sqrt_boundary_has_infinite_slope():
    f = example4_objective()
    dv = analytic_dir_deriv(f, Point.zero(), 1)
    assert dv.status is DirStatus.NOT_DIFFERENTIABLE
    assert dv.right == -math.inf or dv.right is None


def test_limsup_basis_derivative_is_zero():
    dv = analytic_dir_deriv(LimsupSeminorm(), Point([], (TailRule.const(1.0),)), 4)
    assert dv.status is DirStatus.EXISTS
    assert dv.value == 0.0


def test_linear_functional_derivative_is_coefficient():
    lf = LinearFunctional(DualPoint([2.0, -3.0], ()))
    for n, want in ((1, 2.0), (2, -3.0), (5, 0.0)):
        dv = analytic_dir_deriv(lf, Point.zero(), n)
        assert dv.status is DirStatus.EXISTS
        assert dv.value == pytest.approx(want)


def test_stationarity_of_weighted_quadratic_at_anchor():
    f = example3_objective()
    x = example3_anchor()
    for n in (1, 2, 5, 17):
        dv = analytic_dir_deriv(f, x, n)
        assert dv.status is DirStatus.EXISTS
        assert dv.value == 0.0


def test_stationarity_of_sqrt_objective_at_anchor():
    f = example4_objective()
    x = example4_anchor()
    for n in (1, 2, 5, 17):
        dv = analytic_dir_deriv(f, x, n)
        assert dv.status is DirStatus.EXISTS
        assert dv.value == 0.0


# evaluation difference consistency -----------------------------------------


def test_delta_consistent_with_full_evaluations():
    f = example3_objective()
    x = example3_anchor()
    t = 0.25
    moved = point_axpy(x, t, basis_vector(2))
    lhs = delta_along_basis(f, x, 2, t)
    a, b = evaluate(f, moved), evaluate(f, x)
    assert lhs == pytest.approx(a.value - b.value, abs=a.error_bound + b.error_bound + 1e-10)


# JSON codec -----------------------------------------------------------------


def test_function_json_round_trips():
    funcs = [
        example3_objective(),
        example4_objective(),
        example5_objective(),
        Constant(1.0),
        LimsupSeminorm(),
        LinearFunctional(DualPoint([1.0], (TailRule.geometric(1.0, 0.5),))),
        scale(2.0, SeparableSeries(TailRule.harmonic(1.0), ScalarConvex.abs_())),
    ]
    x = Point([0.3, 0.7], (TailRule.geometric(0.9, 0.4),))
    for f in funcs:
        g = function_from_json(function_to_json(f))
        vf, vg = evaluate(f, x), evaluate(g, x)
        assert vg.value == pytest.approx(vf.value, abs=vf.error_bound + vg.error_bound)


def test_function_json_rejects_unknown_kind_and_fields():
    with pytest.raises(ValueError):
        function_from_json({"kind": "max"})
    with pytest.raises(ValueError):
        function_from_json({"kind": "limsup", "extra": 1})
    with pytest.raises(ValueError):
        function_from_json(
            {"kind": "separable", "weight": 1.0, "inner": {"kind": "square", "a": 1}}
        )
    with pytest.raises(ValueError):
        function_from_json({"kind": "sum", "terms": "not-a-list"})


def test_constant_weight_encodes_as_bare_number():
    f = SeparableSeries(TailRule.const(2.0), ScalarConvex.square())
    obj = function_to_json(f)
    assert obj["weight"] == 2.0
