"""Canonical jet polynomial algebra: construction, ring laws, calculus hooks."""

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from noetherjet.algebra import (
    Expr,
    JetVar,
    MissingAssignmentError,
    Monomial,
    OrderOverflowError,
    ZERO,
    var_expr,
)
from noetherjet.parsing import parse_expr
from noetherjet.verifier import lagrangian_expr

from .util import (
    ORDER1_VARS,
    ORDER2_VARS,
    partial_via_interpolation,
    random_expr,
    random_point,
)

U_X = JetVar.from_name("u_x")
U_Y = JetVar.from_name("u_y")
U_T = JetVar.from_name("u_t")
U_XX = JetVar.from_name("u_xx")


class TestJetVar:
    def test_mixed_partials_identified(self):
        assert JetVar.from_name("u_xt") == JetVar.from_name("u_tx")
        assert JetVar.from_name("u_xt") == JetVar.derivative(1, 0, 1)

    def test_orders(self):
        assert JetVar.coordinate("x").order == 0
        assert JetVar.from_name("u").order == 0
        assert JetVar.from_name("u_xyt").order == 3

    def test_names_round_trip(self):
        for name in ("x", "y", "t", "u", "u_x", "u_xy", "u_xxt", "u_ttt"):
            assert JetVar.from_name(name).name == name

    def test_bad_names(self):
        for name in ("z", "u_", "u_z", "v", "xx"):
            with pytest.raises(ValueError):
                JetVar.from_name(name)

    def test_variable_order_is_total(self):
        names = ["x", "y", "t", "u", "u_x", "u_y", "u_t", "u_xx", "u_xy", "u_tt"]
        keys = [JetVar.from_name(n).sort_key for n in names]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)


class TestRationalCoefficients:
    """Fraction provides the exact rational type: reduced, positive denominator."""

    def test_normalization(self):
        q = Fraction(6, -4)
        assert q.denominator > 0
        assert q == Fraction(-3, 2)
        assert Fraction(0, 7) == Fraction(0, 1)

    def test_arbitrary_precision(self):
        big = Fraction(10**40 + 1, 10**40)
        assert (big - 1) * 10**40 == 1


class TestArithmetic:
    def test_additive_inverse(self):
        e = parse_expr("x*u_x")
        assert (e + (-e)).is_zero

    def test_like_term_collection(self):
        assert parse_expr("u^2") + parse_expr("3*u^2") == parse_expr("4*u^2")

    def test_lagrangian_assembles_from_pieces(self):
        total = parse_expr("1/2*u_x^2") + parse_expr(
            "1/2*u_y^2 + 2*(x^2+y^2)*u_t^2 + 2*y*u_x*u_t - 2*x*u_y*u_t - 1/4*u^4"
        )
        assert total == lagrangian_expr()

    def test_mul_absorbing(self):
        assert (ZERO * var_expr("u_xx")).is_zero

    def test_mul_difference_of_squares(self):
        lhs = parse_expr("(x + y)*(x - y)")
        assert lhs == parse_expr("x^2 - y^2")

    def test_mul_gives_t_flux_component(self):
        product = parse_expr("-u_t") * parse_expr("u_x + 2*y*u_t")
        assert product == parse_expr("-2*y*u_t^2 - u_x*u_t")

    def test_scalar_operands(self):
        e = parse_expr("x + 1")
        assert 2 * e == parse_expr("2*x + 2")
        assert e - 1 == parse_expr("x")
        assert Fraction(1, 2) * parse_expr("u_x^2") == parse_expr("1/2*u_x^2")

    def test_pow(self):
        assert parse_expr("x + y") ** 0 == Expr.constant(1)
        assert parse_expr("x + y") ** 2 == parse_expr("x^2 + 2*x*y + y^2")

    def test_canonical_form_is_unique(self):
        a = parse_expr("x*y + y*x + u_t*u_x")
        b = parse_expr("u_x*u_t + 2*y*x")
        assert a == b
        assert hash(a) == hash(b)

    def test_order(self):
        assert parse_expr("x*y").order == 0
        assert parse_expr("x*u_t").order == 1
        assert parse_expr("u_xx*u_t + u^4").order == 2


SEED_RING = 20240811


class TestRingLaws:
    def test_seeded_ring_laws(self):
        rng = random.Random(SEED_RING)
        for _ in range(100):
            a = random_expr(rng, ORDER2_VARS)
            b = random_expr(rng, ORDER2_VARS)
            c = random_expr(rng, ORDER2_VARS)
            assert a + b == b + a
            assert a * b == b * a
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
            assert (a + (-a)).is_zero

    def test_evaluation_homomorphism(self):
        rng = random.Random(SEED_RING + 1)
        for _ in range(100):
            a = random_expr(rng, ORDER2_VARS)
            b = random_expr(rng, ORDER2_VARS)
            point = random_point(rng, ORDER2_VARS)
            assert (a + b).evaluate(point) == a.evaluate(point) + b.evaluate(point)
            assert (a * b).evaluate(point) == a.evaluate(point) * b.evaluate(point)

    @given(st.integers(-50, 50), st.integers(-50, 50))
    def test_constant_arithmetic_matches_fractions(self, p, q):
        assert Expr.constant(p) + Expr.constant(q) == Expr.constant(p + q)
        assert Expr.constant(p) * Expr.constant(q) == Expr.constant(p * q)


class TestFormalPartial:
    def test_quadratic(self):
        assert parse_expr("1/2*u_x^2").partial(U_X) == parse_expr("u_x")

    def test_lagrangian_ut_partial(self):
        expected = parse_expr("4*(x^2 + y^2)*u_t + 2*y*u_x - 2*x*u_y")
        assert lagrangian_expr().partial(U_T) == expected

    def test_no_explicit_dependence(self):
        assert parse_expr("u^4").partial(JetVar.coordinate("t")).is_zero

    def test_against_interpolation_oracle(self):
        rng = random.Random(SEED_RING + 2)
        L = lagrangian_expr()
        for _ in range(10):
            point = random_point(rng, ORDER1_VARS)
            expected = partial_via_interpolation(L, U_T, point)
            assert L.partial(U_T).evaluate(point) == expected

    def test_oracle_on_random_expressions(self):
        rng = random.Random(SEED_RING + 3)
        for _ in range(25):
            e = random_expr(rng, ORDER2_VARS, max_exp=3)
            var = rng.choice(ORDER2_VARS)
            point = random_point(rng, ORDER2_VARS)
            assert e.partial(var).evaluate(point) == partial_via_interpolation(
                e, var, point
            )

    def test_leibniz(self):
        rng = random.Random(SEED_RING + 4)
        for _ in range(50):
            a = random_expr(rng, ORDER2_VARS)
            b = random_expr(rng, ORDER2_VARS)
            var = rng.choice(ORDER2_VARS)
            assert (a * b).partial(var) == a.partial(var) * b + a * b.partial(var)


class TestSubstitute:
    def test_cancels_equation(self):
        e = parse_expr("u_xx + u^3")
        assert e.substitute(U_XX, parse_expr("-u^3")).is_zero

    def test_simple_rename(self):
        e = parse_expr("x*u_x^2")
        assert e.substitute(U_X, var_expr("u_y")) == parse_expr("x*u_y^2")

    def test_expansion_against_random_points(self):
        rng = random.Random(SEED_RING + 5)
        e = parse_expr("u_xx*u_t")
        rhs = parse_expr("-u_yy - 4*(x^2+y^2)*u_tt - 4*y*u_xt + 4*x*u_yt - u^3")
        result = e.substitute(U_XX, rhs)
        expected = parse_expr(
            "-u_yy*u_t - 4*(x^2+y^2)*u_tt*u_t - 4*y*u_xt*u_t + 4*x*u_yt*u_t"
            " - u^3*u_t"
        )
        assert result == expected
        for _ in range(10):
            point = random_point(rng, ORDER2_VARS)
            assert result.evaluate(point) == rhs.evaluate(point) * point[U_T]

    def test_identity_substitution(self):
        rng = random.Random(SEED_RING + 6)
        for _ in range(30):
            e = random_expr(rng, ORDER2_VARS)
            var = rng.choice(ORDER2_VARS)
            assert e.substitute(var, Expr.variable(var)) == e

    def test_order_overflow(self):
        e = parse_expr("u_x^2")
        with pytest.raises(OrderOverflowError):
            e.substitute(U_X, var_expr("u_xx"), max_order=1)


class TestEvaluate:
    def test_t_flux_third_component(self):
        tau3 = parse_expr("1/2*u_x^2 + 1/2*u_y^2 - 2*(x^2+y^2)*u_t^2 - 1/4*u^4")
        point = {
            JetVar.from_name("x"): Fraction(1),
            JetVar.from_name("y"): Fraction(0),
            JetVar.from_name("t"): Fraction(0),
            JetVar.from_name("u"): Fraction(1),
            U_X: Fraction(2),
            U_Y: Fraction(0),
            U_T: Fraction(0),
        }
        assert tau3.evaluate(point) == Fraction(7, 4)

    def test_zero_expression(self):
        assert ZERO.evaluate({}) == 0

    def test_difference_of_squares(self):
        point = {
            JetVar.coordinate("x"): Fraction(3, 2),
            JetVar.coordinate("y"): Fraction(1, 2),
        }
        assert parse_expr("x^2 - y^2").evaluate(point) == 2

    def test_missing_assignment_names_variable(self):
        with pytest.raises(MissingAssignmentError) as excinfo:
            parse_expr("x*u_xt").evaluate({JetVar.coordinate("x"): Fraction(1)})
        assert "u_xt" in str(excinfo.value)


class TestMonomial:
    def test_no_zero_exponents_stored(self):
        m = Monomial.from_pairs([(U_X, 2), (U_Y, 0)])
        assert m == Monomial.from_pairs([(U_X, 2)])

    def test_factors_sorted_by_variable_order(self):
        m = Monomial.from_pairs([(U_T, 1), (JetVar.coordinate("x"), 1), (U_X, 1)])
        assert [v.name for v, _ in m.factors] == ["x", "u_x", "u_t"]
