import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from motivic_hurwitz.errors import Divergent, InsufficientOrder, MarginViolated, NegativeCoefficient
from motivic_hurwitz.fq_oracle.trigonal import closed_points_P1
from motivic_hurwitz.motivic_ring import ONE, LaurentPoly, MotivicClass, evaluate, to_series
from motivic_hurwitz.zeta_euler import (
    LocalFactor,
    WittFactor,
    _multiply_back,
    evaluated_euler_product,
    euler_product_multiply_check,
    euler_product_p1,
    kapranov_zeta_p1,
    symmetric_power_class,
    witt_factorization,
    zeta_value,
)


@st.composite
def margin_factors(draw, max_order=3):
    """Polynomial local factors whose t^i coefficient has L-degree <= -2i."""
    T = draw(st.integers(1, max_order))
    coeffs = []
    for i in range(1, T + 1):
        exps = draw(st.lists(st.integers(-2 * i - 3, -2 * i), max_size=2, unique=True))
        coeffs.append(LaurentPoly({e: draw(st.integers(-2, 2)) for e in exps}))
    return LocalFactor(tuple(coeffs))


def _coeffs(f, T):
    return [f.coefficient(i) for i in range(T + 1)]


@given(margin_factors())
def test_witt_factors_multiply_back(f):
    T = f.t_order
    factors = witt_factorization(f)
    assert _multiply_back(factors, T) == _coeffs(f, T)
    assert all(w.a >= 2 * w.b for w in factors)


@given(margin_factors(), margin_factors(), st.integers(0, 6))
def test_euler_product_is_multiplicative(f, g, N):
    assert euler_product_multiply_check(f, g, N)


@given(margin_factors(), st.integers(0, 6))
def test_product_with_unit_factor(f, N):
    a = to_series(euler_product_p1(f * LocalFactor.one(), N), N)
    b = to_series(euler_product_p1(f, N), N)
    assert (a.anchor, a.coeffs) == (b.anchor, b.coeffs)


@pytest.mark.parametrize("a", range(2, 9))
def test_zeta_value_matches_kapranov_series(a):
    # Z(P^1, L^-a) = sum_n {Sym^n P^1} L^(-a n)
    N = 12
    Z = kapranov_zeta_p1(N)
    total = ONE
    for n in range(1, N + 1):
        total = total + Z.coefficient(n) * LaurentPoly.monomial(-a * n)
    lhs = to_series(zeta_value(a), N)
    rhs = to_series(total, N)
    assert lhs.coeffs == rhs.coeffs


@pytest.mark.parametrize("a", range(2, 9))
def test_zeta_value_is_the_product_of_linear_factors(a):
    # (1 - L^-a t) over P^1 gives Z(P^1, L^-a)^-1
    ep = evaluated_euler_product(LocalFactor.linear(LaurentPoly.monomial(-a, -1)), 10)
    assert ep.exact
    assert ep.value == zeta_value(a).invert()


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("a", [2, 3, 4])
def test_zeta_point_count_shadow(q, a):
    # Euler product over closed points of P^1(F_q) against the closed form at L = q
    log_approx = -sum(closed_points_P1(q, m) * math.log1p(-float(q) ** (-a * m)) for m in range(1, 14))
    exact = evaluate(zeta_value(a), q)
    assert exact == 1 / ((1 - Fraction(q, q ** a)) * (1 - Fraction(1, q ** a)))
    assert abs(log_approx - math.log(exact)) < max(2.0 * q ** (-13 * (a - 1)), 1e-12)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_kapranov_coefficients_count_points_of_sym(q):
    # |Sym^n P^1 (F_q)| = |P^n(F_q)|
    Z = kapranov_zeta_p1(5)
    for n in range(1, 6):
        assert Z.coefficient(n).evaluate(q) == sum(q ** k for k in range(n + 1))


def test_kapranov_truncation_is_flagged():
    Z = kapranov_zeta_p1(3)
    with pytest.raises(InsufficientOrder):
        Z.coefficient(4)


@pytest.mark.parametrize("n", range(0, 6))
def test_symmetric_powers_of_P1(n):
    assert symmetric_power_class(LaurentPoly({0: 1, 1: 1}), n) == LaurentPoly({k: 1 for k in range(n + 1)})


def test_symmetric_power_of_point_and_line():
    assert symmetric_power_class(LaurentPoly.constant(1), 4) == LaurentPoly.constant(1)
    assert symmetric_power_class(LaurentPoly.monomial(1), 3) == LaurentPoly.monomial(3)
    # Sym^2 of two points is three points
    assert symmetric_power_class(LaurentPoly.constant(2), 2) == LaurentPoly.constant(3)


def test_negative_coefficient_rejected():
    with pytest.raises(NegativeCoefficient):
        symmetric_power_class(LaurentPoly({1: 1, 0: -1}), 2)


@pytest.mark.parametrize("a", [-1, 0, 1])
def test_divergent_zeta(a):
    with pytest.raises(Divergent):
        zeta_value(a)


@pytest.mark.parametrize("factor", [
    LocalFactor.linear(LaurentPoly.monomial(-1)),
    LocalFactor((LaurentPoly(), LaurentPoly.monomial(-3))),
])
def test_margin_violated(factor):
    assert not factor.margin_ok()
    with pytest.raises(MarginViolated):
        witt_factorization(factor)


def test_weighted_margin_accepts_flat_example():
    f = LocalFactor((LaurentPoly(), LaurentPoly.monomial(-4)))
    assert f.margin_ok()
    assert witt_factorization(f) == [WittFactor(4, 2, -1)]


def test_parse_and_collapse():
    f = LocalFactor.parse("1 + (L^-2 - L^-3)*t")
    assert f.coeffs == (LaurentPoly({-2: 1, -3: -1}),)
    g = LocalFactor.parse("1 + L^-2*t + L^-5*t^2")
    assert g.evaluated_at_one() == LaurentPoly({0: 1, -2: 1, -5: 1})


def test_product_truncation_is_not_exact():
    f = LocalFactor.linear(LaurentPoly({-2: 1, -3: -1}))
    ep = evaluated_euler_product(f, 6)
    assert not ep.exact
    assert all(w.a - 1 <= 6 for w in ep.factors)


def test_product_of_one_plus_x_t():
    # 1 + x t = (1 - x^2 t^2) / (1 - x t), so the product is Z(2) / Z(4)
    ep = evaluated_euler_product(LocalFactor.linear(LaurentPoly.monomial(-2)), 4)
    assert ep.exact
    assert ep.value == zeta_value(2) / zeta_value(4)
    assert ep.value == MotivicClass(LaurentPoly({0: 1, -1: 1, -2: 2, -3: 1, -4: 1}))
