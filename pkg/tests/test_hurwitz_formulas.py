from fractions import Fraction

import pytest

from motivic_hurwitz.errors import OutOfRange, Unsupported
from motivic_hurwitz.fq_oracle.binary import hyperelliptic_groupoid_count
from motivic_hurwitz.hurwitz_formulas import (
    FULL_EULER_FACTORS,
    HurwitzQuery,
    codim_bound,
    default_codim,
    hur_dim,
    hurwitz_class,
    hurwitz_factor,
    strata_sum,
    strata_sum_matches,
    tamagawa_closed_form,
    tamagawa_exact_sum,
    tamagawa_sum,
    theorem_b_check,
)
from motivic_hurwitz.motivic_ring import ONE, L, LaurentPoly, evaluate, to_series
from motivic_hurwitz.ramification import AllowableCollection, RamProfile, allowable_closure


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_simply_branched_normalized_series(d):
    for g in range(0, 51):
        ans = hurwitz_class(HurwitzQuery.simple(d, g))
        assert ans.normalized_series.anchor == 0
        assert ans.normalized_series.coeffs[:3] == (1, 0, -1)
        assert ans.hur_dim == 2 * g + 2 * d - 2
        assert ans.exact == (d == 2)


@pytest.mark.parametrize("g", range(0, 20))
def test_degree_two_and_three_closed_forms(g):
    assert hurwitz_class(HurwitzQuery.full(2, g)).closed_form == L ** (2 * g + 2) - L ** (2 * g)
    cf3 = hurwitz_class(HurwitzQuery.full(3, g)).closed_form
    assert cf3 == L ** (2 * g + 4) * (ONE + L ** -1) * (ONE - L ** -3)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_full_collection_euler_factors(d):
    assert theorem_b_check(d, 3)
    f = hurwitz_factor(AllowableCollection.full(d))
    assert f.coeffs[0] + LaurentPoly.constant(1) == FULL_EULER_FACTORS[d]


def test_degree_two_collection_is_forced():
    q = HurwitzQuery(2, 4, AllowableCollection.simply_branched(2))
    assert q.collection.is_full()


@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize("g", [1, 2])
def test_degree_two_matches_groupoid_count(q, g):
    cf = hurwitz_class(HurwitzQuery.full(2, g)).closed_form
    assert evaluate(cf, q) == hyperelliptic_groupoid_count(q, g)


def test_codim_bound_examples():
    assert codim_bound(3, 8) == 2
    for g in range(4, 40):
        assert codim_bound(3, g) == Fraction(g, 4)
    # both terms of the minimum matter: (23 - 23)/40 = 0 but (23 + 4)/5 - 16 < 0
    assert codim_bound(5, 23) == Fraction(-53, 5)
    with pytest.raises(Unsupported):
        codim_bound(2, 3)


def test_default_codim_is_clamped():
    assert default_codim(5, 0) == 4
    assert default_codim(3, 400) == 30


def test_query_errors():
    with pytest.raises(OutOfRange):
        HurwitzQuery.full(6, 1)
    with pytest.raises(OutOfRange):
        HurwitzQuery.full(3, -1)
    with pytest.raises(OutOfRange):
        HurwitzQuery(4, 1, AllowableCollection.full(3))


def test_explicit_codimension():
    ans = hurwitz_class(HurwitzQuery.full(4, 10), 7)
    assert ans.codim == 7 and len(ans.normalized_series.coeffs) == 8
    with pytest.raises(OutOfRange):
        hurwitz_class(HurwitzQuery.full(4, 10), -1)


def test_hurwitz_dimension():
    assert hur_dim(3, 5) == 14


# Tamagawa sums

@pytest.mark.parametrize("n,N", [(2, 12), (3, 8)])
def test_tamagawa_independent_of_degree(n, N):
    closed = to_series(tamagawa_closed_form(n), N)
    for delta in range(n):
        s = tamagawa_sum(n, delta, N)
        assert s.eq_mod_codim(closed, 1 - n * n, N, inclusive=True)


@pytest.mark.parametrize("n", [2, 3])
def test_tamagawa_degree_shift_invariance(n):
    # twisting by O(1) shifts the degree by n and permutes the splitting types
    for delta in range(n):
        assert tamagawa_sum(n, delta, 6).coeffs == tamagawa_sum(n, delta + n, 6).coeffs


@pytest.mark.parametrize("N", [4, 8, 12])
def test_tamagawa_numeric_spot_check(N):
    assert evaluate(tamagawa_closed_form(2), 5) == Fraction(1, 96)
    approx = evaluate(tamagawa_exact_sum(2, 0, N), 5)
    assert abs(approx / Fraction(1, 96) - 1) < 2 * Fraction(1, 5 ** N)


def test_tamagawa_rank_must_be_two_or_more():
    with pytest.raises(OutOfRange):
        tamagawa_sum(1, 0, 4)


# strata sums

@pytest.mark.parametrize("d,g,N", [(3, 2, 6), (3, 9, 6), (4, 3, 5), (4, 11, 5), (5, 2, 4), (5, 5, 4)])
def test_strata_sum_full_collection(d, g, N):
    assert strata_sum_matches(HurwitzQuery.full(d, g), N)


@pytest.mark.parametrize("d,g,N", [(3, 4, 6), (4, 6, 5), (5, 3, 4)])
def test_strata_sum_simple_collection(d, g, N):
    assert strata_sum_matches(HurwitzQuery.simple(d, g), N)


def test_strata_sum_list_collection():
    C = allowable_closure(4, [RamProfile.of(2, 2)])
    assert strata_sum_matches(HurwitzQuery(4, 5, C), 5)


def test_strata_sum_anchor():
    q = HurwitzQuery.simple(3, 6)
    s = strata_sum(q, 4)
    assert s.anchor == hur_dim(3, 6)
    assert s.coeffs[:3] == (1, 0, -1)
