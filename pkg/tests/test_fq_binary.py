from fractions import Fraction
from itertools import product

import pytest

from motivic_hurwitz.errors import BadCharacteristic, TooLarge, Unsupported
from motivic_hurwitz.fq_oracle.binary import count_squarefree_binary, hyperelliptic_groupoid_count
from motivic_hurwitz.fq_oracle.fields import factor_mod_p


def _squarefree_formula(q, n):
    return q ** (n + 1) - q ** n - q ** (n - 1) + q ** (n - 2)


def _brute_force(q, n):
    """Nonzero forms whose dehomogenization is square-free, with at most a simple root at infinity."""
    good = 0
    for coeffs in product(range(q), repeat=n + 1):
        if not any(coeffs):
            continue
        # coeffs[i] multiplies x^i y^(n-i); y | f with multiplicity n - deg
        deg = max(i for i, c in enumerate(coeffs) if c)
        if n - deg >= 2:
            continue
        if deg == 0:
            good += n - deg <= 1
            continue
        if all(e == 1 for _, e in factor_mod_p(list(coeffs[:deg + 1]), q)):
            good += 1
    return good


@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_squarefree_counts(q, n):
    assert count_squarefree_binary(q, n) == _squarefree_formula(q, n)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_squarefree_quadrics(q):
    # the four-term formula needs n >= 3; quadrics lose only the (q - 1)(q + 1) nonzero squares
    assert count_squarefree_binary(q, 2) == q ** 3 - 1 - (q - 1) * (q + 1)


@pytest.mark.parametrize("q,n", [(3, 2), (3, 3), (3, 4), (5, 3)])
def test_squarefree_counts_against_factoring(q, n):
    assert count_squarefree_binary(q, n) == _brute_force(q, n)


def test_examples():
    assert count_squarefree_binary(3, 4) == 144
    assert count_squarefree_binary(3, 6) == 1296
    assert count_squarefree_binary(5, 4) == 2400
    assert hyperelliptic_groupoid_count(3, 1) == 72
    assert hyperelliptic_groupoid_count(3, 2) == 648
    assert hyperelliptic_groupoid_count(5, 1) == 600


@pytest.mark.parametrize("q,g", [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (3, 3)])
def test_groupoid_counts(q, g):
    assert hyperelliptic_groupoid_count(q, g) == Fraction(q ** (2 * g + 2) - q ** (2 * g))


def test_errors():
    with pytest.raises(TooLarge):
        count_squarefree_binary(7, 12)
    with pytest.raises(BadCharacteristic):
        count_squarefree_binary(2, 4)
    with pytest.raises(Unsupported):
        count_squarefree_binary(9, 2)
