import pytest
from hypothesis import given, strategies as st

from motivic_hurwitz.ekedahl_flags import (
    MAX_N,
    PartitionChain,
    SetPartition,
    bsn_class,
    canonical_by_permutation,
    chain_statistics,
    chain_to_forest,
    conf_class,
    enumerate_chains,
    enumerate_chains_by_filter,
    flag_alternating_sum,
    labeled_chains,
    set_partitions,
    stabilizer_of_vector,
    vector_for,
    young_subgroup,
)
from motivic_hurwitz.errors import OutOfRange, TooLarge
from motivic_hurwitz.motivic_ring import ONE, LaurentPoly

CHAIN_CLASSES = {2: 1, 3: 3, 4: 11, 5: 39, 6: 179, 7: 935}
BELL = {1: 1, 2: 2, 3: 5, 4: 15, 5: 52, 6: 203}


def _forest_key(ch):
    return chain_to_forest(ch)


@pytest.mark.parametrize("n", range(2, 8))
def test_chain_class_counts(n):
    assert len(enumerate_chains(n)) == CHAIN_CLASSES[n]


@pytest.mark.parametrize("n", range(2, 8))
def test_recursive_and_filtered_routes_agree(n):
    a = sorted(_forest_key(c) for c in enumerate_chains(n))
    b = sorted(_forest_key(c) for c in enumerate_chains_by_filter(n))
    assert a == b
    assert len(set(a)) == len(a)


@pytest.mark.parametrize("n", range(2, 7))
def test_labeled_chains_modulo_relabeling(n):
    classes = {_forest_key(c) for c in labeled_chains(n)}
    assert classes == {_forest_key(c) for c in enumerate_chains(n)}


@pytest.mark.parametrize("n", range(2, 6))
def test_forest_key_agrees_with_brute_force_relabeling(n):
    by_forest = {}
    for c in labeled_chains(n):
        by_forest.setdefault(_forest_key(c), set()).add(canonical_by_permutation(c))
    assert all(len(v) == 1 for v in by_forest.values())
    keys = [next(iter(v)) for v in by_forest.values()]
    assert len(set(keys)) == len(keys) == CHAIN_CLASSES[n]


@pytest.mark.parametrize("n", range(2, 8))
def test_alternating_sum_and_bsn(n):
    assert flag_alternating_sum(n) == LaurentPoly.monomial(n - 1, -1)
    assert bsn_class(n) == ONE


@pytest.mark.slow
def test_alternating_sum_n8():
    assert len(enumerate_chains(8)) == 5819
    assert flag_alternating_sum(8) == LaurentPoly.monomial(7, -1)
    assert bsn_class(8) == ONE


def test_statistics_small_cases():
    assert chain_statistics(2) == {(1, 1): 1}
    assert chain_statistics(3) == {(1, 1): 1, (1, 2): 1, (2, 1): 1}
    assert flag_alternating_sum(3) == LaurentPoly.monomial(2, -1)


@pytest.mark.parametrize("n", range(2, 8))
def test_chains_are_strict_and_end_coarser(n):
    for c in enumerate_chains(n):
        sizes = [len(p) for p in c.chain]
        assert sizes == sorted(sizes, reverse=True) and len(set(sizes)) == len(sizes)
        assert sizes[0] < n
        for fine, coarse in zip(c.chain, c.chain[1:]):
            assert coarse.is_coarser_than(fine)
        assert c.d_f == sizes[-1] and c.n_f == len(sizes)


def test_configuration_classes():
    assert conf_class(1) == LaurentPoly.monomial(1)
    assert conf_class(4) == LaurentPoly({4: 1, 3: -1})
    with pytest.raises(OutOfRange):
        conf_class(0)


def test_size_limits():
    with pytest.raises(TooLarge):
        enumerate_chains(MAX_N + 1)
    with pytest.raises(OutOfRange):
        bsn_class(1)


@pytest.mark.parametrize("n", range(1, 7))
def test_bell_numbers(n):
    assert len(set_partitions(n)) == BELL[n]


@pytest.mark.parametrize("n", range(1, 7))
def test_stabilizers_are_young_subgroups(n):
    # the pointwise stabilizer of a vector is the Young subgroup of its level-set partition
    for P in set_partitions(n):
        assert stabilizer_of_vector(vector_for(P)) == young_subgroup(P)


@given(st.integers(2, 6).flatmap(lambda n: st.sampled_from(set_partitions(n))))
def test_stabilizer_order(P):
    from math import factorial, prod
    assert len(young_subgroup(P)) == prod(factorial(len(b)) for b in P.blocks)


def test_chain_text():
    P = SetPartition(((2, 1), (3,)))
    assert str(P) == "12|3"
    assert str(PartitionChain((P,))) == "[{12|3}]"
