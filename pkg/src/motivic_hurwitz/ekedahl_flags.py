"""Chains of set partitions as stabilizer flags of S_n on its permutation representation.

An isomorphism class of chains P_1 < ... < P_m of partitions of {1..n} is a
rooted forest of depth m: leaves are the points, level-k nodes are the blocks
of P_k.  Encoding a level-k tree as the sorted tuple of its children gives a
canonical form for free, so enumeration never needs a relabeling search.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable

from sympy.utilities.iterables import multiset_partitions

from .errors import OutOfRange, TooLarge
from .motivic_ring import L, LaurentPoly, MotivicClass

MAX_N = 8
LEAF = ()


@dataclass(frozen=True)
class SetPartition:
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0]))
        if any(not b for b in blocks):
            raise ValueError("empty block")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self):
        return len(self.blocks)

    def block_of(self) -> dict:
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def is_coarser_than(self, other: "SetPartition") -> bool:
        """Every block of ``other`` sits inside a block of self (non-strict)."""
        idx = self.block_of()
        return all(len({idx[x] for x in b}) == 1 for b in other.blocks)

    def __str__(self):
        return "|".join("".join(str(x) for x in b) if max(b) < 10 else ",".join(map(str, b)) for b in self.blocks)


@dataclass(frozen=True)
class PartitionChain:
    chain: tuple

    @property
    def n_f(self) -> int:
        return len(self.chain)

    @property
    def d_f(self) -> int:
        return len(self.chain[-1])

    def __str__(self):
        return "[" + " < ".join("{" + str(p) + "}" for p in self.chain) + "]"


def discrete(n: int) -> SetPartition:
    return SetPartition(tuple((i,) for i in range(1, n + 1)))


def _check_n(n: int) -> None:
    if n > MAX_N:
        raise TooLarge(f"n={n} exceeds {MAX_N}")
    if n < 1:
        raise OutOfRange("n must be positive")


# forests

@lru_cache(maxsize=None)
def _trees(level: int, size: int) -> tuple:
    """All level-``level`` trees with ``size`` leaves, as canonical nested tuples."""
    if level == 0:
        return (LEAF,) if size == 1 else ()
    return tuple(_multisets(level - 1, size))


def _multisets(level: int, size: int) -> list:
    """Non-empty multisets (sorted tuples) of level-``level`` trees with total ``size`` leaves."""
    pool = [(s, t) for s in range(1, size + 1) for t in _trees(level, s)]
    out = []

    def rec(start: int, remaining: int, acc: list):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(pool)):
            s, t = pool[i]
            if s <= remaining:
                acc.append(t)
                rec(i, remaining - s, acc)
                acc.pop()

    rec(0, size, [])
    return out


def _level_nodes(forest: tuple, m: int) -> list[list]:
    """nodes[k] = list of level-k nodes (k = 1..m) in the forest."""
    nodes = [[] for _ in range(m + 1)]

    def walk(t, k):
        nodes[k].append(t)
        if k > 0:
            for c in t:
                walk(c, k - 1)

    for t in forest:
        walk(t, m)
    return nodes


def _is_strict(forest: tuple, m: int) -> bool:
    nodes = _level_nodes(forest, m)
    return all(any(len(t) >= 2 for t in nodes[k]) for k in range(1, m + 1))


def forest_to_chain(forest: tuple, m: int) -> PartitionChain:
    """Label leaves 1..n in depth-first order and read off the partitions."""
    counter = iter(range(1, 10 ** 6))
    levels: list[list[tuple]] = [[] for _ in range(m + 1)]

    def walk(t, k) -> tuple:
        if k == 0:
            return (next(counter),)
        leaves = tuple(x for c in t for x in walk(c, k - 1))
        levels[k].append(leaves)
        return leaves

    for t in forest:
        walk(t, m)
    return PartitionChain(tuple(SetPartition(tuple(levels[k])) for k in range(1, m + 1)))


def chain_to_forest(ch: PartitionChain) -> tuple:
    """Canonical forest of a labeled chain (inverse of forest_to_chain up to relabeling)."""
    m = ch.n_f
    n = ch.chain[0].n

    def build(k: int, members: tuple):
        # level-k node whose leaf set is ``members``
        if k == 0:
            return LEAF
        if k == 1:
            return tuple(LEAF for _ in members)
        sub = [b for b in ch.chain[k - 2].blocks if b[0] in members and set(b) <= set(members)]
        return tuple(sorted(build(k - 1, b) for b in sub))

    top = ch.chain[-1].blocks
    assert sum(len(b) for b in top) == n
    return tuple(sorted(build(m, b) for b in top))


def _strict_coarsenings(forest: tuple) -> list:
    """Forests one level up whose top nodes group the trees of ``forest``, merging at least two."""
    out = set()
    for groups in multiset_partitions(list(forest)):
        if len(groups) < len(forest):
            out.add(tuple(sorted(tuple(sorted(g)) for g in groups)))
    return sorted(out)


@lru_cache(maxsize=None)
def _chain_forests(n: int) -> tuple:
    """(m, forest) for every chain class, by recursion over strict coarsenings."""
    out = []
    frontier = [(LEAF,) * n]
    m = 0
    while frontier:
        m += 1
        nxt = []
        for forest in frontier:
            nxt.extend(_strict_coarsenings(forest))
        out.extend((m, f) for f in nxt)
        frontier = nxt
    return tuple(out)


def enumerate_chains(n: int) -> list[PartitionChain]:
    _check_n(n)
    return [forest_to_chain(f, m) for m, f in _chain_forests(n)]


def enumerate_chains_by_filter(n: int) -> list[PartitionChain]:
    """Second route: all depth-m forests, kept when every level merges something."""
    _check_n(n)
    out = []
    for m in range(1, n):
        for forest in _multisets(m, n):
            if _is_strict(forest, m):
                out.append(forest_to_chain(forest, m))
    return out


def chain_statistics(n: int) -> dict:
    """(n_f, d_f) -> number of chain classes."""
    return dict(sorted(Counter((c.n_f, c.d_f) for c in enumerate_chains(n)).items()))


def flag_alternating_sum(n: int) -> LaurentPoly:
    total = LaurentPoly()
    for (nf, df), cnt in chain_statistics(n).items():
        total = total + LaurentPoly.monomial(df, (-1) ** nf * cnt)
    return total


def conf_class(n: int) -> LaurentPoly:
    """Class of unordered n-point configurations in A^1 (monic squarefree polynomials)."""
    if n < 1:
        raise OutOfRange("n must be positive")
    if n == 1:
        return LaurentPoly.monomial(1)
    return LaurentPoly({n: 1, n - 1: -1})


def bsn_class(n: int) -> MotivicClass:
    """{BS_n} from the flag stratification of the free locus.

    The free-locus quotient is taken from the configuration-space class, and
    every flag other than the single indiscrete partition contributes with
    {BN(f)} = 1.
    """
    _check_n(n)
    if n < 2:
        raise OutOfRange("n must be at least 2")
    others = flag_alternating_sum(n) + LaurentPoly.monomial(1)  # drop the indiscrete chain (sign -1, d_f = 1)
    numerator = conf_class(n) - others
    return MotivicClass(numerator) / (L ** n - L)


# independent routes used by the tests

def set_partitions(n: int) -> list[SetPartition]:
    out: list[list[list[int]]] = [[]]
    for x in range(1, n + 1):
        nxt = []
        for p in out:
            for i in range(len(p)):
                nxt.append(p[:i] + [p[i] + [x]] + p[i + 1:])
            nxt.append(p + [[x]])
        out = nxt
    return [SetPartition(tuple(tuple(b) for b in p)) for p in out]


def labeled_chains(n: int) -> Iterable[PartitionChain]:
    """Every strict chain of labeled partitions starting strictly above the discrete one."""
    parts = set_partitions(n)
    coarser = {p: [c for c in parts if len(c) < len(p) and c.is_coarser_than(p)] for p in parts}
    start = [p for p in parts if len(p) < n]

    def rec(ch):
        yield PartitionChain(tuple(ch))
        for c in coarser[ch[-1]]:
            ch.append(c)
            yield from rec(ch)
            ch.pop()

    for p in start:
        yield from rec([p])


def canonical_by_permutation(ch: PartitionChain) -> tuple:
    """Lexicographically least relabeling of a chain (exhaustive over S_n)."""
    n = ch.chain[0].n
    best = None
    for perm in permutations(range(1, n + 1)):
        key = tuple(
            tuple(sorted(tuple(sorted(perm[x - 1] for x in b)) for b in p.blocks))
            for p in ch.chain
        )
        if best is None or key < best:
            best = key
    return best


def stabilizer_of_vector(v: tuple) -> set:
    n = len(v)
    return {p for p in permutations(range(n)) if all(v[p[i]] == v[i] for i in range(n))}


def young_subgroup(P: SetPartition) -> set:
    idx = P.block_of()
    n = P.n
    return {p for p in permutations(range(n)) if all(idx[p[i] + 1] == idx[i + 1] for i in range(n))}


def vector_for(P: SetPartition) -> tuple:
    """Rational vector with equal coordinates exactly on the blocks of P."""
    idx = P.block_of()
    return tuple(idx[i] for i in range(1, P.n + 1))
