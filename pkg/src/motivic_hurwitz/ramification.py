"""Ramification profiles (partitions of d), refinement, allowable collections, local mass."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import DegreeMismatch
from .motivic_ring import LaurentPoly


@dataclass(frozen=True, order=True)
class RamProfile:
    parts: tuple

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if not parts or any(p <= 0 for p in parts):
            raise ValueError(f"invalid profile {self.parts!r}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "RamProfile":
        return cls(tuple(parts))

    @classmethod
    def parse(cls, text: str) -> "RamProfile":
        """Accepts "(2,1,1)", "2,1,1", "2 1 1" or exponent shorthand "(2,1^2)"."""
        s = text.strip().strip("()[]")
        parts: list[int] = []
        for tok in s.replace(" ", ",").split(","):
            if not tok:
                continue
            if "^" in tok:
                base, mult = tok.split("^")
                parts += [int(base)] * int(mult)
            else:
                parts.append(int(tok))
        return cls(tuple(parts))

    @property
    def d(self) -> int:
        return sum(self.parts)

    @property
    def ram_order(self) -> int:
        return self.d - len(self.parts)

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    def compact(self) -> str:
        """Exponent notation, e.g. (2,1^2)."""
        out = []
        i = 0
        ps = self.parts
        while i < len(ps):
            j = i
            while j < len(ps) and ps[j] == ps[i]:
                j += 1
            out.append(str(ps[i]) if j - i == 1 else f"{ps[i]}^{j - i}")
            i = j
        return "(" + ",".join(out) + ")"


def partitions_of(d: int) -> list[RamProfile]:
    if d < 1:
        raise ValueError("d must be positive")
    return [RamProfile(p) for p in _partitions(d, d)]


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def ram_order(R: RamProfile) -> int:
    return R.ram_order


def refines(fine: RamProfile, coarse: RamProfile) -> bool:
    """Can the parts of ``fine`` be grouped so the group sums are the parts of ``coarse``?"""
    if fine.d != coarse.d:
        raise DegreeMismatch(f"{fine} has degree {fine.d}, {coarse} has degree {coarse.d}")
    return _can_group(fine.parts, coarse.parts)


@lru_cache(maxsize=None)
def _can_group(fine: tuple, coarse: tuple) -> bool:
    # place the largest fine part into some bin, recursively; bins are the
    # remaining capacities of the coarse parts (kept sorted to dedupe states)
    if not fine:
        return all(c == 0 for c in coarse)
    head, rest = fine[0], fine[1:]
    tried = set()
    for i, cap in enumerate(coarse):
        if cap >= head and cap not in tried:
            tried.add(cap)
            nxt = tuple(sorted(coarse[:i] + (cap - head,) + coarse[i + 1:], reverse=True))
            if _can_group(rest, nxt):
                return True
    return False


@dataclass(frozen=True)
class AllowableCollection:
    d: int
    profiles: frozenset

    def __contains__(self, R: RamProfile) -> bool:
        return R in self.profiles

    def sorted_profiles(self) -> list[RamProfile]:
        return sorted(self.profiles, key=lambda R: (R.ram_order, tuple(-p for p in R.parts)))

    def __len__(self):
        return len(self.profiles)

    @classmethod
    def full(cls, d: int) -> "AllowableCollection":
        return cls(d, frozenset(partitions_of(d)))

    @classmethod
    def simply_branched(cls, d: int) -> "AllowableCollection":
        return allowable_closure(d, ())

    def is_full(self) -> bool:
        return len(self.profiles) == len(partitions_of(self.d))

    def is_simply_branched(self) -> bool:
        return self.profiles == allowable_closure(self.d, ()).profiles

    def label(self) -> str:
        if self.is_full():
            return "all"
        if self.is_simply_branched():
            return "simple"
        return "list:" + ",".join(str(R) for R in self.sorted_profiles())


def _base_profiles(d: int) -> list[RamProfile]:
    base = [RamProfile((1,) * d)]
    if d >= 2:
        base.append(RamProfile((2,) + (1,) * (d - 2)))
    return base


def allowable_closure(d: int, seed: Iterable[RamProfile]) -> AllowableCollection:
    gens = list(_base_profiles(d))
    for R in seed:
        if R.d != d:
            raise DegreeMismatch(f"profile {R} is not a partition of {d}")
        gens.append(R)
    out = {lam for lam in partitions_of(d) if any(refines(lam, g) for g in gens)}
    return AllowableCollection(d, frozenset(out))


def local_mass(C: AllowableCollection) -> LaurentPoly:
    """sum over R in C of L^-r(R)."""
    total = LaurentPoly()
    for R in C.profiles:
        total = total + LaurentPoly.monomial(-R.ram_order)
    return total


def partitions_into_parts(n: int, k: int) -> int:
    """Number of partitions of n into exactly k parts (recurrence, no enumeration)."""
    table = [[0] * (k + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for m in range(1, n + 1):
        for j in range(1, min(m, k) + 1):
            table[m][j] = table[m - 1][j - 1] + table[m - j][j]
    return table[n][k]


def mass_identity_sides(d: int) -> tuple[LaurentPoly, LaurentPoly]:
    lhs = local_mass(AllowableCollection.full(d))
    rhs = LaurentPoly({-j: partitions_into_parts(d, d - j) for j in range(d)})
    return lhs, rhs


def mass_identity_check(d: int) -> bool:
    lhs, rhs = mass_identity_sides(d)
    return lhs == rhs
