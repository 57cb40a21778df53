"""Split vector bundles on P^1.

Cohomology and tensor operations on splitting types, the sheaf H(E, F) whose
sections parametrize covers with given Tschirnhausen/syzygy bundles, stratum
codimensions, automorphism-group classes over P^1 and over the dual numbers,
and enumeration of splitting-type strata.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Iterator, Optional

from .errors import ConstraintViolation, Mismatch, OutOfRange, WedgeRankExceeded
from .motivic_ring import L, MotivicClass, ONE

RANK_E = {3: 2, 4: 3, 5: 4}
RANK_F = {4: 2, 5: 5}


@dataclass(frozen=True)
class SplittingType:
    degrees: tuple

    def __post_init__(self):
        degs = tuple(sorted(int(a) for a in self.degrees))
        if not degs:
            raise ValueError("splitting type needs rank >= 1")
        object.__setattr__(self, "degrees", degs)

    @classmethod
    def of(cls, *degrees: int) -> "SplittingType":
        return cls(tuple(degrees))

    @classmethod
    def parse(cls, text: str) -> "SplittingType":
        body = text.strip().strip("[]()")
        return cls(tuple(int(t) for t in body.replace(" ", ",").split(",") if t))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def degree(self) -> int:
        return sum(self.degrees)

    @property
    def spread(self) -> int:
        return self.degrees[-1] - self.degrees[0]

    def is_balanced(self) -> bool:
        return self.spread <= 1

    def __iter__(self):
        return iter(self.degrees)

    def __str__(self):
        return "[" + ",".join(str(a) for a in self.degrees) + "]"

    def to_json(self) -> list:
        return list(self.degrees)


def _st(x) -> SplittingType:
    return x if isinstance(x, SplittingType) else SplittingType(tuple(x))


def h0(st) -> int:
    return sum(max(a + 1, 0) for a in _st(st))


def h1(st) -> int:
    return sum(max(-a - 1, 0) for a in _st(st))


def direct_sum(*sts) -> SplittingType:
    return SplittingType(tuple(a for st in sts for a in _st(st)))


def dual(st) -> SplittingType:
    return SplittingType(tuple(-a for a in _st(st)))


def det(st) -> SplittingType:
    return SplittingType((_st(st).degree,))


def tensor(st1, st2) -> SplittingType:
    return SplittingType(tuple(a + b for a in _st(st1) for b in _st(st2)))


def sym_power(st, k: int) -> SplittingType:
    if k < 0:
        raise OutOfRange("negative symmetric power")
    if k == 0:
        return SplittingType((0,))
    return SplittingType(tuple(sum(c) for c in combinations_with_replacement(_st(st).degrees, k)))


def wedge_power(st, k: int) -> SplittingType:
    st = _st(st)
    if k > st.rank:
        raise WedgeRankExceeded(f"wedge^{k} of a rank {st.rank} bundle")
    if k < 0:
        raise OutOfRange("negative exterior power")
    if k == 0:
        return SplittingType((0,))
    return SplittingType(tuple(sum(c) for c in combinations(st.degrees, k)))


def end(st) -> SplittingType:
    return tensor(st, dual(st))


def h1_end(st) -> int:
    degs = _st(st).degrees
    return sum(max(a - b - 1, 0) for a in degs for b in degs)


@dataclass(frozen=True)
class ResolutionData:
    d: int
    E: SplittingType
    F: Optional[SplittingType] = None

    def __post_init__(self):
        object.__setattr__(self, "E", _st(self.E))
        if self.F is not None:
            object.__setattr__(self, "F", _st(self.F))
        validate(self)

    @property
    def genus(self) -> int:
        return self.E.degree - self.d + 1

    def to_json(self) -> dict:
        out = {"d": self.d, "E": self.E.to_json()}
        if self.F is not None:
            out["F"] = self.F.to_json()
        return out


def validate(rd: ResolutionData) -> None:
    d = rd.d
    if d not in RANK_E:
        raise ConstraintViolation(f"degree {d} has no resolution data (need 3, 4 or 5)")
    if rd.E.rank != RANK_E[d]:
        raise ConstraintViolation(f"E must have rank {RANK_E[d]} for d={d}")
    if d == 3:
        if rd.F is not None:
            raise ConstraintViolation("d=3 carries no syzygy bundle")
        return
    if rd.F is None:
        raise ConstraintViolation(f"d={d} needs a syzygy bundle F")
    if rd.F.rank != RANK_F[d]:
        raise ConstraintViolation(f"F must have rank {RANK_F[d]} for d={d}")
    want = rd.E.degree if d == 4 else 2 * rd.E.degree
    if rd.F.degree != want:
        raise ConstraintViolation(f"deg F must be {want}, got {rd.F.degree}")


def sheaf_H(rd: ResolutionData) -> SplittingType:
    E, F = rd.E, rd.F
    if rd.d == 3:
        return tensor(sym_power(E, 3), dual(det(E)))
    if rd.d == 4:
        return tensor(dual(F), sym_power(E, 2))
    return tensor(tensor(wedge_power(F, 2), E), dual(det(E)))


def chi_H(d: int, g: int) -> int:
    base = {3: 8, 4: 18, 5: 48}
    if d not in base:
        raise OutOfRange(f"d={d}")
    return 2 * g + base[d]


def beta_rank(d: int, i: int) -> int:
    """Rank of the i-th syzygy bundle in the relative minimal resolution of a degree d cover."""
    if d < 4 or not 1 <= i <= d - 3:
        raise OutOfRange(f"beta_rank needs d >= 4 and 1 <= i <= d-3, got d={d}, i={i}")
    num = i * (d - 2 - i) * math.comb(d, i + 1)
    q, r = divmod(num, d - 1)
    assert r == 0
    return q


@dataclass(frozen=True)
class StratumReport:
    data: ResolutionData
    codim: int
    h1_end_E: int
    h1_end_F: int
    h1_H: int
    h0_H: int
    chi_H: int

    @property
    def term_codim(self) -> int:
        """Codimension of this stratum's term in the strata sum."""
        return self.h1_end_E + self.h1_end_F

    def to_json(self) -> dict:
        return {
            "data": self.data.to_json(),
            "codim": self.codim,
            "term_codim": self.term_codim,
            "h1_end_E": self.h1_end_E,
            "h1_end_F": self.h1_end_F,
            "h1_H": self.h1_H,
            "h0_H": self.h0_H,
            "chi_H": self.chi_H,
        }


def stratum_codim(rd: ResolutionData) -> StratumReport:
    H = sheaf_H(rd)
    e = h1_end(rd.E)
    f = h1_end(rd.F) if rd.F is not None else 0
    a, b = h0(H), h1(H)
    codim = e if rd.d == 3 else e + f - b
    return StratumReport(rd, codim, e, f, b, a, a - b)


# automorphism classes

def gl_class(n: int) -> MotivicClass:
    out = ONE
    for k in range(n):
        out = out * (L ** n - L ** k)
    return out


def sl_class(n: int) -> MotivicClass:
    return gl_class(n) / (L - 1)


def aut_res_gl_class(st) -> MotivicClass:
    """Class of Aut(O(a_1) + ... + O(a_r)): block Levi times the unipotent Hom part."""
    blocks: list[tuple[int, int]] = []
    for a in _st(st):
        if blocks and blocks[-1][0] == a:
            blocks[-1] = (a, blocks[-1][1] + 1)
        else:
            blocks.append((a, 1))
    out = ONE
    unip = 0
    for i, (ai, ni) in enumerate(blocks):
        out = out * gl_class(ni)
        for aj, nj in blocks[i + 1:]:
            unip += (aj - ai + 1) * ni * nj
    return out * L ** unip


def aut_sl_class(st) -> MotivicClass:
    return aut_res_gl_class(st) / (L - 1)


def aut_ce_class(rd: ResolutionData) -> MotivicClass:
    if rd.d == 3:
        return aut_res_gl_class(rd.E)
    return aut_res_gl_class(rd.E) * aut_res_gl_class(rd.F) / (L - 1)


def aut_ce_class_over_D(d: int) -> MotivicClass:
    # over the dual numbers every bundle is free and Res_D GL_n = GL_n x G_a^(n^2)
    if d == 3:
        return gl_class(2) * L ** 4
    if d not in RANK_F:
        raise OutOfRange(f"d={d}")
    e, f = RANK_E[d], RANK_F[d]
    return (L - 1) * L * sl_class(e) * L ** (e * e - 1) * sl_class(f) * L ** (f * f - 1)


def h0_D(d: int) -> int:
    return {3: 8, 4: 24, 5: 80}[d]


# enumeration

def splitting_types(rank: int, degree: int, max_spread: int) -> Iterator[SplittingType]:
    """All splitting types of the given rank and degree with max - min <= max_spread."""
    if rank == 1:
        yield SplittingType((degree,))
        return
    lo_min = -((-degree) // rank) - max_spread  # ceil(degree/rank) - S
    hi_min = degree // rank
    for m in range(lo_min, hi_min + 1):
        rest = degree - m
        for tail in combinations_with_replacement(range(m, m + max_spread + 1), rank - 1):
            if sum(tail) == rest:
                yield SplittingType((m,) + tail)


def types_with_h1_end(rank: int, degree: int, max_h1: int) -> list[SplittingType]:
    """Splitting types with h^1(End) <= max_h1.

    End contains O(-spread), so h^1(End) >= spread - 1 and the window
    spread <= max_h1 + 1 is complete.
    """
    return [st for st in splitting_types(rank, degree, max_h1 + 1) if h1_end(st) <= max_h1]


def _resolution_candidates(d: int, g: int, max_h1: int) -> Iterator[tuple]:
    degE = g + d - 1
    Es = types_with_h1_end(RANK_E[d], degE, max_h1)
    if d == 3:
        for E in Es:
            yield E, None
        return
    degF = degE if d == 4 else 2 * degE
    Fs = types_with_h1_end(RANK_F[d], degF, max_h1)
    for E in Es:
        hE = h1_end(E)
        for F in Fs:
            if hE + h1_end(F) <= max_h1:
                yield E, F


def enumerate_strata(d: int, g: int, max_codim: int) -> list[StratumReport]:
    """Strata whose summand in the strata sum has codimension <= max_codim.

    The filter is h^1(End E) + h^1(End F), the codimension of the stratum's
    term; for d = 3 this is the stratum codimension itself.
    """
    if max_codim < 0:
        return []
    out = [stratum_codim(ResolutionData(d, E, F)) for E, F in _resolution_candidates(d, g, max_codim)]
    out.sort(key=lambda r: (r.term_codim, r.data.E.degrees, r.data.F.degrees if r.data.F else ()))
    return out


def specializes(a, b) -> bool:
    """True iff b lies in the closure of the stratum of a (b is at least as unbalanced)."""
    a, b = _st(a), _st(b)
    if a.rank != b.rank or a.degree != b.degree:
        raise Mismatch(f"{a} and {b} differ in rank or degree")
    sa = sb = 0
    for x, y in zip(a.degrees, b.degrees):
        sa += x
        sb += y
        if sb > sa:
            return False
    return True


def all_strata_types(d: int, g: int, max_spread: int) -> Iterable[tuple]:
    """Unfiltered candidate pairs (E, F) with spreads bounded by max_spread."""
    degE = g + d - 1
    Es = list(splitting_types(RANK_E[d], degE, max_spread))
    if d == 3:
        return [(E, None) for E in Es]
    degF = degE if d == 4 else 2 * degE
    Fs = list(splitting_types(RANK_F[d], degF, max_spread))
    return [(E, F) for E in Es for F in Fs]
