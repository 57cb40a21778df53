"""Local sections over the dual numbers and the ideals they cut out.

Flat layout of a section: all constant coefficients, then all eps
coefficients (h0_D entries in total).

  d=3: binary cubic, coefficients of x^3, x^2 y, x y^2, y^3
  d=4: two ternary quadrics, each over x^2, xy, xz, y^2, yz, z^2
  d=5: 5x5 alternating matrix of linear forms in 4 variables; the ten entries
       a_ij (i < j, lexicographic) each carry 4 coefficients
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np
from numba import njit

from ..errors import ConstraintViolation

H0_D = {3: 8, 4: 24, 5: 80}
NVARS = {3: 2, 4: 3, 5: 4}
GEN_DEGREE = {3: 3, 4: 2, 5: 2}
PAIRS5 = tuple(combinations(range(5), 2))


def monomials(nvars: int, deg: int) -> list[tuple]:
    """Exponent vectors of total degree ``deg``, descending lexicographic."""
    if nvars == 1:
        return [(deg,)]
    out = []
    for a in range(deg, -1, -1):
        for rest in monomials(nvars - 1, deg - a):
            out.append((a,) + rest)
    return out


@dataclass(frozen=True)
class MonomialTables:
    nvars: int
    M2: int
    M3: int
    mul2to3: np.ndarray
    sq_idx: np.ndarray


@lru_cache(maxsize=None)
def tables(nvars: int) -> MonomialTables:
    m2 = monomials(nvars, 2)
    m3 = monomials(nvars, 3)
    i3 = {e: i for i, e in enumerate(m3)}
    i2 = {e: i for i, e in enumerate(m2)}
    mul = np.zeros((len(m2), nvars), dtype=np.int64)
    for i, e in enumerate(m2):
        for v in range(nvars):
            f = list(e)
            f[v] += 1
            mul[i, v] = i3[tuple(f)]
    sq = np.zeros((nvars, nvars), dtype=np.int64)
    for v in range(nvars):
        for w in range(nvars):
            f = [0] * nvars
            f[v] += 1
            f[w] += 1
            sq[v, w] = i2[tuple(f)]
    mul.setflags(write=False)
    sq.setflags(write=False)
    return MonomialTables(nvars, len(m2), len(m3), mul, sq)


@njit(cache=True)
def gens_cubic(sec, p):
    ga = np.zeros((1, 4), dtype=np.int64)
    gb = np.zeros((1, 4), dtype=np.int64)
    for i in range(4):
        ga[0, i] = sec[i] % p
        gb[0, i] = sec[4 + i] % p
    return ga, gb


@njit(cache=True)
def gens_conics(sec, p):
    ga = np.zeros((2, 6), dtype=np.int64)
    gb = np.zeros((2, 6), dtype=np.int64)
    for g in range(2):
        for i in range(6):
            ga[g, i] = sec[6 * g + i] % p
            gb[g, i] = sec[12 + 6 * g + i] % p
    return ga, gb


@njit(cache=True)
def _lin_product(a0, a1, b0, b1, sign, p, sq_idx, qa, qb):
    # accumulate sign * (a0 + eps a1)(b0 + eps b1) into the quadric qa + eps qb
    n = a0.shape[0]
    for v in range(n):
        for w in range(n):
            t = sq_idx[v, w]
            qa[t] = (qa[t] + sign * a0[v] * b0[w]) % p
            qb[t] = (qb[t] + sign * (a0[v] * b1[w] + a1[v] * b0[w])) % p


@njit(cache=True)
def gens_pfaffians(sec, p, sq_idx):
    # entry index of a_ij for i < j
    idx = np.full((5, 5), -1, dtype=np.int64)
    k = 0
    for i in range(5):
        for j in range(i + 1, 5):
            idx[i, j] = k
            k += 1
    A0 = np.zeros((10, 4), dtype=np.int64)
    A1 = np.zeros((10, 4), dtype=np.int64)
    for e in range(10):
        for v in range(4):
            A0[e, v] = sec[4 * e + v] % p
            A1[e, v] = sec[40 + 4 * e + v] % p
    ga = np.zeros((5, 10), dtype=np.int64)
    gb = np.zeros((5, 10), dtype=np.int64)
    rest = np.zeros(4, dtype=np.int64)
    for drop in range(5):
        k = 0
        for i in range(5):
            if i != drop:
                rest[k] = i
                k += 1
        j, kk, l, m = rest[0], rest[1], rest[2], rest[3]
        # pf = a_jk a_lm - a_jl a_km + a_jm a_kl
        e1 = idx[j, kk]
        e2 = idx[l, m]
        _lin_product(A0[e1], A1[e1], A0[e2], A1[e2], 1, p, sq_idx, ga[drop], gb[drop])
        e1 = idx[j, l]
        e2 = idx[kk, m]
        _lin_product(A0[e1], A1[e1], A0[e2], A1[e2], -1, p, sq_idx, ga[drop], gb[drop])
        e1 = idx[j, m]
        e2 = idx[kk, l]
        _lin_product(A0[e1], A1[e1], A0[e2], A1[e2], 1, p, sq_idx, ga[drop], gb[drop])
    return ga, gb


@dataclass(frozen=True)
class LocalSection:
    """A section of H restricted to the dual numbers, as h0_D coordinates over F_q."""

    d: int
    coords: tuple

    def __post_init__(self):
        if self.d not in H0_D:
            raise ConstraintViolation(f"local sections exist for d in 3..5, not {self.d}")
        if len(self.coords) != H0_D[self.d]:
            raise ConstraintViolation(f"d={self.d} needs {H0_D[self.d]} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def from_parts(cls, d: int, const, eps) -> "LocalSection":
        return cls(d, tuple(const) + tuple(eps))

    @property
    def half(self) -> int:
        return H0_D[self.d] // 2

    @property
    def const(self) -> tuple:
        return self.coords[: self.half]

    @property
    def eps(self) -> tuple:
        return self.coords[self.half:]

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)


def generators(d: int, sec: np.ndarray, p: int):
    """(ga, gb, delta, nvars) for the ideal of the scheme cut out by ``sec``."""
    if d == 3:
        ga, gb = gens_cubic(sec, p)
    elif d == 4:
        ga, gb = gens_conics(sec, p)
    elif d == 5:
        ga, gb = gens_pfaffians(sec, p, tables(4).sq_idx)
    else:
        raise ConstraintViolation(f"d={d}")
    return ga, gb, GEN_DEGREE[d], NVARS[d]


def pfaffian_polys(d5_const, d5_eps, p):
    """The five quadrics (constant and eps parts) as dicts exponent -> coefficient; for the reference path."""
    sec = np.array(list(d5_const) + list(d5_eps), dtype=np.int64)
    ga, gb = gens_pfaffians(sec, p, tables(4).sq_idx)
    mons = monomials(4, 2)
    out = []
    for g in range(5):
        out.append(({mons[i]: int(ga[g, i]) for i in range(10) if ga[g, i]},
                    {mons[i]: int(gb[g, i]) for i in range(10) if gb[g, i]}))
    return out
