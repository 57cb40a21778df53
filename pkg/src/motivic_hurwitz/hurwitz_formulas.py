"""Closed-form Hurwitz classes, the truncated strata sum and Tamagawa sums."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from . import bundles
from .bundles import RANK_E, RANK_F, SplittingType
from .errors import OutOfRange, Unsupported
from .motivic_ring import (
    L,
    DimSeries,
    LaurentPoly,
    MotivicClass,
    ONE,
    to_series,
)
from .ramification import AllowableCollection, local_mass
from .zeta_euler import LocalFactor, euler_product_p1, zeta_value

C_D = {3: 0, 4: -2, 5: -23}
KAPPA_D = {3: 4, 4: 12, 5: 40}
MAX_CODIM = 30


@dataclass(frozen=True)
class HurwitzQuery:
    d: int
    g: int
    collection: AllowableCollection

    def __post_init__(self):
        if self.d not in (2, 3, 4, 5):
            raise OutOfRange(f"degree {self.d} is outside 2..5")
        if self.g < 0:
            raise OutOfRange("genus must be non-negative")
        if self.collection.d != self.d:
            raise OutOfRange("collection degree does not match d")
        if self.d == 2 and not self.collection.is_full():
            object.__setattr__(self, "collection", AllowableCollection.full(2))

    @classmethod
    def full(cls, d: int, g: int) -> "HurwitzQuery":
        return cls(d, g, AllowableCollection.full(d))

    @classmethod
    def simple(cls, d: int, g: int) -> "HurwitzQuery":
        return cls(d, g, AllowableCollection.simply_branched(d))

    @property
    def hur_dim(self) -> int:
        return hur_dim(self.d, self.g)


@dataclass(frozen=True)
class HurwitzAnswer:
    query: HurwitzQuery
    hur_dim: int
    codim_bound: Optional[Fraction]
    codim: int
    closed_form: MotivicClass
    normalized_series: DimSeries
    exact: bool

    def to_json(self) -> dict:
        return {
            "d": self.query.d,
            "g": self.query.g,
            "ramification": self.query.collection.label(),
            "hur_dim": self.hur_dim,
            "codim_bound": None if self.codim_bound is None else str(self.codim_bound),
            "codim": self.codim,
            "closed_form": str(self.closed_form),
            "normalized_series": self.normalized_series.to_json(),
            "exact": self.exact,
        }


def hur_dim(d: int, g: int) -> int:
    return 2 * g + 2 * d - 2


def codim_bound(d: int, g: int) -> Fraction:
    if d == 2:
        raise Unsupported("degree 2 classes are exact; no codimension bound applies")
    if d not in C_D:
        raise OutOfRange(f"d={d}")
    return min(Fraction(g + C_D[d], KAPPA_D[d]), Fraction(g + d - 1, d) - 4 ** (d - 3))


def default_codim(d: int, g: int) -> int:
    theta = codim_bound(d, g)
    return min(max(math.floor(theta), 0) + 4, MAX_CODIM)


def hurwitz_factor(collection: AllowableCollection) -> LocalFactor:
    """1 + (mass * (1 - L^-1) - 1) t."""
    mass = local_mass(collection)
    return LocalFactor.linear(mass * LaurentPoly({0: 1, -1: -1}) - LaurentPoly.constant(1))


def hurwitz_class(q: HurwitzQuery, N: Optional[int] = None) -> HurwitzAnswer:
    dim = q.hur_dim
    if q.d == 2:
        cf = L ** (2 * q.g + 2) - L ** (2 * q.g)
        n = 2 if N is None else max(N, 2)
        return HurwitzAnswer(q, dim, None, n, cf, to_series(cf / L ** dim, n), True)
    theta = codim_bound(q.d, q.g)
    if N is None:
        N = default_codim(q.d, q.g)
    if N < 0:
        raise OutOfRange("codimension must be non-negative")
    ep = euler_product_p1(hurwitz_factor(q.collection), N)
    cf = L ** dim / (ONE - L ** -1) * ep
    return HurwitzAnswer(q, dim, theta, N, cf, to_series(cf / L ** dim, max(N, 2)), False)


FULL_EULER_FACTORS = {
    2: LaurentPoly({0: 1, -2: -1}),
    3: LaurentPoly({0: 1, -3: -1}),
    4: LaurentPoly({0: 1, -2: 1, -3: -1, -4: -1}),
    5: LaurentPoly({0: 1, -2: 1, -4: -1, -5: -1}),
}


def theorem_b_check(d: int, g: int = 0) -> bool:
    """Euler factor of the full collection, plus the multiplied-out class for d = 2, 3."""
    if d not in FULL_EULER_FACTORS:
        raise OutOfRange(f"d={d}")
    mass = local_mass(AllowableCollection.full(d))
    ok = mass * LaurentPoly({0: 1, -1: -1}) == FULL_EULER_FACTORS[d]
    if d == 2:
        ep = euler_product_p1(hurwitz_factor(AllowableCollection.full(2)), 4)
        cf = L ** hur_dim(2, g) / (ONE - L ** -1) * ep
        ok = ok and cf == L ** (2 * g + 2) - L ** (2 * g)
    elif d == 3:
        cf = hurwitz_class(HurwitzQuery.full(3, g)).closed_form
        ok = ok and cf == L ** (2 * g + 4) * (ONE + L ** -1) * (ONE - L ** -3)
    return ok


# Tamagawa sums

@lru_cache(maxsize=None)
def _inverse_series(kind: str, degrees: tuple, n: int) -> DimSeries:
    st = SplittingType(degrees)
    cls = bundles.aut_sl_class(st) if kind == "sl" else bundles.aut_res_gl_class(st)
    return to_series(cls.invert(), n)


def _place(s: DimSeries, anchor: int, n: int) -> DimSeries:
    """View a lower-dimensional truncated series inside the window anchor..anchor-n."""
    lead = s.anchor
    pad = anchor - lead
    coeffs = ([0] * pad + list(s.coeffs))[: n + 1]
    coeffs += [0] * (n + 1 - len(coeffs))
    return DimSeries(anchor, coeffs, False)


def tamagawa_sum(n: int, delta: int, N: int) -> DimSeries:
    """Sum of 1/{Aut^SL V} over rank n, degree delta splitting types, through codim N.

    Anchored at the dimension 1 - n^2 of the balanced term.
    """
    if n < 2:
        raise OutOfRange("rank must be at least 2")
    anchor = 1 - n * n
    total = DimSeries(anchor, [0] * (N + 1), False)
    for V in bundles.types_with_h1_end(n, delta, N):
        h = bundles.h1_end(V)
        s = _inverse_series("sl", V.degrees, N - h)
        total = total + _place(s, anchor, N)
    return total


def tamagawa_closed_form(n: int) -> MotivicClass:
    out = L ** (1 - n * n)
    for i in range(2, n + 1):
        out = out * zeta_value(i)
    return out


def tamagawa_exact_sum(n: int, delta: int, N: int) -> MotivicClass:
    """The same truncated sum kept as an exact rational function (for numeric spot checks)."""
    out = MotivicClass(0)
    for V in bundles.types_with_h1_end(n, delta, N):
        out = out + bundles.aut_sl_class(V).invert()
    return out


# strata sum

def strata_local_factor(q: HurwitzQuery) -> LocalFactor:
    """1 + (mass * {Aut over D} / L^h0_D - 1) t."""
    d = q.d
    val = bundles.aut_ce_class_over_D(d) / L ** bundles.h0_D(d) * MotivicClass(local_mass(q.collection))
    assert val.den == LaurentPoly.constant(1)
    return LocalFactor.linear(val.num - LaurentPoly.constant(1))


def strata_sum(q: HurwitzQuery, N: int) -> DimSeries:
    """Truncated sum over splitting-type strata, anchored at the Hurwitz dimension."""
    d, g = q.d, q.g
    if d not in RANK_E:
        raise OutOfRange("strata sums need d in {3, 4, 5}")
    dim = q.hur_dim
    chi = bundles.chi_H(d, g)
    # L^chi / {Aut E}{Aut F} * (L - 1) has dimension dim - term_codim
    total = DimSeries(dim, [0] * (N + 1), False)
    corr = L ** chi if d == 3 else L ** chi * (L - 1)
    corr_series = to_series(corr, N)
    for rep in bundles.enumerate_strata(d, g, N):
        rd = rep.data
        prec = N - rep.term_codim
        sE = _inverse_series("gl", rd.E.degrees, prec)
        term = sE
        if rd.F is not None:
            term = term * _inverse_series("gl", rd.F.degrees, prec)
        term = term * corr_series
        total = total + _place(term.truncate(min(prec, term.codim)), dim, N)
    ep = to_series(euler_product_p1(strata_local_factor(q), N), N)
    return (total * ep).truncate(N)


def strata_sum_matches(q: HurwitzQuery, N: int) -> bool:
    lhs = strata_sum(q, N)
    rhs = to_series(hurwitz_class(q, N).closed_form, N)
    return lhs.eq_mod_codim(rhs, q.hur_dim, N, inclusive=True)


def dimension_identity_check(d: int) -> bool:
    """chi_H(d, g) - dim sl(E) - dim sl(F) = hur_dim + 1, as linear functions of g."""
    if d not in RANK_E:
        raise OutOfRange(f"d={d}")
    sl_e = RANK_E[d] ** 2 - 1
    sl_f = RANK_F[d] ** 2 - 1 if d in RANK_F else 0
    # both sides are affine in g, so two values of g decide the identity
    return all(bundles.chi_H(d, g) - sl_e - sl_f == hur_dim(d, g) + 1 for g in (0, 1))
