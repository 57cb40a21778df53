"""Zeta values of P^1 and Euler products over P^1 evaluated at t = 1.

A local factor 1 + a_1 t + a_2 t^2 + ... with coefficients in Z[L, L^-1] is
written uniquely as a product of terms (1 - L^-a t^b)^e.  Each such term
multiplied over the points of P^1 and evaluated at t = 1 gives
Z(P^1, L^-a)^-e, so the evaluated product becomes a product of zeta values.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .errors import Divergent, InsufficientOrder, MarginViolated, NegativeCoefficient
from .motivic_ring import (LaurentPoly, MotivicClass, ONE_POLY, DimSeries,
                           one_minus_L_inv, to_series)

# Largest total t-degree for which exactness of a finite factorization is
# confirmed by multiplying the factors back out.
_EXACT_CHECK_LIMIT = 64


@dataclass(frozen=True)
class LocalFactor:
    """1 + coeffs[0] t + ... + coeffs[T-1] t^T.

    ``polynomial`` says the factor is known exactly (all higher coefficients
    vanish); otherwise it is a truncation and the order bounds what can be
    computed from it.
    """

    coeffs: tuple
    polynomial: bool = True

    def __post_init__(self):
        cs = tuple(LaurentPoly.coerce(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def linear(cls, a) -> "LocalFactor":
        """The factor 1 + a t."""
        return cls((LaurentPoly.coerce(a),))

    @classmethod
    def one(cls, t_order: int = 1) -> "LocalFactor":
        return cls((LaurentPoly(),) * t_order)

    @property
    def t_order(self) -> int:
        return len(self.coeffs)

    def coefficient(self, i: int) -> LaurentPoly:
        if i == 0:
            return ONE_POLY
        if i <= len(self.coeffs):
            return self.coeffs[i - 1]
        if self.polynomial:
            return LaurentPoly()
        raise InsufficientOrder(f"coefficient of t^{i} beyond supplied order {self.t_order}")

    def padded(self, T: int) -> "LocalFactor":
        if T <= self.t_order:
            return self
        if not self.polynomial:
            raise InsufficientOrder(f"factor known to t-order {self.t_order}, need {T}")
        return LocalFactor(self.coeffs + (LaurentPoly(),) * (T - self.t_order), True)

    def __mul__(self, other: "LocalFactor") -> "LocalFactor":
        if self.polynomial and other.polynomial:
            T = self.t_order + other.t_order
        else:
            T = min(t.t_order for t in (self, other) if not t.polynomial)
        a = [self.coefficient(i) if i <= self.t_order or self.polynomial else None for i in range(T + 1)]
        b = [other.coefficient(i) if i <= other.t_order or other.polynomial else None for i in range(T + 1)]
        out = _series_mul(a, b, T)
        poly = self.polynomial and other.polynomial
        while poly and len(out) > 2 and out[-1].is_zero():
            out.pop()
        return LocalFactor(tuple(out[1:]), poly)

    def truncated(self, T: int) -> "LocalFactor":
        return LocalFactor(self.coeffs[:T], self.polynomial and T >= self.t_order)

    def evaluated_at_one(self) -> LaurentPoly:
        """f(1) for a polynomial factor."""
        if not self.polynomial:
            raise InsufficientOrder("only an exactly known factor can be evaluated at t = 1")
        total = ONE_POLY
        for c in self.coeffs:
            total = total + c
        return total

    def margin_ok(self) -> bool:
        return all(c.is_zero() or c.degree <= -2 * i for i, c in enumerate(self.coeffs, 1))

    def __str__(self):
        parts = ["1"]
        for i, c in enumerate(self.coeffs, 1):
            if c.is_zero():
                continue
            tpow = "t" if i == 1 else f"t^{i}"
            parts.append(f"({c})*{tpow}")
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "LocalFactor":
        """Parse an expression polynomial in t whose coefficients are Laurent polynomials in L."""
        import sympy
        Ls, ts = sympy.symbols("L t")
        expr = sympy.sympify(text.replace("^", "**").replace("−", "-"), locals={"L": Ls, "t": ts})
        expr = sympy.expand(expr)
        poly_t = sympy.Poly(expr, ts)
        degs = {}
        for (k,), coeff in poly_t.terms():
            lp = LaurentPoly()
            for term, c in sympy.expand(coeff).as_coefficients_dict().items():
                if term == 1:
                    e = 0
                else:
                    base, e = term.as_base_exp()
                    if base != Ls:
                        raise ValueError(f"unexpected term {term} in local factor")
                c = sympy.Rational(c)
                if c.q != 1:
                    raise ValueError("coefficients must be integers")
                lp = lp + LaurentPoly.monomial(int(e), int(c))
            degs[k] = lp
        if degs.get(0, LaurentPoly()) != ONE_POLY:
            raise ValueError("local factor must have constant term 1")
        T = max([k for k in degs if k > 0] + [1])
        return cls(tuple(degs.get(i, LaurentPoly()) for i in range(1, T + 1)))


@dataclass(frozen=True)
class WittFactor:
    """(1 - L^-a t^b)^e"""

    a: int
    b: int
    e: int


def _series_mul(a, b, T):
    out = []
    for k in range(T + 1):
        s = LaurentPoly()
        for i in range(k + 1):
            x, y = a[i], b[k - i]
            if x is None or y is None:
                raise InsufficientOrder("product needs coefficients beyond the supplied order")
            if x and y:
                s = s + x * y
        out.append(s)
    return out


def _binomial_series(x: LaurentPoly, b: int, e: int, T: int):
    """Coefficients t^0..t^T of (1 - x t^b)^e for any integer e."""
    out = [LaurentPoly() for _ in range(T + 1)]
    out[0] = ONE_POLY
    j = 1
    coef = 1
    xp = ONE_POLY
    while b * j <= T:
        # generalized binomial coefficient C(e, j) * (-1)^j
        coef = coef * (e - j + 1) // j
        xp = xp * x
        c = coef * (-1) ** j
        if c:
            out[b * j] = xp * c
        if e >= 0 and j >= e:
            break
        j += 1
    return out


def zeta_value(a: int) -> MotivicClass:
    """Z(P^1, L^-a) = 1 / ((1 - L^(1-a)) (1 - L^-a))."""
    if a <= 1:
        raise Divergent(f"Z(P^1, L^-{a}) diverges")
    return (one_minus_L_inv(a - 1) * one_minus_L_inv(a)).invert()


def kapranov_zeta_p1(T: int) -> LocalFactor:
    """Z(P^1, t) = 1/((1-t)(1-Lt)) through t^T; coefficient of t^n is 1 + L + ... + L^n."""
    if T < 1:
        raise ValueError("T must be positive")
    coeffs = tuple(LaurentPoly({k: 1 for k in range(n + 1)}) for n in range(1, T + 1))
    return LocalFactor(coeffs, polynomial=False)


def symmetric_power_class(c: LaurentPoly, n: int) -> LaurentPoly:
    """Coefficient of t^n in prod_a (1 - L^a t)^(-m_a) where c = sum m_a L^a."""
    c = LaurentPoly.coerce(c)
    if n < 0:
        raise ValueError("n must be non-negative")
    if any(v < 0 for _, v in c.items()):
        raise NegativeCoefficient(f"{c} has a negative coefficient")
    series = [ONE_POLY] + [LaurentPoly()] * n
    for a, m in c.items():
        factor = _binomial_series(LaurentPoly.monomial(a), 1, -m, n)
        series = _series_mul(series, factor, n)
    return series[n]


def witt_factorization(f: LocalFactor) -> list[WittFactor]:
    """Factor f as prod (1 - L^-a t^b)^e modulo t^(T+1).

    The factor must satisfy the weighted margin deg(coefficient of t^i) <= -2i,
    which forces every emitted factor to have a >= 2b.
    """
    T = f.t_order
    for i in range(1, T + 1):
        c = f.coefficient(i)
        if not c.is_zero() and c.degree > -2 * i:
            raise MarginViolated(f"coefficient of t^{i} has L-degree {c.degree} > {-2 * i}")
    residual = [f.coefficient(i) for i in range(T + 1)]
    out: list[WittFactor] = []
    for b in range(1, T + 1):
        cb = residual[b]
        if cb.is_zero():
            continue
        for expo, m in cb.items():
            a = -expo
            if a < 2 * b:
                raise MarginViolated(f"factor with a={a} < 2b={2 * b}")
            out.append(WittFactor(a, b, -m))
            # divide the residual by (1 - L^-a t^b)^(-m)
            inv = _binomial_series(LaurentPoly.monomial(-a), b, m, T)
            residual = _series_mul(residual, inv, T)
    return out


def _multiply_back(factors: Sequence[WittFactor], T: int):
    series = [ONE_POLY] + [LaurentPoly()] * T
    for w in factors:
        series = _series_mul(series, _binomial_series(LaurentPoly.monomial(-w.a), w.b, w.e, T), T)
    return series


def _factorization_is_exact(f: LocalFactor, factors: Sequence[WittFactor]) -> bool:
    """True when the factors multiply to f exactly as polynomials in t."""
    if not f.polynomial:
        return False
    pos = sum(w.b * w.e for w in factors if w.e > 0)
    neg = sum(-w.b * w.e for w in factors if w.e < 0)
    if pos > _EXACT_CHECK_LIMIT or neg > _EXACT_CHECK_LIMIT:
        return False
    T = max(pos, f.t_order + neg)
    lhs = _multiply_back([w for w in factors if w.e > 0], T)
    rhs_f = [f.coefficient(i) for i in range(T + 1)]
    rhs = _series_mul(rhs_f, _multiply_back([WittFactor(w.a, w.b, -w.e) for w in factors if w.e < 0], T), T)
    return lhs == rhs


@dataclass(frozen=True)
class EulerProduct:
    value: MotivicClass
    codim: int
    exact: bool
    factors: tuple = field(default=())


def required_order(N: int) -> int:
    return max(1, math.ceil((N + 2) / 2))


@lru_cache(maxsize=256)
def evaluated_euler_product(f: LocalFactor, N: int) -> EulerProduct:
    """Product over P^1 of f evaluated at t = 1, correct through codimension N.

    Factors (1 - L^-a t^b)^e with a - 1 > N only move codimension > N, and
    the weighted margin puts every factor of t-order b > T at a >= 2b > N + 1,
    so truncating at T = ceil((N+2)/2) loses nothing through codimension N.
    A factorization that terminates is kept whole and flagged exact.
    """
    if N < 0:
        raise ValueError("codimension must be non-negative")
    T = required_order(N)
    if not f.polynomial and f.t_order < T:
        raise InsufficientOrder(f"need t-order {T} for codimension {N}, have {f.t_order}")
    g = f.padded(max(T, f.t_order)) if f.polynomial else f
    factors = witt_factorization(g)
    exact = _factorization_is_exact(f, factors)
    if not exact:
        factors = [w for w in factors if w.a - 1 <= N]
    # zeta(a)^-e = ((1 - L^(1-a)) (1 - L^-a))^e ; collect net exponents per k
    net: dict[int, int] = {}
    for w in factors:
        if w.a <= 1:
            raise Divergent(f"factor with a = {w.a}")
        for k in (w.a - 1, w.a):
            net[k] = net.get(k, 0) + w.e
    num = ONE_POLY
    den = ONE_POLY
    for k, e in sorted(net.items()):
        base = ONE_POLY - LaurentPoly.monomial(-k)
        if e > 0:
            num = num * base ** e
        elif e < 0:
            den = den * base ** (-e)
    return EulerProduct(MotivicClass(num, den), N, exact, tuple(factors))


def euler_product_p1(f: LocalFactor, N: int) -> MotivicClass:
    return evaluated_euler_product(f, N).value


def euler_product_series(f: LocalFactor, N: int) -> DimSeries:
    return to_series(euler_product_p1(f, N), N)


def collapse(f: LocalFactor) -> LocalFactor:
    """The single-variable factor 1 + (f(1) - 1) t with the same evaluated product."""
    return LocalFactor.linear(f.evaluated_at_one() - ONE_POLY)


def euler_product_multiply_check(f: LocalFactor, g: LocalFactor, N: int) -> bool:
    """EP(f) EP(g) agrees with EP(f g) and with EP of the collapsed product through codim N."""
    lhs = to_series(euler_product_p1(f, N) * euler_product_p1(g, N), N)
    fg = f * g
    ok = _same(to_series(euler_product_p1(fg, N), N), lhs)
    if f.polynomial and g.polynomial:
        ok = ok and _same(to_series(euler_product_p1(collapse(fg), N), N), lhs)
    return ok


def _same(a: DimSeries, b: DimSeries) -> bool:
    return a.anchor == b.anchor and a.coeffs == b.coeffs
