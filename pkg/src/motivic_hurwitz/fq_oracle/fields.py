"""Finite fields: prime fields, extension towers, dual numbers, and F_p[x] helpers.

Factoring over prime fields goes through sympy's galoistools; everything else
here is small explicit arithmetic.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from sympy import factorint
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_irreducible_p

from ..errors import BadCharacteristic, Unsupported


def prime_power(q: int) -> tuple[int, int]:
    f = factorint(q)
    if len(f) != 1:
        raise BadCharacteristic(f"{q} is not a prime power")
    (p, k), = f.items()
    return int(p), int(k)


def check_characteristic(q: int, d: int) -> None:
    """Tame characteristic: p odd and p does not divide d!."""
    p, _ = prime_power(q)
    if p == 2 or p <= d:
        raise BadCharacteristic(f"characteristic {p} divides {d}! (q={q})")


def require_prime(q: int) -> int:
    p, k = prime_power(q)
    if k != 1:
        raise Unsupported(f"q={q}: only prime fields are supported by this routine")
    return p


class PrimeField:
    """F_p with elements stored as ints in [0, p)."""

    def __init__(self, p: int):
        self.p = p
        self.q = p
        self.degree = 1
        self.char = p

    zero = 0
    one = 1

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __call__(self, x) -> int:
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def pow(self, a, n: int):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def embed(self, c: int):
        return c % self.p

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def frobenius(self, a):
        return a


class ExtField:
    """base[T]/(modulus) with modulus monic irreducible over ``base``.

    Elements are tuples of base elements (low degree first).  The base may
    itself be an ExtField, which gives towers.
    """

    def __init__(self, base, modulus: Sequence):
        self.base = base
        self.modulus = tuple(base(c) if isinstance(base, PrimeField) else c for c in modulus)
        self.k = len(self.modulus) - 1
        if self.k < 1 or self.modulus[-1] != base.one:
            raise ValueError("modulus must be monic of positive degree")
        self.degree = base.degree * self.k
        self.char = base.char
        self.q = base.q ** self.k
        self.zero = tuple([base.zero] * self.k)
        self.one = tuple([base.one] + [base.zero] * (self.k - 1))

    def __repr__(self):
        return f"Ext({self.base!r}, deg {self.k})"

    def __eq__(self, other):
        return isinstance(other, ExtField) and other.base == self.base and other.modulus == self.modulus

    def __hash__(self):
        return hash((self.base, self.modulus))

    def __call__(self, x):
        if isinstance(x, tuple):
            return x
        return self.embed(x)

    def embed(self, c):
        return tuple([self.base.embed(c) if not isinstance(c, tuple) else c] + [self.base.zero] * (self.k - 1))

    def gen(self):
        if self.k == 1:
            return tuple([self.base.neg(self.modulus[0])])
        return tuple([self.base.zero, self.base.one] + [self.base.zero] * (self.k - 2))

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        k = self.k
        prod = [B.zero] * (2 * k - 1)
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j, y in enumerate(b):
                prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        m = self.modulus
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i]
            if B.is_zero(c):
                continue
            for j in range(k):
                prod[i - k + j] = B.sub(prod[i - k + j], B.mul(c, m[j]))
        return tuple(prod[:k])

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        out = self.one
        while n:
            if n & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            n >>= 1
        return out

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of 0")
        # a^(q-2) by Lagrange
        return self.pow(a, self.q - 2)

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a)

    def elements(self) -> Iterator[tuple]:
        def rec(i):
            if i == self.k:
                yield ()
                return
            for x in self.base.elements():
                for rest in rec(i + 1):
                    yield (x,) + rest
        return rec(0)

    def random(self, rng: random.Random):
        return tuple(self.base.random(rng) for _ in range(self.k))

    def frobenius(self, a):
        """x -> x^p."""
        return self.pow(a, self.char)


@lru_cache(maxsize=None)
def irreducible_modulus(p: int, k: int) -> tuple:
    """Lexicographically first monic irreducible of degree k over F_p (low degree first)."""
    if k == 1:
        return (0, 1)
    for n in range(p ** k):
        coeffs = [(n // p ** i) % p for i in range(k)] + [1]
        if coeffs[0] == 0:
            continue
        if gf_irreducible_p([ZZ(c) for c in reversed(coeffs)], p, ZZ):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")


def GF(q: int, m: int = 1):
    """F_{q^m}; for q = p^k this is the tower F_p < F_q < F_{q^m}."""
    p, k = prime_power(q)
    F = PrimeField(p)
    if k > 1:
        F = ExtField(F, irreducible_modulus(p, k))
    if m > 1:
        if k > 1:
            F = ExtField(F, _modulus_over(F, m))
        else:
            F = ExtField(F, irreducible_modulus(p, m))
    return F


def _modulus_over(F, m: int) -> tuple:
    """A monic irreducible of degree m over F, found by search (small fields only)."""
    rng = random.Random(0)
    for _ in range(10000):
        coeffs = tuple(F.random(rng) for _ in range(m)) + (F.one,)
        if _irreducible_over(F, coeffs):
            return coeffs
    raise AssertionError("no modulus found")


def _irreducible_over(F, f: tuple) -> bool:
    # no roots suffices for m <= 3; otherwise use the gcd test with x^(q^i) - x
    m = len(f) - 1
    for i in range(1, m // 2 + 1):
        h = poly_sub(F, poly_powmod(F, [F.zero, F.one], F.q ** i, list(f)), [F.zero, F.one])
        if len(poly_gcd(F, list(f), h)) > 1:
            return False
    return True


# polynomials over an arbitrary field object, low degree first

def poly_trim(F, a: list) -> list:
    a = list(a)
    while a and F.is_zero(a[-1]):
        a.pop()
    return a


def poly_add(F, a, b):
    n = max(len(a), len(b))
    out = [F.add(a[i] if i < len(a) else F.zero, b[i] if i < len(b) else F.zero) for i in range(n)]
    return poly_trim(F, out)


def poly_sub(F, a, b):
    n = max(len(a), len(b))
    out = [F.sub(a[i] if i < len(a) else F.zero, b[i] if i < len(b) else F.zero) for i in range(n)]
    return poly_trim(F, out)


def poly_mul(F, a, b):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(F, out)


def poly_divmod(F, a, b):
    a = poly_trim(F, a)
    b = poly_trim(F, b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = F.inv(b[-1])
    quo = [F.zero] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    while len(rem) >= len(b) and rem:
        c = F.mul(rem[-1], inv)
        s = len(rem) - len(b)
        quo[s] = c
        for j, y in enumerate(b):
            rem[s + j] = F.sub(rem[s + j], F.mul(c, y))
        rem = poly_trim(F, rem)
    return poly_trim(F, quo), rem


def poly_gcd(F, a, b):
    a, b = poly_trim(F, a), poly_trim(F, b)
    while b:
        a, b = b, poly_divmod(F, a, b)[1]
    if not a:
        return a
    inv = F.inv(a[-1])
    return [F.mul(c, inv) for c in a]


def poly_powmod(F, a, n: int, m):
    out = [F.one]
    a = poly_divmod(F, a, m)[1]
    while n:
        if n & 1:
            out = poly_divmod(F, poly_mul(F, out, a), m)[1]
        a = poly_divmod(F, poly_mul(F, a, a), m)[1]
        n >>= 1
    return out


def poly_eval(F, a, x):
    out = F.zero
    for c in reversed(a):
        out = F.add(F.mul(out, x), c)
    return out


def factor_mod_p(coeffs: Sequence[int], p: int) -> list[tuple[tuple, int]]:
    """Monic irreducible factors with multiplicity of a polynomial over F_p (low degree first)."""
    f = [ZZ(c % p) for c in reversed(list(coeffs))]
    while f and f[0] == 0:
        f = f[1:]
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    _, facs = gf_factor(f, p, ZZ)
    return [(tuple(int(c) for c in reversed(g)), e) for g, e in facs]


# dual numbers

@dataclass(frozen=True)
class DualElem:
    """a + b eps with eps^2 = 0, over a field object F."""

    a: object
    b: object

    def add(self, F, other):
        return DualElem(F.add(self.a, other.a), F.add(self.b, other.b))

    def mul(self, F, other):
        return DualElem(F.mul(self.a, other.a), F.add(F.mul(self.a, other.b), F.mul(self.b, other.a)))

    def is_unit(self, F) -> bool:
        return not F.is_zero(self.a)
