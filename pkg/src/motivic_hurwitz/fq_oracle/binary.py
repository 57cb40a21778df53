"""Square-free binary forms over F_p, counted exhaustively."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from numba import njit

from ..errors import BadCharacteristic, TooLarge
from .fields import require_prime

LIMIT = 10 ** 8


@njit(cache=True)
def _deg(a, n):
    for i in range(n - 1, -1, -1):
        if a[i] != 0:
            return i
    return -1


@njit(cache=True)
def _gcd_degree(f, df, p, n):
    """Degree of gcd(f, df) over F_p; arrays are scratch and get overwritten."""
    a = f.copy()
    b = df.copy()
    da = _deg(a, n)
    db = _deg(b, n)
    while db >= 0:
        inv = 1
        lead = b[db]
        e = p - 2
        base = lead
        while e:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        while da >= db:
            c = a[da] * inv % p
            s = da - db
            for j in range(db + 1):
                a[s + j] = (a[s + j] - c * b[j]) % p
            da = _deg(a, n)
        a, b = b, a
        da, db = db, da
    return da


@njit(cache=True)
def _count(p, n):
    total = p ** (n + 1)
    f = np.zeros(n + 1, dtype=np.int64)
    df = np.zeros(n + 1, dtype=np.int64)
    good = 0
    for idx in range(1, total):
        x = idx
        for i in range(n + 1):
            f[i] = x % p
            x //= p
        # F(x, y) = sum f[i] x^i y^(n-i); (1:0) has multiplicity n - deg f(t, 1)
        dg = _deg(f, n + 1)
        if n - dg >= 2:
            continue
        for i in range(n + 1):
            df[i] = 0
        for i in range(1, dg + 1):
            df[i - 1] = i * f[i] % p
        if _deg(df, n + 1) < 0:
            continue
        if _gcd_degree(f, df, p, n + 1) == 0:
            good += 1
    return good


def count_squarefree_binary(q: int, n: int) -> int:
    """Nonzero binary forms of degree n over F_q with no repeated factor."""
    p = require_prime(q)
    if p == 2:
        raise BadCharacteristic("odd characteristic required")
    if n < 1:
        raise TooLarge(f"degree {n} out of range")
    if p ** (n + 1) > LIMIT:
        raise TooLarge(f"{p}^{n + 1} forms exceeds the enumeration limit")
    return int(_count(p, n))


def hyperelliptic_groupoid_count(q: int, g: int):
    """Square-free forms of degree 2g+2 modulo scalars, as a groupoid count."""
    return Fraction(count_squarefree_binary(q, 2 * g + 2), q - 1)
