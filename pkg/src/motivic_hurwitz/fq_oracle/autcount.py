"""Automorphisms of split bundles on P^1 over F_p, counted as matrices of forms.

An endomorphism of O(a_1) + ... + O(a_r) is a matrix whose (i, j) entry is a
binary form of degree a_i - a_j (zero when that is negative).  Forms are
stored dehomogenized, as polynomials in t of bounded degree.  The
determinant is a form of degree 0, and the matrix is an automorphism
exactly when that constant is nonzero.
"""
from __future__ import annotations

from itertools import permutations, product

from ..errors import TooLarge
from .fields import require_prime

LIMIT = 2 * 10 ** 6


def _mul(a: tuple, b: tuple, p: int) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _sign(perm: tuple) -> int:
    s = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def _det(M: list, p: int) -> list:
    r = len(M)
    total = [0]
    for perm in permutations(range(r)):
        term = [1]
        for i in range(r):
            entry = M[i][perm[i]]
            if entry is None:
                break
            term = _mul(term, entry, p)
        else:
            s = _sign(perm)
            if len(term) > len(total):
                total += [0] * (len(term) - len(total))
            for k, v in enumerate(term):
                total[k] = (total[k] + s * v) % p
    return total


def count_split_automorphisms(degrees, q: int) -> int:
    """|Aut(O(a_1) + ... + O(a_r))(F_q)| by enumerating every matrix of forms."""
    p = require_prime(q)
    a = sorted(int(x) for x in degrees)
    r = len(a)
    slots = [(i, j, a[i] - a[j] + 1) for i in range(r) for j in range(r) if a[i] >= a[j]]
    nvars = sum(s for _, _, s in slots)
    if p ** nvars > LIMIT:
        raise TooLarge(f"{p}^{nvars} matrices exceeds the enumeration limit")
    good = 0
    for values in product(range(p), repeat=nvars):
        M = [[None] * r for _ in range(r)]
        k = 0
        for i, j, s in slots:
            M[i][j] = tuple(values[k:k + s])
            k += s
        det = _det(M, p)
        if det[0] and not any(det[1:]):
            good += 1
    return good
