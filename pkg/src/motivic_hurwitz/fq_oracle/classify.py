"""Classification of a local section: Reject or the ramification profile.

``classify_local_section`` runs the compiled kernel.  ``reference_classify``
is a slower second route: it finds the support points explicitly over
residue fields F_p[T]/(pi) from the factored characteristic polynomial of a
generic coordinate function, takes closed-fiber multiplicities from the
exponents, and decides curvilinearity by the Jacobian rank of the equations
over the dual numbers at each point.  ``classify_cubic_direct`` is a third,
d=3-only rule read straight off the roots of the cubic.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np
from sympy import Matrix

from ..ramification import RamProfile
from .census import STATUS_NAMES, _classify_one
from .fields import (
    ExtField,
    PrimeField,
    check_characteristic,
    factor_mod_p,
    require_prime,
)
from .sections import GEN_DEGREE, NVARS, LocalSection, monomials, tables


@dataclass(frozen=True)
class Reject:
    reason: str

    def __str__(self):
        return f"Reject({self.reason})"


def classify_local_section(s: LocalSection, q: int):
    check_characteristic(q, s.d)
    p = require_prime(q)
    t = tables(NVARS[s.d])
    counts = np.zeros(s.d + 1, dtype=np.int64)
    st = _classify_one(s.d, s.array() % p, p, t.mul2to3, t.sq_idx, t.M2, t.M3, counts)
    if st:
        return Reject(STATUS_NAMES[int(st)])
    parts = [m for m in range(1, s.d + 1) for _ in range(int(counts[m]))]
    return RamProfile(tuple(parts))


# d = 3 direct rule

def classify_cubic_direct(const, eps, q: int):
    """Profile of a binary cubic over the dual numbers from its closed-fiber roots.

    Multiple roots of a binary cubic are rational; at such a root the family
    is curvilinear exactly when the eps-part does not vanish there.
    """
    check_characteristic(q, 3)
    p = require_prime(q)
    a, b, c, e = (x % p for x in const)  # x^3, x^2 y, x y^2, y^3
    f1 = [x % p for x in eps]
    if not any((a, b, c, e)):
        return Reject("not_flat")

    def f1_at(x, y):
        return (f1[0] * x ** 3 + f1[1] * x * x * y + f1[2] * x * y * y + f1[3] * y ** 3) % p

    parts: list[int] = []
    # g(t) = f(t, 1); its degree drop is the multiplicity of (1:0)
    g = [e, c, b, a]
    while g and g[-1] == 0:
        g.pop()
    inf_mult = 3 - (len(g) - 1)
    if inf_mult:
        if inf_mult >= 2 and f1_at(1, 0) == 0:
            return Reject("not_curvilinear")
        parts.append(inf_mult)
    if len(g) > 1:
        for fac, mult in factor_mod_p(g, p):
            deg = len(fac) - 1
            if mult >= 2:
                root = (-fac[0]) % p  # multiple factors are linear
                if f1_at(root, 1) == 0:
                    return Reject("not_curvilinear")
            parts += [mult] * deg
    return RamProfile(tuple(parts))


# reference route

def _poly_dicts(s: LocalSection, p: int):
    """Generators as pairs (const, eps) of dicts exponent -> coefficient."""
    d = s.d
    c, e = s.const, s.eps
    if d == 3:
        mons = monomials(2, 3)
        return [({m: c[i] % p for i, m in enumerate(mons) if c[i] % p},
                 {m: e[i] % p for i, m in enumerate(mons) if e[i] % p})]
    if d == 4:
        mons = monomials(3, 2)
        return [({m: c[6 * g + i] % p for i, m in enumerate(mons) if c[6 * g + i] % p},
                 {m: e[6 * g + i] % p for i, m in enumerate(mons) if e[6 * g + i] % p}) for g in range(2)]
    return _pfaffians_python(c, e, p)


def _pfaffians_python(c, e, p):
    pairs = list(combinations(range(5), 2))
    ent = {}
    for k, (i, j) in enumerate(pairs):
        ent[(i, j)] = (tuple(c[4 * k: 4 * k + 4]), tuple(e[4 * k: 4 * k + 4]))

    def lin_mul(u, w):
        (u0, u1), (w0, w1) = u, w
        A: dict = {}
        B: dict = {}
        for v in range(4):
            for x in range(4):
                mono = tuple((v == t) + (x == t) for t in range(4))
                A[mono] = A.get(mono, 0) + u0[v] * w0[x]
                B[mono] = B.get(mono, 0) + u0[v] * w1[x] + u1[v] * w0[x]
        return A, B

    out = []
    for drop in range(5):
        j, k, l, m = [i for i in range(5) if i != drop]
        A: dict = {}
        B: dict = {}
        for sign, (x, y) in ((1, ((j, k), (l, m))), (-1, ((j, l), (k, m))), (1, ((j, m), (k, l)))):
            PA, PB = lin_mul(ent[x], ent[y])
            for mono, v in PA.items():
                A[mono] = (A.get(mono, 0) + sign * v) % p
            for mono, v in PB.items():
                B[mono] = (B.get(mono, 0) + sign * v) % p
        out.append(({k2: v for k2, v in A.items() if v}, {k2: v for k2, v in B.items() if v}))
    return out


def _rref_mod(rows: list[list[int]], p: int):
    rows = [list(r) for r in rows]
    piv = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        k = next((i for i in range(r, len(rows)) if rows[i][col] % p), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = pow(rows[r][col], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        piv.append(col)
        r += 1
    return rows[:r], piv


def _quotient(rows, ncols, p):
    """Reduction map onto the quotient k^ncols / span(rows): returns a function and the basis columns."""
    red, piv = _rref_mod(rows, p) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]

    def reduce(v):
        v = list(v)
        for row, c in zip(red, piv):
            f = v[c] % p
            if f:
                v = [(x - f * y) % p for x, y in zip(v, row)]
        return [v[c] % p for c in free]

    return reduce, free


def _closed_fiber_operators(gens0, nvars, delta, d, p):
    """Operators X_i = l^-1 x_i on the degree-2 piece of the closed fiber, or None."""
    m2, m3 = monomials(nvars, 2), monomials(nvars, 3)
    i2 = {m: k for k, m in enumerate(m2)}
    i3 = {m: k for k, m in enumerate(m3)}

    def vec(poly, index, n):
        v = [0] * n
        for mono, c in poly.items():
            v[index[mono]] = c % p
        return v

    if delta == 2:
        rows2 = [vec(g, i2, len(m2)) for g in gens0]
        rows3 = []
        for g in gens0:
            for v in range(nvars):
                shifted = {tuple(a + (t == v) for t, a in enumerate(mono)): c for mono, c in g.items()}
                rows3.append(vec(shifted, i3, len(m3)))
    else:
        rows2 = []
        rows3 = [vec(g, i3, len(m3)) for g in gens0]
    red2, free2 = _quotient(rows2, len(m2), p)
    red3, free3 = _quotient(rows3, len(m3), p)
    if len(free2) != d or len(free3) != d:
        return "not_flat"
    # x_v applied to each basis monomial of V2
    mult = []
    for v in range(nvars):
        cols = []
        for c in free2:
            mono = tuple(a + (t == v) for t, a in enumerate(m2[c]))
            u = [0] * len(m3)
            u[i3[mono]] = 1
            cols.append(red3(u))
        mult.append(Matrix(d, d, lambda i, j: cols[j][i]))
    for coef in _linear_forms(nvars, p):
        Lm = sum((coef[v] * mult[v] for v in range(nvars)), Matrix.zeros(d, d))
        if Lm.det() % p == 0:
            continue
        Linv = Lm.inv_mod(p)
        ops = [(Linv * mult[v]).applyfunc(lambda x: x % p) for v in range(nvars)]
        return ops, coef
    return "no_unit_form"


def _linear_forms(nvars, p):
    for v in range(nvars):
        yield tuple(int(v == t) for t in range(nvars))
    for coef in product(range(p), repeat=nvars):
        nz = [c for c in coef if c]
        if nz and nz[-1] == 1:
            yield coef


def _nullspace_over(F, M: list[list]):
    """Right null space of a matrix over a field object F, as a list of vectors."""
    rows = [list(r) for r in M]
    n = len(rows[0])
    piv = []
    r = 0
    for col in range(n):
        k = next((i for i in range(r, len(rows)) if not F.is_zero(rows[i][col])), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = F.inv(rows[r][col])
        rows[r] = [F.mul(x, inv) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not F.is_zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        piv.append(col)
        r += 1
    basis = []
    for fcol in (c for c in range(n) if c not in piv):
        v = [F.zero] * n
        v[fcol] = F.one
        for i, c in enumerate(piv):
            v[c] = F.neg(rows[i][fcol])
        basis.append(v)
    return basis


def _solve_in_span(F, basis, w):
    """Coordinates of w in the span of ``basis`` (assumed to contain it)."""
    n = len(w)
    k = len(basis)
    M = [[basis[j][i] for j in range(k)] + [F.neg(w[i])] for i in range(n)]
    ns = _nullspace_over(F, M)
    for v in ns:
        if not F.is_zero(v[k]):
            inv = F.inv(v[k])
            return [F.mul(x, inv) for x in v[:k]]
    raise ArithmeticError("vector not in span")


def _eval_poly(F, poly: dict, point):
    total = F.zero
    for mono, c in poly.items():
        term = F.embed(c)
        for x, a in zip(point, mono):
            if a:
                term = F.mul(term, F.pow(x, a))
        total = F.add(total, term)
    return total


def _partial(poly: dict, v: int) -> dict:
    out = {}
    for mono, c in poly.items():
        if mono[v]:
            m = list(mono)
            m[v] -= 1
            out[tuple(m)] = out.get(tuple(m), 0) + c * mono[v]
    return out


@dataclass
class SupportPoint:
    degree: int
    multiplicity: int
    coords: tuple
    curvilinear: bool
    modulus: tuple = ()


@dataclass
class ReferenceResult:
    result: object
    points: list = field(default_factory=list)


def reference_classify(s: LocalSection, q: int, seed: int = 0) -> ReferenceResult:
    check_characteristic(q, s.d)
    p = require_prime(q)
    d, nvars, delta = s.d, NVARS[s.d], GEN_DEGREE[s.d]
    gens = _poly_dicts(s, p)
    gens0 = [g0 for g0, _ in gens]
    if not any(gens0):
        return ReferenceResult(Reject("not_flat"))
    found = _closed_fiber_operators(gens0, nvars, delta, d, p)
    if isinstance(found, str):
        return ReferenceResult(Reject(found))
    ops, _ = found
    base = PrimeField(p)
    rng = random.Random(seed)
    for _attempt in range(50):
        # a random quadratic in the commuting operators; linear ones cannot always
        # separate d points over a small prime field
        a = Matrix.zeros(d, d)
        for v in range(nvars):
            a += rng.randrange(p) * ops[v]
            for w in range(v, nvars):
                a += rng.randrange(p) * ops[v] * ops[w]
        a = a.applyfunc(lambda x: x % p)
        cp = a.charpoly().all_coeffs()  # high degree first
        facs = factor_mod_p([int(c) for c in reversed(cp)], p)
        points = []
        ok = True
        for pi, e in facs:
            K = ExtField(base, pi)
            T = K.gen()
            aT = [[K.embed(int(a[j, i])) for j in range(d)] for i in range(d)]  # transpose
            shifted = [[K.sub(aT[i][j], T) if i == j else aT[i][j] for j in range(d)] for i in range(d)]
            ker = _nullspace_over(K, shifted)
            k = len(ker)
            coords = []
            for v in range(nvars):
                uT = [[K.embed(int(ops[v][j, i])) for j in range(d)] for i in range(d)]
                images = [[_dot(K, uT[i], w) for i in range(d)] for w in ker]
                R = [_solve_in_span(K, ker, img) for img in images]  # columns of the restriction
                tr = K.zero
                for i in range(k):
                    tr = K.add(tr, R[i][i])
                lam = K.mul(tr, K.inv(K.embed(k)))
                # the restriction minus lam must be nilpotent, otherwise a merged two points
                Nm = [[K.sub(R[j][i], lam) if i == j else R[j][i] for j in range(k)] for i in range(k)]
                if not _is_nilpotent(K, Nm):
                    ok = False
                    break
                coords.append(lam)
            if not ok:
                break
            if not all(K.is_zero(_eval_poly(K, g, coords)) for g in gens0):
                ok = False
                break
            curvi = _tangent_ok(K, gens, coords, nvars)
            points.append(SupportPoint(len(pi) - 1, e, tuple(coords), curvi, tuple(pi)))
        if not ok:
            continue
        if any(not pt.curvilinear for pt in points):
            return ReferenceResult(Reject("not_curvilinear"), points)
        parts = [pt.multiplicity for pt in points for _ in range(pt.degree)]
        return ReferenceResult(RamProfile(tuple(parts)), points)
    raise ArithmeticError("no separating coordinate found")


def _dot(F, row, w):
    s = F.zero
    for x, y in zip(row, w):
        s = F.add(s, F.mul(x, y))
    return s


def _is_nilpotent(F, M):
    k = len(M)
    P = [row[:] for row in M]
    for _ in range(k):
        P = [[_dot(F, P[i], [M[t][j] for t in range(k)]) for j in range(k)] for i in range(k)]
    return all(F.is_zero(x) for row in P for x in row)


def _tangent_ok(K, gens, coords, nvars) -> bool:
    """Zariski tangent dimension <= 1 at the point, for the scheme over the dual numbers."""
    chart = next(v for v in range(nvars) if not K.is_zero(coords[v]))
    inv = K.inv(coords[chart])
    pt = [K.mul(x, inv) for x in coords]
    rows = []
    for g0, g1 in gens:
        # affine chart x_chart = 1: d/dy_j of the dehomogenized form is the partial in x_j
        row = [_eval_poly(K, _partial(g0, v), pt) for v in range(nvars) if v != chart]
        row.append(_eval_poly(K, g1, pt))
        rows.append(row)
    nullity = len(_nullspace_over(K, rows))
    return nullity <= 1
