"""numba kernels: finite-scheme classifier over the dual numbers, census loops.

A section over D = F_p[eps]/(eps^2) is given by generators of its ideal in
the graded ring D[x_0..x_n], all of one degree delta (2 for pencils of conics
and Pfaffians, 3 for the binary cubic).  The graded pieces V2, V3 of the
quotient must be free D-modules of rank d; a linear form l that is a unit on
the scheme turns X_i = l^-1 x_i : V2 -> V2 into the coordinate functions of
the finite D-algebra B, with l^2 in V2 playing the role of 1.  Everything
after that is linear algebra on B viewed as a 2d-dimensional F_p-space.

Status codes: 0 curvilinear, 1 not finite flat of degree d over D,
2 not curvilinear, 3 no unit linear form found.
"""
from __future__ import annotations

import numpy as np
from numba import njit

OK = 0
NOT_FLAT = 1
NOT_CURVILINEAR = 2
NO_UNIT_FORM = 3


@njit(cache=True)
def _inv_mod(a, p):
    a %= p
    r = 1
    e = p - 2
    while e:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


@njit(cache=True)
def d_rref(A, B, p, pivcol):
    """Gauss-Jordan over D on rows (A + eps B), unit pivots only.

    Fills pivcol[r] for each pivot row; returns rank, or -1 when a leftover
    row is a nonzero multiple of eps (quotient not free).
    """
    R, C = A.shape
    r = 0
    for c in range(C):
        if r == R:
            break
        piv = -1
        for i in range(r, R):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(C):
                t = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = t
                t = B[r, j]
                B[r, j] = B[piv, j]
                B[piv, j] = t
        # multiply row by (a + eps b)^-1 = a^-1 - eps b a^-2
        ia = _inv_mod(A[r, c], p)
        ib = (p - B[r, c] * ia % p * ia % p) % p
        for j in range(C):
            a0 = A[r, j]
            b0 = B[r, j]
            A[r, j] = a0 * ia % p
            B[r, j] = (a0 * ib + b0 * ia) % p
        for i in range(R):
            if i == r:
                continue
            fa = A[i, c]
            fb = B[i, c]
            if fa == 0 and fb == 0:
                continue
            for j in range(C):
                a0 = A[r, j]
                b0 = B[r, j]
                A[i, j] = (A[i, j] - fa * a0) % p
                B[i, j] = (B[i, j] - fa * b0 - fb * a0) % p
        pivcol[r] = c
        r += 1
    for i in range(r, R):
        for j in range(C):
            if A[i, j] != 0 or B[i, j] != 0:
                return -1
    return r


@njit(cache=True)
def _mat_inv(M, p, out):
    """Invert M over F_p into out; False if singular."""
    n = M.shape[0]
    W = np.zeros((n, 2 * n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            W[i, j] = M[i, j] % p
        W[i, n + i] = 1
    for c in range(n):
        piv = -1
        for i in range(c, n):
            if W[i, c] != 0:
                piv = i
                break
        if piv < 0:
            return False
        if piv != c:
            for j in range(2 * n):
                t = W[c, j]
                W[c, j] = W[piv, j]
                W[piv, j] = t
        iv = _inv_mod(W[c, c], p)
        for j in range(2 * n):
            W[c, j] = W[c, j] * iv % p
        for i in range(n):
            if i != c and W[i, c] != 0:
                f = W[i, c]
                for j in range(2 * n):
                    W[i, j] = (W[i, j] - f * W[c, j]) % p
    for i in range(n):
        for j in range(n):
            out[i, j] = W[i, n + j]
    return True


@njit(cache=True)
def _matmul(X, Y, p):
    n, m = X.shape
    k = Y.shape[1]
    Z = np.zeros((n, k), dtype=np.int64)
    for i in range(n):
        for t in range(m):
            x = X[i, t]
            if x == 0:
                continue
            for j in range(k):
                Z[i, j] += x * Y[t, j]
    for i in range(n):
        for j in range(k):
            Z[i, j] %= p
    return Z


@njit(cache=True)
def _matvec(X, v, p):
    n, m = X.shape
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        s = 0
        for j in range(m):
            s += X[i, j] * v[j]
        out[i] = s % p
    return out


@njit(cache=True)
def _echelon_insert(ech, lead, nrows, v, p):
    """Reduce v against the echelon rows; append it if independent.  Returns new row count."""
    n = v.shape[0]
    for r in range(nrows):
        c = lead[r]
        f = v[c]
        if f != 0:
            for j in range(n):
                v[j] = (v[j] - f * ech[r, j]) % p
    c = -1
    for j in range(n):
        if v[j] != 0:
            c = j
            break
    if c < 0:
        return nrows
    iv = _inv_mod(v[c], p)
    for j in range(n):
        v[j] = v[j] * iv % p
    # keep rows fully reduced so later reductions stay correct
    for r in range(nrows):
        f = ech[r, c]
        if f != 0:
            for j in range(n):
                ech[r, j] = (ech[r, j] - f * v[j]) % p
    for j in range(n):
        ech[nrows, j] = v[j]
    lead[nrows] = c
    return nrows + 1


@njit(cache=True)
def _nullspace(G, p):
    """Basis of {x : G x = 0} over F_p, as rows."""
    n = G.shape[0]
    A = G.copy() % p
    pivc = np.full(n, -1, dtype=np.int64)
    r = 0
    for c in range(n):
        piv = -1
        for i in range(r, n):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                t = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = t
        iv = _inv_mod(A[r, c], p)
        for j in range(n):
            A[r, j] = A[r, j] * iv % p
        for i in range(n):
            if i != r and A[i, c] != 0:
                f = A[i, c]
                for j in range(n):
                    A[i, j] = (A[i, j] - f * A[r, j]) % p
        pivc[r] = c
        r += 1
    ispiv = np.zeros(n, dtype=np.bool_)
    for i in range(r):
        ispiv[pivc[i]] = True
    out = np.zeros((n - r, n), dtype=np.int64)
    k = 0
    for f in range(n):
        if ispiv[f]:
            continue
        out[k, f] = 1
        for i in range(r):
            out[k, pivc[i]] = (p - A[i, f]) % p
        k += 1
    return out


@njit(cache=True)
def classify_core(ga, gb, delta, nvars, d, p, mul2to3, sq_idx, M2, M3, counts):
    """Classify the D-scheme cut out by generators ga + eps gb (rows, degree delta).

    counts[m] receives the number of geometric support points of closed-fiber
    multiplicity m.  Returns a status code.
    """
    for m in range(counts.shape[0]):
        counts[m] = 0
    G = ga.shape[0]
    n2 = 2 * d
    # degree-2 relations
    piv2 = np.full(M2, -1, dtype=np.int64)
    if delta == 2:
        A2 = ga.copy()
        B2 = gb.copy()
        r2 = d_rref(A2, B2, p, piv2)
    else:
        A2 = np.zeros((1, M2), dtype=np.int64)
        B2 = np.zeros((1, M2), dtype=np.int64)
        r2 = 0
    if r2 < 0 or M2 - r2 != d:
        return NOT_FLAT
    # degree-3 relations
    if delta == 2:
        A3 = np.zeros((G * nvars, M3), dtype=np.int64)
        B3 = np.zeros((G * nvars, M3), dtype=np.int64)
        for g in range(G):
            for v in range(nvars):
                row = g * nvars + v
                for m in range(M2):
                    t = mul2to3[m, v]
                    A3[row, t] = (A3[row, t] + ga[g, m]) % p
                    B3[row, t] = (B3[row, t] + gb[g, m]) % p
    else:
        A3 = ga.copy()
        B3 = gb.copy()
    piv3 = np.full(M3, -1, dtype=np.int64)
    r3 = d_rref(A3, B3, p, piv3)
    if r3 < 0 or M3 - r3 != d:
        return NOT_FLAT
    # non-pivot columns index the free bases of V2 and V3
    rowof2 = np.full(M2, -1, dtype=np.int64)
    for i in range(r2):
        rowof2[piv2[i]] = i
    rowof3 = np.full(M3, -1, dtype=np.int64)
    for i in range(r3):
        rowof3[piv3[i]] = i
    basis2 = np.zeros(d, dtype=np.int64)
    k = 0
    for c in range(M2):
        if rowof2[c] < 0:
            basis2[k] = c
            k += 1
    pos3 = np.full(M3, -1, dtype=np.int64)
    k = 0
    for c in range(M3):
        if rowof3[c] < 0:
            pos3[c] = k
            k += 1
    # multiplication maps x_v : V2 -> V3 as D-matrices (Mx0 + eps Mx1)
    Mx0 = np.zeros((nvars, d, d), dtype=np.int64)
    Mx1 = np.zeros((nvars, d, d), dtype=np.int64)
    for a in range(d):
        for v in range(nvars):
            t = mul2to3[basis2[a], v]
            if pos3[t] >= 0:
                Mx0[v, pos3[t], a] = 1
            else:
                r = rowof3[t]
                for c in range(M3):
                    if pos3[c] >= 0:
                        Mx0[v, pos3[c], a] = (p - A3[r, c]) % p
                        Mx1[v, pos3[c], a] = (p - B3[r, c]) % p
    # find a linear form l acting invertibly
    coef = np.zeros(nvars, dtype=np.int64)
    L0 = np.zeros((d, d), dtype=np.int64)
    L1 = np.zeros((d, d), dtype=np.int64)
    Li0 = np.zeros((d, d), dtype=np.int64)
    found = False
    total = 1
    for _ in range(nvars):
        total *= p
    for trial in range(nvars + total):
        if trial < nvars:
            for v in range(nvars):
                coef[v] = 1 if v == trial else 0
        else:
            x = trial - nvars
            lead = -1
            for v in range(nvars):
                coef[v] = x % p
                x //= p
            for v in range(nvars - 1, -1, -1):
                if coef[v] != 0:
                    lead = v
                    break
            # projective normalization: last nonzero coordinate equal to 1
            if lead < 0 or coef[lead] != 1:
                continue
        for i in range(d):
            for j in range(d):
                s0 = 0
                s1 = 0
                for v in range(nvars):
                    s0 += coef[v] * Mx0[v, i, j]
                    s1 += coef[v] * Mx1[v, i, j]
                L0[i, j] = s0 % p
                L1[i, j] = s1 % p
        if _mat_inv(L0, p, Li0):
            found = True
            break
    if not found:
        return NO_UNIT_FORM
    # (L0 + eps L1)^-1 = Li0 - eps Li0 L1 Li0
    Li1 = _matmul(_matmul(Li0, L1, p), Li0, p)
    for i in range(d):
        for j in range(d):
            Li1[i, j] = (p - Li1[i, j]) % p
    # X_v = l^-1 x_v on V2, as 2d x 2d matrices over F_p
    ops = np.zeros((nvars + 1, n2, n2), dtype=np.int64)
    X0s = np.zeros((nvars, d, d), dtype=np.int64)
    X1s = np.zeros((nvars, d, d), dtype=np.int64)
    for v in range(nvars):
        X0 = _matmul(Li0, Mx0[v], p)
        X1 = (_matmul(Li0, Mx1[v], p) + _matmul(Li1, Mx0[v], p)) % p
        X0s[v] = X0
        X1s[v] = X1
        for i in range(d):
            for j in range(d):
                ops[v, i, j] = X0[i, j]
                ops[v, d + i, d + j] = X0[i, j]
                ops[v, d + i, j] = X1[i, j]
    for i in range(d):
        ops[nvars, d + i, i] = 1
    # the operators must commute
    for v in range(nvars):
        for w in range(v + 1, nvars):
            P = _matmul(ops[v], ops[w], p)
            Q = _matmul(ops[w], ops[v], p)
            for i in range(n2):
                for j in range(n2):
                    if P[i, j] != Q[i, j]:
                        return NOT_FLAT
    # v0 = l^2 reduced into V2
    full0 = np.zeros(M2, dtype=np.int64)
    full1 = np.zeros(M2, dtype=np.int64)
    for v in range(nvars):
        for w in range(nvars):
            t = sq_idx[v, w]
            full0[t] = (full0[t] + coef[v] * coef[w]) % p
    for i in range(r2):
        c = piv2[i]
        f0 = full0[c]
        f1 = full1[c]
        if f0 == 0 and f1 == 0:
            continue
        for j in range(M2):
            full1[j] = (full1[j] - f0 * B2[i, j] - f1 * A2[i, j]) % p
            full0[j] = (full0[j] - f0 * A2[i, j]) % p
    v0 = np.zeros(n2, dtype=np.int64)
    for a in range(d):
        v0[a] = full0[basis2[a]]
        v0[d + a] = full1[basis2[a]]
    # cyclic basis b_k = W_k v0 of B by breadth-first words in the generators
    Ws = np.zeros((n2, n2, n2), dtype=np.int64)
    bs = np.zeros((n2, n2), dtype=np.int64)
    ech = np.zeros((n2, n2), dtype=np.int64)
    lead = np.zeros(n2, dtype=np.int64)
    for i in range(n2):
        Ws[0, i, i] = 1
    bs[0] = v0
    tmp = v0.copy()
    nb = _echelon_insert(ech, lead, 0, tmp, p)
    if nb == 0:
        return NOT_FLAT
    head = 0
    while head < nb and nb < n2:
        for g in range(nvars + 1):
            cand = _matvec(ops[g], bs[head], p)
            tmp = cand.copy()
            nn = _echelon_insert(ech, lead, nb, tmp, p)
            if nn > nb:
                Ws[nb] = _matmul(ops[g], Ws[head], p)
                bs[nb] = cand
                nb = nn
                if nb == n2:
                    break
        head += 1
    if nb < n2:
        return NOT_FLAT
    # trace form; its radical is the nilradical since p does not divide 2 m_P
    Gm = np.zeros((n2, n2), dtype=np.int64)
    for a in range(n2):
        for b in range(a, n2):
            s = 0
            for i in range(n2):
                for j in range(n2):
                    s += Ws[a, i, j] * Ws[b, j, i]
            Gm[a, b] = s % p
            Gm[b, a] = Gm[a, b]
    nul = _nullspace(Gm, p)
    dimN = nul.shape[0]
    if dimN == 0:
        return NOT_FLAT
    Nops = np.zeros((dimN, n2, n2), dtype=np.int64)
    cur = np.zeros((n2, n2), dtype=np.int64)
    curlead = np.zeros(n2, dtype=np.int64)
    ncur = 0
    for j in range(dimN):
        for k2 in range(n2):
            f = nul[j, k2]
            if f != 0:
                for a in range(n2):
                    for b in range(n2):
                        Nops[j, a, b] += f * Ws[k2, a, b]
        for a in range(n2):
            for b in range(n2):
                Nops[j, a, b] %= p
        u = _matvec(Nops[j], v0, p)
        ncur = _echelon_insert(cur, curlead, ncur, u, p)
    dims = np.zeros(2 * n2 + 2, dtype=np.int64)
    dims[0] = n2
    dims[1] = ncur
    level = 1
    while ncur > 0:
        nxt = np.zeros((n2, n2), dtype=np.int64)
        nxtlead = np.zeros(n2, dtype=np.int64)
        nn = 0
        for j in range(dimN):
            for r in range(ncur):
                u = _matvec(Nops[j], cur[r], p)
                nn = _echelon_insert(nxt, nxtlead, nn, u, p)
        level += 1
        dims[level] = nn
        cur = nxt
        curlead = nxtlead
        ncur = nn
    c0 = dims[0] - dims[1]
    c1 = dims[1] - dims[2]
    if c1 != c0:
        return NOT_CURVILINEAR
    total_m = 0
    for m in range(1, d + 1):
        if 2 * m > level + 1:
            break
        cnt = (dims[2 * m - 1] - dims[2 * m]) - (dims[2 * m] - dims[2 * m + 1])
        counts[m] = cnt
        total_m += m * cnt
    if total_m != d:
        return NOT_FLAT
    return OK

