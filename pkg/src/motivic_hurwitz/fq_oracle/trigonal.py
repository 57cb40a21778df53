"""Census of trigonal curves on a Hirzebruch surface, one section of H at a time.

A section is four binary forms (a, b, c, e) of degrees 2e1-e2, e1, e2, 2e2-e1;
over each point t of P^1 it is the binary cubic a X^3 + b X^2 Y + c X Y^2 + e Y^3.
Off the discriminant the fiber is etale.  At each closed point where the
discriminant vanishes the restriction to the second-order neighbourhood is a
cubic over K[eps] with K the residue field, and the curve is smooth there
exactly when that cubic is curvilinear: the multiple root is located with the
Hessian and the eps-part (the t-derivative) must not vanish on it.

A smooth cover has Galois group S3 exactly when some branch point has profile
(2,1): inertia at a (3) point is generated by a 3-cycle, so if all branch
points are of that type the monodromy lies in A3.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

from ..bundles import ResolutionData, SplittingType, aut_ce_class, sheaf_H
from ..errors import ConstraintViolation, OutOfRange, TooLarge, Unsupported
from ..hurwitz_formulas import HurwitzQuery, hurwitz_class
from ..motivic_ring import evaluate
from ..ramification import RamProfile
from .census import _run, sample_chunks
from .fields import check_characteristic, factor_mod_p, require_prime

LIMIT = 10 ** 8
MAX_DISC_DEGREE = 7
SINGULAR = 0
ANOMALY = 1


# residue-field arithmetic: K = F_p[t]/(pi), pi monic of degree k, elements are arrays of length k

@njit(cache=True)
def _kmul(x, y, pi, k, p):
    tmp = np.zeros(2 * k, dtype=np.int64)
    for i in range(k):
        if x[i]:
            for j in range(k):
                tmp[i + j] = (tmp[i + j] + x[i] * y[j]) % p
    for i in range(2 * k - 2, k - 1, -1):
        c = tmp[i]
        if c:
            for j in range(k):
                tmp[i - k + j] = (tmp[i - k + j] - c * pi[j]) % p
    return tmp[:k].copy()


@njit(cache=True)
def _kiszero(x):
    for v in x:
        if v:
            return False
    return True


@njit(cache=True)
def _keval(coef, n, pi, k, p):
    """coef[0..n] evaluated at T = t mod pi."""
    acc = np.zeros(k, dtype=np.int64)
    for i in range(n, -1, -1):
        # acc <- acc * T + coef[i]
        top = acc[k - 1]
        for j in range(k - 1, 0, -1):
            acc[j] = acc[j - 1]
        acc[0] = 0
        if top:
            for j in range(k):
                acc[j] = (acc[j] - top * pi[j]) % p
        acc[0] = (acc[0] + coef[i]) % p
    return acc


@njit(cache=True)
def _kscale(x, s, p):
    return (x * s) % p


@njit(cache=True)
def _kadd(x, y, p):
    return (x + y) % p


@njit(cache=True)
def _ksub(x, y, p):
    return (x - y) % p


@njit(cache=True)
def _cubic_at_point(f0, f1, pi, k, p):
    """Second-order test for the cubic f0 + eps f1 over K (rows a, b, c, e).

    Returns 1 for a (2,1) point, 2 for a (3) point, -1 if the fiber is not curvilinear.
    """
    a, b, c, e = f0[0], f0[1], f0[2], f0[3]
    if _kiszero(a) and _kiszero(b) and _kiszero(c) and _kiszero(e):
        return -1
    # Hessian covariant (up to scalars): alpha X^2 + beta XY + gamma Y^2
    alpha = _ksub(_kmul(b, b, pi, k, p), _kscale(_kmul(a, c, pi, k, p), 3, p), p)
    beta = _ksub(_kmul(b, c, pi, k, p), _kscale(_kmul(a, e, pi, k, p), 9, p), p)
    gamma = _ksub(_kmul(c, c, pi, k, p), _kscale(_kmul(b, e, pi, k, p), 3, p), p)
    one = np.zeros(k, dtype=np.int64)
    one[0] = 1
    zero = np.zeros(k, dtype=np.int64)
    if _kiszero(alpha) and _kiszero(beta) and _kiszero(gamma):
        kind = 2
        if _kiszero(a):
            X0, Y0 = one, zero
        else:
            X0, Y0 = (-b) % p, _kscale(a, 3, p)
    else:
        kind = 1
        if _kiszero(alpha):
            X0, Y0 = one, zero
        else:
            X0, Y0 = (-beta) % p, _kscale(alpha, 2, p)
    X2 = _kmul(X0, X0, pi, k, p)
    Y2 = _kmul(Y0, Y0, pi, k, p)
    v = _kmul(f1[0], _kmul(X2, X0, pi, k, p), pi, k, p)
    v = _kadd(v, _kmul(f1[1], _kmul(X2, Y0, pi, k, p), pi, k, p), p)
    v = _kadd(v, _kmul(f1[2], _kmul(X0, Y2, pi, k, p), pi, k, p), p)
    v = _kadd(v, _kmul(f1[3], _kmul(Y2, Y0, pi, k, p), pi, k, p), p)
    if _kiszero(v):
        return -1
    return kind


# polynomials over F_p as coefficient arrays, low degree first

@njit(cache=True)
def _pdeg(a):
    for i in range(a.shape[0] - 1, -1, -1):
        if a[i]:
            return i
    return -1


@njit(cache=True)
def _pmul(a, b, p):
    out = np.zeros(a.shape[0] + b.shape[0] - 1, dtype=np.int64)
    for i in range(a.shape[0]):
        if a[i]:
            for j in range(b.shape[0]):
                out[i + j] = (out[i + j] + a[i] * b[j]) % p
    return out


@njit(cache=True)
def _padd_into(acc, x, s, p):
    for i in range(x.shape[0]):
        acc[i] = (acc[i] + s * x[i]) % p


@njit(cache=True)
def _inv(x, p):
    r = 1
    e = p - 2
    b = x % p
    while e:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


@njit(cache=True)
def _divides(r, dr, pi, k, p):
    """Remainder of r by the monic pi is zero; r is not modified."""
    t = r[: dr + 1].copy()
    for i in range(dr, k - 1, -1):
        c = t[i]
        if c:
            for j in range(k + 1):
                t[i - k + j] = (t[i - k + j] - c * pi[j]) % p
    for i in range(k):
        if t[i]:
            return False
    return True


@njit(cache=True)
def _divide_out(r, dr, pi, k, p):
    """r / pi in place (exact division); returns the new degree."""
    q = np.zeros(dr - k + 1, dtype=np.int64)
    t = r[: dr + 1].copy()
    for i in range(dr, k - 1, -1):
        c = t[i]
        q[i - k] = c
        if c:
            for j in range(k + 1):
                t[i - k + j] = (t[i - k + j] - c * pi[j]) % p
    for i in range(r.shape[0]):
        r[i] = 0
    for i in range(q.shape[0]):
        r[i] = q[i]
    return dr - k


@njit(cache=True)
def _derivative(x, p):
    out = np.zeros(max(x.shape[0] - 1, 1), dtype=np.int64)
    for i in range(1, x.shape[0]):
        out[i - 1] = i * x[i] % p
    return out


@njit(cache=True)
def _test_point(polys, dpolys, degs, pi, k, p):
    f0 = np.zeros((4, k), dtype=np.int64)
    f1 = np.zeros((4, k), dtype=np.int64)
    for r in range(4):
        f0[r] = _keval(polys[r], degs[r], pi, k, p)
        f1[r] = _keval(dpolys[r], max(degs[r] - 1, 0), pi, k, p)
    return _cubic_at_point(f0, f1, pi, k, p)


@njit(cache=True)
def _classify_section(polys, degs, nominal, D, p, quads, cubics):
    """(status, n21, n3): status 0 singular, 1 smooth; n21, n3 count geometric branch points."""
    a = polys[0, : degs[0] + 1]
    b = polys[1, : degs[1] + 1]
    c = polys[2, : degs[2] + 1]
    e = polys[3, : degs[3] + 1]
    b2 = _pmul(b, b, p)
    c2 = _pmul(c, c, p)
    disc = np.zeros(D + 1, dtype=np.int64)
    _padd_into(disc, _pmul(b2, c2, p), 1, p)
    _padd_into(disc, _pmul(a, _pmul(c2, c, p), p), -4, p)
    _padd_into(disc, _pmul(_pmul(b2, b, p), e, p), -4, p)
    _padd_into(disc, _pmul(_pmul(a, a, p), _pmul(e, e, p), p), -27, p)
    _padd_into(disc, _pmul(_pmul(a, b, p), _pmul(c, e, p), p), 18, p)
    dd = _pdeg(disc)
    if dd < 0:
        return 0, 0, 0
    dpolys = np.zeros_like(polys)
    for r in range(4):
        der = _derivative(polys[r], p)
        for i in range(der.shape[0]):
            dpolys[r, i] = der[i]
    n21 = 0
    n3 = 0
    # the point at infinity, in the coordinate s = 1/t
    if dd < D:
        f0 = np.zeros((4, 1), dtype=np.int64)
        f1 = np.zeros((4, 1), dtype=np.int64)
        for r in range(4):
            n = nominal[r]
            if n >= 0:
                f0[r, 0] = polys[r, n]
            if n >= 1:
                f1[r, 0] = polys[r, n - 1]
        pinf = np.zeros(2, dtype=np.int64)
        pinf[1] = 1
        kind = _cubic_at_point(f0, f1, pinf, 1, p)
        if kind < 0:
            return 0, 0, 0
        if kind == 1:
            n21 += 1
        else:
            n3 += 1
    # finite closed points: strip roots, then quadratic and cubic factors
    rem = disc.copy()
    dr = dd
    lin = np.zeros(2, dtype=np.int64)
    lin[1] = 1
    for x in range(p):
        v = 0
        for i in range(dr, -1, -1):
            v = (v * x + rem[i]) % p
        if v == 0:
            lin[0] = (-x) % p
            kind = _test_point(polys, dpolys, degs, lin, 1, p)
            if kind < 0:
                return 0, 0, 0
            if kind == 1:
                n21 += 1
            else:
                n3 += 1
            while dr >= 1 and _divides(rem, dr, lin, 1, p):
                dr = _divide_out(rem, dr, lin, 1, p)
    if dr >= 4:
        for qi in range(quads.shape[0]):
            if dr < 2:
                break
            pi = quads[qi]
            if _divides(rem, dr, pi, 2, p):
                kind = _test_point(polys, dpolys, degs, pi, 2, p)
                if kind < 0:
                    return 0, 0, 0
                if kind == 1:
                    n21 += 2
                else:
                    n3 += 2
                while dr >= 2 and _divides(rem, dr, pi, 2, p):
                    dr = _divide_out(rem, dr, pi, 2, p)
    if dr >= 6:
        for ci in range(cubics.shape[0]):
            if dr < 3:
                break
            pi = cubics[ci]
            if _divides(rem, dr, pi, 3, p):
                kind = _test_point(polys, dpolys, degs, pi, 3, p)
                if kind < 0:
                    return 0, 0, 0
                if kind == 1:
                    n21 += 3
                else:
                    n3 += 3
                while dr >= 3 and _divides(rem, dr, pi, 3, p):
                    dr = _divide_out(rem, dr, pi, 3, p)
    if dr >= 1:
        # what is left has no factor of degree < dr/2 + 1, so it is irreducible
        pi = np.zeros(dr + 1, dtype=np.int64)
        inv = _inv(rem[dr], p)
        for i in range(dr + 1):
            pi[i] = rem[i] * inv % p
        kind = _test_point(polys, dpolys, degs, pi, dr, p)
        if kind < 0:
            return 0, 0, 0
        if kind == 1:
            n21 += dr
        else:
            n3 += dr
    return 1, n21, n3


@njit(cache=True)
def _tally(polys, degs, nominal, D, p, quads, cubics, hist):
    st, n21, n3 = _classify_section(polys, degs, nominal, D, p, quads, cubics)
    if st == 0:
        hist[SINGULAR] += 1
    elif n21 + 2 * n3 != D:
        hist[ANOMALY] += 1
    else:
        hist[2 + n21 * (D + 1) + n3] += 1


@njit(cache=True)
def _fill(polys, degs, digits):
    pos = 0
    for r in range(4):
        for i in range(degs[r] + 1):
            polys[r, i] = digits[pos]
            pos += 1


@njit(cache=True)
def census_range(start, stop, degs, nominal, D, p, quads, cubics, hist):
    h0 = 0
    for r in range(4):
        h0 += degs[r] + 1
    width = 1
    for r in range(4):
        width = max(width, degs[r] + 1)
    polys = np.zeros((4, width), dtype=np.int64)
    digits = np.zeros(h0, dtype=np.int64)
    for idx in range(start, stop):
        x = idx
        for i in range(h0):
            digits[i] = x % p
            x //= p
        _fill(polys, degs, digits)
        _tally(polys, degs, nominal, D, p, quads, cubics, hist)


@njit(cache=True)
def census_rows(rows, degs, nominal, D, p, quads, cubics, hist):
    width = 1
    for r in range(4):
        width = max(width, degs[r] + 1)
    polys = np.zeros((4, width), dtype=np.int64)
    for k in range(rows.shape[0]):
        _fill(polys, degs, rows[k])
        _tally(polys, degs, nominal, D, p, quads, cubics, hist)


def monic_irreducibles(p: int, k: int) -> np.ndarray:
    """All monic irreducible polynomials of degree k over F_p, as rows (low degree first)."""
    out = []
    for n in range(p ** k):
        coeffs = [(n // p ** i) % p for i in range(k)] + [1]
        facs = factor_mod_p(coeffs, p)
        if len(facs) == 1 and facs[0][1] == 1 and len(facs[0][0]) == k + 1:
            out.append(coeffs)
    return np.array(out, dtype=np.int64).reshape(len(out), k + 1)


@dataclass(frozen=True)
class TrigonalLayout:
    E: SplittingType
    nominal: tuple  # nominal degrees of a, b, c, e
    degs: tuple  # array degrees, -1 entries clamped to 0 with zero coefficients
    D: int
    h0: int

    @property
    def genus(self) -> int:
        return self.E.degree - 2


def layout(E) -> TrigonalLayout:
    E = SplittingType.of(*E) if not isinstance(E, SplittingType) else E
    if E.rank != 2:
        raise ConstraintViolation("trigonal census needs E of rank 2")
    e1, e2 = E.degrees
    nominal = (2 * e1 - e2, e1, e2, 2 * e2 - e1)
    H = sheaf_H(ResolutionData(3, E, None))
    assert sorted(nominal) == sorted(H.degrees)
    if min(nominal) < 0:
        # a vanishes identically: every fiber contains Y = 0, so C has the section as a component
        raise ConstraintViolation(f"E={E}: H has a negative summand, no smooth connected members")
    D = 2 * (e1 + e2)
    if D > MAX_DISC_DEGREE:
        raise Unsupported(f"discriminant degree {D} > {MAX_DISC_DEGREE}")
    return TrigonalLayout(E, nominal, nominal, D, sum(n + 1 for n in nominal))


def has_fixed_component(E) -> bool:
    """True when the X^3 coefficient of every section vanishes, so Y = 0 splits off."""
    e1, e2 = (E.degrees if isinstance(E, SplittingType) else tuple(sorted(E)))
    return 2 * e1 - e2 < 0


@dataclass
class TrigonalCensus:
    q: int
    E: SplittingType
    mode: str
    sections: int
    singular: int
    anomalies: int
    smooth: dict  # (n21, n3) -> count
    seed: int | None = None

    @property
    def smooth_total(self) -> int:
        return sum(self.smooth.values())

    @property
    def smooth_s3(self) -> int:
        return sum(v for (n21, _), v in self.smooth.items() if n21 > 0)

    @property
    def smooth_density(self) -> tuple[float, float]:
        n = self.sections
        ph = self.smooth_total / n
        return ph, math.sqrt(ph * (1 - ph) / n)

    def groupoid_count(self) -> Fraction:
        rd = ResolutionData(3, self.E, None)
        return Fraction(self.smooth_s3) / evaluate(aut_ce_class(rd), self.q)

    def records(self) -> list[dict]:
        out = []
        for (n21, n3), v in sorted(self.smooth.items()):
            out.append({
                "profile": f"{n21}x{RamProfile((2, 1))}+{n3}x{RamProfile((3,))}",
                "count": v,
                "s3": n21 > 0,
            })
        out.append({"profile": "singular", "count": self.singular})
        return out


def _decode(hist: np.ndarray, D: int) -> dict:
    smooth = {}
    for code in np.nonzero(hist[2:])[0]:
        n21, n3 = divmod(int(code), D + 1)
        smooth[(n21, n3)] = int(hist[2 + code])
    return smooth


def _tables(p: int):
    return monic_irreducibles(p, 2), monic_irreducibles(p, 3)


def _range_worker(args):
    start, stop, degs, D, p = args
    quads, cubics = _tables(p)
    hist = np.zeros(2 + (D + 1) ** 2, dtype=np.int64)
    arr = np.array(degs, dtype=np.int64)
    census_range(start, stop, arr, arr, D, p, quads, cubics, hist)
    return hist


def _sample_worker(args):
    seed, k, n, degs, D, p, h0 = args
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))
    rows = rng.integers(0, p, size=(n, h0), dtype=np.int64)
    quads, cubics = _tables(p)
    hist = np.zeros(2 + (D + 1) ** 2, dtype=np.int64)
    arr = np.array(degs, dtype=np.int64)
    census_rows(rows, arr, arr, D, p, quads, cubics, hist)
    return hist


def classify_trigonal_section(q: int, E, coeffs) -> tuple[bool, int, int]:
    """(smooth, n21, n3) for one section given as the concatenated coefficients of a, b, c, e."""
    check_characteristic(q, 3)
    p = require_prime(q)
    lay = layout(E)
    if len(coeffs) != lay.h0:
        raise ConstraintViolation(f"E={lay.E} needs {lay.h0} coefficients")
    quads, cubics = _tables(p)
    degs = np.array(lay.degs, dtype=np.int64)
    polys = np.zeros((4, max(lay.degs) + 1), dtype=np.int64)
    _fill(polys, degs, np.array(coeffs, dtype=np.int64) % p)
    st, n21, n3 = _classify_section(polys, degs, degs, lay.D, p, quads, cubics)
    return bool(st), int(n21), int(n3)


def trigonal_census(q: int, E, mode: str = "exhaustive", seed: int = 0, samples: int = 100000) -> TrigonalCensus:
    check_characteristic(q, 3)
    p = require_prime(q)
    if q not in (5, 7):
        raise Unsupported("trigonal census is set up for q in (5, 7)")
    lay = layout(E)
    size = 2 + (lay.D + 1) ** 2
    if mode == "exhaustive":
        total = p ** lay.h0
        if total > LIMIT:
            raise TooLarge(f"{q}^{lay.h0} sections exceeds the enumeration limit")
        step = max(-(-total // 16), 1)
        jobs = [(s, min(s + step, total), lay.degs, lay.D, p) for s in range(0, total, step)]
        hist = _run(_range_worker, jobs, size)
        return TrigonalCensus(q, lay.E, mode, total, int(hist[SINGULAR]), int(hist[ANOMALY]),
                              _decode(hist, lay.D))
    if mode == "sample":
        if samples <= 0:
            raise OutOfRange("need a positive sample count")
        jobs = [(seed, k, n, lay.degs, lay.D, p, lay.h0) for k, n in sample_chunks(samples)]
        hist = _run(_sample_worker, jobs, size)
        return TrigonalCensus(q, lay.E, mode, samples, int(hist[SINGULAR]), int(hist[ANOMALY]),
                              _decode(hist, lay.D), seed)
    raise ConstraintViolation(f"unknown mode {mode!r}")


def irreducible_count(q: int, m: int) -> int:
    """Monic irreducible polynomials of degree m over F_q."""
    from sympy import divisors, mobius

    return sum(int(mobius(m // k)) * q ** k for k in divisors(m)) // m


def closed_points_P1(q: int, m: int) -> int:
    return q + 1 if m == 1 else irreducible_count(q, m)


def local_smooth_density(Q: int) -> Fraction:
    """Share of sections of H over the second-order neighbourhood of a point with residue field F_Q
    whose cubic is curvilinear."""
    unit = Fraction((Q ** 2 - 1) * (Q ** 2 - Q) * Q ** 4, Q ** 8)
    return unit * sum(Fraction(1, Q ** r) for r in (0, 1, 2))


def truncated_local_product(q: int, max_degree: int = 3) -> float:
    out = 1.0
    for m in range(1, max_degree + 1):
        out *= float(local_smooth_density(q ** m)) ** closed_points_P1(q, m)
    return out


def predicted_groupoid_count(q: int, g: int) -> Fraction:
    return evaluate(hurwitz_class(HurwitzQuery.full(3, g)).closed_form, q)
