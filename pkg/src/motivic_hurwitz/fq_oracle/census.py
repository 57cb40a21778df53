"""Local censuses of dual-numbers sections: exhaustive for d=3, sampled for d=4,5."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

from ..bundles import aut_ce_class_over_D, h0_D
from ..errors import OutOfRange
from ..ramification import RamProfile, partitions_of
from .fields import check_characteristic, require_prime
from .kernels import classify_core
from .sections import H0_D, NVARS, gens_conics, gens_cubic, gens_pfaffians, tables

CHUNK = 20000
STATUS_NAMES = {1: "not_flat", 2: "not_curvilinear", 3: "no_unit_form"}
ALLOWED_Q = {3: (5, 7), 4: (5, 7), 5: (7, 11, 13)}


def workers() -> int:
    try:
        return max(1, int(os.environ.get("MH_WORKERS", "1")))
    except ValueError:
        return 1


@njit(cache=True)
def _code(d, status, counts):
    base = d + 1
    c = 0
    w = 1
    for m in range(1, d + 1):
        c += counts[m] * w
        w *= base
    return status * w + c


@njit(cache=True)
def _classify_one(d, sec, p, mul2to3, sq_idx, M2, M3, counts):
    if d == 3:
        ga, gb = gens_cubic(sec, p)
        return classify_core(ga, gb, 3, 2, d, p, mul2to3, sq_idx, M2, M3, counts)
    if d == 4:
        ga, gb = gens_conics(sec, p)
        return classify_core(ga, gb, 2, 3, d, p, mul2to3, sq_idx, M2, M3, counts)
    ga, gb = gens_pfaffians(sec, p, sq_idx)
    return classify_core(ga, gb, 2, 4, d, p, mul2to3, sq_idx, M2, M3, counts)


@njit(cache=True)
def classify_rows(d, secs, p, mul2to3, sq_idx, M2, M3, hist):
    counts = np.zeros(d + 1, dtype=np.int64)
    for k in range(secs.shape[0]):
        st = _classify_one(d, secs[k], p, mul2to3, sq_idx, M2, M3, counts)
        if st != 0:
            for m in range(d + 1):
                counts[m] = 0
        hist[_code(d, st, counts)] += 1


@njit(cache=True)
def classify_range(d, p, start, stop, mul2to3, sq_idx, M2, M3, hist):
    """Every section whose base-p digit string (h0 digits) encodes an index in [start, stop)."""
    h0 = 8 if d == 3 else (24 if d == 4 else 80)
    sec = np.zeros(h0, dtype=np.int64)
    counts = np.zeros(d + 1, dtype=np.int64)
    for idx in range(start, stop):
        x = idx
        for i in range(h0):
            sec[i] = x % p
            x //= p
        st = _classify_one(d, sec, p, mul2to3, sq_idx, M2, M3, counts)
        if st != 0:
            for m in range(d + 1):
                counts[m] = 0
        hist[_code(d, st, counts)] += 1


def hist_size(d: int) -> int:
    return 4 * (d + 1) ** d


def decode(d: int, hist: np.ndarray) -> tuple[dict, dict]:
    """Histogram -> ({RamProfile: count}, {status name: count})."""
    profiles: dict = {}
    rejects: dict = {}
    base = d + 1
    w = base ** d
    for code in np.nonzero(hist)[0]:
        n = int(hist[code])
        status, rest = divmod(int(code), w)
        if status:
            rejects[STATUS_NAMES[status]] = rejects.get(STATUS_NAMES[status], 0) + n
            continue
        parts = []
        for m in range(1, d + 1):
            rest, c = divmod(rest, base)
            parts += [m] * c
        R = RamProfile(tuple(parts))
        profiles[R] = profiles.get(R, 0) + n
    return profiles, rejects


def classify_array(d: int, secs: np.ndarray, p: int) -> np.ndarray:
    t = tables(NVARS[d])
    hist = np.zeros(hist_size(d), dtype=np.int64)
    classify_rows(d, np.ascontiguousarray(secs, dtype=np.int64), p, t.mul2to3, t.sq_idx, t.M2, t.M3, hist)
    return hist


def predicted_density(d: int, q: int, R: RamProfile) -> Fraction:
    return aut_ce_class_over_D(d).evaluate(q) / Fraction(q) ** (R.ram_order + h0_D(d))


@dataclass
class ExactCensus:
    d: int
    q: int
    counts: dict
    rejects: dict
    total: int

    def predicted(self, R: RamProfile) -> int:
        val = predicted_density(self.d, self.q, R) * self.q ** h0_D(self.d)
        assert val.denominator == 1
        return int(val)

    def records(self) -> list[dict]:
        out = []
        for R in sorted(partitions_of(self.d), key=lambda R: (R.ram_order, R.parts)):
            c = self.counts.get(R, 0)
            pr = self.predicted(R)
            out.append({"profile": str(R), "count": c, "predicted": pr, "ratio": str(Fraction(c, pr))})
        return out


def _range_worker(args):
    d, p, start, stop = args
    t = tables(NVARS[d])
    hist = np.zeros(hist_size(d), dtype=np.int64)
    classify_range(d, p, start, stop, t.mul2to3, t.sq_idx, t.M2, t.M3, hist)
    return hist


def _run(fn, jobs, size):
    nw = workers()
    total = np.zeros(size, dtype=np.int64)
    if nw > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=nw) as ex:
            for h in ex.map(fn, jobs):
                total += h
    else:
        for job in jobs:
            total += fn(job)
    return total


def local_census_d3(q: int) -> ExactCensus:
    """All q^8 binary cubics over the dual numbers, tallied by profile."""
    check_characteristic(q, 3)
    p = require_prime(q)
    total = p ** 8
    step = max(total // 16, 1)
    jobs = [(3, p, s, min(s + step, total)) for s in range(0, total, step)]
    hist = _run(_range_worker, jobs, hist_size(3))
    counts, rejects = decode(3, hist)
    return ExactCensus(3, q, counts, rejects, total)


@dataclass
class SampledCensus:
    d: int
    q: int
    samples: int
    seed: int
    counts: dict
    rejects: dict

    def estimate(self, R: RamProfile) -> tuple[float, float]:
        n = self.samples
        k = self.counts.get(R, 0)
        phat = k / n
        return phat, math.sqrt(max(phat * (1 - phat), 0.0) / n)

    def predicted(self, R: RamProfile) -> float:
        return float(predicted_density(self.d, self.q, R))

    def z_score(self, R: RamProfile) -> float:
        """(observed - predicted) / binomial stderr under the prediction."""
        p0 = self.predicted(R)
        se = math.sqrt(p0 * (1 - p0) / self.samples)
        return (self.counts.get(R, 0) / self.samples - p0) / se

    def ratio(self, R: RamProfile) -> tuple[float, float]:
        """density(R)/density(1^d) with a delta-method standard error."""
        base = RamProfile((1,) * self.d)
        n = self.samples
        k1 = self.counts.get(R, 0)
        k0 = self.counts.get(base, 0)
        if k0 == 0:
            return float("nan"), float("nan")
        r = k1 / k0
        var = r * r * ((1 / k1 if k1 else 0.0) + 1 / k0 - 2 / n) if k1 else 0.0
        return r, math.sqrt(max(var, 0.0))

    def records(self) -> list[dict]:
        out = []
        for R in sorted(partitions_of(self.d), key=lambda R: (R.ram_order, R.parts)):
            est, se = self.estimate(R)
            r, rse = self.ratio(R)
            out.append({
                "profile": str(R),
                "count": self.counts.get(R, 0),
                "estimate": est,
                "stderr": se,
                "predicted": self.predicted(R),
                "ratio": r,
                "ratio_stderr": rse,
                "predicted_ratio": float(Fraction(1, self.q ** R.ram_order)),
            })
        return out


def _sample_worker(args):
    d, p, seed, k, size = args
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))
    secs = rng.integers(0, p, size=(size, H0_D[d]), dtype=np.int64)
    return classify_array(d, secs, p)


def sample_chunks(samples: int) -> list[tuple[int, int]]:
    """(chunk index, size) layout; fixed so results do not depend on worker count."""
    out = []
    k = 0
    left = samples
    while left > 0:
        n = min(CHUNK, left)
        out.append((k, n))
        left -= n
        k += 1
    return out


def local_census_mc(d: int, q: int, samples: int, seed: int) -> SampledCensus:
    if d not in (4, 5):
        raise OutOfRange(f"sampled local census is for d in (4, 5), got {d}")
    check_characteristic(q, d)
    p = require_prime(q)
    if samples <= 0:
        raise OutOfRange("need a positive sample count")
    jobs = [(d, p, seed, k, n) for k, n in sample_chunks(samples)]
    hist = _run(_sample_worker, jobs, hist_size(d))
    counts, rejects = decode(d, hist)
    return SampledCensus(d, q, samples, seed, counts, rejects)
