"""Acceptance criteria 1 to 11, each at its stated tolerance and time limit.

Every test records one PASS/FAIL line (see the summary section at the end of
the pytest run) before asserting.
"""
import subprocess
import sys
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from motivic_hurwitz.ekedahl_flags import bsn_class, flag_alternating_sum
from motivic_hurwitz.fq_oracle.binary import count_squarefree_binary, hyperelliptic_groupoid_count
from motivic_hurwitz.fq_oracle.census import local_census_d3, local_census_mc
from motivic_hurwitz.fq_oracle.trigonal import predicted_groupoid_count, trigonal_census, truncated_local_product
from motivic_hurwitz.hurwitz_formulas import (
    FULL_EULER_FACTORS,
    HurwitzQuery,
    default_codim,
    hurwitz_class,
    strata_sum_matches,
    tamagawa_closed_form,
    tamagawa_exact_sum,
    tamagawa_sum,
)
from motivic_hurwitz.motivic_ring import L, ONE, LaurentPoly, evaluate, to_series
from motivic_hurwitz.ramification import (
    AllowableCollection,
    local_mass,
    mass_identity_sides,
    partitions_of,
)


def record(number, ok, detail, *, limit=None, elapsed=None):
    timing = ""
    if elapsed is not None:
        timing = f" [{elapsed:.1f}s" + (f" / limit {limit}s]" if limit else "]")
    ACCEPTANCE_LINES.append(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}{timing}")
    return ok


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_mass_formula():
    with Clock() as c:
        ok = all(lhs == rhs for lhs, rhs in map(mass_identity_sides, range(1, 11)))
    assert record(1, ok and c.elapsed < 1, "mass identity for d = 1..10", limit=1, elapsed=c.elapsed)


def test_euler_factors():
    with Clock() as c:
        ok = all(local_mass(AllowableCollection.full(d)) * LaurentPoly({0: 1, -1: -1}) == FULL_EULER_FACTORS[d]
                 for d in (2, 3, 4, 5))
        ok = ok and FULL_EULER_FACTORS[2] == LaurentPoly({0: 1, -2: -1})
        ok = ok and FULL_EULER_FACTORS[3] == LaurentPoly({0: 1, -3: -1})
    assert record(2, ok and c.elapsed < 1, "(1 - L^-1) * full mass for d = 2..5", limit=1, elapsed=c.elapsed)


def test_closed_forms():
    with Clock() as c:
        bad = []
        for d in (2, 3, 4, 5):
            for g in range(51):
                s = hurwitz_class(HurwitzQuery.simple(d, g)).normalized_series
                if s.anchor != 0 or list(s.coeffs[:3]) != [1, 0, -1]:
                    bad.append((d, g))
        for g in range(51):
            if hurwitz_class(HurwitzQuery.full(2, g)).closed_form != L ** (2 * g + 2) - L ** (2 * g):
                bad.append((2, g, "full"))
            if hurwitz_class(HurwitzQuery.full(3, g)).closed_form != L ** (2 * g + 4) * (ONE + L ** -1) * (ONE - L ** -3):
                bad.append((3, g, "full"))
    ok = not bad and c.elapsed < 1
    assert record(3, ok, f"normalized [1,0,-1] and d=2,3 closed forms for g <= 50 ({len(bad)} mismatches)",
                  limit=1, elapsed=c.elapsed), bad


def test_strata_sum_resummation():
    with Clock() as c:
        bad = []
        for d in (3, 4, 5):
            for g in range(31):
                N = min(10, default_codim(d, g))
                for q in (HurwitzQuery.full(d, g), HurwitzQuery.simple(d, g)):
                    if not strata_sum_matches(q, N):
                        bad.append((d, g, q.collection.label()))
    ok = not bad and c.elapsed < 30
    assert record(4, ok, f"strata sum equals closed form, d = 3..5, g <= 30 ({len(bad)} mismatches)",
                  limit=30, elapsed=c.elapsed), bad


def test_tamagawa_identity():
    with Clock() as c:
        ok = True
        for n, N in ((2, 12), (3, 8)):
            rhs = to_series(tamagawa_closed_form(n), N)
            for delta in range(n):
                ok = ok and tamagawa_sum(n, delta, N).eq_mod_codim(rhs, 1 - n * n, N, inclusive=True)
        closed = evaluate(tamagawa_closed_form(2), 5)
        ok = ok and closed == Fraction(1, 96)
        N = 12
        approx = evaluate(tamagawa_exact_sum(2, 0, N), 5)
        rel = abs(approx / Fraction(1, 96) - 1)
        ok = ok and rel < 2 * Fraction(1, 5 ** N)
    assert record(5, ok and c.elapsed < 10,
                  f"Tamagawa sums (2,12), (3,8), all delta; at L=5 closed form {closed}, truncated sum rel. err {float(rel):.1e}",
                  limit=10, elapsed=c.elapsed)


def test_flag_identities():
    with Clock() as c:
        ok = all(flag_alternating_sum(n) == LaurentPoly.monomial(n - 1, -1) and bsn_class(n) == ONE
                 for n in range(2, 8))
    assert record(6, ok and c.elapsed < 60, "alternating flag sum -L^(n-1) and {BS_n} = 1 for n = 2..7",
                  limit=60, elapsed=c.elapsed)


@pytest.mark.slow
def test_flag_identities_n8():
    ok = flag_alternating_sum(8) == LaurentPoly.monomial(7, -1) and bsn_class(8) == ONE
    assert record(6, ok, "optional n = 8")


def _exact_census(q):
    with Clock() as c:
        census = local_census_d3(q)
        ok = all(census.counts.get(R, 0) == census.predicted(R) for R in partitions_of(3))
        ok = ok and all(census.predicted(R) == (q * q - 1) * (q * q - q) * q ** 4 // q ** R.ram_order
                        for R in partitions_of(3))
    return ok, c.elapsed, census


def test_local_census_exact_q5():
    ok, elapsed, census = _exact_census(5)
    counts = ", ".join(f"{R}: {census.counts.get(R, 0)}" for R in partitions_of(3))
    assert record(7, ok and elapsed < 30, f"d=3 exhaustive census at q=5 ({counts})", limit=30, elapsed=elapsed)


@pytest.mark.slow
def test_local_census_exact_q7():
    ok, elapsed, _ = _exact_census(7)
    assert record(7, ok and elapsed < 600, "d=3 exhaustive census at q=7", limit=600, elapsed=elapsed)


@pytest.mark.slow
@pytest.mark.parametrize("d,q", [(4, 5), (5, 7)])
def test_local_census_sampled(d, q):
    with Clock() as c:
        census = local_census_mc(d, q, 10 ** 6, seed=20240)
    worst = 0.0
    ok = True
    for R in partitions_of(d):
        if R.ram_order == 0:
            continue
        r, se = census.ratio(R)
        target = q ** -R.ram_order
        if census.counts.get(R, 0) == 0:
            # too rare to observe at this sample size: the expected count must be small
            expected = census.predicted(R) * census.samples
            ok = ok and expected < 9
            continue
        z = (r - target) / se
        worst = max(worst, abs(z))
        ok = ok and abs(z) <= 3
    ok = ok and c.elapsed < 300
    assert record(8, ok, f"d={d} q={q}, 10^6 samples, worst |z| of density ratios {worst:.2f}",
                  limit=300, elapsed=c.elapsed)


def test_degree_two_counts():
    with Clock() as c:
        ok = True
        for q in (3, 5):
            for n in range(3, 7):
                ok = ok and count_squarefree_binary(q, n) == q ** (n + 1) - q ** n - q ** (n - 1) + q ** (n - 2)
            ok = ok and count_squarefree_binary(q, 2) == q ** 3 - q ** 2
            for g in (1, 2):
                if q ** (2 * g + 3) <= 2 * 10 ** 6:
                    ok = ok and hyperelliptic_groupoid_count(q, g) == q ** (2 * g + 2) - q ** (2 * g)
    assert record(9, ok and c.elapsed < 5, "square-free binary forms (q = 3, 5; n <= 6) and hyperelliptic counts",
                  limit=5, elapsed=c.elapsed)


@pytest.fixture(scope="module")
def trigonal_exhaustive():
    with Clock() as c:
        census = trigonal_census(5, (1, 2), "exhaustive")
    return census, c.elapsed


@pytest.fixture(scope="module")
def trigonal_sampled():
    return trigonal_census(5, (1, 2), "sample", seed=7, samples=10 ** 5)


@pytest.mark.slow
def test_trigonal_census_report(trigonal_exhaustive, trigonal_sampled):
    census, elapsed = trigonal_exhaustive
    gc = census.groupoid_count()
    pred = predicted_groupoid_count(5, 1)
    deviation = float(gc / pred - 1)
    exact = census.smooth_density[0]
    sampled, se = trigonal_sampled.smooth_density
    z = (sampled - exact) / se
    ok = census.sections == 5 ** 10 and census.anomalies == 0 and abs(z) <= 3 and elapsed < 900
    assert record(
        10, ok,
        f"q=5 E=[1,2]: groupoid smooth S3 count {gc} vs class at 5 {pred} (deviation {deviation:+.3f}); "
        f"sampled density {sampled:.4f} vs exhaustive {exact:.4f} (z {z:+.2f})",
        limit=900, elapsed=elapsed)


@pytest.mark.slow
@pytest.mark.xfail(strict=True, reason="global linear system couples the local conditions; recorded deviation")
def test_trigonal_density_vs_local_product(trigonal_sampled):
    sampled, se = trigonal_sampled.smooth_density
    prod = truncated_local_product(5)
    z = (sampled - prod) / se
    ok = abs(z) <= 3
    record(10, ok, f"sampled density {sampled:.4f} vs truncated local product {prod:.4f} (z {z:+.1f}); "
                   "recorded deviation, expected failure")
    assert ok


PROPERTY_SUITES = [
    "tests/test_motivic_ring.py",
    "tests/test_zeta_euler.py",
    "tests/test_bundles.py",
]


def test_structural_property_suites():
    with Clock() as c:
        proc = subprocess.run(
            [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", "--skip-slow", *PROPERTY_SUITES],
            capture_output=True, text=True, check=False,
            cwd=str(__import__("pathlib").Path(__file__).resolve().parents[1]),
        )
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr[-200:]
    ok = proc.returncode == 0 and c.elapsed < 60
    assert record(11, ok, f"ring, Euler product, cohomology, dimension and codimension suites: {tail}",
                  limit=60, elapsed=c.elapsed), proc.stdout[-2000:]
