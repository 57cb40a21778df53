import os
from fractions import Fraction

import pytest

from motivic_hurwitz.bundles import aut_ce_class_over_D, gl_class, sl_class
from motivic_hurwitz.errors import BadCharacteristic, OutOfRange
from motivic_hurwitz.fq_oracle import census
from motivic_hurwitz.fq_oracle.census import (
    CHUNK,
    classify_array,
    decode,
    local_census_mc,
    predicted_density,
    sample_chunks,
)
from motivic_hurwitz.motivic_ring import evaluate
from motivic_hurwitz.ramification import RamProfile, partitions_of


def _run_with_workers(n, fn, *args):
    old = os.environ.get("MH_WORKERS")
    os.environ["MH_WORKERS"] = str(n)
    try:
        return fn(*args)
    finally:
        if old is None:
            del os.environ["MH_WORKERS"]
        else:
            os.environ["MH_WORKERS"] = old


def test_chunk_layout():
    assert sample_chunks(1) == [(0, 1)]
    assert sample_chunks(2 * CHUNK + 5) == [(0, CHUNK), (1, CHUNK), (2, 5)]


@pytest.mark.parametrize("d,q", [(4, 5), (5, 7)])
def test_sampled_census_independent_of_workers(d, q):
    a = _run_with_workers(1, local_census_mc, d, q, 2 * CHUNK + 300, 11)
    b = _run_with_workers(2, local_census_mc, d, q, 2 * CHUNK + 300, 11)
    assert a.counts == b.counts and a.rejects == b.rejects


@pytest.mark.parametrize("d,q", [(4, 5), (4, 7), (5, 7)])
def test_sampled_census_sum_rule(d, q):
    c = local_census_mc(d, q, 5000, 3)
    assert sum(c.counts.values()) + sum(c.rejects.values()) == c.samples
    assert set(c.counts) <= set(partitions_of(d))


def test_seeds_change_the_sample():
    a = local_census_mc(4, 5, 3000, 1)
    b = local_census_mc(4, 5, 3000, 2)
    assert a.counts != b.counts


def test_predicted_density_d4():
    # (q-1) q |SL_3| q^8 |SL_2| q^3 / q^24 at q = 5
    q = 5
    sl3 = evaluate(sl_class(3), q)
    sl2 = evaluate(sl_class(2), q)
    assert sl3 == 372000 and sl2 == 120
    expected = Fraction((q - 1) * q * sl3 * q ** 8 * sl2 * q ** 3, q ** 24)
    assert predicted_density(4, q, RamProfile((1,) * 4)) == expected
    assert predicted_density(4, q, RamProfile.of(2, 1, 1)) == expected / q


def test_predicted_density_sums_below_one():
    for d, q in [(3, 5), (4, 5), (5, 7)]:
        total = sum(predicted_density(d, q, R) for R in partitions_of(d))
        assert 0 < total < 1


def test_gl_point_counts():
    assert evaluate(gl_class(2), 5) == 480
    assert evaluate(aut_ce_class_over_D(3), 5) == 480 * 625


def test_classify_array_matches_decode_total():
    import numpy as np
    rng = np.random.default_rng(0)
    secs = rng.integers(0, 5, size=(500, 8))
    hist = classify_array(3, secs, 5)
    counts, rejects = decode(3, hist)
    assert sum(counts.values()) + sum(rejects.values()) == 500


def test_census_errors():
    with pytest.raises(OutOfRange):
        local_census_mc(3, 5, 100, 0)
    with pytest.raises(BadCharacteristic):
        local_census_mc(5, 5, 100, 0)
    with pytest.raises(OutOfRange):
        local_census_mc(4, 5, 0, 0)


def test_workers_env_parsing(monkeypatch):
    monkeypatch.setenv("MH_WORKERS", "3")
    assert census.workers() == 3
    monkeypatch.setenv("MH_WORKERS", "zero")
    assert census.workers() == 1
    monkeypatch.setenv("MH_WORKERS", "-2")
    assert census.workers() == 1
