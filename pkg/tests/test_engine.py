import itertools
import json

import numpy as np
import pytest

from carpet_wiener import engine
from carpet_wiener.engine import (
    make_table,
    reports_to_json,
    reports_to_tsv,
    sample_pairs,
    validate,
    wiener_both,
    wiener_formula,
    wiener_oracle,
)
from carpet_wiener.metric import distance
from carpet_wiener.words import LevelCapError, iter_words

from conftest import table

PUBLISHED = {1: 8, 2: 320, 3: 31264}


def scalar_total(words):
    return sum(distance(u, v).value for u, v in itertools.combinations(words, 2))


@pytest.mark.parametrize("level", [1, 2, 3])
def test_formula_published_small_levels(level):
    report = wiener_formula(level)
    assert report.wiener == PUBLISHED[level]
    assert report.vertex_count == table(level).count and report.method == "formula"


@pytest.mark.parametrize("level", [1, 2, 3, 4])
def test_formula_equals_scalar_pair_sum(level):
    assert wiener_formula(level).wiener == scalar_total(table(level).words())


def test_small_blocks_do_not_change_the_sum(monkeypatch):
    base = wiener_formula(4).wiener
    monkeypatch.setattr(engine, "PAIRS_PER_BLOCK", 997)
    assert wiener_formula(4).wiener == base
    assert wiener_formula(4, symmetry=True).wiener == wiener_formula(4, symmetry=True).wiener


@pytest.mark.parametrize("workers", [2, 3])
def test_formula_worker_count_level5(workers):
    assert wiener_formula(5, workers).wiener == wiener_formula(5, 1).wiener


@pytest.mark.parametrize("level", [1, 2, 3])
def test_symmetry_flag_small_levels(level):
    assert wiener_formula(level, symmetry=True).wiener == wiener_formula(level).wiener


@pytest.mark.parametrize("level", [1, 2, 3])
def test_engines_agree_small_levels(level):
    r = wiener_both(level)
    assert r.mismatch_count == 0 and r.wiener == r.oracle_wiener == PUBLISHED[level]


def test_monotone_in_level():
    values = [wiener_formula(n).wiener for n in range(1, 6)]
    assert all(a < b for a, b in zip(values, values[1:]))
    oracle = [wiener_oracle(n).wiener for n in range(1, 6)]
    assert all(a < b for a, b in zip(oracle, oracle[1:]))


@pytest.mark.parametrize("level", [2, 3])
def test_dedup_is_necessary(level):
    every_word = scalar_total(list(iter_words(level)))
    assert every_word > wiener_formula(level).wiener


def test_formula_level_cap():
    with pytest.raises(LevelCapError):
        wiener_formula(9)
    with pytest.raises(ValueError):
        wiener_formula(2, worker_count=0)


@pytest.mark.parametrize("level, pairs", [(1, 6), (2, 120), (3, 4560)])
def test_validate_exhaustive_clean_levels(level, pairs):
    r = validate(level)
    assert (r.pairs_checked, r.mismatch_count, r.mismatches) == (pairs, 0, [])
    assert r.ok


def test_validate_level4_counts_every_pair():
    r = validate(4, max_traces=5)
    assert r.pairs_checked == 688 * 687 // 2
    assert len(r.mismatches) == min(5, r.mismatch_count)
    for m in r.mismatches:
        assert m.trace.value == m.formula != m.oracle
        assert m.word1 < m.word2


def test_validate_parallel_matches_serial():
    a = validate(4, max_traces=None)
    b = validate(4, max_traces=None, worker_count=2)
    assert a.mismatch_count == b.mismatch_count
    assert [m.to_dict() for m in a.mismatches] == [m.to_dict() for m in b.mismatches]


def test_validate_caps():
    with pytest.raises(LevelCapError):
        validate(7)
    with pytest.raises(LevelCapError):
        validate(7, "sample", sample_size=10)
    with pytest.raises(ValueError):
        validate(3, "sample")
    with pytest.raises(ValueError):
        validate(3, "bogus")


def test_sample_pairs_deterministic_and_distinct():
    a = sample_pairs(100, 5000, seed=42)
    b = sample_pairs(100, 5000, seed=42)
    c = sample_pairs(100, 5000, seed=43)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert not np.array_equal(a[0], c[0])
    assert (a[0] < a[1]).all() and a[1].max() < 100


def test_validate_sample_clean_level3():
    r = validate(3, "sample", sample_size=2000, seed=7)
    assert (r.pairs_checked, r.mismatch_count, r.seed) == (2000, 0, 7)


def test_validate_sample_reproducible_level5():
    a = validate(5, "sample", sample_size=20_000, seed=42, max_traces=None)
    b = validate(5, "sample", sample_size=20_000, seed=42, max_traces=None)
    assert a.to_dict() == b.to_dict()


def test_sampled_mismatches_are_a_subset_of_exhaustive():
    full = validate(4, max_traces=None)
    bad = {(str(m.word1), str(m.word2)) for m in full.mismatches}
    sample = validate(4, "sample", sample_size=50_000, seed=3, max_traces=None)
    assert {(str(m.word1), str(m.word2)) for m in sample.mismatches} <= bad


def test_make_table_single_row():
    rows = make_table(1)
    assert [r.wiener for r in rows] == [8]


def test_make_table_cross_checks():
    rows = make_table(3)
    assert [r.wiener for r in rows] == [8, 320, 31264]
    assert all(r.method == "both" and r.oracle_wiener == r.wiener for r in rows)
    rows = make_table(3, cross_check_up_to=1)
    assert [r.method for r in rows] == ["both", "formula", "formula"]


def test_report_serialisation():
    rows = make_table(2, cross_check_up_to=0)
    data = json.loads(reports_to_json(rows))
    assert [d["wiener"] for d in data] == [8, 320]
    tsv = reports_to_tsv(rows, timing=False)
    lines = [line.split("\t") for line in tsv.splitlines()]
    assert [c.strip() for c in lines[0]] == ["level", "vertices", "wiener", "method"]
    assert [c.strip() for c in lines[2]] == ["2", "16", "320", "formula"]
    assert len(reports_to_tsv(rows).splitlines()[0].split("\t")) == 5


def test_default_workers(monkeypatch):
    monkeypatch.delenv("CARPET_WORKERS", raising=False)
    assert engine.default_workers() == 1
    monkeypatch.setenv("CARPET_WORKERS", "3")
    assert engine.default_workers() == 3
    monkeypatch.setenv("CARPET_WORKERS", "zero")
    with pytest.raises(ValueError):
        engine.default_workers()
