"""Wiener index of the carpet graphs: case formula, BFS oracle, and their comparison."""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .metric import DistanceTrace, PairMetric, distance
from .oracle import (
    DEFAULT_ORACLE_MAX_LEVEL,
    AdjacencyGraph,
    build_graph,
    distance_rows,
    oracle_wiener,
    symmetry_orbits,
)
from .words import (
    DEFAULT_MAX_LEVEL,
    LatticePoint,
    LevelCapError,
    VertexTable,
    Word,
    build_vertex_table,
    side_length,
)

__all__ = [
    "WienerReport",
    "Mismatch",
    "ValidationReport",
    "wiener_formula",
    "wiener_oracle",
    "wiener_both",
    "validate",
    "make_table",
    "reports_to_json",
    "reports_to_tsv",
    "default_workers",
]

log = logging.getLogger(__name__)

PAIRS_PER_BLOCK = 1_000_000
PROGRESS_EVERY = 50_000_000


def default_workers() -> int:
    """Worker count from ``CARPET_WORKERS``, else 1."""
    value = os.environ.get("CARPET_WORKERS", "1")
    try:
        workers = int(value)
    except ValueError:
        raise ValueError(f"CARPET_WORKERS must be a positive integer, got {value!r}") from None
    if workers < 1:
        raise ValueError(f"CARPET_WORKERS must be a positive integer, got {value!r}")
    return workers


@dataclass
class WienerReport:
    level: int
    vertex_count: int
    wiener: int
    method: str  # formula | oracle | both
    elapsed: float
    mismatch_count: int | None = None
    oracle_wiener: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Mismatch:
    word1: Word
    word2: Word
    formula: int
    oracle: int
    trace: DistanceTrace

    def to_dict(self) -> dict:
        return {
            "word1": str(self.word1),
            "word2": str(self.word2),
            "formula": self.formula,
            "oracle": self.oracle,
            "trace": self.trace.to_dict(),
        }


@dataclass
class ValidationReport:
    level: int
    mode: str
    pairs_checked: int
    mismatch_count: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return self.mismatch_count == 0

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "mode": self.mode,
            "seed": self.seed,
            "pairs_checked": self.pairs_checked,
            "mismatch_count": self.mismatch_count,
            "mismatches": [m.to_dict() for m in self.mismatches],
        }


# ---------------------------------------------------------------------------
# formula engine

_worker_metric: PairMetric | None = None


def _init_metric(metric: PairMetric) -> None:
    global _worker_metric
    _worker_metric = metric


def _block_sum(task: tuple) -> int:
    """Sum over one row range; ``weights`` switches to full weighted rows."""
    kind, start, stop, weights = task
    metric = _worker_metric
    if kind == "triangle":
        block = metric.row_block(start, stop, col_start=start)
        # drop the diagonal and everything left of it
        cols = np.arange(block.shape[1])
        rows = np.arange(stop - start)[:, None]
        return int(block.sum(where=cols > rows, dtype=np.int64))
    rows = metric.block(weights[0][start:stop])
    return int((rows.sum(axis=1, dtype=np.int64) * weights[1][start:stop]).sum())


def _row_ranges(count: int, triangle: bool) -> list[tuple[int, int]]:
    """Contiguous row ranges of roughly PAIRS_PER_BLOCK pairs each."""
    ranges = []
    start = 0
    while start < count:
        width = count - start if triangle else count
        rows = max(1, PAIRS_PER_BLOCK // max(width, 1))
        stop = min(count, start + rows)
        ranges.append((start, stop))
        start = stop
    return ranges


def _run(tasks: list, metric: PairMetric, workers: int, pair_counts: list[int]) -> int:
    total = 0
    done = 0
    next_report = PROGRESS_EVERY

    def account(part: int, pairs: int) -> None:
        nonlocal total, done, next_report
        total += part
        done += pairs
        if done >= next_report:
            log.info("level %d: %d pairs summed", metric.level, done)
            next_report += PROGRESS_EVERY

    if workers <= 1:
        _init_metric(metric)
        for task, pairs in zip(tasks, pair_counts):
            account(_block_sum(task), pairs)
    else:
        with ProcessPoolExecutor(workers, initializer=_init_metric, initargs=(metric,)) as ex:
            # map yields in submission order: the reduction order is fixed
            for part, pairs in zip(ex.map(_block_sum, tasks), pair_counts):
                account(part, pairs)
    return total


def _formula_total(table: VertexTable, workers: int, symmetry: bool) -> int:
    metric = PairMetric(table)
    n = table.count
    if not symmetry:
        ranges = _row_ranges(n, triangle=True)
        tasks = [("triangle", a, b, None) for a, b in ranges]
        pairs = [(b - a) * (2 * n - a - b - 1) // 2 for a, b in ranges]
        return _run(tasks, metric, workers, pairs)

    reps, sizes = symmetry_orbits(table.points, side_length(table.level))
    weights = (reps, sizes.astype(np.int64))
    ranges = _row_ranges(len(reps), triangle=False)
    tasks = [("weighted", a, b, weights) for a, b in ranges]
    pairs = [(b - a) * n for a, b in ranges]
    twice = _run(tasks, metric, workers, pairs)
    if twice % 2:
        # only possible when the distance rule is not invariant under the symmetry group
        log.warning("level %d: symmetric formula sum %d is odd", table.level, twice)
    return twice // 2


def wiener_formula(
    level: int,
    worker_count: int = 1,
    symmetry: bool = False,
    max_level: int = DEFAULT_MAX_LEVEL,
) -> WienerReport:
    """W(Γn) by summing the case formula over all pairs of canonical words."""
    if worker_count < 1:
        raise ValueError("worker_count must be >= 1")
    t0 = time.perf_counter()
    table = build_vertex_table(level, max_level=max_level)
    total = _formula_total(table, worker_count, symmetry)
    return WienerReport(level, table.count, total, "formula", time.perf_counter() - t0)


def wiener_oracle(
    level: int,
    worker_count: int = 1,
    symmetry: bool = False,
    max_level: int = DEFAULT_ORACLE_MAX_LEVEL,
) -> WienerReport:
    t0 = time.perf_counter()
    g = build_graph(level, max_level=max_level)
    total = oracle_wiener(g, workers=worker_count, symmetry=symmetry)
    return WienerReport(level, g.count, total, "oracle", time.perf_counter() - t0)


def wiener_both(
    level: int,
    worker_count: int = 1,
    max_level: int = DEFAULT_ORACLE_MAX_LEVEL,
) -> WienerReport:
    """Both totals plus the number of vertex pairs on which the engines differ."""
    t0 = time.perf_counter()
    report, totals = _exhaustive(level, worker_count, max_level, max_traces=0)
    formula_total, oracle_total, count = totals
    return WienerReport(
        level=level,
        vertex_count=count,
        wiener=formula_total,
        method="both",
        elapsed=time.perf_counter() - t0,
        mismatch_count=report.mismatch_count,
        oracle_wiener=oracle_total,
    )


# ---------------------------------------------------------------------------
# validation


def _oracle_order(table: VertexTable, g: AdjacencyGraph) -> np.ndarray:
    """Graph vertex id of each table row."""
    return np.array(
        [g.point_index[LatticePoint(int(x), int(y))] for x, y in table.points], dtype=np.intp
    )


_worker_pair: tuple[PairMetric, AdjacencyGraph, np.ndarray] | None = None


def _init_pair(metric: PairMetric, g: AdjacencyGraph, order: np.ndarray) -> None:
    global _worker_pair
    _worker_pair = (metric, g, order)


def _compare_block(bounds: tuple[int, int]):
    """Formula sum, oracle sum and mismatching pairs for the upper triangle of a row range."""
    start, stop = bounds
    metric, g, order = _worker_pair
    formula = metric.row_block(start, stop, col_start=start)
    oracle = distance_rows(g, order[start:stop])[:, order[start:]].astype(np.int64)
    upper = np.arange(formula.shape[1])[None, :] > np.arange(stop - start)[:, None]
    bad_r, bad_c = np.nonzero(upper & (formula != oracle))
    return (
        int(formula.sum(where=upper)),
        int(oracle.sum(where=upper)),
        bad_r + start,
        bad_c + start,
        formula[bad_r, bad_c],
        oracle[bad_r, bad_c],
    )


def _collect(report, table, rows, cols, formula, oracle, max_traces) -> None:
    bad = np.nonzero(formula != oracle)[0]
    report.mismatch_count += len(bad)
    room = len(bad) if max_traces is None else max(0, max_traces - len(report.mismatches))
    for k in bad[:room]:
        w1, w2 = table.word(int(rows[k])), table.word(int(cols[k]))
        report.mismatches.append(
            Mismatch(w1, w2, int(formula[k]), int(oracle[k]), distance(w1, w2))
        )


def _exhaustive(level: int, workers: int, max_level: int, max_traces: int | None):
    if level > max_level:
        raise LevelCapError(f"level {level} exceeds the oracle cap {max_level}")
    table = build_vertex_table(level)
    g = build_graph(level, max_level=max_level)
    metric = PairMetric(table)
    order = _oracle_order(table, g)
    n = table.count
    report = ValidationReport(level, "exhaustive", n * (n - 1) // 2)
    ranges = _row_ranges(n, triangle=True)
    formula_total = oracle_total = 0

    def absorb(result) -> None:
        nonlocal formula_total, oracle_total
        f_sum, o_sum, rows, cols, f, o = result
        formula_total += f_sum
        oracle_total += o_sum
        _collect(report, table, rows, cols, f, o, max_traces)

    if workers <= 1:
        _init_pair(metric, g, order)
        for bounds in ranges:
            absorb(_compare_block(bounds))
    else:
        with ProcessPoolExecutor(workers, initializer=_init_pair, initargs=(metric, g, order)) as ex:
            for result in ex.map(_compare_block, ranges):
                absorb(result)
    return report, (formula_total, oracle_total, n)


def validate(
    level: int,
    mode: str = "exhaustive",
    sample_size: int | None = None,
    seed: int = 0,
    max_traces: int | None = None,
    worker_count: int = 1,
    max_level: int = DEFAULT_ORACLE_MAX_LEVEL,
) -> ValidationReport:
    """Compare formula and BFS distances pair by pair.

    ``mode="sample"`` draws ``sample_size`` pairs of distinct canonical
    vertices with ``numpy.random.default_rng(seed)``; the same seed always
    yields the same pairs.  At most ``max_traces`` mismatches keep a full
    trace; ``mismatch_count`` is always complete.
    """
    if mode == "exhaustive":
        return _exhaustive(level, worker_count, max_level, max_traces)[0]
    if mode != "sample":
        raise ValueError(f"unknown validation mode {mode!r}")
    if not sample_size or sample_size < 1:
        raise ValueError("sample mode needs sample_size >= 1")
    if level > max_level:
        raise LevelCapError(f"level {level} exceeds the oracle cap {max_level}")

    table = build_vertex_table(level)
    n = table.count
    report = ValidationReport(level, "sample", sample_size, seed=seed)
    if n < 2:
        return report
    rows, cols = sample_pairs(n, sample_size, seed)
    g = build_graph(level, max_level=max_level)
    metric = PairMetric(table)
    order = _oracle_order(table, g)

    by_row = np.argsort(rows, kind="stable")
    rows, cols = rows[by_row], cols[by_row]
    sources, first = np.unique(rows, return_index=True)
    bounds = np.append(first, len(rows))
    per_chunk = max(1, 4_000_000 // n)
    for s in range(0, len(sources), per_chunk):
        chunk = sources[s:s + per_chunk]
        lo, hi = bounds[s], bounds[min(s + per_chunk, len(sources))]
        dist = distance_rows(g, order[chunk])
        local = np.searchsorted(chunk, rows[lo:hi])
        oracle = dist[local, order[cols[lo:hi]]].astype(np.int64)
        formula = metric.distances(rows[lo:hi], cols[lo:hi])
        _collect(report, table, rows[lo:hi], cols[lo:hi], formula, oracle, max_traces)
    return report


def sample_pairs(count: int, size: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """``size`` seeded pairs ``(i, j)`` with ``i < j`` over ``count`` vertices."""
    rng = np.random.default_rng(seed)
    i = rng.integers(0, count, size=size)
    j = rng.integers(0, count - 1, size=size)
    j = j + (j >= i)
    return np.minimum(i, j), np.maximum(i, j)


# ---------------------------------------------------------------------------
# tables


def make_table(
    max_level: int,
    worker_count: int = 1,
    cross_check_up_to: int | None = None,
    level_cap: int = DEFAULT_MAX_LEVEL,
) -> list[WienerReport]:
    """Formula reports for levels 1..max_level.

    Levels up to ``cross_check_up_to`` (default: the oracle cap) also carry
    the oracle total and the pairwise mismatch count (method ``both``).
    """
    if max_level < 1:
        raise ValueError("max_level must be >= 1")
    if cross_check_up_to is None:
        cross_check_up_to = DEFAULT_ORACLE_MAX_LEVEL
    reports = []
    for level in range(1, max_level + 1):
        if level <= cross_check_up_to:
            reports.append(wiener_both(level, worker_count, max_level=cross_check_up_to))
        else:
            reports.append(wiener_formula(level, worker_count, max_level=level_cap))
    return reports


def reports_to_json(reports: list[WienerReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)


def reports_to_tsv(reports: list[WienerReport], timing: bool = True) -> str:
    header = ["level", "vertices", "wiener", "method"] + (["seconds"] if timing else [])
    rows = [header]
    for r in reports:
        row = [str(r.level), str(r.vertex_count), str(r.wiener), r.method]
        if timing:
            row.append(f"{r.elapsed:.3f}")
        rows.append(row)
    widths = [max(len(row[k]) for row in rows) for k in range(len(header))]
    lines = ["\t".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"
