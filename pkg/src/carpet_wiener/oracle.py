"""Explicit carpet graphs and breadth-first-search ground truth.

The graph is the union of the unit squares ``a-b-c-d`` of every digit
suffix, with vertices merged by lattice point.  Nothing here looks at the
case analysis in :mod:`carpet_wiener.metric`; the two only share the
embedding of words into the lattice.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import shortest_path

from .words import LatticePoint, LevelCapError, X_VECTORS, side_length

__all__ = [
    "DEFAULT_ORACLE_MAX_LEVEL",
    "AdjacencyGraph",
    "build_graph",
    "bfs_from",
    "distance_rows",
    "oracle_wiener",
    "symmetry_orbits",
]

log = logging.getLogger(__name__)

DEFAULT_ORACLE_MAX_LEVEL = 6

_SQUARE = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class AdjacencyGraph:
    """Undirected simple graph in CSR form; vertex ids are sorted by (x, y)."""

    level: int
    points: np.ndarray  # (count, 2)
    indptr: np.ndarray
    indices: np.ndarray
    point_index: dict[LatticePoint, int] = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self.count)]

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self) -> np.ndarray:
        """(edge_count, 2) array of ``u < v`` pairs in sorted order."""
        u = np.repeat(np.arange(self.count), self.degrees())
        mask = u < self.indices
        return np.column_stack([u[mask], self.indices[mask]])

    def csr(self) -> sp.csr_matrix:
        data = np.ones(len(self.indices), dtype=np.int8)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.count,) * 2)


def _suffix_offsets(level: int) -> np.ndarray:
    m = level - 1
    offsets = np.zeros((8**m, 2), dtype=np.int64)
    xv = np.array(X_VECTORS, dtype=np.int64)
    k = np.arange(8**m)
    scale = 1
    for _ in range(m):
        offsets += scale * xv[k % 8]
        k //= 8
        scale *= 3
    return offsets


def build_graph(level: int, max_level: int = DEFAULT_ORACLE_MAX_LEVEL) -> AdjacencyGraph:
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    if level > max_level:
        raise LevelCapError(f"level {level} exceeds the oracle cap {max_level}")
    corners = _suffix_offsets(level)[:, None, :] + _SQUARE[None, :, :]
    width = side_length(level) + 1
    keys = corners[..., 0] * width + corners[..., 1]
    uniq, ids = np.unique(keys.ravel(), return_inverse=True)
    ids = ids.reshape(keys.shape)
    points = np.column_stack([uniq // width, uniq % width])

    u = ids.ravel()
    v = np.roll(ids, -1, axis=1).ravel()
    pairs = np.unique(np.column_stack([np.minimum(u, v), np.maximum(u, v)]), axis=0)
    both = np.concatenate([pairs, pairs[:, ::-1]])
    order = np.lexsort((both[:, 1], both[:, 0]))
    both = both[order]
    indptr = np.zeros(len(points) + 1, dtype=np.int64)
    np.add.at(indptr, both[:, 0] + 1, 1)
    indptr = np.cumsum(indptr)

    return AdjacencyGraph(
        level=level,
        points=points,
        indptr=indptr,
        indices=both[:, 1].copy(),
        point_index={LatticePoint(int(x), int(y)): i for i, (x, y) in enumerate(points)},
    )


def _distance_dtype(level: int):
    return np.int16 if 2 * side_length(level) < np.iinfo(np.int16).max else np.int32


def bfs_from(g: AdjacencyGraph, source: int) -> np.ndarray:
    """Hop distances from ``source`` by level-synchronous frontier expansion."""
    dist = np.full(g.count, -1, dtype=_distance_dtype(g.level))
    dist[source] = 0
    frontier = np.array([source])
    d = 0
    while len(frontier):
        d += 1
        starts = g.indptr[frontier]
        stops = g.indptr[frontier + 1]
        nbrs = np.concatenate([g.indices[a:b] for a, b in zip(starts, stops)])
        nbrs = np.unique(nbrs[dist[nbrs] < 0])
        dist[nbrs] = d
        frontier = nbrs
    return dist


def distance_rows(g: AdjacencyGraph, sources: np.ndarray) -> np.ndarray:
    """All-target distances for each source, one row per source."""
    rows = shortest_path(g.csr(), directed=False, unweighted=True, indices=sources)
    return rows.astype(_distance_dtype(g.level))


def symmetry_orbits(points: np.ndarray, side: int) -> tuple[np.ndarray, np.ndarray]:
    """Representatives and orbit sizes of lattice points under the square's symmetries.

    ``points`` must be closed under the eight maps; the representative is
    the orbit member with the smallest ``(x, y)``.
    """
    x, y = points[:, 0], points[:, 1]
    images = [
        (x, y), (side - x, y), (x, side - y), (side - x, side - y),
        (y, x), (side - y, x), (y, side - x), (side - y, side - x),
    ]
    width = side + 1
    keys = np.stack([a * width + b for a, b in images])
    own = keys[0]
    is_rep = keys.min(axis=0) == own
    sizes = np.array([len(set(col)) for col in keys.T[is_rep].tolist()])
    return np.nonzero(is_rep)[0], sizes


# ---------------------------------------------------------------------------
# all-pairs summation

_worker_graph: AdjacencyGraph | None = None


def _init_worker(g: AdjacencyGraph) -> None:
    global _worker_graph
    _worker_graph = g


def _row_sums(task: tuple[np.ndarray, np.ndarray | None]) -> int:
    sources, weights = task
    rows = distance_rows(_worker_graph, sources)
    sums = rows.sum(axis=1, dtype=np.int64)
    if weights is not None:
        sums = sums * weights
    return int(sums.sum())


def _chunks(sources: np.ndarray, weights: np.ndarray | None, size: int):
    for s in range(0, len(sources), size):
        w = None if weights is None else weights[s:s + size]
        yield sources[s:s + size], w


def oracle_wiener(
    g: AdjacencyGraph,
    workers: int = 1,
    symmetry: bool = False,
    chunk: int | None = None,
) -> int:
    """Half the sum of all ordered-pair BFS distances, as an exact integer.

    With ``symmetry`` only one source per orbit of the square's symmetry
    group is expanded, weighted by the orbit size.
    """
    if symmetry:
        sources, weights = symmetry_orbits(g.points, side_length(g.level))
        weights = weights.astype(np.int64)
    else:
        sources, weights = np.arange(g.count), None
    if chunk is None:
        chunk = max(1, min(512, 4_000_000 // max(g.count, 1)))
    tasks = list(_chunks(sources, weights, chunk))

    total = 0
    if workers <= 1:
        _init_worker(g)
        for i, t in enumerate(tasks):
            total += _row_sums(t)
            log.debug("oracle level %d: chunk %d/%d", g.level, i + 1, len(tasks))
    else:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(g,)) as ex:
            for part in ex.map(_row_sums, tasks):
                total += part
    assert total % 2 == 0
    return total // 2
