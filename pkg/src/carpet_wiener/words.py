"""Vertex labels of the carpet graphs and their embedding into the integer lattice.

A level-n vertex label is one corner letter from ``abcd`` followed by n-1
copy digits ``0``..``7``.  Digit ``i`` (1-based) picks the copy at scale
``3**(i-1)``, so the *last* digit selects the outermost copy.  Several
labels can name the same vertex; the lattice point is the identity and the
lexicographically smallest label is the canonical one.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

__all__ = [
    "Y_LETTERS",
    "Y_VECTORS",
    "X_VECTORS",
    "DEFAULT_MAX_LEVEL",
    "WordParseError",
    "LevelCapError",
    "LatticePoint",
    "Word",
    "VertexTable",
    "parse_word",
    "format_word",
    "word_to_point",
    "compare_words",
    "build_vertex_table",
    "side_length",
    "iter_words",
]

Y_LETTERS = "abcd"
Y_VECTORS = {"a": (0, 0), "b": (1, 0), "c": (1, 1), "d": (0, 1)}
# copy positions counterclockwise from the bottom-left corner of the 3x3 frame
X_VECTORS = ((0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1))

_Y_ARRAY = np.array([Y_VECTORS[c] for c in Y_LETTERS], dtype=np.int64)
_X_ARRAY = np.array(X_VECTORS, dtype=np.int64)

DEFAULT_MAX_LEVEL = 8


class WordParseError(ValueError):
    """Malformed word text; ``position`` is the 0-based offending character."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class LevelCapError(RuntimeError):
    """Requested level exceeds a configured resource cap."""


class LatticePoint(NamedTuple):
    x: int
    y: int


def side_length(level: int) -> int:
    """Side of the level-``level`` carpet graph in lattice units."""
    return 3 ** (level - 1)


@functools.total_ordering
@dataclass(frozen=True)
class Word:
    y: str
    xs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.y not in Y_VECTORS:
            raise WordParseError(f"invalid corner letter {self.y!r}", 0)
        xs = tuple(int(x) for x in self.xs)
        for i, x in enumerate(xs):
            if not 0 <= x <= 7:
                raise WordParseError(f"invalid copy digit {x!r}", i + 1)
        object.__setattr__(self, "xs", xs)

    @property
    def level(self) -> int:
        return len(self.xs) + 1

    def __str__(self) -> str:
        return format_word(self)

    def __lt__(self, other: Word) -> bool:
        return compare_words(self, other) < 0


def parse_word(text: str, level: int) -> Word:
    """Parse ``"b432"``-style text into a :class:`Word` of the given level."""
    if level < 1:
        raise WordParseError(f"level must be >= 1, got {level}")
    if not text:
        raise WordParseError("empty word", 0)
    if text[0] not in Y_VECTORS:
        raise WordParseError(
            f"position 0: expected one of {Y_LETTERS!r}, got {text[0]!r}", 0
        )
    for i, ch in enumerate(text[1:], start=1):
        if ch not in "01234567":
            raise WordParseError(f"position {i}: expected a digit 0-7, got {ch!r}", i)
    if len(text) != level:
        raise WordParseError(
            f"position {min(len(text), level)}: word {text!r} has length {len(text)}, "
            f"expected {level} for level {level}",
            min(len(text), level),
        )
    return Word(text[0], tuple(int(ch) for ch in text[1:]))


def format_word(w: Word) -> str:
    return w.y + "".join(str(x) for x in w.xs)


def word_to_point(w: Word) -> LatticePoint:
    x, y = Y_VECTORS[w.y]
    scale = 1
    for digit in w.xs:
        dx, dy = X_VECTORS[digit]
        x += scale * dx
        y += scale * dy
        scale *= 3
    return LatticePoint(x, y)


def compare_words(w1: Word, w2: Word) -> int:
    """Three-way lexicographic comparison: corner letter first, then digits left to right."""
    if w1.level != w2.level:
        raise ValueError(f"cannot compare words of levels {w1.level} and {w2.level}")
    k1 = (w1.y, w1.xs)
    k2 = (w2.y, w2.xs)
    return (k1 > k2) - (k1 < k2)


def _embed_arrays(ys: np.ndarray, digits: np.ndarray) -> np.ndarray:
    pts = _Y_ARRAY[ys].copy()
    scale = 1
    for i in range(digits.shape[1]):
        pts += scale * _X_ARRAY[digits[:, i]]
        scale *= 3
    return pts


def _all_words(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Every level-``level`` word in lexicographic order, as (corner index, digits)."""
    m = level - 1
    count = 8**m
    # row k spells k in base 8 with the most significant digit first
    digits = np.empty((count, m), dtype=np.int8)
    k = np.arange(count, dtype=np.int64)
    for i in range(m - 1, -1, -1):
        digits[:, i] = k % 8
        k //= 8
    ys = np.repeat(np.arange(4, dtype=np.int8), count)
    return ys, np.tile(digits, (4, 1))


@dataclass(frozen=True, eq=False)
class VertexTable:
    """Distinct vertices of one carpet graph, each with its canonical word.

    Rows are ordered by canonical word.  ``ys`` and ``digits`` hold the
    canonical words in array form (corner index 0-3, digits 0-7) for the
    vectorised distance code.
    """

    level: int
    points: np.ndarray  # (count, 2) int64
    ys: np.ndarray  # (count,) int8
    digits: np.ndarray  # (count, level - 1) int8
    point_index: dict[LatticePoint, int] = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def entries(self) -> dict[LatticePoint, Word]:
        return {LatticePoint(*map(int, p)): self.word(i) for i, p in enumerate(self.points)}

    def word(self, i: int) -> Word:
        return Word(Y_LETTERS[self.ys[i]], tuple(int(d) for d in self.digits[i]))

    def words(self) -> list[Word]:
        return [self.word(i) for i in range(self.count)]

    def lookup(self, p: tuple[int, int]) -> Word:
        return self.word(self.point_index[LatticePoint(*p)])

    def canonical(self, w: Word) -> Word:
        if w.level != self.level:
            raise ValueError(f"word {w} is not of level {self.level}")
        return self.lookup(word_to_point(w))


def build_vertex_table(level: int, max_level: int = DEFAULT_MAX_LEVEL) -> VertexTable:
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    if level > max_level:
        raise LevelCapError(f"level {level} exceeds the vertex-table cap {max_level}")
    ys, digits = _all_words(level)
    pts = _embed_arrays(ys, digits)
    key = pts[:, 0] * (side_length(level) + 1) + pts[:, 1]
    # words are in lexicographic order, so the first occurrence is the minimum
    _, first = np.unique(key, return_index=True)
    first.sort()
    points = pts[first]
    table_points = {LatticePoint(int(x), int(y)): i for i, (x, y) in enumerate(points)}
    return VertexTable(
        level=level,
        points=points,
        ys=ys[first],
        digits=digits[first],
        point_index=table_points,
    )


def iter_words(level: int):
    """All 4 * 8**(level-1) words in lexicographic order."""
    for y in Y_LETTERS:
        for xs in itertools.product(range(8), repeat=level - 1):
            yield Word(y, xs)
