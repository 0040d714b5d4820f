"""Word-level geodesic distance on the carpet graphs.

Two words are compared at the deepest digit where they differ.  Depending on
the pair of copies they fall into there, the distance is either the plain
Manhattan distance of the embedded points or a detour around one square hole:
the central hole of the common block, or the largest nested hole recorded in
the digits of the western (resp. southern) word.

:func:`distance` evaluates one pair and keeps every intermediate quantity in
a :class:`DistanceTrace`.  :class:`PairMetric` evaluates the same rule on
whole arrays of vertex pairs and is what the Wiener engine uses.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from .words import LatticePoint, VertexTable, Word, X_VECTORS, word_to_point

__all__ = [
    "Kind",
    "Axis",
    "Route",
    "DistanceCase",
    "HoleCorners",
    "DistanceTrace",
    "DISPATCH",
    "l1",
    "find_h",
    "obstruction_index",
    "hole_corners",
    "classify",
    "route_around",
    "distance",
    "PairMetric",
]


class Kind(str, enum.Enum):
    SAME_SQUARE = "SameSquare"
    CASE_I = "CaseI"
    CASE_II = "CaseII"
    CASE_III = "CaseIII"
    CASE_IV = "CaseIV"


class Axis(str, enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    NONE = "none"


class Route(str, enum.Enum):
    DIRECT = "direct"
    VIA_AB = "via_AB"  # south of the hole, travelling east
    VIA_CD = "via_CD"  # north of the hole, travelling east
    VIA_AD = "via_AD"  # west of the hole, travelling north
    VIA_BC = "via_BC"  # east of the hole, travelling north


@dataclass(frozen=True)
class _Rule:
    kind: Kind
    axis: Axis = Axis.NONE
    first: int | None = None  # copy digit of the western/southern word
    blocking: int | None = None  # digit that places a hole next to the first word


def _build_dispatch() -> dict[frozenset[int], _Rule]:
    table: dict[frozenset[int], _Rule] = {}
    for pair in [(0, 4), (2, 6),
                 (0, 3), (1, 4), (2, 5), (3, 6), (4, 7), (0, 5), (1, 6), (2, 7),
                 (1, 3), (3, 5), (5, 7), (1, 7)]:
        table[frozenset(pair)] = _Rule(Kind.CASE_I)
    table[frozenset((1, 5))] = _Rule(Kind.CASE_II, Axis.VERTICAL, first=1)
    table[frozenset((3, 7))] = _Rule(Kind.CASE_II, Axis.HORIZONTAL, first=7)
    for first, second in [(0, 2), (6, 4)]:
        table[frozenset((first, second))] = _Rule(Kind.CASE_III, Axis.HORIZONTAL, first, 7)
    for first, second in [(2, 4), (0, 6)]:
        table[frozenset((first, second))] = _Rule(Kind.CASE_III, Axis.VERTICAL, first, 1)
    for first, second in [(0, 1), (1, 2), (6, 5), (5, 4)]:
        table[frozenset((first, second))] = _Rule(Kind.CASE_IV, Axis.HORIZONTAL, first, 7)
    for first, second in [(0, 7), (7, 6), (2, 3), (3, 4)]:
        table[frozenset((first, second))] = _Rule(Kind.CASE_IV, Axis.VERTICAL, first, 1)
    return table


DISPATCH = _build_dispatch()


@dataclass(frozen=True)
class DistanceCase:
    kind: Kind
    travel_axis: Axis
    oriented: bool  # True when the inputs were swapped


@dataclass(frozen=True)
class HoleCorners:
    A: LatticePoint
    B: LatticePoint
    C: LatticePoint
    D: LatticePoint
    side: int
    level: int


@dataclass(frozen=True)
class DistanceTrace:
    case: DistanceCase
    h: int | None
    obstruction_index: int | None
    corners: HoleCorners | None
    route: Route
    value: int

    def to_dict(self) -> dict:
        corners = None
        if self.corners is not None:
            c = self.corners
            corners = {
                "A": list(c.A), "B": list(c.B), "C": list(c.C), "D": list(c.D),
                "side": c.side, "level": c.level,
            }
        return {
            "case": self.case.kind.value,
            "travel_axis": self.case.travel_axis.value,
            "oriented": self.case.oriented,
            "h": self.h,
            "l": self.obstruction_index,
            "corners": corners,
            "route": self.route.value,
            "value": self.value,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_lines(self) -> str:
        """``key=value`` lines; missing quantities print as ``none``."""
        d = self.to_dict()
        c = self.corners
        if c is None:
            corners = "none"
        else:
            corners = ",".join(f"({p.x},{p.y})" for p in (c.A, c.B, c.C, c.D))
        rows = [
            ("value", d["value"]),
            ("case", d["case"]),
            ("travel_axis", d["travel_axis"]),
            ("oriented", str(d["oriented"]).lower()),
            ("h", "none" if d["h"] is None else d["h"]),
            ("l", "none" if d["l"] is None else d["l"]),
            ("corners", corners),
            ("side", "none" if c is None else c.side),
            ("route", d["route"]),
        ]
        return "\n".join(f"{k}={v}" for k, v in rows)


def l1(p: tuple[int, int], q: tuple[int, int]) -> int:
    return abs(p[0] - q[0]) + abs(p[1] - q[1])


def _check_levels(w1: Word, w2: Word) -> None:
    if w1.level != w2.level:
        raise ValueError(f"words {w1} and {w2} have different levels")


def find_h(w1: Word, w2: Word) -> int | None:
    """Largest 1-based digit position where the words differ, or None."""
    _check_levels(w1, w2)
    for i in range(len(w1.xs), 0, -1):
        if w1.xs[i - 1] != w2.xs[i - 1]:
            return i
    return None


def obstruction_index(w1: Word, h: int, blocking_letter: int) -> int | None:
    """Largest j < h with digit j of ``w1`` equal to ``blocking_letter``."""
    for j in range(h - 1, 0, -1):
        if w1.xs[j - 1] == blocking_letter:
            return j
    return None


def hole_corners(w1: Word, h: int, l: int) -> HoleCorners:
    """Corners of the hole of side ``3**(l-1)`` in the level-``l`` block holding ``w1``.

    With ``l == h`` this is the central hole of the smallest block containing
    both words.  Coordinates are global: the block offset runs over every
    digit above ``l``.
    """
    n = w1.level
    if not 1 <= l <= h <= n - 1:
        raise ValueError(f"need 1 <= l <= h <= {n - 1}, got l={l}, h={h}")
    side = 3 ** (l - 1)
    ox = oy = 0
    for k in range(l + 1, n):
        dx, dy = X_VECTORS[w1.xs[k - 1]]
        ox += 3 ** (k - 1) * dx
        oy += 3 ** (k - 1) * dy
    a = LatticePoint(side + ox, side + oy)
    return HoleCorners(
        A=a,
        B=LatticePoint(a.x + side, a.y),
        C=LatticePoint(a.x + side, a.y + side),
        D=LatticePoint(a.x, a.y + side),
        side=side,
        level=l + 1,
    )


def classify(w1: Word, w2: Word, h: int | None) -> DistanceCase:
    if h is None:
        return DistanceCase(Kind.SAME_SQUARE, Axis.NONE, False)
    a, b = w1.xs[h - 1], w2.xs[h - 1]
    rule = DISPATCH[frozenset((a, b))]
    if rule.kind is Kind.CASE_I:
        # no preferred orientation; put the smaller digit first
        return DistanceCase(Kind.CASE_I, Axis.NONE, a > b)
    return DistanceCase(rule.kind, rule.axis, a != rule.first)


def route_around(
    p1: tuple[int, int], p2: tuple[int, int], hc: HoleCorners, axis: Axis
) -> tuple[Route, int]:
    """Shorter way around ``hc`` from the western/southern ``p1`` to ``p2``."""
    a, b, c, d = hc.A, hc.B, hc.C, hc.D
    if axis is Axis.VERTICAL:
        if p1[0] + p2[0] >= a.x + b.x:
            return Route.VIA_BC, l1(p1, b) + hc.side + l1(c, p2)
        return Route.VIA_AD, l1(p1, a) + hc.side + l1(d, p2)
    if axis is Axis.HORIZONTAL:
        if p1[1] + p2[1] >= a.y + d.y:
            return Route.VIA_CD, l1(p1, d) + hc.side + l1(c, p2)
        return Route.VIA_AB, l1(p1, a) + hc.side + l1(b, p2)
    raise ValueError(f"no travel axis for a detour: {axis}")


def distance(w1: Word, w2: Word) -> DistanceTrace:
    h = find_h(w1, w2)
    case = classify(w1, w2, h)
    if case.oriented:
        w1, w2 = w2, w1
    p1, p2 = word_to_point(w1), word_to_point(w2)
    direct = l1(p1, p2)
    if case.kind in (Kind.SAME_SQUARE, Kind.CASE_I):
        return DistanceTrace(case, h, None, None, Route.DIRECT, direct)

    if case.kind is Kind.CASE_II:
        l = h
    else:
        rule = DISPATCH[frozenset((w1.xs[h - 1], w2.xs[h - 1]))]
        l = obstruction_index(w1, h, rule.blocking)
        if l is None:
            return DistanceTrace(case, h, None, None, Route.DIRECT, direct)
    hc = hole_corners(w1, h, l)
    route, value = route_around(p1, p2, hc, case.travel_axis)
    return DistanceTrace(case, h, l, hc, route, value)


# ---------------------------------------------------------------------------
# array evaluation

_K_SAME, _K_I, _K_II, _K_III, _K_IV = range(5)
_KIND_CODE = {Kind.CASE_I: _K_I, Kind.CASE_II: _K_II, Kind.CASE_III: _K_III, Kind.CASE_IV: _K_IV}
_BLOCKING = (7, 1)


def _lookup_tables():
    kind = np.full((8, 8), _K_SAME, dtype=np.int8)
    vertical = np.zeros((8, 8), dtype=bool)
    swap = np.zeros((8, 8), dtype=bool)
    letter = np.zeros((8, 8), dtype=np.int8)
    for pair, rule in DISPATCH.items():
        a, b = sorted(pair)
        for x, y in ((a, b), (b, a)):
            kind[x, y] = _KIND_CODE[rule.kind]
            vertical[x, y] = rule.axis is Axis.VERTICAL
            swap[x, y] = rule.first is not None and x != rule.first
            letter[x, y] = _BLOCKING.index(rule.blocking) if rule.blocking else 0
    return kind, vertical, swap, letter


_LUT_KIND, _LUT_VERTICAL, _LUT_SWAP, _LUT_LETTER = _lookup_tables()


class PairMetric:
    """Vectorised :func:`distance` over the canonical vertices of a table.

    Per-vertex precomputation: ``last[v, k, h]`` is the largest j < h with
    digit j equal to ``_BLOCKING[k]`` (0 if none) and ``offset[v, l]`` is the
    lattice offset of the level-``l`` block containing ``v``.
    """

    def __init__(self, table: VertexTable):
        self.level = table.level
        self.count = table.count
        m = table.level - 1
        self.points = table.points.astype(np.int32)
        self.digits = table.digits.astype(np.int8)
        # digit i (1-based) in bits 3(i-1)..3i-1; the top set bit of an xor gives h
        shifts = 3 * np.arange(m, dtype=np.int32)
        self.codes = (self.digits.astype(np.int32) << shifts).sum(axis=1, dtype=np.int32)
        top = np.zeros(8**m, dtype=np.int8)
        for i in range(1, m + 1):
            top[8 ** (i - 1):8**i] = i
        self.top_digit = top
        last = np.zeros((self.count, 2, m + 1), dtype=np.int8)
        for k, letter in enumerate(_BLOCKING):
            for h in range(2, m + 1):
                hit = self.digits[:, h - 2] == letter
                last[:, k, h] = np.where(hit, h - 1, last[:, k, h - 1])
        self.last = last
        xv = np.array(X_VECTORS, dtype=np.int32)
        offset = np.zeros((self.count, m + 1, 2), dtype=np.int32)
        for l in range(m - 1, -1, -1):
            offset[:, l] = offset[:, l + 1] + 3**l * xv[self.digits[:, l]]
        self.offset = offset
        self.side = np.array([0] + [3 ** (l - 1) for l in range(1, m + 1)], dtype=np.int32)

    def distances(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Distances for the vertex pairs ``(rows[k], cols[k])`` as int64."""
        rows = np.asarray(rows, dtype=np.intp)
        cols = np.asarray(cols, dtype=np.intp)
        out = np.abs(self.points[rows] - self.points[cols]).sum(axis=1, dtype=np.int64)
        if self.level == 1 or len(rows) == 0:
            return out
        h = self.top_digit[self.codes[rows] ^ self.codes[cols]]
        sel = np.nonzero(h)[0]
        self._detours(out, sel, rows[sel], cols[sel], h[sel])
        return out

    def row_block(self, start: int, stop: int, col_start: int = 0) -> np.ndarray:
        """Distance matrix of rows ``start:stop`` against columns ``col_start:``."""
        return self.block(np.arange(start, stop), col_start)

    def block(self, rows: np.ndarray, col_start: int = 0) -> np.ndarray:
        """Distance matrix of the given rows against columns ``col_start:``."""
        rows = np.asarray(rows, dtype=np.intp)
        pr = self.points[rows, None, :]
        pc = self.points[None, col_start:, :]
        out = np.abs(pr - pc).sum(axis=2, dtype=np.int64)
        if self.level == 1 or out.size == 0:
            return out
        width = out.shape[1]
        h = self.top_digit[self.codes[rows, None] ^ self.codes[None, col_start:]].ravel()
        sel = np.nonzero(h)[0]
        self._detours(out.reshape(-1), sel, rows[sel // width], sel % width + col_start, h[sel])
        return out

    def _detours(self, out, sel, rows, cols, hs) -> None:
        """Overwrite ``out[sel]`` for pairs that route around a hole."""
        hs = hs.astype(np.intp)
        shift = 3 * (hs - 1)
        a = (self.codes[rows] >> shift) & 7
        b = (self.codes[cols] >> shift) & 7
        kind = _LUT_KIND[a, b]
        keep = np.nonzero(kind >= _K_II)[0]
        sel, rows, cols, hs = sel[keep], rows[keep], cols[keep], hs[keep]
        a, b, kind = a[keep], b[keep], kind[keep]

        swap = _LUT_SWAP[a, b]
        first = np.where(swap, cols, rows)
        second = np.where(swap, rows, cols)
        l = np.where(kind == _K_II, hs, self.last[first, _LUT_LETTER[a, b], hs]).astype(np.intp)
        hit = np.nonzero(l)[0]
        sel, first, second, l = sel[hit], first[hit], second[hit], l[hit]
        vertical = _LUT_VERTICAL[a[hit], b[hit]]

        p1 = self.points[first]
        p2 = self.points[second]
        side = self.side[l]
        ax = self.offset[first, l, 0] + side
        ay = self.offset[first, l, 1] + side
        bx = ax + side
        dy = ay + side

        # the path reaches the hole at corner e and leaves it at corner f
        east = p1[:, 0] + p2[:, 0] >= ax + bx
        north = p1[:, 1] + p2[:, 1] >= ay + dy
        ex = np.where(vertical & east, bx, ax)
        ey = np.where(~vertical & north, dy, ay)
        fx = np.where(vertical, ex, bx)
        fy = np.where(vertical, dy, ey)
        out[sel] = (
            np.abs(p1[:, 0] - ex) + np.abs(p1[:, 1] - ey) + side
            + np.abs(fx - p2[:, 0]) + np.abs(fy - p2[:, 1])
        )
