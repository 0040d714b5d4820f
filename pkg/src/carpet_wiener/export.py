"""Text renderings of a carpet graph: edge list, Graphviz DOT and coordinate CSV.

Every format lists vertices by graph id (sorted by lattice point) and labels
them with their canonical word, so output is byte-stable for a given level.
"""

from __future__ import annotations

import csv
import io

from .oracle import AdjacencyGraph
from .words import LatticePoint, VertexTable, format_word

__all__ = ["FORMATS", "to_edge_list", "to_dot", "to_csv", "render"]


def _labels(g: AdjacencyGraph, table: VertexTable) -> list[str]:
    return [format_word(table.lookup(LatticePoint(int(x), int(y)))) for x, y in g.points]


def to_edge_list(g: AdjacencyGraph, table: VertexTable) -> str:
    """Header of ``# id x y word`` lines, then one ``u v`` line per edge."""
    labels = _labels(g, table)
    lines = [
        f"# carpet graph level {g.level}: {g.count} vertices, {g.edge_count} edges",
        "# id x y word",
    ]
    lines += [f"# {i} {x} {y} {labels[i]}" for i, (x, y) in enumerate(g.points)]
    lines += [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def to_dot(g: AdjacencyGraph, table: VertexTable) -> str:
    labels = _labels(g, table)
    lines = [f"graph carpet_{g.level} {{", "  node [shape=point];"]
    lines += [
        f'  {i} [label="{labels[i]}", pos="{x},{y}!"];' for i, (x, y) in enumerate(g.points)
    ]
    lines += [f"  {u} -- {v};" for u, v in g.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_csv(g: AdjacencyGraph, table: VertexTable) -> str:
    labels = _labels(g, table)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "x", "y", "word"])
    for i, (x, y) in enumerate(g.points):
        writer.writerow([i, int(x), int(y), labels[i]])
    return buf.getvalue()


FORMATS = {"edges": to_edge_list, "dot": to_dot, "csv": to_csv}


def render(g: AdjacencyGraph, table: VertexTable, fmt: str) -> str:
    try:
        return FORMATS[fmt](g, table)
    except KeyError:
        raise ValueError(f"unknown export format {fmt!r}") from None
