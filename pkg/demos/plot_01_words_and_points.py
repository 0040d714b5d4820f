"""
Words and lattice points
========================

Every vertex of the level-n carpet graph has several names. A name is a
corner letter followed by n-1 copy digits, and it embeds to a lattice point.
"""

# a word and its point
from carpet_wiener import build_vertex_table, parse_word, word_to_point

w = parse_word("a670", 4)
print(w, "->", word_to_point(w))
print("b432 ->", word_to_point(parse_word("b432", 4)))

# two words, one vertex: the table keeps the lexicographically smallest
table = build_vertex_table(3)
d64 = parse_word("d64", 3)
print("d64 ->", word_to_point(d64), "canonical:", table.canonical(d64))

# how many vertices survive the deduplication
for n in range(1, 7):
    t = build_vertex_table(n)
    print(f"level {n}: {4 * 8 ** (n - 1):>7} words, {t.count:>6} vertices")

# draw level 3 as characters; the middle 3x3 hole has no interior points
import numpy as np

side = 9
grid = np.full((side + 1, side + 1), " ")
for x, y in table.points:
    grid[side - y, x] = "o"
print("\n".join(" ".join(row) for row in grid))
