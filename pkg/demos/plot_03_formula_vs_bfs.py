"""
Case formula against breadth-first search
=========================================

Through level 3 the formula gives exactly the BFS distance for every pair.
From level 4 on some pairs come out short. This script counts them and shows
one.
"""

from carpet_wiener.engine import validate

for n in range(1, 5):
    r = validate(n, max_traces=1)
    print(f"level {n}: {r.pairs_checked:>7} pairs, {r.mismatch_count:>4} disagree")

# the first disagreement at level 4
m = validate(4, max_traces=1).mismatches[0]
print(m.word1, m.word2, "formula", m.formula, "bfs", m.oracle)
print(m.trace.to_lines())

# a seeded sample at level 5 is cheap and already shows the trend
r = validate(5, "sample", sample_size=100_000, seed=42, max_traces=0)
print(f"level 5 sample: {r.mismatch_count} of {r.pairs_checked} disagree")
