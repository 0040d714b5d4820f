"""
One distance, step by step
==========================

The case formula looks at the deepest digit where two words differ, works
out which hole sits between them, and walks around its nearer side.
"""

from carpet_wiener import build_graph, bfs_from, distance, parse_word, word_to_point

u, v = parse_word("a670", 4), parse_word("b432", 4)
trace = distance(u, v)
print(trace.to_lines())

# the straight line from (0,5) to (27,5) crosses the hole with corners
# (3,3)-(6,6), so the walk climbs to y=6 and pays 2 extra steps
p, q = word_to_point(u), word_to_point(v)
print("L1 distance:", abs(p.x - q.x) + abs(p.y - q.y))

# breadth-first search on the graph itself agrees
g = build_graph(4)
print("BFS distance:", bfs_from(g, g.point_index[p])[g.point_index[q]])
