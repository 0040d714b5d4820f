"""
The Wiener index table
======================

Sum of distances over all unordered vertex pairs, from both engines.
Level 6 takes a few minutes per engine, so it is behind a flag here.
"""

import sys

from carpet_wiener.engine import make_table, reports_to_tsv

top = 6 if "--full" in sys.argv else 5
rows = make_table(top, worker_count=2, cross_check_up_to=top)
print(reports_to_tsv(rows, timing=True))

for r in rows:
    if r.oracle_wiener != r.wiener:
        print(f"level {r.level}: formula is short by {r.oracle_wiener - r.wiener}"
              f" over {r.mismatch_count} pairs")
