"""Query counts and learn time as the state count grows.

Writes ``bench_mo.csv`` in the working directory, the same table that
``qfalearn bench`` produces, then fits the log-log slope of time against n.
Run with ``python demos/04_scaling.py``.
"""
# %%
import csv

import numpy as np

from qfalearn.cli import main

main(["bench", "--kind", "mo", "--states", "2,4,8,16,32", "--alphabet-size", "2",
      "--seeds", "3", "--out", "bench_mo.csv"])

with open("bench_mo.csv") as fh:
    rows = list(csv.DictReader(fh))

# %%
n = np.array([int(r["n"]) for r in rows])
t = np.array([float(r["learn_wall_time_s"]) for r in rows])
q = np.array([int(r["distinct_queries"]) for r in rows])
print("queries per cell:", q.tolist())
print("bound 1 + 2n:   ", (1 + 2 * n).tolist())
print(f"log-log slope of time vs n: {np.polyfit(np.log(n), np.log(t), 1)[0]:.2f}")
