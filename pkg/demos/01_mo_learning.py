"""Learning a measure-once automaton from amplitude queries.

Run with ``python demos/01_mo_learning.py``.
"""
# %%
import numpy as np

from qfalearn import SimulatedMoOracle, gen_random_mo, learn_mo, mo_accept_prob, verify_mo

# A hidden 5-state target over {a, b}. The learner only sees the oracle.
target = gen_random_mo(5, "ab", seed=7)
oracle = SimulatedMoOracle(target)

# %%
# Each query returns the full (unmeasured) state vector after reading x.
print("AD('ab') =", np.round(oracle.query("ab"), 3))

# %%
hyp, report = learn_mo(oracle, target.n, target.alphabet, target.accepting, target.rejecting)
print(report.outcome, "basis", report.basis_size,
      "distinct queries", report.distinct_queries, "raw", report.raw_queries)

# %%
# The learned unitaries need not equal the target's, but the language does.
for w in ["", "a", "ba", "abba", "bbbbab"]:
    print(f"{w!r:10} target {mo_accept_prob(target, w):.6f}  learned {mo_accept_prob(hyp, w):.6f}")

# %%
check = verify_mo(target, hyp)
print("passed:", check.passed, "max trajectory deviation:", check.max_trajectory_deviation)
