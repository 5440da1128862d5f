"""Measure-many automata: halting states, the end-marker and the going projector.

Run with ``python demos/02_mm_learning.py``.
"""
# %%
import numpy as np

from qfalearn import SimulatedMmOracle, gen_random_mm, learn_mm, verify_mm
from qfalearn.automata import mm_accept_prob, mm_halting_profile, mm_reject_prob

target = gen_random_mm(6, "ab", seed=3)
print("accepting", target.accepting, "rejecting", target.rejecting, "going", target.going)

# %%
# Accept and reject mass accumulate symbol by symbol, end-marker included.
acc, rej = mm_halting_profile(target, "abab")
print("cumulative accept", np.round(acc, 4))
print("cumulative reject", np.round(rej, 4))

# %%
oracle = SimulatedMmOracle(target)
hyp, report = learn_mm(oracle, target.n, target.alphabet, target.accepting, target.rejecting, target.going)
print(report.outcome, "basis", report.basis_size, "distinct queries", report.distinct_queries)

# %%
for w in ["", "a", "bb", "abab"]:
    print(f"{w!r:7} accept {mm_accept_prob(target, w):.6f} / {mm_accept_prob(hyp, w):.6f}"
          f"  reject {mm_reject_prob(target, w):.6f} / {mm_reject_prob(hyp, w):.6f}")

print(verify_mm(target, hyp).to_dict())
