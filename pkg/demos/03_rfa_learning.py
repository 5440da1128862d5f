"""Group automata: learning by breadth-first search, and the embedding as a QFA.

Run with ``python demos/03_rfa_learning.py``.
"""
# %%
from qfalearn import SimulatedRfaOracle, gen_random_rfa, learn_rfa, mo_accept_prob, rfa_accepts, rfa_to_mo, verify_rfa

G = gen_random_rfa(6, "abc", seed=1)
print("permutations:", G.delta)

# %%
# Replies are basis vectors, so each query reveals one state.
hyp, report = learn_rfa(SimulatedRfaOracle(G), G.alphabet, G.accepting)
print("states found", hyp.n, "queries", report.distinct_queries, "bound", G.n * len(G.alphabet) + 1)
print("disagreements:", verify_rfa(G, hyp).max_trajectory_deviation)

# %%
# Permutation matrices make the same machine a measure-once QFA with 0/1 acceptance.
M = rfa_to_mo(G)
for w in ["", "a", "abc", "ccba"]:
    print(f"{w!r:7} rfa {int(rfa_accepts(G, w))}  qfa {mo_accept_prob(M, w):.1f}")
