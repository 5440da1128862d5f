import numpy as np
import pytest

from qfalearn.automata import (Alphabet, MmQfa, MoQfa, Rfa, gen_random_mm, gen_random_mo,
                               gen_random_rfa, mo_accept_prob, rotation_mo)
from qfalearn.learner import NonBasisReply, Outcome, explore, learn_mm, learn_mo, learn_rfa
from qfalearn.linalg import unitarity_defect
from qfalearn.oracle import SimulatedMmOracle, SimulatedMoOracle, SimulatedRfaOracle
from qfalearn.verify import VerifyConfig, evaluate, verify_mm, verify_mo, verify_rfa

QUICK = VerifyConfig(max_exhaustive_len=4, random_trials=200, random_max_len=30)


def run_mo(target):
    o = SimulatedMoOracle(target)
    return learn_mo(o, target.n, target.alphabet, target.accepting, target.rejecting)


def run_mm(target):
    o = SimulatedMmOracle(target)
    return learn_mm(o, target.n, target.alphabet, target.accepting, target.rejecting, target.going)


def test_rfa_single_state():
    G = Rfa(1, Alphabet.of("a"), 0, {"a": (0,)}, [0])
    H, report = learn_rfa(SimulatedRfaOracle(G), G.alphabet, G.accepting)
    assert report.distinct_queries == 2
    assert H.delta == {"a": (0,)}


@pytest.mark.parametrize("seed", range(10))
def test_rfa_query_bound_and_agreement(seed):
    G = gen_random_rfa(2 + seed, "abc", seed)
    H, report = learn_rfa(SimulatedRfaOracle(G), G.alphabet, G.accepting)
    assert report.distinct_queries <= G.n * 3 + 1
    assert verify_rfa(G, H, QUICK).passed


def test_rfa_unreachable_states_dropped():
    # state 2 is never reached from 0
    G = Rfa(3, Alphabet.of("ab"), 0, {"a": (1, 0, 2), "b": (0, 1, 2)}, [1, 2])
    H, report = learn_rfa(SimulatedRfaOracle(G), G.alphabet, G.accepting)
    assert H.n == 2
    assert report.distinct_queries == 1 + 2 * 2
    assert verify_rfa(G, H, QUICK).passed


def test_rfa_learner_rejects_quantum_replies():
    with pytest.raises(NonBasisReply):
        learn_rfa(SimulatedMoOracle(gen_random_mo(3, "ab", 0)), Alphabet.of("ab"), [0])


def test_mo_single_state_phase():
    target = MoQfa(1, Alphabet.of("ab"), [1j], {"a": [[np.exp(0.3j)]], "b": [[-1]]}, [0], [])
    H, report = run_mo(target)
    assert report.basis_size == 1
    assert report.distinct_queries == 3
    assert H.unitaries["a"][0, 0] == pytest.approx(np.exp(0.3j))
    assert H.unitaries["b"][0, 0] == pytest.approx(-1)


def test_mo_rotation_target():
    target = rotation_mo()
    H, report = run_mo(target)
    assert report.outcome is Outcome.LEARNED
    for k in range(9):
        assert mo_accept_prob(H, "a" * k) == pytest.approx(np.cos(k * np.pi / 4) ** 2, abs=1e-9)


@pytest.mark.parametrize("seed", range(12))
def test_mo_random_targets(seed):
    n = 1 + seed % 7
    target = gen_random_mo(n, "abc"[: 2 + seed % 2], seed)
    H, report = run_mo(target)
    assert report.outcome is Outcome.LEARNED
    assert report.basis_size <= n
    assert report.distinct_queries <= 1 + report.basis_size * len(target.alphabet)
    assert report.max_unitarity_defect <= 1e-8
    assert all(unitarity_defect(V) <= 1e-8 for V in H.unitaries.values())
    np.testing.assert_array_equal(H.initial, target.initial)
    assert verify_mo(target, H, QUICK).passed


def test_mo_low_rank_target_differs_as_matrix_but_not_in_trajectories():
    # psi0 = e0 and both symbols only mix states 0 and 1, so state 2 is unreachable
    U = np.eye(3, dtype=complex)
    U[:2, :2] = [[0, 1], [1, 0]]
    W = np.diag([1, 1j, np.exp(0.7j)])
    target = MoQfa(3, Alphabet.of("ab"), [1, 0, 0], {"a": U, "b": W}, [0], [1, 2])
    H, report = run_mo(target)
    assert report.basis_size == 2
    assert not np.allclose(H.unitaries["b"], W)
    assert verify_mo(target, H, QUICK).passed


def test_learning_is_deterministic():
    target = gen_random_mm(5, "ab", 3)
    H1, _ = run_mm(target)
    H2, _ = run_mm(target)
    for s in H1.unitaries:
        np.testing.assert_array_equal(H1.unitaries[s], H2.unitaries[s])


class LyingOracle(SimulatedMoOracle):
    """Scales one reply so that no unitary can be consistent with it."""

    def _answer(self, x):
        v = super()._answer(x)
        return 2 * v if x == "a" else v


def test_not_exist_on_inconsistent_oracle():
    target = gen_random_mo(3, "ab", 1)
    H, report = learn_mo(LyingOracle(target), 3, target.alphabet, target.accepting, target.rejecting)
    assert H is None
    assert report.outcome is Outcome.NOT_EXIST


def test_instance_mismatch():
    target = gen_random_mo(3, "ab", 1)
    with pytest.raises(ValueError):
        learn_mo(SimulatedMoOracle(target), 4, target.alphabet, [], [])


@pytest.mark.parametrize("seed", range(12))
def test_mm_random_targets(seed):
    n = 1 + seed % 7
    target = gen_random_mm(n, "abc"[: 2 + seed % 2], seed)
    H, report = run_mm(target)
    assert report.outcome is Outcome.LEARNED
    assert report.basis_size <= n
    assert report.distinct_queries <= 2 + report.basis_size * (len(target.alphabet) + 1)
    assert all(unitarity_defect(V) <= 1e-8 for V in H.unitaries.values())
    assert verify_mm(target, H, QUICK).passed


def test_mm_all_going_reduces_to_mo():
    mo = gen_random_mo(4, "ab", 6)
    end = gen_random_mo(4, "z", 6).unitaries["z"]
    mm = MmQfa(4, mo.alphabet, mo.initial, dict(mo.unitaries, **{"$": end}), [], [], [0, 1, 2, 3])
    o_mo, o_mm = SimulatedMoOracle(mo), SimulatedMmOracle(mm)
    basis_mo = explore(o_mo, mo.alphabet)
    basis_mm = explore(o_mm, mm.alphabet)
    assert basis_mo.words == basis_mm.words
    H, report = learn_mm(o_mm, 4, mm.alphabet, [], [], [0, 1, 2, 3])
    assert report.distinct_queries == 1 + 4 * 2 + 4
    assert verify_mm(mm, H, QUICK).passed


def test_mm_fully_halting_after_one_symbol():
    # psi0 = e0 (going); every symbol sends e0 into a halting state
    X = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
    Y = np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]], dtype=complex)
    target = MmQfa(3, Alphabet.of("ab"), [1, 0, 0], {"a": X, "b": Y, "$": X}, [1], [2], [0])
    H, report = run_mm(target)
    assert report.outcome is Outcome.LEARNED
    assert report.basis_size == 3
    assert verify_mm(target, H, QUICK).passed


def test_mm_initial_state_outside_going_subspace():
    # Trajectories are still reproduced; the first-step halting mass of psi0's
    # non-going part is invisible to the oracle, so probabilities may differ.
    base = gen_random_mm(4, "ab", 21)
    psi0 = np.full(4, 0.5, dtype=complex)
    target = MmQfa(4, base.alphabet, psi0, base.unitaries, base.accepting, base.rejecting, base.going)
    H, report = run_mm(target)
    assert report.outcome is Outcome.LEARNED
    (t_plain, t_end), _ = evaluate(target, QUICK)
    (h_plain, h_end), _ = evaluate(H, QUICK)
    assert np.max(np.abs(t_plain - h_plain)) <= 1e-8
    assert np.max(np.abs(t_end - h_end)) <= 1e-8
