"""Equivalence evidence between a target machine and a hypothesis.

Unitaries outside the reachable span are arbitrary in a learned machine,
so machines are compared through trajectories and acceptance
probabilities on a bounded-exhaustive plus seeded-random set of strings,
never entry by entry.
"""

from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np
from scipy.linalg import expm

from .automata import Alphabet, MmQfa, MoQfa, Rfa
from .linalg import unitarity_defect

TOL_UNITARY = 1e-10
TOL_NORM = 1e-10


class ShapeMismatch(ValueError):
    """The two machines are not comparable."""


@dataclass(frozen=True)
class VerifyConfig:
    max_exhaustive_len: int = 5
    random_trials: int = 1000
    random_max_len: int = 50
    seed: int = 0
    tol: float = 1e-8

    def __post_init__(self):
        if min(self.max_exhaustive_len, self.random_trials, self.random_max_len, self.seed) < 0:
            raise ValueError("verify configuration values must be non-negative")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass
class VerifyReport:
    strings_checked: int
    max_trajectory_deviation: float
    max_probability_deviation: float
    worst_string: str
    passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _random_words(alphabet: Alphabet, cfg: VerifyConfig) -> list[str]:
    rng = np.random.default_rng(cfg.seed)
    symbols = alphabet.symbols
    words = []
    for _ in range(cfg.random_trials):
        length = int(rng.integers(0, cfg.random_max_len + 1))
        words.append("".join(symbols[i] for i in rng.integers(0, len(symbols), size=length)))
    return words


def test_strings(alphabet: Alphabet, cfg: VerifyConfig) -> list[str]:
    """All strings up to ``cfg.max_exhaustive_len``, then ``cfg.random_trials`` random ones.

    Exhaustive strings come by length, each length in lexicographic symbol
    order; random lengths are uniform on ``0..cfg.random_max_len``.
    """
    words = ["".join(p) for k in range(cfg.max_exhaustive_len + 1)
             for p in itertools.product(alphabet.symbols, repeat=k)]
    return words + _random_words(alphabet, cfg)


test_strings.__test__ = False


def _check_shapes(target, hyp, kind) -> None:
    if not isinstance(target, kind) or not isinstance(hyp, kind):
        raise ShapeMismatch(f"expected two {kind.__name__} machines")
    if target.alphabet != hyp.alphabet:
        raise ShapeMismatch("alphabets differ")
    if kind is Rfa:
        return
    if target.n != hyp.n:
        raise ShapeMismatch(f"state counts differ: {target.n} vs {hyp.n}")
    parts = ("accepting", "rejecting", "going") if kind is MmQfa else ("accepting", "rejecting")
    for name in parts:
        if getattr(target, name) != getattr(hyp, name):
            raise ShapeMismatch(f"{name} sets differ")


def _mask(n: int, indices) -> np.ndarray:
    m = np.zeros((n, 1), dtype=bool)
    m[list(indices)] = True
    return m


def _evaluator(machine):
    """``(initial column, step(symbol, states), observe(states))`` for a machine.

    ``observe`` returns the trajectory blocks and the probability rows that
    two machines are compared on, one column per word.
    """
    if isinstance(machine, Rfa):
        perms = {s: np.array(p) for s, p in machine.delta.items()}
        accepted = np.zeros(machine.n)
        accepted[list(machine.accepting)] = 1.0
        return (np.array([machine.initial]), lambda s, X: perms[s][X],
                lambda X: ([], accepted[X]))

    if isinstance(machine, MmQfa):
        # rows: trajectory (n) | measure-after-every-step state (n) | accepted | rejected
        n, U = machine.n, machine.unitaries
        a, r, g = (_mask(n, idx) for idx in (machine.accepting, machine.rejecting, machine.going))
        U_end = U[machine.alphabet.end_marker]

        def step(s, X):
            phi = U[s] @ X[n:2 * n]
            return np.vstack([U[s] @ (X[:n] * g), phi * g,
                              X[2 * n] + np.sum(np.abs(phi * a) ** 2, axis=0),
                              X[2 * n + 1] + np.sum(np.abs(phi * r) ** 2, axis=0)])

        def observe(X):
            phi = U_end @ X[n:2 * n]
            acc = X[2 * n].real + np.sum(np.abs(phi * a) ** 2, axis=0)
            rej = X[2 * n + 1].real + np.sum(np.abs(phi * r) ** 2, axis=0)
            return [X[:n], U_end @ (X[:n] * g)], np.clip(np.vstack([acc, rej]), 0.0, 1.0)

        return np.concatenate([machine.initial, machine.initial, [0.0, 0.0]]), step, observe

    if isinstance(machine, MoQfa):
        a = _mask(machine.n, machine.accepting)
        return (machine.initial, lambda s, X: machine.unitaries[s] @ X,
                lambda X: ([X], np.clip(np.sum(np.abs(X * a) ** 2, axis=0, keepdims=True), 0.0, 1.0)))
    raise ShapeMismatch(f"unsupported machine type {type(machine).__name__}")


def evaluate(machine, cfg: VerifyConfig = VerifyConfig()):
    """Observables of ``machine`` on every word of :func:`test_strings`, in that order.

    The exhaustive part is computed level by level (each level is the
    previous one extended by every symbol), the random part in one batch
    grouped by symbol, so no per-word Python loop over matrices is needed.
    """
    init, step, observe = _evaluator(machine)
    symbols = machine.alphabet.symbols
    X = init[:, None]
    blocks = [X]
    for _ in range(cfg.max_exhaustive_len):
        X = np.stack([step(s, X) for s in symbols], axis=-1).reshape(X.shape[0], -1)
        blocks.append(X)

    words = _random_words(machine.alphabet, cfg)
    R = np.repeat(init[:, None], len(words), axis=1)
    for t in range(max((len(w) for w in words), default=0)):
        by_symbol: dict[str, list[int]] = {}
        for j, w in enumerate(words):
            if t < len(w):
                by_symbol.setdefault(w[t], []).append(j)
        for s, cols in by_symbol.items():
            R[:, cols] = step(s, R[:, cols])
    blocks.append(R)
    return observe(np.concatenate(blocks, axis=1))


def _word_at(index: int, alphabet: Alphabet, cfg: VerifyConfig) -> str:
    """Inverse of the ordering used by :func:`test_strings`."""
    k = len(alphabet)
    for length in range(cfg.max_exhaustive_len + 1):
        if index < k ** length:
            digits = []
            for _ in range(length):
                index, d = divmod(index, k)
                digits.append(alphabet.symbols[d])
            return "".join(reversed(digits))
        index -= k ** length
    return _random_words(alphabet, cfg)[index]


def _compare(target, hyp, cfg: VerifyConfig) -> VerifyReport:
    t_traj, t_prob = evaluate(target, cfg)
    h_traj, h_prob = evaluate(hyp, cfg)
    m = t_prob.shape[-1]
    traj = np.zeros(m)
    for A, B in zip(t_traj, h_traj):
        traj = np.maximum(traj, np.linalg.norm(A - B, axis=0))
    prob = np.abs(t_prob - h_prob).reshape(-1, m).max(axis=0)
    if isinstance(target, Rfa):
        count = float(np.count_nonzero(prob))
        worst = _word_at(int(np.argmax(prob)), target.alphabet, cfg) if count else ""
        return VerifyReport(m, count, count, worst, count == 0)
    t, p = float(traj.max()), float(prob.max())
    worst = _word_at(int(np.argmax(np.maximum(traj, prob))), target.alphabet, cfg)
    return VerifyReport(m, t, p, worst, t <= cfg.tol and p <= cfg.tol)


def verify_mo(target: MoQfa, hyp: MoQfa, cfg: VerifyConfig = VerifyConfig()) -> VerifyReport:
    _check_shapes(target, hyp, MoQfa)
    return _compare(target, hyp, cfg)


def verify_mm(target: MmQfa, hyp: MmQfa, cfg: VerifyConfig = VerifyConfig()) -> VerifyReport:
    """Compare trajectories on ``x`` and ``x$`` and accept/reject probabilities of ``x$``."""
    _check_shapes(target, hyp, MmQfa)
    return _compare(target, hyp, cfg)


def verify_rfa(target: Rfa, hyp: Rfa, cfg: VerifyConfig = VerifyConfig()) -> VerifyReport:
    """Both deviations are the number of strings on which acceptance differs."""
    _check_shapes(target, hyp, Rfa)
    return _compare(target, hyp, cfg)


def verify(target, hyp, cfg: VerifyConfig = VerifyConfig()) -> VerifyReport:
    """Dispatch on machine kind."""
    if isinstance(target, Rfa):
        return verify_rfa(target, hyp, cfg)
    if isinstance(target, MmQfa):
        return verify_mm(target, hyp, cfg)
    if isinstance(target, MoQfa):
        return verify_mo(target, hyp, cfg)
    raise ShapeMismatch(f"unsupported machine type {type(target).__name__}")


def _partition_problems(n: int, classes: dict[str, tuple[int, ...]]) -> list[str]:
    problems = []
    seen: dict[int, str] = {}
    for name, idx in classes.items():
        for q in idx:
            if not 0 <= q < n:
                problems.append(f"partition: {name} index {q} out of range")
            elif q in seen:
                problems.append(f"partition: state {q} is both {seen[q]} and {name}")
            else:
                seen[q] = name
    missing = sorted(set(range(n)) - set(seen))
    if missing:
        problems.append(f"partition: states {missing} are in no class")
    return problems


def audit(machine) -> list[str]:
    """Type-invariant violations of a machine; empty when it is well formed."""
    problems: list[str] = []
    if isinstance(machine, Rfa):
        for s, perm in machine.delta.items():
            if sorted(perm) != list(range(machine.n)):
                problems.append(f"permutation[{s}]: delta is not a bijection")
        for q in machine.accepting:
            if not 0 <= q < machine.n:
                problems.append(f"partition: accepting index {q} out of range")
        return problems

    if not (np.all(np.isfinite(machine.initial))
            and all(np.all(np.isfinite(U)) for U in machine.unitaries.values())):
        return ["finite: non-finite entries"]
    norm = float(np.linalg.norm(machine.initial))
    if abs(norm - 1.0) > TOL_NORM:
        problems.append(f"normalization: ||initial|| = {norm:.12g}")
    for s, U in machine.unitaries.items():
        d = unitarity_defect(U)
        if d > TOL_UNITARY:
            problems.append(f"unitarity[{s}]: defect {d:.3e}")
    classes = {"accepting": machine.accepting, "rejecting": machine.rejecting}
    if isinstance(machine, MmQfa):
        classes["going"] = machine.going
    problems += _partition_problems(machine.n, classes)
    return problems


def perturb_unitary(U: np.ndarray, size: float, rng: np.random.Generator) -> np.ndarray:
    """Return ``W @ U`` for a random unitary ``W`` with ``||W U - U||_F == size``.

    ``W = exp(i t H)`` for a random Hermitian ``H``, with ``t`` found by
    bisection so the Frobenius distance is exact.
    """
    n = U.shape[0]
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = (G + G.conj().T) / 2
    H /= np.linalg.norm(H, 2)
    eye = np.eye(n)

    def dist(t):
        return np.linalg.norm(expm(1j * t * H) - eye, "fro")

    lo, hi = 0.0, size
    while dist(hi) < size:
        hi *= 2
        if hi > np.pi:
            raise ValueError(f"perturbation size {size} not reachable")
    for _ in range(60):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if dist(mid) < size else (lo, mid)
    return expm(1j * hi * H) @ U


def mutate(machine, symbol: str, size: float, rng: np.random.Generator):
    """Copy of a QFA with ``U(symbol)`` perturbed by :func:`perturb_unitary`."""
    unitaries = dict(machine.unitaries)
    unitaries[symbol] = perturb_unitary(unitaries[symbol], size, rng)
    if isinstance(machine, MmQfa):
        return MmQfa(machine.n, machine.alphabet, machine.initial, unitaries,
                     machine.accepting, machine.rejecting, machine.going)
    return MoQfa(machine.n, machine.alphabet, machine.initial, unitaries,
                 machine.accepting, machine.rejecting)

