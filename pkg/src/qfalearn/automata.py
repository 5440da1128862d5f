"""Measure-once and measure-many one-way QFA, and reversible finite automata.

Conventions: states are indexed ``0..n-1`` and basis vector ``e_i`` has a 1
at index ``i``. Unitaries act on column vectors, so reading ``s1 s2 ... sk``
from ``psi0`` gives ``U(sk) ... U(s1) psi0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .linalg import DimensionError, haar_unitary


class UnknownSymbol(ValueError):
    """A word contains a character outside the machine's alphabet."""


@dataclass(frozen=True)
class Alphabet:
    """Ordered input alphabet plus the end-marker used by MM-1QFA."""

    symbols: tuple[str, ...]
    end_marker: str = "$"

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise ValueError("alphabet must be non-empty")
        if any(not isinstance(s, str) or len(s) != 1 for s in symbols):
            raise ValueError("alphabet symbols must be single characters")
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"duplicate symbols in alphabet {symbols!r}")
        if not isinstance(self.end_marker, str) or len(self.end_marker) != 1:
            raise ValueError("end marker must be a single character")
        if self.end_marker in symbols:
            raise ValueError(f"end marker {self.end_marker!r} occurs in the alphabet")

    @classmethod
    def of(cls, symbols: str | Sequence[str], end_marker: str = "$") -> "Alphabet":
        return cls(tuple(symbols), end_marker)

    @property
    def working(self) -> tuple[str, ...]:
        """Input symbols followed by the end-marker."""
        return self.symbols + (self.end_marker,)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self.symbols


def _index_tuple(indices) -> tuple[int, ...]:
    return tuple(sorted(int(i) for i in indices))


def _check_word(word: str, allowed) -> None:
    for ch in word:
        if ch not in allowed:
            raise UnknownSymbol(f"symbol {ch!r} is not in the alphabet")


@dataclass(frozen=True, eq=False)
class MoQfa:
    """Measure-once one-way QFA.

    Only shapes are validated on construction; tolerance-level invariants
    (unitarity, normalization, partition) are reported by
    :func:`qfalearn.verify.audit` so that malformed machines can still be
    inspected.
    """

    n: int
    alphabet: Alphabet
    initial: np.ndarray
    unitaries: Mapping[str, np.ndarray]
    accepting: tuple[int, ...]
    rejecting: tuple[int, ...]

    def __post_init__(self):
        _init_quantum(self, self.alphabet.symbols)
        object.__setattr__(self, "accepting", _index_tuple(self.accepting))
        object.__setattr__(self, "rejecting", _index_tuple(self.rejecting))


@dataclass(frozen=True, eq=False)
class MmQfa:
    """Measure-many one-way QFA; ``unitaries`` covers the end-marker too."""

    n: int
    alphabet: Alphabet
    initial: np.ndarray
    unitaries: Mapping[str, np.ndarray]
    accepting: tuple[int, ...]
    rejecting: tuple[int, ...]
    going: tuple[int, ...]

    def __post_init__(self):
        _init_quantum(self, self.alphabet.working)
        object.__setattr__(self, "accepting", _index_tuple(self.accepting))
        object.__setattr__(self, "rejecting", _index_tuple(self.rejecting))
        object.__setattr__(self, "going", _index_tuple(self.going))

    def project_going(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v)
        idx = list(self.going)
        out[idx] = v[idx]
        return out


def _init_quantum(machine, keys) -> None:
    n = int(machine.n)
    if n < 1:
        raise DimensionError("state count must be positive")
    initial = np.array(machine.initial, dtype=np.complex128)
    if initial.shape != (n,):
        raise DimensionError(f"initial state has shape {initial.shape}, expected ({n},)")
    unitaries = {}
    for s in keys:
        if s not in machine.unitaries:
            raise ValueError(f"no unitary given for symbol {s!r}")
        U = np.array(machine.unitaries[s], dtype=np.complex128)
        if U.shape != (n, n):
            raise DimensionError(f"U({s}) has shape {U.shape}, expected ({n}, {n})")
        U.setflags(write=False)
        unitaries[s] = U
    extra = set(machine.unitaries) - set(keys)
    if extra:
        raise UnknownSymbol(f"unitaries given for unknown symbols {sorted(extra)!r}")
    initial.setflags(write=False)
    object.__setattr__(machine, "n", n)
    object.__setattr__(machine, "initial", initial)
    object.__setattr__(machine, "unitaries", unitaries)


@dataclass(frozen=True, eq=False)
class Rfa:
    """Reversible (group) automaton; ``delta[s][p]`` is the successor of ``p`` on ``s``."""

    n: int
    alphabet: Alphabet
    initial: int
    delta: Mapping[str, tuple[int, ...]]
    accepting: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("state count must be positive")
        if not 0 <= self.initial < self.n:
            raise ValueError(f"initial state {self.initial} out of range")
        delta = {}
        for s in self.alphabet.symbols:
            if s not in self.delta:
                raise ValueError(f"no transition given for symbol {s!r}")
            perm = tuple(int(q) for q in self.delta[s])
            if len(perm) != self.n:
                raise DimensionError(f"delta({s}) has length {len(perm)}, expected {self.n}")
            delta[s] = perm
        extra = set(self.delta) - set(self.alphabet.symbols)
        if extra:
            raise UnknownSymbol(f"transitions given for unknown symbols {sorted(extra)!r}")
        object.__setattr__(self, "initial", int(self.initial))
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "accepting", _index_tuple(self.accepting))


# -- semantics ---------------------------------------------------------------

def mo_trajectory(M: MoQfa, word: str) -> np.ndarray:
    """State ``U(word) psi0`` reached after reading ``word``."""
    _check_word(word, M.alphabet.symbols)
    v = M.initial.copy()
    for s in word:
        v = M.unitaries[s] @ v
    return v


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, float(p)))


def mo_accept_prob(M: MoQfa, word: str) -> float:
    v = mo_trajectory(M, word)
    return _clamp(np.sum(np.abs(v[list(M.accepting)]) ** 2))


def mm_trajectory(M: MmQfa, word: str) -> np.ndarray:
    """Un-normalized state ``U(sk) P_g ... U(s1) P_g psi0`` for a word over the working alphabet."""
    _check_word(word, M.alphabet.working)
    v = M.initial.copy()
    for s in word:
        v = M.unitaries[s] @ M.project_going(v)
    return v


def mm_halting_profile(M: MmQfa, word: str) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative accept and reject probabilities after each symbol of ``word + $``.

    Follows the measure-after-every-step sum literally: the first unitary
    acts on ``psi0`` itself, each later one on the going component of the
    previous step.
    """
    _check_word(word, M.alphabet.symbols)
    acc_idx, rej_idx = list(M.accepting), list(M.rejecting)
    acc = np.empty(len(word) + 1)
    rej = np.empty(len(word) + 1)
    pa = pr = 0.0
    v = M.initial
    for k, s in enumerate(word + M.alphabet.end_marker):
        phi = M.unitaries[s] @ v
        pa += np.sum(np.abs(phi[acc_idx]) ** 2)
        pr += np.sum(np.abs(phi[rej_idx]) ** 2)
        acc[k], rej[k] = pa, pr
        v = M.project_going(phi)
    return acc, rej


def mm_accept_prob(M: MmQfa, word: str) -> float:
    """Probability that ``word$`` is accepted; ``word`` is over the input alphabet."""
    return _clamp(mm_halting_profile(M, word)[0][-1])


def mm_reject_prob(M: MmQfa, word: str) -> float:
    return _clamp(mm_halting_profile(M, word)[1][-1])


def rfa_run(G: Rfa, word: str, start: int | None = None) -> int:
    _check_word(word, G.alphabet.symbols)
    q = G.initial if start is None else start
    for s in word:
        q = G.delta[s][q]
    return q


def rfa_accepts(G: Rfa, word: str) -> bool:
    return rfa_run(G, word) in G.accepting


def rfa_to_mo(G: Rfa) -> MoQfa:
    """Embed a group automaton as an MO-1QFA with permutation matrices."""
    unitaries = {}
    for s, perm in G.delta.items():
        P = np.zeros((G.n, G.n), dtype=np.complex128)
        P[list(perm), np.arange(G.n)] = 1.0
        unitaries[s] = P
    initial = np.zeros(G.n, dtype=np.complex128)
    initial[G.initial] = 1.0
    rejecting = [q for q in range(G.n) if q not in G.accepting]
    return MoQfa(G.n, G.alphabet, initial, unitaries, G.accepting, rejecting)


# -- constructors -------------------------------------------------------------

def rotation_mo(angle: float = np.pi / 4, symbol: str = "a") -> MoQfa:
    """Two-state machine rotating by ``angle`` per symbol; accepts ``a^k`` w.p. ``cos^2(k*angle)``."""
    c, s = np.cos(angle), np.sin(angle)
    U = np.array([[c, -s], [s, c]], dtype=np.complex128)
    return MoQfa(2, Alphabet((symbol,)), np.array([1.0, 0.0]), {symbol: U}, (0,), (1,))


def _random_unit_vector(n: int, rng: np.random.Generator, support=None) -> np.ndarray:
    v = np.zeros(n, dtype=np.complex128)
    idx = list(range(n)) if support is None else list(support)
    v[idx] = rng.standard_normal(len(idx)) + 1j * rng.standard_normal(len(idx))
    return v / np.linalg.norm(v)


def _coerce_alphabet(alphabet) -> Alphabet:
    return alphabet if isinstance(alphabet, Alphabet) else Alphabet.of(alphabet)


def gen_random_mo(n: int, alphabet, seed: int) -> MoQfa:
    """Random MO-1QFA with Haar unitaries and a uniformly random accept/reject split."""
    if n < 1:
        raise ValueError("n must be at least 1")
    alphabet = _coerce_alphabet(alphabet)
    rng = np.random.default_rng(seed)
    unitaries = {s: haar_unitary(n, rng) for s in alphabet.symbols}
    initial = _random_unit_vector(n, rng)
    labels = rng.integers(0, 2, size=n)
    accepting = np.flatnonzero(labels == 0)
    rejecting = np.flatnonzero(labels == 1)
    return MoQfa(n, alphabet, initial, unitaries, accepting, rejecting)


def gen_random_mm(n: int, alphabet, seed: int) -> MmQfa:
    """Random MM-1QFA with Haar unitaries over the working alphabet.

    States are split uniformly into accepting/rejecting/going, re-drawn until
    the going class is non-empty; the initial state is a random unit vector
    supported on the going states.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    alphabet = _coerce_alphabet(alphabet)
    rng = np.random.default_rng(seed)
    unitaries = {s: haar_unitary(n, rng) for s in alphabet.working}
    while True:
        labels = rng.integers(0, 3, size=n)
        if np.any(labels == 2):
            break
    going = np.flatnonzero(labels == 2)
    initial = _random_unit_vector(n, rng, support=going)
    return MmQfa(n, alphabet, initial, unitaries,
                 np.flatnonzero(labels == 0), np.flatnonzero(labels == 1), going)


def gen_random_rfa(n: int, alphabet, seed: int) -> Rfa:
    if n < 1:
        raise ValueError("n must be at least 1")
    alphabet = _coerce_alphabet(alphabet)
    rng = np.random.default_rng(seed)
    delta = {s: tuple(int(q) for q in rng.permutation(n)) for s in alphabet.symbols}
    initial = int(rng.integers(0, n))
    accepting = np.flatnonzero(rng.integers(0, 2, size=n) == 1)
    return Rfa(n, alphabet, initial, delta, accepting)
