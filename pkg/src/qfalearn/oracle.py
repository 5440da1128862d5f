"""Amplitude-distribution (AD) oracles.

An AD oracle answers, for an input string, the exact state vector the hidden
machine reaches. Learners see only the :class:`AdOracle` interface. Answers
are cached: ``raw_queries`` counts every call, ``distinct_queries`` only
cache misses.
"""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod

import numpy as np

from .automata import Alphabet, MmQfa, MoQfa, Rfa, mm_trajectory, mo_trajectory, rfa_run


class IllegalQueryString(ValueError):
    """The oracle has no answer for this string."""


class AdOracle(ABC):
    """Base class: caching, counting and string validation."""

    def __init__(self):
        self._cache: dict[str, np.ndarray] = {}
        self._raw = 0
        self._lock = threading.Lock()

    @abstractmethod
    def dim(self) -> int: ...

    @abstractmethod
    def alphabet(self) -> Alphabet: ...

    @abstractmethod
    def _answer(self, x: str) -> np.ndarray: ...

    def _validate(self, x: str) -> None:
        symbols = self.alphabet().symbols
        for ch in x:
            if ch not in symbols:
                raise IllegalQueryString(f"symbol {ch!r} is not in the alphabet")

    def query(self, x: str) -> np.ndarray:
        """Amplitude distribution reached on ``x`` (read-only array)."""
        self._validate(x)
        with self._lock:
            self._raw += 1
            hit = self._cache.get(x)
        if hit is not None:
            return hit
        v = np.array(self._answer(x), dtype=np.complex128)
        v.setflags(write=False)
        with self._lock:
            return self._cache.setdefault(x, v)

    @property
    def raw_queries(self) -> int:
        return self._raw

    @property
    def distinct_queries(self) -> int:
        return len(self._cache)

    def query_count(self) -> tuple[int, int]:
        """``(distinct, raw)``."""
        with self._lock:
            return len(self._cache), self._raw


class SimulatedMoOracle(AdOracle):
    def __init__(self, target: MoQfa):
        super().__init__()
        self._target = target

    def dim(self) -> int:
        return self._target.n

    def alphabet(self) -> Alphabet:
        return self._target.alphabet

    def _answer(self, x: str) -> np.ndarray:
        return mo_trajectory(self._target, x)


class SimulatedMmOracle(AdOracle):
    """Answers ``x`` over the input alphabet, optionally followed by one end-marker."""

    def __init__(self, target: MmQfa):
        super().__init__()
        self._target = target

    def dim(self) -> int:
        return self._target.n

    def alphabet(self) -> Alphabet:
        return self._target.alphabet

    def _validate(self, x: str) -> None:
        end = self._target.alphabet.end_marker
        super()._validate(x[:-1] if x.endswith(end) else x)

    def _answer(self, x: str) -> np.ndarray:
        return mm_trajectory(self._target, x)


class SimulatedRfaOracle(AdOracle):
    """Answers the basis vector of the state the automaton reaches."""

    def __init__(self, target: Rfa):
        super().__init__()
        self._target = target

    def dim(self) -> int:
        return self._target.n

    def alphabet(self) -> Alphabet:
        return self._target.alphabet

    def _answer(self, x: str) -> np.ndarray:
        v = np.zeros(self._target.n, dtype=np.complex128)
        v[rfa_run(self._target, x)] = 1.0
        return v


class AaOracle:
    """Accepting-amplitude view of an AD oracle.

    Returns only the amplitudes on the accepting states. Provided for
    demonstration: no learner here consumes it, since this information is
    not enough to learn in polynomially many queries.
    """

    def __init__(self, oracle: AdOracle, accepting):
        self._oracle = oracle
        self._accepting = list(accepting)

    def query(self, x: str) -> np.ndarray:
        return self._oracle.query(x)[self._accepting]
