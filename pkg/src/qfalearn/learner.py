"""Learning RFA, MO-1QFA and MM-1QFA from an AD oracle.

All three learners explore strings breadth-first from the empty word,
children pushed in alphabet order, keeping a string only when its oracle
reply is linearly independent of the replies kept so far. The QFA learners
then fix each unitary from its action on the kept replies and complete it
deterministically; the result can differ from the hidden unitary as a
matrix while producing the same trajectories.
"""

from __future__ import annotations

import enum
import time
from collections import deque
from dataclasses import asdict, dataclass, field

import numpy as np

from .automata import Alphabet, MmQfa, MoQfa, Rfa
from .linalg import (TOL_ISO, TOL_RANK, IsometryViolation, OrthoFrame, complete_isometry,
                     residual, unitarity_defect)
from .oracle import AdOracle


class NonBasisReply(ValueError):
    """An RFA oracle reply was not a 0/1 basis vector."""


class Outcome(str, enum.Enum):
    LEARNED = "Learned"
    NOT_EXIST = "NotExist"


@dataclass
class LearnReport:
    distinct_queries: int = 0
    raw_queries: int = 0
    basis_size: int = 0
    max_constraint_residual: float = 0.0
    max_unitarity_defect: float = 0.0
    outcome: Outcome = Outcome.LEARNED
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["outcome"] = self.outcome.value
        return d


@dataclass
class BasisSet:
    """Kept strings, their replies, and an orthonormal frame of their span.

    ``frame[j] = sum_i expansion[j][i] * vectors[i]``, so any linear map can
    be evaluated on the frame from its values on the kept replies.
    """

    dim: int
    words: list[str] = field(default_factory=list)
    vectors: list[np.ndarray] = field(default_factory=list)
    frame: OrthoFrame = None
    expansion: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        if self.frame is None:
            self.frame = OrthoFrame(self.dim)

    def __len__(self) -> int:
        return len(self.words)

    def try_add(self, word: str, v: np.ndarray, tol_rank: float) -> bool:
        added = _grow(self.frame, self.expansion, len(self.vectors), v, tol_rank)
        if added:
            self.words.append(word)
            self.vectors.append(v)
        return added

    def expansion_matrix(self) -> np.ndarray:
        return _expansion_matrix(self.expansion, len(self.vectors))


def _grow(frame: OrthoFrame, expansion: list, index: int, v, tol_rank: float) -> bool:
    """Extend ``frame`` by ``v`` (the ``index``-th source vector), tracking expansions."""
    r, norm, coeffs = residual(v, frame)
    if norm <= tol_rank or len(frame) >= frame.dim:
        return False
    row = np.zeros(index + 1, dtype=np.complex128)
    row[index] = 1.0
    for j, c in enumerate(coeffs):
        row[: len(expansion[j])] -= c * expansion[j]
    frame.vectors.append(r / norm)
    expansion.append(row / norm)
    return True


def _expansion_matrix(expansion: list, width: int) -> np.ndarray:
    T = np.zeros((len(expansion), width), dtype=np.complex128)
    for j, row in enumerate(expansion):
        T[j, : len(row)] = row
    return T


def explore(oracle: AdOracle, alphabet: Alphabet, tol_rank: float = TOL_RANK) -> BasisSet:
    """Breadth-first search for a basis of the span of all reachable replies."""
    basis = BasisSet(oracle.dim())
    frontier = deque([""])
    while frontier:
        x = frontier.popleft()
        if basis.try_add(x, oracle.query(x), tol_rank):
            frontier.extend(x + s for s in alphabet.symbols)
    return basis


def _check_instance(oracle: AdOracle, n: int, alphabet: Alphabet) -> None:
    if oracle.dim() != n:
        raise ValueError(f"oracle dimension {oracle.dim()} does not match n={n}")
    if oracle.alphabet().symbols != alphabet.symbols:
        raise ValueError("oracle alphabet does not match the given alphabet")


def _fit_unitary(domain: OrthoFrame, T: np.ndarray, sources: np.ndarray, targets: np.ndarray,
                 tol_iso: float, tol_rank: float) -> tuple[np.ndarray, float]:
    """Unitary ``V`` with ``V @ sources[:, i] == targets[:, i]``, given a frame of the sources.

    Returns ``V`` and the largest constraint residual.
    """
    images = targets @ T.T
    V = complete_isometry(domain, list(images.T), tol_iso, tol_rank)
    worst = float(np.max(np.linalg.norm(V @ sources - targets, axis=0), initial=0.0))
    if worst > tol_iso:
        raise IsometryViolation(f"constraint residual {worst:.3e} exceeds {tol_iso:g}")
    return V, worst


def _finish(report: LearnReport, oracle: AdOracle, t0: float) -> None:
    report.distinct_queries, report.raw_queries = oracle.query_count()
    report.wall_time = time.perf_counter() - t0


def learn_mo(oracle: AdOracle, n: int, alphabet: Alphabet, accepting, rejecting,
             tol_rank: float = TOL_RANK, tol_iso: float = TOL_ISO) -> tuple[MoQfa | None, LearnReport]:
    """Learn an MO-1QFA equivalent to the oracle's hidden machine.

    Returns ``(machine, report)``; ``machine`` is None when no consistent
    unitaries exist (``report.outcome`` is then ``NOT_EXIST``).
    """
    t0 = time.perf_counter()
    _check_instance(oracle, n, alphabet)
    report = LearnReport()
    psi0 = oracle.query("")
    basis = explore(oracle, alphabet, tol_rank)
    report.basis_size = len(basis)
    T = basis.expansion_matrix()
    sources = np.column_stack(basis.vectors)

    unitaries = {}
    try:
        for s in alphabet.symbols:
            targets = np.column_stack([oracle.query(x + s) for x in basis.words])
            V, worst = _fit_unitary(basis.frame, T, sources, targets, tol_iso, tol_rank)
            unitaries[s] = V
            report.max_constraint_residual = max(report.max_constraint_residual, worst)
            report.max_unitarity_defect = max(report.max_unitarity_defect, unitarity_defect(V))
    except IsometryViolation:
        report.outcome = Outcome.NOT_EXIST
        _finish(report, oracle, t0)
        return None, report
    _finish(report, oracle, t0)
    return MoQfa(n, alphabet, psi0, unitaries, accepting, rejecting), report


def learn_mm(oracle: AdOracle, n: int, alphabet: Alphabet, accepting, rejecting, going,
             tol_rank: float = TOL_RANK, tol_iso: float = TOL_ISO) -> tuple[MmQfa | None, LearnReport]:
    """Learn an MM-1QFA whose trajectories match the oracle's hidden machine.

    Unitaries are constrained on the going-projections of the kept replies.
    Those projections may be dependent or zero; a frame of their span is
    built, and every dependent projection is checked for consistency with
    the images already fixed instead of adding a constraint.
    """
    t0 = time.perf_counter()
    _check_instance(oracle, n, alphabet)
    report = LearnReport()
    end = alphabet.end_marker
    psi0 = oracle.query("")
    oracle.query(end)
    basis = explore(oracle, alphabet, tol_rank)
    report.basis_size = len(basis)

    going = tuple(sorted(int(i) for i in going))
    mask = np.zeros(n, dtype=bool)
    mask[list(going)] = True
    projected = np.column_stack(basis.vectors) * mask[:, None]
    pframe = OrthoFrame(n)
    pexpansion: list[np.ndarray] = []
    for i in range(projected.shape[1]):
        _grow(pframe, pexpansion, i, projected[:, i], tol_rank)
    T = _expansion_matrix(pexpansion, projected.shape[1])

    unitaries = {}
    try:
        for s in alphabet.working:
            targets = np.column_stack([oracle.query(x + s) for x in basis.words])
            V, worst = _fit_unitary(pframe, T, projected, targets, tol_iso, tol_rank)
            unitaries[s] = V
            report.max_constraint_residual = max(report.max_constraint_residual, worst)
            report.max_unitarity_defect = max(report.max_unitarity_defect, unitarity_defect(V))
    except IsometryViolation:
        report.outcome = Outcome.NOT_EXIST
        _finish(report, oracle, t0)
        return None, report
    _finish(report, oracle, t0)
    return MmQfa(n, alphabet, psi0, unitaries, accepting, rejecting, going), report


def learn_rfa(oracle: AdOracle, alphabet: Alphabet, accepting) -> tuple[Rfa, LearnReport]:
    """Learn the reachable part of a group automaton from basis-vector replies.

    States are renumbered in discovery order; the hypothesis accepts exactly
    where the hidden automaton does.
    """
    t0 = time.perf_counter()
    if oracle.alphabet().symbols != alphabet.symbols:
        raise ValueError("oracle alphabet does not match the given alphabet")
    accepting = set(int(q) for q in accepting)

    def state_of(x: str) -> int:
        v = oracle.query(x)
        hot = np.flatnonzero(v != 0)
        if len(hot) != 1 or v[hot[0]] != 1:
            raise NonBasisReply(f"reply to {x!r} is not a basis vector")
        return int(hot[0])

    start = state_of("")
    label = {start: 0}
    witness = [""]
    delta = {s: [] for s in alphabet.symbols}
    k = 0
    while k < len(witness):
        for s in alphabet.symbols:
            q = state_of(witness[k] + s)
            if q not in label:
                label[q] = len(witness)
                witness.append(witness[k] + s)
            delta[s].append(label[q])
        k += 1

    hidden = sorted(label, key=label.get)
    machine = Rfa(len(witness), alphabet, 0, {s: tuple(p) for s, p in delta.items()},
                  [label[q] for q in hidden if q in accepting])
    report = LearnReport(basis_size=len(witness))
    _finish(report, oracle, t0)
    return machine, report
