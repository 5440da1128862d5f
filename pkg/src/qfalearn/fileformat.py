"""JSON automaton files.

A file is a UTF-8 JSON object with ``kind`` ("mo", "mm" or "rfa"), ``n``,
``alphabet``, ``end_marker`` (MM only), ``initial`` (list of ``[re, im]``
pairs, or a state index for RFA), ``unitaries`` (symbol -> row-major matrix
of ``[re, im]`` pairs; RFA files carry ``delta``: symbol -> permutation list)
and the sorted index lists ``accepting``/``rejecting``/``going``.
"""

from __future__ import annotations

import json

import numpy as np

from .automata import Alphabet, MmQfa, MoQfa, Rfa


class FormatError(ValueError):
    """The document is not a valid automaton file."""


def _pairs(v: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in v]


def _complex_vector(data, what: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{what}: expected [re, im] pairs") from exc
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise FormatError(f"{what}: expected [re, im] pairs")
    if not np.all(np.isfinite(arr)):
        raise FormatError(f"{what}: non-finite entry")
    return arr[..., 0] + 1j * arr[..., 1]


def to_dict(machine) -> dict:
    if isinstance(machine, Rfa):
        return {
            "kind": "rfa",
            "n": machine.n,
            "alphabet": list(machine.alphabet.symbols),
            "initial": machine.initial,
            "delta": {s: list(machine.delta[s]) for s in machine.alphabet.symbols},
            "accepting": list(machine.accepting),
        }
    if isinstance(machine, MmQfa):
        keys, kind = machine.alphabet.working, "mm"
    elif isinstance(machine, MoQfa):
        keys, kind = machine.alphabet.symbols, "mo"
    else:
        raise TypeError(f"cannot serialize {type(machine).__name__}")
    doc = {"kind": kind, "n": machine.n, "alphabet": list(machine.alphabet.symbols)}
    if kind == "mm":
        doc["end_marker"] = machine.alphabet.end_marker
    doc["initial"] = _pairs(machine.initial)
    doc["unitaries"] = {s: [_pairs(row) for row in machine.unitaries[s]] for s in keys}
    doc["accepting"] = list(machine.accepting)
    doc["rejecting"] = list(machine.rejecting)
    if kind == "mm":
        doc["going"] = list(machine.going)
    return doc


def dumps(machine) -> str:
    return json.dumps(to_dict(machine), indent=1) + "\n"


def _indices(doc: dict, key: str, n: int) -> list[int]:
    vals = doc.get(key, [])
    if not isinstance(vals, list) or any(isinstance(i, bool) or not isinstance(i, int) for i in vals):
        raise FormatError(f"{key}: expected a list of integers")
    if vals != sorted(set(vals)):
        raise FormatError(f"{key}: indices must be sorted and distinct")
    if any(not 0 <= i < n for i in vals):
        raise FormatError(f"{key}: index out of range")
    return vals


def from_dict(doc: dict, check: bool = True):
    """Build a machine from a parsed document.

    With ``check`` the machine must also pass :func:`qfalearn.verify.audit`.
    """
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object")
    kind = doc.get("kind")
    n = doc.get("n")
    if kind not in ("mo", "mm", "rfa"):
        raise FormatError(f"unknown kind {kind!r}")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FormatError("n must be a positive integer")
    try:
        alphabet = Alphabet(tuple(doc["alphabet"]), doc.get("end_marker", "$"))
        if kind == "rfa":
            initial = doc["initial"]
            if isinstance(initial, bool) or not isinstance(initial, int):
                raise FormatError("initial: expected a state index")
            delta = doc["delta"]
            if not isinstance(delta, dict):
                raise FormatError("delta: expected an object")
            machine = Rfa(n, alphabet, initial, {s: tuple(p) for s, p in delta.items()},
                          _indices(doc, "accepting", n))
        else:
            initial = _complex_vector(doc["initial"], "initial")
            raw = doc["unitaries"]
            if not isinstance(raw, dict):
                raise FormatError("unitaries: expected an object")
            unitaries = {s: _complex_vector(m, f"unitaries[{s}]") for s, m in raw.items()}
            parts = [_indices(doc, "accepting", n), _indices(doc, "rejecting", n)]
            if kind == "mm":
                machine = MmQfa(n, alphabet, initial, unitaries, *parts, _indices(doc, "going", n))
            else:
                machine = MoQfa(n, alphabet, initial, unitaries, *parts)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed {kind} file: {exc}") from exc
    if check:
        from .verify import audit

        problems = audit(machine)
        if problems:
            raise FormatError("; ".join(problems))
    return machine


def loads(text: str, check: bool = True):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return from_dict(doc, check)


def save(machine, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(machine))


def load(path, check: bool = True):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), check)
