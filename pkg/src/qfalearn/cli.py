"""Command-line interface: ``qfalearn {gen,learn,verify,accept,bench}``.

Exit codes: 0 success, 1 I/O failure, 2 usage or file-format error,
3 learner found no consistent machine, 4 verification failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import fileformat
from .automata import (Alphabet, MmQfa, MoQfa, Rfa, UnknownSymbol, gen_random_mm, gen_random_mo,
                       gen_random_rfa, mm_accept_prob, mm_reject_prob, mo_accept_prob, rfa_accepts)
from .learner import Outcome, learn_mm, learn_mo, learn_rfa
from .linalg import TOL_ISO, TOL_RANK
from .oracle import SimulatedMmOracle, SimulatedMoOracle, SimulatedRfaOracle
from .verify import ShapeMismatch, VerifyConfig, verify

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_NOT_EXIST, EXIT_VERIFY_FAIL = 0, 1, 2, 3, 4

BENCH_HEADER = ["kind", "n", "alphabet_size", "seed", "distinct_queries", "raw_queries",
                "basis_size", "learn_wall_time_s", "verify_max_deviation"]

GENERATORS = {"mo": gen_random_mo, "mm": gen_random_mm, "rfa": gen_random_rfa}


class UsageError(Exception):
    pass


def generate(kind: str, n: int, alphabet, seed: int):
    return GENERATORS[kind](n, alphabet, seed)


def learn(target, tol_rank: float = TOL_RANK, tol_iso: float = TOL_ISO):
    """Run the learner matching ``target`` against a simulated oracle for it."""
    if isinstance(target, Rfa):
        return learn_rfa(SimulatedRfaOracle(target), target.alphabet, target.accepting)
    if isinstance(target, MmQfa):
        return learn_mm(SimulatedMmOracle(target), target.n, target.alphabet, target.accepting,
                        target.rejecting, target.going, tol_rank, tol_iso)
    return learn_mo(SimulatedMoOracle(target), target.n, target.alphabet, target.accepting,
                    target.rejecting, tol_rank, tol_iso)


def _load(path):
    try:
        return fileformat.load(path)
    except fileformat.FormatError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _write_json(path, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def _alphabet(text: str) -> Alphabet:
    try:
        return Alphabet.of(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_gen(args) -> int:
    if args.states < 1:
        raise UsageError("--states must be at least 1")
    machine = generate(args.kind, args.states, _alphabet(args.alphabet), args.seed)
    fileformat.save(machine, args.out)
    return EXIT_OK


def cmd_learn(args) -> int:
    target = _load(args.target)
    hyp, report = learn(target, args.tol_rank, args.tol_iso)
    if args.report:
        _write_json(args.report, report.to_dict())
    if report.outcome is Outcome.NOT_EXIST:
        print("no consistent machine exists", file=sys.stderr)
        return EXIT_NOT_EXIST
    fileformat.save(hyp, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    target, learned = _load(args.target), _load(args.learned)
    cfg = VerifyConfig(args.max_len, args.random, 50 if args.random_max_len is None else args.random_max_len,
                       args.seed, args.tol)
    try:
        report = verify(target, learned, cfg)
    except ShapeMismatch as exc:
        raise UsageError(str(exc)) from exc
    if args.report:
        _write_json(args.report, report.to_dict())
    print("pass" if report.passed else f"FAIL (worst string {report.worst_string!r})")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def cmd_accept(args) -> int:
    machine = _load(args.machine)
    try:
        if isinstance(machine, Rfa):
            print(f"accept {1 if rfa_accepts(machine, args.word) else 0}")
        elif isinstance(machine, MmQfa):
            print(f"accept {mm_accept_prob(machine, args.word):.12g}")
            print(f"reject {mm_reject_prob(machine, args.word):.12g}")
        else:
            print(f"accept {mo_accept_prob(machine, args.word):.12g}")
    except UnknownSymbol as exc:
        raise UsageError(str(exc)) from exc
    return EXIT_OK


def parse_states(text: str) -> list[int]:
    """``"A..B"`` (inclusive) or a comma-separated list such as ``"2,4,8"``."""
    try:
        if ".." in text:
            a, b = (int(t) for t in text.split("..", 1))
            values = list(range(a, b + 1))
        else:
            values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --states value {text!r}") from exc
    if not values:
        raise UsageError(f"--states {text!r} is an empty range")
    if min(values) < 1:
        raise UsageError("state counts must be at least 1")
    return values


def bench_rows(kind: str, states: list[int], alphabet_size: int, seeds: int,
               cfg: VerifyConfig = VerifyConfig()) -> list[dict]:
    alphabet = Alphabet(tuple("abcdefghijklmnopqrstuvwxyz"[:alphabet_size]))
    rows = []
    for n in states:
        for seed in range(seeds):
            target = generate(kind, n, alphabet, seed)
            hyp, report = learn(target)
            if hyp is None:
                deviation = float("inf")
            else:
                v = verify(target, hyp, cfg)
                deviation = max(v.max_trajectory_deviation, v.max_probability_deviation)
            rows.append({"kind": kind, "n": n, "alphabet_size": alphabet_size, "seed": seed,
                         "distinct_queries": report.distinct_queries,
                         "raw_queries": report.raw_queries, "basis_size": report.basis_size,
                         "learn_wall_time_s": report.wall_time, "verify_max_deviation": deviation})
    return rows


def cmd_bench(args) -> int:
    states = parse_states(args.states)
    if not 1 <= args.alphabet_size <= 26:
        raise UsageError("--alphabet-size must be between 1 and 26")
    if args.seeds < 1:
        raise UsageError("--seeds must be at least 1")
    rows = bench_rows(args.kind, states, args.alphabet_size, args.seeds)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_HEADER)
        writer.writeheader()
        writer.writerows(rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfalearn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random automaton file")
    p.add_argument("--kind", choices=sorted(GENERATORS), required=True)
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--alphabet", required=True, help="input symbols, e.g. 'ab'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("learn", help="learn a hidden target through a simulated oracle")
    p.add_argument("--target", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.add_argument("--tol-rank", type=float, default=TOL_RANK)
    p.add_argument("--tol-iso", type=float, default=TOL_ISO)
    p.set_defaults(func=cmd_learn)

    p = sub.add_parser("verify", help="compare a learned machine against its target")
    p.add_argument("--target", required=True)
    p.add_argument("--learned", required=True)
    p.add_argument("--max-len", type=int, default=5)
    p.add_argument("--random", type=int, default=1000)
    p.add_argument("--random-max-len", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("accept", help="print acceptance probability of a word")
    p.add_argument("--machine", required=True)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_accept)

    p = sub.add_parser("bench", help="gen -> learn -> verify over a grid, written as CSV")
    p.add_argument("--kind", choices=sorted(GENERATORS), required=True)
    p.add_argument("--states", required=True, help="'A..B' or a list like '2,4,8'")
    p.add_argument("--alphabet-size", type=int, default=2)
    p.add_argument("--seeds", type=int, default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qfalearn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"qfalearn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qfalearn: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
