import csv
import json

import numpy as np
import pytest

from qfalearn import fileformat
from qfalearn.automata import rotation_mo
from qfalearn.cli import BENCH_HEADER, main
from qfalearn.verify import audit


@pytest.fixture
def tmp(tmp_path):
    return lambda name: str(tmp_path / name)


def test_gen_writes_valid_deterministic_file(tmp):
    args = ["gen", "--kind", "mo", "--states", "4", "--alphabet", "ab", "--seed", "42"]
    assert main(args + ["--out", tmp("a.json")]) == 0
    assert main(args + ["--out", tmp("b.json")]) == 0
    a, b = open(tmp("a.json"), "rb").read(), open(tmp("b.json"), "rb").read()
    assert a == b
    assert audit(fileformat.load(tmp("a.json"))) == []


def test_gen_round_trip_bytes(tmp):
    for kind in ("mo", "mm", "rfa"):
        main(["gen", "--kind", kind, "--states", "3", "--alphabet", "xyz", "--seed", "1", "--out", tmp("m.json")])
        text = open(tmp("m.json")).read()
        assert fileformat.dumps(fileformat.loads(text)) == text


def test_gen_usage_errors(tmp):
    assert main(["gen", "--kind", "mo", "--states", "0", "--alphabet", "ab", "--out", tmp("x.json")]) == 2
    assert main(["gen", "--kind", "mo", "--states", "2", "--alphabet", "aa", "--out", tmp("x.json")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--kind", "xx", "--states", "2", "--alphabet", "ab", "--out", tmp("x.json")])
    assert exc.value.code == 2


def test_gen_io_error(tmp):
    assert main(["gen", "--kind", "mo", "--states", "2", "--alphabet", "ab",
                 "--out", tmp("missing/dir/x.json")]) == 1


@pytest.mark.parametrize("kind", ["mo", "mm", "rfa"])
def test_learn_verify_pipeline(tmp, kind):
    main(["gen", "--kind", kind, "--states", "3", "--alphabet", "ab", "--seed", "5", "--out", tmp("t.json")])
    assert main(["learn", "--target", tmp("t.json"), "--out", tmp("h.json"), "--report", tmp("r.json")]) == 0
    report = json.load(open(tmp("r.json")))
    assert set(report) == {"distinct_queries", "raw_queries", "basis_size", "max_constraint_residual",
                           "max_unitarity_defect", "outcome", "wall_time"}
    assert report["outcome"] == "Learned"
    assert report["basis_size"] <= 3
    bound = {"mo": 1 + 3 * 2, "mm": 2 + 3 * 3, "rfa": 3 * 2 + 1}[kind]
    assert report["distinct_queries"] <= bound
    assert main(["verify", "--target", tmp("t.json"), "--learned", tmp("h.json"),
                 "--report", tmp("v.json")]) == 0
    v = json.load(open(tmp("v.json")))
    assert set(v) == {"strings_checked", "max_trajectory_deviation", "max_probability_deviation",
                      "worst_string", "passed"}
    assert v["passed"] is True


def test_learn_rejects_corrupted_file(tmp):
    open(tmp("bad.json"), "w").write('{"kind": "mo", "n": 2')
    assert main(["learn", "--target", tmp("bad.json"), "--out", tmp("h.json")]) == 2


def test_verify_self_and_mismatch(tmp):
    main(["gen", "--kind", "mo", "--states", "2", "--alphabet", "ab", "--out", tmp("mo.json")])
    main(["gen", "--kind", "mm", "--states", "2", "--alphabet", "ab", "--out", tmp("mm.json")])
    assert main(["verify", "--target", tmp("mo.json"), "--learned", tmp("mo.json")]) == 0
    assert main(["verify", "--target", tmp("mo.json"), "--learned", tmp("mm.json")]) == 2


def test_verify_failure_exit_code(tmp):
    main(["gen", "--kind", "mo", "--states", "3", "--alphabet", "ab", "--seed", "1", "--out", tmp("a.json")])
    doc = json.load(open(tmp("a.json")))
    doc["unitaries"]["a"] = [row[1:] + row[:1] for row in doc["unitaries"]["a"]]
    json.dump(doc, open(tmp("b.json"), "w"))
    assert main(["verify", "--target", tmp("a.json"), "--learned", tmp("b.json")]) == 4


def test_accept_rotation(tmp, capsys):
    fileformat.save(rotation_mo(), tmp("rot.json"))
    assert main(["accept", "--machine", tmp("rot.json"), "--word", "a"]) == 0
    out = capsys.readouterr().out.split()
    assert out[0] == "accept" and float(out[1]) == pytest.approx(0.5, abs=1e-12)
    assert main(["accept", "--machine", tmp("rot.json"), "--word", "b"]) == 2


def test_accept_rfa_and_mm(tmp, capsys):
    main(["gen", "--kind", "rfa", "--states", "3", "--alphabet", "ab", "--out", tmp("g.json")])
    main(["gen", "--kind", "mm", "--states", "3", "--alphabet", "ab", "--out", tmp("m.json")])
    capsys.readouterr()
    main(["accept", "--machine", tmp("g.json"), "--word", "abab"])
    assert capsys.readouterr().out.split()[1] in ("0", "1")
    main(["accept", "--machine", tmp("m.json"), "--word", "ab"])
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("accept ") and lines[1].startswith("reject ")
    assert float(lines[0].split()[1]) + float(lines[1].split()[1]) <= 1 + 1e-9


def test_bench_csv(tmp):
    assert main(["bench", "--kind", "mo", "--states", "2..6", "--alphabet-size", "2",
                 "--seeds", "3", "--out", tmp("b.csv")]) == 0
    with open(tmp("b.csv")) as fh:
        assert fh.readline().strip() == ",".join(BENCH_HEADER)
    rows = list(csv.DictReader(open(tmp("b.csv"))))
    assert len(rows) == 15
    for row in rows:
        assert float(row["verify_max_deviation"]) <= 1e-8
        assert int(row["distinct_queries"]) <= 1 + int(row["n"]) * 2


def test_bench_empty_range(tmp):
    assert main(["bench", "--kind", "mo", "--states", "6..2", "--out", tmp("b.csv")]) == 2
