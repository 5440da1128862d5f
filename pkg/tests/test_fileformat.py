import json

import numpy as np
import pytest

from qfalearn import fileformat
from qfalearn.automata import gen_random_mm, gen_random_mo, gen_random_rfa, rotation_mo
from qfalearn.fileformat import FormatError


@pytest.mark.parametrize("gen", [gen_random_mo, gen_random_mm, gen_random_rfa])
def test_round_trip_is_byte_identical(gen):
    machine = gen(4, "ab", 7)
    text = fileformat.dumps(machine)
    again = fileformat.loads(text)
    assert fileformat.dumps(again) == text


def test_round_trip_preserves_values_exactly():
    M = gen_random_mm(3, "xy", 1)
    back = fileformat.loads(fileformat.dumps(M))
    np.testing.assert_array_equal(back.initial, M.initial)
    for s in M.unitaries:
        np.testing.assert_array_equal(back.unitaries[s], M.unitaries[s])
    assert back.going == M.going and back.alphabet == M.alphabet


def test_schema_fields():
    doc = json.loads(fileformat.dumps(gen_random_mm(2, "a", 0)))
    assert doc["kind"] == "mm" and doc["end_marker"] == "$"
    assert set(doc["unitaries"]) == {"a", "$"}
    assert len(doc["unitaries"]["a"]) == 2 and len(doc["unitaries"]["a"][0][0]) == 2
    rfa = json.loads(fileformat.dumps(gen_random_rfa(3, "ab", 0)))
    assert isinstance(rfa["initial"], int) and set(rfa["delta"]) == {"a", "b"}


def _mutated(change):
    doc = fileformat.to_dict(rotation_mo())
    change(doc)
    return json.dumps(doc)


@pytest.mark.parametrize("change", [
    lambda d: d.update(kind="dfa"),
    lambda d: d.update(n=0),
    lambda d: d.update(initial=[[0.9, 0.0], [0.0, 0.0]]),
    lambda d: d["unitaries"]["a"][0].__setitem__(0, [1.001, 0.0]),
    lambda d: d.update(accepting=[0, 1]),
    lambda d: d.update(rejecting=[]),
    lambda d: d.update(accepting=[5]),
    lambda d: d.pop("unitaries"),
    lambda d: d["unitaries"].update(b=d["unitaries"]["a"]),
    lambda d: d.update(alphabet=["a", "a"]),
])
def test_invalid_documents_are_rejected(change):
    with pytest.raises(FormatError):
        fileformat.loads(_mutated(change))


def test_rfa_non_permutation_rejected():
    doc = fileformat.to_dict(gen_random_rfa(3, "a", 0))
    doc["delta"]["a"] = [0, 0, 1]
    with pytest.raises(FormatError):
        fileformat.from_dict(doc)


def test_not_json():
    with pytest.raises(FormatError):
        fileformat.loads("{not json")
