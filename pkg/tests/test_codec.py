import json

import numpy as np
import pytest

from choilab.codec import (
    channel_from_dict,
    channel_to_dict,
    dumps,
    loads,
    report_to_dict,
    state_from_dict,
    state_to_dict,
)
from choilab.errors import ParseError
from choilab.nonadditivity import binding_channel, choi_state, full_report

from conftest import random_state


def test_state_roundtrip_bit_exact(four_qubits):
    rng = np.random.default_rng(31)
    state = random_state(rng, four_qubits)
    text = dumps(state_to_dict(state))
    back = state_from_dict(loads(text))
    assert back.system == state.system
    assert np.array_equal(back.matrix, state.matrix)
    # a second pass through text is byte-identical
    assert dumps(state_to_dict(back)) == text


def test_channel_roundtrip_bit_exact():
    ch = binding_channel(2)  # includes genuinely complex Kraus entries
    text = dumps(channel_to_dict(ch))
    back = channel_from_dict(loads(text))
    assert back.name == ch.name
    assert back.input_system == ch.input_system
    assert back.output_system == ch.output_system
    assert len(back.kraus) == len(ch.kraus)
    for a, b in zip(back.kraus, ch.kraus):
        assert np.array_equal(a, b)
    assert dumps(channel_to_dict(back)) == text


def test_matrix_entries_are_re_im_pairs():
    state = choi_state(binding_channel(1))
    doc = json.loads(dumps(state_to_dict(state)))
    entry = doc["matrix"][0][0]
    assert isinstance(entry, list) and len(entry) == 2
    assert all(isinstance(x, float) for x in entry)


def test_report_schema():
    doc = report_to_dict(full_report())
    assert doc["overall"] == "pass"
    assert loads(dumps(doc)) == doc
    for entry in doc["entries"]:
        assert set(entry) == {
            "id",
            "description",
            "expected",
            "computed",
            "tolerance",
            "status",
            "control",
        }
    assert any(e["control"] for e in doc["entries"])


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("labels"),
        lambda d: d.update(labels="A"),
        lambda d: d.update(dims=[2, 2, 2]),
        lambda d: d.update(matrix=[[1.0]]),
        lambda d: d.update(matrix=[[[1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]),
    ],
)
def test_state_parse_errors(four_qubits, mutate):
    rng = np.random.default_rng(32)
    doc = state_to_dict(random_state(rng, four_qubits))
    mutate(doc)
    with pytest.raises(ParseError):
        state_from_dict(doc)


def test_invalid_density_matrix_is_parse_error():
    doc = {
        "labels": ["A"],
        "dims": [2],
        "matrix": [[[0.9, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
    }
    with pytest.raises(ParseError):
        state_from_dict(doc)


def test_channel_parse_errors():
    doc = channel_to_dict(binding_channel(1))
    del doc["kraus"]
    with pytest.raises(ParseError):
        channel_from_dict(doc)
    with pytest.raises(ParseError):
        loads('{"truncated": ')


def test_loads_rejects_bad_json():
    with pytest.raises(ParseError):
        loads("not json at all {{{")
