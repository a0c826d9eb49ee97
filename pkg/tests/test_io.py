import json

import pytest

from llg import io, library
from llg.deformation import GaugeJet
from llg.lie_algebra import StructureConstants
from llg.parallelism import connection_from_frame
from llg.poly import ParseError


@pytest.mark.parametrize("name", sorted(library.examples()))
def test_examples_round_trip(name, tmp_path):
    ex = library.get(name)
    if ex.kind == "frame":
        data, back = io.frame_to_dict(ex.frame), io.frame_from_dict
    elif ex.kind == "jet":
        data, back = io.jet_to_dict(ex.jet), io.jet_from_dict
    else:
        data, back = io.constants_to_dict(ex.constants), io.constants_from_dict
    path = tmp_path / f"{name}.json"
    path.write_text(io.dumps(data))
    kind, obj = io.load_any(path)
    assert kind == ex.kind
    assert io.dumps({"frame": io.frame_to_dict, "jet": io.jet_to_dict,
                     "constants": io.constants_to_dict}[kind](obj)) == io.dumps(data)
    assert back(json.loads(io.dumps(data))) is not None


def test_connection_round_trip():
    C = connection_from_frame(library.get("engel-4").frame)
    data = io.connection_to_dict(C)
    assert data["gamma"] == [{"i": 3, "k": 1, "j": 2, "val": "1"}, {"i": 4, "k": 1, "j": 3, "val": "1"}]
    assert io.connection_from_dict(data).gamma == C.gamma


def test_constants_file_lists_upper_entries():
    g = StructureConstants.from_upper(2, [(2, 1, 2, "1/2")])
    assert io.constants_to_dict(g) == {"n": 2, "c": [{"i": 2, "j": 1, "k": 2, "val": "1/2"}]}


def test_frame_without_inverse_is_inverted():
    F = io.frame_from_dict({"n": 2, "frame": [["1", "0"], ["x1", 1]]})
    assert io.frame_to_dict(F)["inverse"] == [["1", "0"], ["-x1", "1"]]


def test_jet_leading_identity_and_padding():
    plain = io.jet_from_dict({"n": 2, "order": 1, "coeffs": [[["1", "2"], ["3", "4"]]]})
    led = io.jet_from_dict({"n": 2, "order": 1, "coeffs": [[["1", "0"], ["0", "1"]], [["1", "2"], ["3", "4"]]]})
    assert plain.F == led.F
    padded = io.jet_from_dict({"n": 2, "order": 3, "coeffs": [[["1", "2"], ["3", "4"]]]})
    assert padded.order == 3 and padded.F[2] == GaugeJet.identity(2, 3).F[2]


@pytest.mark.parametrize("data", [
    {"n": 2, "frame": [["1", "0"]]},
    {"n": 0, "frame": []},
    {"n": 2, "frame": [["1", "0"], ["x3", "1"]]},
    {"n": 2, "frame": [["1", "0"], ["0.5", "1"]]},
    {"n": 2, "frame": [["1", "0"], [True, "1"]]},
    {"n": 2, "gamma": [{"i": 3, "k": 1, "j": 1, "val": "1"}]},
    {"n": 2, "gamma": [{"i": 1, "k": 1, "j": 1, "val": "1"}, {"i": 1, "k": 1, "j": 1, "val": "2"}]},
    {"n": 2, "gamma": "x"},
    {"n": 2, "c": [{"i": 1, "j": 1, "k": 2, "val": "a"}]},
    {"n": 2, "c": [{"i": 1, "j": 1, "k": 1, "val": "1"}]},
    {"n": 2, "coeffs": [[["0", "0"], ["0", "0"]]], "order": 0},
    {"n": 2, "coeffs": [[["2", "0"], ["0", "1"]], [["0", "0"], ["0", "0"]]], "order": 1},
    {"n": 2, "coeffs": [[["0", "0"], ["0", "0"]]] * 3, "order": 1},
    {"n": 2, "unknown": 1},
])
def test_malformed_inputs_raise_parse_errors(data, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ParseError):
        io.load_any(path)


def test_invalid_json_and_missing_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        io.load_any(bad)
    with pytest.raises(ParseError):
        io.load_any(tmp_path / "missing.json")


def test_points_and_rationals():
    assert io.parse_point("1, -1/2,3", 3) == [1, io.parse_rational("-1/2"), 3]
    with pytest.raises(ParseError):
        io.parse_point("1,2", 3)
    with pytest.raises(ParseError):
        io.parse_rational("1/0")
    assert io.format_rational(io.parse_rational(6)) == "6"


def test_dumps_is_canonical():
    assert io.dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
