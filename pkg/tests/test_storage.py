from __future__ import annotations

import json
from fractions import Fraction

import pytest

from conecalc.cone import normalized
from conecalc.errors import InvalidDocument, ParseError
from conecalc.homlattice import ManifoldDescriptor, parse_class
from conecalc.inflation import replay, section_descent
from conecalc.storage import (
    canonical_json,
    load_path,
    load_profile,
    path_from_dict,
    path_to_dict,
    profile_from_dict,
    profile_to_dict,
    read_json,
    save_path,
)
from conecalc.strata import Bad, Decomposition, Embedded, JProfile, Mild

HALF = Fraction(1, 2)
DESC = ManifoldDescriptor(1, 2)


def descent_path():
    return section_descent(normalized(5, [HALF, HALF]), 0, (), Fraction(1), DESC)


def test_canonical_json_is_sorted_and_newline_terminated():
    """Test that canonical JSON sorts keys and ends with a newline."""
    text = canonical_json({"b": 1, "a": ["x"]})
    assert text == '{\n  "a": [\n    "x"\n  ],\n  "b": 1\n}\n'


def test_path_document_uses_exact_text():
    """Test that a path document keeps rationals as exact text."""
    data = path_to_dict(descent_path())
    assert data == {
        "start": "mu=5 f=1 c=1/2,1/2",
        "steps": [
            {"class": "B", "t": "1"},
            {"class": "F - E1", "t": "1/2"},
            {"class": "F - E2", "t": "1/2"},
        ],
        "end": "mu=3 f=1 c=1/2,1/2",
    }


def test_saved_path_loads_and_replays(tmp_path):
    """A saved path reloads unchanged and replays to its recorded end"""
    target = tmp_path / "descent.json"
    path = descent_path()
    save_path(path, target)

    loaded = load_path(target, 1)
    assert loaded == path
    assert replay(loaded) == loaded.normalized_end
    # byte-identical on a second save
    again = tmp_path / "again.json"
    save_path(loaded, again)
    assert again.read_bytes() == target.read_bytes()


@pytest.mark.parametrize(
    "data",
    [
        {"start": "mu=5 c=1/2", "steps": [{"class": "B", "t": "x"}], "end": "mu=5 c=1/2"},
        {"start": "mu=5 c=1/2", "steps": [{"class": "B", "t": "3/0"}], "end": "mu=5 c=1/2"},
        {"start": "mu=5 c=1/2", "steps": [], "end": "mu=5 c=1/2", "extra": 1},
        {"steps": []},
        [1, 2, 3],
    ],
)
def test_malformed_path_documents(data):
    """Test that malformed path documents are refused."""
    with pytest.raises(InvalidDocument):
        path_from_dict(data, 1)


def test_path_with_bad_class_text():
    data = {"start": "mu=5 c=1/2", "steps": [{"class": "B + +", "t": "1"}], "end": "mu=5 c=1/2"}
    with pytest.raises(ParseError):
        path_from_dict(data, 1)


def test_read_json_errors(tmp_path):
    """Test reading broken and missing JSON files."""
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(InvalidDocument, match="invalid JSON"):
        read_json(broken)
    with pytest.raises(InvalidDocument):
        read_json(tmp_path / "missing.json")


class TestProfiles:
    def sample(self) -> JProfile:
        E1 = parse_class("E1", DESC)
        E2 = parse_class("E2", DESC)
        exc = {
            E1: Mild(parse_class("E1 - E2", DESC), E2),
            E2: Embedded(),
            parse_class("F - E1", DESC): Embedded(),
            parse_class("F - E2", DESC): Bad(
                Decomposition(
                    parse_class("F - E2", DESC),
                    ((parse_class("F - E1 - E2", DESC), 1), (E1, 1)),
                )
            ),
        }
        return JProfile(exc, frozenset({parse_class("B - E1", DESC)}))

    def test_round_trip(self):
        """Test that a profile survives a dict round trip."""
        profile = self.sample()
        assert profile_from_dict(profile_to_dict(profile), DESC) == profile

    def test_document_shape(self):
        data = profile_to_dict(self.sample())
        assert data["exc"]["E1"] == {"mild": {"S": "E1 - E2", "X": "E2"}}
        assert data["exc"]["E2"] == "embedded"
        assert data["exc"]["F - E2"] == {
            "bad": [{"class": "E1", "mult": 1}, {"class": "F - E1 - E2", "mult": 1}]
        }
        assert data["sections"] == ["B - E1"]

    def test_load_from_file(self, tmp_path):
        source = tmp_path / "profile.json"
        source.write_text(json.dumps(profile_to_dict(self.sample())), encoding="utf-8")
        assert load_profile(source, DESC) == self.sample()

    @pytest.mark.parametrize(
        "data",
        [
            {"exc": {"E1": "broken"}},
            {"exc": {"E1": {"mild": {"S": "E1 - E2"}}}},
            {"exc": {"E1": {"bad": [{"class": "E1", "mult": 0}]}}},
            {"exc": {}, "sections": [], "other": True},
        ],
    )
    def test_schema_violations(self, data):
        """Test that profiles violating the schema are refused."""
        with pytest.raises(InvalidDocument):
            profile_from_dict(data, DESC)
