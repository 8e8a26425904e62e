"""Byte-stable JSON and CSV emission."""

import datetime as dt
import json
import math

import numpy as np
import pytest

from helios_audit.report import csv_cell, dumps, json_float, write_csv, write_json


class TestJsonFloat:
    def test_round_trips_exactly(self):
        rng = np.random.default_rng(2)
        for x in rng.uniform(-1e6, 1e6, 200):
            assert float(json_float(float(x))) == x
        for x in (0.1, 1 / 3, 1e-300, 1e300, -0.0):
            assert float(json_float(x)) == x

    def test_rejects_non_finite(self):
        for bad in (math.nan, math.inf, -math.inf):
            with pytest.raises(ValueError):
                json_float(bad)


class TestDumps:
    def test_exact_layout(self):
        doc = {"b": 1, "a": [1.5, "x", None, True], "nested": {"k": False}}
        assert dumps(doc) == (
            '{\n'
            '  "b": 1,\n'
            '  "a": [\n'
            '    1.5,\n'
            '    "x",\n'
            '    null,\n'
            '    true\n'
            '  ],\n'
            '  "nested": {\n'
            '    "k": false\n'
            '  }\n'
            '}\n'
        )

    def test_preserves_insertion_order(self):
        assert dumps({"z": 1, "a": 2}).index('"z"') < dumps({"z": 1, "a": 2}).index('"a"')

    def test_empty_containers(self):
        assert dumps({"a": {}, "b": []}) == '{\n  "a": {},\n  "b": []\n}\n'

    def test_parses_as_json(self):
        doc = {"values": [0.1, 2, -3.5e-7], "name": "résumé", "flag": None}
        assert json.loads(dumps(doc)) == doc

    def test_numpy_scalars_coerced(self):
        text = dumps({"a": np.float64(2.5), "b": np.int64(3), "c": np.bool_(True)})
        assert json.loads(text) == {"a": 2.5, "b": 3, "c": True}

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            dumps({"a": float("nan")})

    def test_rejects_non_string_keys(self):
        with pytest.raises(TypeError):
            dumps({1: "a"})

    def test_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            dumps({"a": {1, 2}})

    def test_ends_with_single_newline(self):
        text = dumps({"a": 1})
        assert text.endswith("}\n") and not text.endswith("\n\n")


class TestWriteJson:
    def test_file_bytes(self, tmp_path):
        p = tmp_path / "doc.json"
        write_json(p, {"x": 0.5})
        assert p.read_bytes() == b'{\n  "x": 0.5\n}\n'


class TestCsvCell:
    @pytest.mark.parametrize("value,expected", [
        (None, ""),
        (True, "true"),
        (False, "false"),
        (3, "3"),
        (2.5, "2.5"),
        (1 / 3, "0.3333333333333333"),
        ("plain", "plain"),
        (dt.datetime(2021, 5, 20, 13), "2021-05-20T13:00"),
        (dt.date(2021, 5, 20), "2021-05-20"),
    ])
    def test_rendering(self, value, expected):
        assert csv_cell(value) == expected

    def test_numpy_scalars(self):
        # numpy scalars must render like their Python equivalents, not as
        # np.float64(...) reprs.
        assert csv_cell(np.float64(2.5)) == "2.5"
        assert csv_cell(np.int64(7)) == "7"

    def test_float_round_trips(self):
        rng = np.random.default_rng(4)
        for x in rng.uniform(-1e5, 1e5, 100):
            assert float(csv_cell(float(x))) == x

    def test_rejects_unknown(self):
        with pytest.raises(TypeError):
            csv_cell(object())


class TestWriteCsv:
    def test_layout_and_line_endings(self, tmp_path):
        p = tmp_path / "t.csv"
        write_csv(p, ["a", "b"], [(1, 2.5), (None, "x")])
        assert p.read_bytes() == b"a,b\n1,2.5\n,x\n"

    def test_quoting_when_needed(self, tmp_path):
        p = tmp_path / "t.csv"
        write_csv(p, ["a"], [("has,comma",)])
        assert p.read_text() == 'a\n"has,comma"\n'

    def test_deterministic(self, tmp_path):
        rows = [(i, i / 7) for i in range(50)]
        write_csv(tmp_path / "a.csv", ["i", "x"], rows)
        write_csv(tmp_path / "b.csv", ["i", "x"], rows)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
