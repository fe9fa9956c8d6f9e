"""Tests for output persistence."""

import json
import tempfile
from pathlib import Path

import numpy as np
import pytest


@pytest.fixture
def temp_out_dir():
    """Temp directory for written outputs."""
    with tempfile.TemporaryDirectory() as tmp:
        yield Path(tmp)


def test_write_json_sorted_and_plain(temp_out_dir):
    """numpy values become plain JSON; keys are sorted."""
    from core.persistence import write_json

    path = write_json(temp_out_dir / "out.json", {"b": np.float64(0.5), "a": np.arange(3), "flag": np.bool_(True)})
    text = path.read_text()
    data = json.loads(text)
    assert data == {"a": [0, 1, 2], "b": 0.5, "flag": True}
    assert text.index('"a"') < text.index('"b"')


def test_write_json_creates_parent_dirs(temp_out_dir):
    from core.persistence import write_json

    path = write_json(temp_out_dir / "nested" / "deeper" / "out.json", {"x": 1})
    assert path.exists()
    assert not list(path.parent.glob("*.tmp"))


def test_write_csv_embeds_config(temp_out_dir):
    """Leading comment line carries the run config; reader skips it."""
    from core.persistence import read_csv_rows, write_csv

    path = write_csv(temp_out_dir / "s.csv", ["a", "b"], [(1.0, "x"), (0.1, "y")], {"seed": 3})
    first = path.read_text().splitlines()[0]
    assert first.startswith("# config: ")
    assert json.loads(first[len("# config: "):]) == {"seed": 3}
    header, rows = read_csv_rows(path)
    assert header == ["a", "b"]
    assert rows == [["1", "x"], ["0.10000000000000001", "y"]]


def test_format_float_round_trips():
    """17 significant digits reproduce the double exactly."""
    from core.persistence import format_float

    for x in (0.1, 1 / 3, 2.0**-40, 123456.789):
        assert float(format_float(x)) == x
    assert format_float(float("inf")) == "inf"
    assert format_float(True) == "1"


def test_write_is_byte_identical(temp_out_dir):
    """Same payload gives the same bytes."""
    from core.persistence import write_json

    payload = {"v": [0.1, 0.2], "n": 2}
    a = write_json(temp_out_dir / "a.json", payload).read_bytes()
    b = write_json(temp_out_dir / "b.json", payload).read_bytes()
    assert a == b


def test_load_values_skips_comments(temp_out_dir):
    from core.persistence import load_values

    path = temp_out_dir / "data.txt"
    path.write_text("# header\n0.25\n\n0.5\n  0.75  \n")
    assert np.array_equal(load_values(path), np.array([0.25, 0.5, 0.75]))


@pytest.mark.parametrize("content", [b"0.25\nabc\n0.5\n", b"0.25\nnan\n", b"\xff\xfe0.5\n"])
def test_load_values_rejects_bad_lines(temp_out_dir, content):
    """Non-numeric, non-finite and non-UTF-8 input raise InputError naming the file."""
    from core.errors import InputError
    from core.persistence import load_values

    path = temp_out_dir / "data.txt"
    path.write_bytes(content)
    with pytest.raises(InputError, match="data.txt"):
        load_values(path)
