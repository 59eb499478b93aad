"""CSV and manifest emission tests."""

import json
import os

import pytest

from irswet.reporting import (ManifestBuilder, file_sha256, format_cell,
                              load_manifest, write_csv)


def test_format_cell_canonical():
    assert format_cell(True) == "true"
    assert format_cell(False) == "false"
    assert format_cell(0.1) == "0.1"
    assert format_cell(1.0 / 3.0) == repr(1.0 / 3.0)
    assert format_cell(42) == "42"
    assert format_cell("dm") == "dm"


def test_write_csv_deterministic_bytes(tmp_path):
    rows = [[1, 0.5, "a"], [2, 1.5, "b"]]
    p1 = tmp_path / "one.csv"
    p2 = tmp_path / "two.csv"
    n1 = write_csv(str(p1), ["i", "x", "tag"], rows, meta={"seed": 3, "b": 0.1})
    n2 = write_csv(str(p2), ["i", "x", "tag"], rows, meta={"b": 0.1, "seed": 3})
    assert n1 == n2 == 2
    assert p1.read_bytes() == p2.read_bytes()
    text = p1.read_text()
    # meta preamble is sorted and prefixed
    assert text.startswith("# b=0.1\n# seed=3\n")
    assert "i,x,tag" in text


def test_write_csv_rejects_ragged_rows(tmp_path):
    with pytest.raises(ValueError):
        write_csv(str(tmp_path / "bad.csv"), ["a", "b"], [[1]])


def test_write_csv_rejects_cells_needing_quotes(tmp_path):
    with pytest.raises(ValueError):
        write_csv(str(tmp_path / "bad.csv"), ["a"], [["x,y"]])
    with pytest.raises(ValueError):
        write_csv(str(tmp_path / "bad.csv"), ["a"], [['say "hi"']])


def test_write_csv_creates_parent_dirs(tmp_path):
    nested = tmp_path / "deep" / "dir" / "t.csv"
    write_csv(str(nested), ["a"], [[1]])
    assert nested.exists()
    # no temp file debris
    assert all(not f.startswith(".tmp-") for f in os.listdir(nested.parent))


def test_file_sha256_matches_content(tmp_path):
    p = tmp_path / "x.bin"
    p.write_bytes(b"abc")
    assert file_sha256(str(p)) == (
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad")


def test_manifest_roundtrip(tmp_path):
    csv_path = tmp_path / "data.csv"
    rows = write_csv(str(csv_path), ["n"], [[1], [2]], meta={"seed": 0})
    builder = ManifestBuilder(subcommand="tau-fit", seed=0,
                              config_hash="f" * 64,
                              config_flat={"run.seed": 0},
                              parameters={"n_list": [64, 100]},
                              diagnostics={"tau": 0.3675})
    builder.add_output(str(csv_path), rows)
    doc = builder.write(str(tmp_path / "data.manifest.json"))
    loaded = load_manifest(str(tmp_path / "data.manifest.json"))
    assert loaded == json.loads(json.dumps(doc))
    assert loaded["schema_version"] == 1
    assert loaded["outputs"][0]["file"] == "data.csv"
    assert loaded["outputs"][0]["rows"] == 2
    assert loaded["outputs"][0]["sha256"] == file_sha256(str(csv_path))
    assert loaded["backend"] in {"cython", "python"}


def test_manifest_numpy_values_serialize(tmp_path):
    import numpy as np
    builder = ManifestBuilder(subcommand="x", seed=0, config_hash="0" * 64,
                              config_flat={},
                              parameters={"n": np.int64(5),
                                          "x": np.float64(0.5),
                                          "arr": np.arange(3)})
    builder.write(str(tmp_path / "m.json"))
    loaded = load_manifest(str(tmp_path / "m.json"))
    assert loaded["parameters"] == {"n": 5, "x": 0.5, "arr": [0, 1, 2]}


def test_manifest_schema_version_checked(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"schema_version": 99}))
    with pytest.raises(ValueError):
        load_manifest(str(p))
