import json
from pathlib import Path

import pytest

from fracwalk.errors import ManifestError
from fracwalk.output import (
    TableWriter,
    load_manifest,
    manifest_path,
    read_table,
    write_manifest,
)
from fracwalk.output.writer import digest, format_value
from fracwalk.schemas import RunManifest


def test_format_value():
    assert format_value(0.1) == "0.1"
    assert format_value(1 / 3) == repr(1 / 3)
    assert format_value(True) == "true"
    assert format_value(None) == ""
    assert format_value(3) == "3"


def test_csv_has_schema_header(tmp_path: Path):
    writer = TableWriter("density", ["x", "u"])
    text = writer.render([(0.0, 0.25), (1.0, None)])
    lines = text.splitlines()
    assert lines[0] == "# schema: fracwalk/density/v1 columns=x,u"
    assert lines[1] == "x,u"
    assert lines[3] == "1.0,"

    path = tmp_path / "out" / "density.csv"
    assert writer.write([(0.0, 0.25)], path) == digest(path.read_text(encoding="utf-8"))
    assert read_table(path) == [{"x": "0.0", "u": "0.25"}]


def test_json_lines():
    writer = TableWriter("ml_eval", ["argument", "value"], json_lines=True)
    lines = writer.render([(1.0, float("inf")), (2.0, 0.5)]).splitlines()
    first = json.loads(lines[0])
    assert first == {"_schema": "fracwalk/ml_eval/v1", "argument": 1.0, "value": "inf"}
    assert json.loads(lines[1])["value"] == 0.5


def test_row_width_is_checked():
    with pytest.raises(ValueError):
        TableWriter("t", ["a", "b"]).render([(1,)])


def test_identical_rows_give_identical_digests():
    writer = TableWriter("sample", ["index", "value"])
    rows = [(0, 1.5), (1, 2.25)]
    assert digest(writer.render(rows)) == digest(writer.render(list(rows)))


def test_manifest_round_trip(tmp_path: Path):
    manifest = RunManifest(
        subcommand="sample", params={"n": 10}, seed=4, outputs={"data": "ab" * 32}
    )
    path = manifest_path(manifest, None, tmp_path)
    assert path.name == "sample-" + "ab" * 6 + ".manifest.json"
    write_manifest(manifest, path)
    loaded = load_manifest(path)
    assert loaded.params == {"n": 10}
    assert loaded.outputs == manifest.outputs

    beside = manifest_path(manifest, tmp_path / "run.csv", tmp_path / "elsewhere")
    assert beside == tmp_path / "run.csv.manifest.json"


def test_bad_manifests(tmp_path: Path):
    with pytest.raises(ManifestError, match="not found"):
        load_manifest(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(ManifestError, match="Invalid JSON"):
        load_manifest(broken)
    wrong = tmp_path / "wrong.json"
    wrong.write_text('{"params": {}}', encoding="utf-8")
    with pytest.raises(ManifestError, match="not a run manifest"):
        load_manifest(wrong)
