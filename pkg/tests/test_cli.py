import json
import math
from pathlib import Path

import pytest
from scipy.special import erfcx
from typer.testing import CliRunner

from fracwalk.cli import app
from fracwalk.output import read_table

runner = CliRunner()


def run(*args):
    return runner.invoke(app, [str(a) for a in args])


def test_ml_eval_exponential(tmp_path: Path):
    out = tmp_path / "ml.csv"
    result = run("ml-eval", "--alpha", 1, "--z", -1, "-o", out)
    assert result.exit_code == 0, result.output
    rows = read_table(out)
    assert float(rows[0]["value"]) == math.exp(-1.0)
    assert rows[0]["method"] == "series"
    assert (tmp_path / "ml.csv.manifest.json").exists()


def test_ml_eval_survival(tmp_path: Path):
    out = tmp_path / "surv.csv"
    result = run("ml-eval", "--survival", "--beta", 0.5, "--t", 0, "--t", 4, "-o", out)
    assert result.exit_code == 0, result.output
    rows = read_table(out)
    assert float(rows[0]["value"]) == 1.0
    assert float(rows[1]["value"]) == pytest.approx(erfcx(2.0), rel=1e-10)


def test_ml_eval_mwright(tmp_path: Path):
    out = tmp_path / "m.csv"
    result = run("ml-eval", "--mwright", "--beta", 0.5, "--z", 1, "-o", out)
    assert result.exit_code == 0, result.output
    value = float(read_table(out)[0]["value"])
    assert value == pytest.approx(math.exp(-0.25) / math.sqrt(math.pi), rel=1e-10)


@pytest.mark.parametrize(
    "args",
    [
        ["ml-eval", "--alpha", "0", "--z", "1"],
        ["ml-eval", "--z", "1"],
        ["ml-eval", "--survival", "--t", "1"],
        ["sample", "--law", "pareto", "--n", "10"],
        ["sample", "--law", "cauchy", "--n", "10"],
        ["density", "--alpha", "2.5"],
        ["validate", "--only", "no-such-check"],
    ],
)
def test_usage_errors_exit_2(args):
    assert runner.invoke(app, args).exit_code == 2


def test_bad_config_file_exits_2(tmp_path: Path):
    conf = tmp_path / "bad.conf"
    conf.write_text("no_such_key=1\n", encoding="utf-8")
    assert run("ml-eval", "--alpha", 1, "--z", 1, "--config", conf).exit_code == 2


def test_overflow_exits_3():
    assert run("ml-eval", "--alpha", 1, "--z", 800).exit_code == 3


def test_sample_is_reproducible(tmp_path: Path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        result = run("sample", "--law", "mittag_leffler", "--beta", 0.6, "--n", 200,
                     "--seed", 3, "-o", out)
        assert result.exit_code == 0, result.output
    assert a.read_text() == b.read_text()
    assert len(read_table(a)) == 200


def test_json_lines_output(tmp_path: Path):
    out = tmp_path / "s.jsonl"
    result = run("sample", "--law", "sym_stable", "--alpha", 1.5, "--n", 5, "--json", "-o", out)
    assert result.exit_code == 0, result.output
    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(records) == 5
    assert records[0]["_schema"] == "fracwalk/sample/v1"


def test_manifest_records_resolved_seed(tmp_path: Path):
    out = tmp_path / "s.csv"
    assert run("sample", "--law", "exponential", "--n", 5, "-o", out).exit_code == 0
    manifest = json.loads((tmp_path / "s.csv.manifest.json").read_text())
    assert manifest["subcommand"] == "sample"
    assert manifest["seed"] == 0
    assert manifest["params"]["seed"] == 0
    assert "output" not in manifest["params"]


def test_manifest_goes_to_manifest_dir_for_stdout(tmp_path: Path, monkeypatch):
    monkeypatch.setenv("FRACWALK_MANIFEST_DIR", str(tmp_path / "runs"))
    assert run("thin-demo", "--tau", 0.1, "--tau", 0.01, "--s", 1).exit_code == 0
    assert len(list((tmp_path / "runs").glob("thin-demo-*.manifest.json"))) == 1


def test_density_gaussian(tmp_path: Path):
    out = tmp_path / "d.csv"
    result = run("density", "--alpha", 2, "--beta", 1, "--t", 0.5, "--x-min", -1, "--x-max", 1,
                 "--n-points", 3, "-o", out)
    assert result.exit_code == 0, result.output
    u = [float(r["u"]) for r in read_table(out)]
    assert u[1] == pytest.approx(1.0 / math.sqrt(2.0 * math.pi))
    assert u[0] == pytest.approx(u[2])


def test_thin_demo_mittag_leffler_is_exact(tmp_path: Path):
    out = tmp_path / "t.csv"
    result = run("thin-demo", "--waiting", "mittag_leffler", "--beta", 0.5, "-o", out)
    assert result.exit_code == 0, result.output
    assert all(float(r["deviation"]) < 1e-12 for r in read_table(out))


def test_renewal_pmf_table(tmp_path: Path):
    out = tmp_path / "pmf.csv"
    result = run("renewal-sim", "--waiting", "exponential", "--horizon", 1, "--n-paths", 2000,
                 "--pmf", "-o", out)
    assert result.exit_code == 0, result.output
    rows = read_table(out)
    assert float(rows[0]["exact"]) == pytest.approx(math.exp(-1.0), rel=1e-9)
    assert sum(float(r["empirical"]) for r in rows) == pytest.approx(1.0)


def test_ctrw_sim_char_table(tmp_path: Path):
    out = tmp_path / "c.csv"
    result = run("ctrw-sim", "--waiting", "exponential", "--jump", "two_point",
                 "--n-paths", 2000, "--t", 1, "--kappa", 0, "--kappa", 1, "-o", out)
    assert result.exit_code == 0, result.output
    rows = read_table(out)
    assert [float(r["kappa"]) for r in rows] == [0.0, 1.0]
    assert float(rows[0]["re_estimate"]) == 1.0


def test_ctrw_sim_rejects_fast_respeed():
    result = run("ctrw-sim", "--waiting", "exponential", "--jump", "two_point", "--a", 2,
                 "--n-paths", 10)
    assert result.exit_code == 2


def test_subordinate_paths(tmp_path: Path):
    out = tmp_path / "p.csv"
    result = run("subordinate", "--n-steps", 10, "--n-paths", 2, "-o", out)
    assert result.exit_code == 0, result.output
    rows = read_table(out)
    assert len(rows) == 22
    assert float(rows[0]["t"]) == 0.0


def test_validate_single_check(tmp_path: Path):
    out = tmp_path / "v.csv"
    result = run("validate", "--only", "respeed-invariance", "-o", out)
    assert result.exit_code == 0, result.output
    rows = read_table(out)
    assert rows[0]["name"] == "respeed-invariance"
    assert rows[0]["passed"] == "true"


def test_replay_matches(tmp_path: Path):
    out = tmp_path / "s.csv"
    assert run("sample", "--law", "sym_stable", "--alpha", 1.2, "--n", 50, "--seed", 8,
               "-o", out).exit_code == 0
    manifest = tmp_path / "s.csv.manifest.json"
    result = run("replay", manifest)
    assert result.exit_code == 0, result.output


def test_replay_detects_mismatch(tmp_path: Path):
    out = tmp_path / "s.csv"
    assert run("sample", "--law", "exponential", "--n", 20, "-o", out).exit_code == 0
    manifest = tmp_path / "s.csv.manifest.json"
    record = json.loads(manifest.read_text())
    record["outputs"]["data"] = "0" * 64
    manifest.write_text(json.dumps(record))
    assert run("replay", manifest).exit_code == 1


def test_replay_missing_manifest(tmp_path: Path):
    assert run("replay", tmp_path / "none.manifest.json").exit_code == 2


def test_replay_uses_recorded_config(tmp_path: Path):
    conf = tmp_path / "wide.conf"
    conf.write_text("series_radius=1\n", encoding="utf-8")
    out = tmp_path / "m.csv"
    result = run("ml-eval", "--alpha", 0.5, "--z", -3, "--config", conf, "-o", out)
    assert result.exit_code == 0, result.output
    assert read_table(out)[0]["method"] == "integral"

    manifest = tmp_path / "m.csv.manifest.json"
    record = json.loads(manifest.read_text())
    assert record["config"]["series_radius"] == 1.0
    assert "manifest_dir" not in record["config"]
    conf.unlink()
    assert run("replay", manifest).exit_code == 0

    record["config"] = {}
    manifest.write_text(json.dumps(record))
    assert run("replay", manifest).exit_code == 1


def test_unexpected_failure_exits_3(monkeypatch):
    def broken(*args, **kwargs):
        raise ZeroDivisionError("division by zero")

    monkeypatch.setattr("fracwalk.cli.ml_two", broken)
    result = run("ml-eval", "--alpha", 0.5, "--z", 1)
    assert result.exit_code == 3
    assert "ZeroDivisionError: division by zero" in result.output


@pytest.mark.parametrize("method", ["auto", "integral"])
def test_ml_eval_density_reports_error_bound(tmp_path: Path, method):
    out = tmp_path / "d.csv"
    result = run("ml-eval", "--density", "--beta", 0.5, "--t", 1, "--t", 9, "--method", method,
                 "-o", out)
    assert result.exit_code == 0, result.output
    rows = read_table(out)
    for row, t in zip(rows, (1.0, 9.0)):
        x = math.sqrt(t)
        expected = (1.0 / math.sqrt(math.pi) - x * erfcx(x)) / x
        assert float(row["value"]) == pytest.approx(expected, rel=1e-7)
        assert 0.0 <= float(row["abs_error_bound"]) < 1e-8
    expected_method = "integral" if method == "integral" else "series"
    assert {row["method"] for row in rows} == {expected_method}
