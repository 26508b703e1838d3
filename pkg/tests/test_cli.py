"""
Tests for the artinlab command line
"""

import csv
import io
import json

import click
import pytest
from click.testing import CliRunner

from artinlab import __version__
from artinlab import cli as cli_module
from artinlab.cli import RANGE, cli, main, preset_argv


@pytest.fixture
def runner():
    return CliRunner()


def read_csv(path):
    return list(csv.DictReader(io.StringIO(path.read_text())))


def test_range_type():
    """Ranges like 3..8, lists and single values"""
    assert RANGE.convert("3..5", None, None) == [3, 4, 5]
    assert RANGE.convert("8,10,12", None, None) == [8, 10, 12]
    assert RANGE.convert("3..4,9", None, None) == [3, 4, 9]
    assert RANGE.convert("7", None, None) == [7]
    assert RANGE.convert(4, None, None) == [4]
    with pytest.raises(click.BadParameter):
        RANGE.convert("a..b", None, None)
    with pytest.raises(click.BadParameter):
        RANGE.convert("5..3", None, None)


def test_preset_argv():
    """Preset arguments become command-line options"""
    assert preset_argv({"p": "3..8", "fit": True, "max_i": 3}) == \
        ["--fit", "--max-i", "3", "--p", "3..8"]
    assert preset_argv({"exhaustive": False}) == ["--no-exhaustive"]


def test_version_and_info(runner):
    """Test --version and info"""
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output
    result = runner.invoke(cli, ["info"])
    assert result.exit_code == 0
    assert "artinlab" in result.output
    assert "square-or-zero" in result.output


def test_verify_counterexample(runner, tmp_path):
    """Every identity holds on a small grid"""
    out = tmp_path / "verify.csv"
    result = runner.invoke(cli, ["verify-counterexample", "--p", "3..4", "--k", "3..4",
                                 "--format", "csv", "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = read_csv(out)
    assert len(rows) == 4
    first = rows[0]
    assert (first["p"], first["k"], first["ordP"], first["distance"]) == ("3", "3", "11", "4")
    assert all(row["status"] == "pass" for row in rows)


def test_verify_counterexample_table(runner):
    """Tables go to the console"""
    result = runner.invoke(cli, ["verify-counterexample", "--p", "3", "--k", "3"])
    assert result.exit_code == 0
    assert "Counterexample orders" in result.output


def test_verify_counterexample_bad_parameters(runner):
    """p = 2 and a zero precision are usage errors"""
    result = runner.invoke(cli, ["verify-counterexample", "--p", "2", "--k", "3"])
    assert result.exit_code == 2
    assert "Error" in result.output
    result = runner.invoke(cli, ["verify-counterexample", "--p", "3", "--k", "3",
                                 "--precision", "0"])
    assert result.exit_code == 2


def test_dioph_is_deterministic(runner, tmp_path):
    """Same bytes across runs and worker counts"""
    outputs = []
    for index, jobs in enumerate(["1", "1", "2"]):
        out = tmp_path / f"dioph{index}.csv"
        result = runner.invoke(cli, ["dioph", "--p", "3..4", "--k", "3..5", "--jobs", jobs,
                                     "--out", str(out)])
        assert result.exit_code == 0, result.output
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
    rows = read_csv(tmp_path / "dioph0.csv")
    assert list(rows[0]) == ["p", "k", "ord_v", "ord_distance", "slope_pred_num",
                             "slope_pred_den", "regime", "distance_exact"]
    assert rows[3] == {"p": "4", "k": "3", "ord_v": "3", "ord_distance": "7",
                       "slope_pred_num": "1", "slope_pred_den": "1", "regime": "eq",
                       "distance_exact": "true"}


def test_dioph_fit(runner, tmp_path):
    """Affine fits per p"""
    out = tmp_path / "fits.json"
    result = runner.invoke(cli, ["dioph", "--p", "3..6", "--k", "3..6", "--fit",
                                 "--format", "json", "--out", str(out)])
    assert result.exit_code == 0, result.output
    fits = {row["p"]: row for row in json.loads(out.read_text())}
    assert fits[3]["slope"] == "1/2"
    assert (fits[4]["slope"], fits[4]["intercept"]) == (1, 4)
    assert (fits[6]["slope"], fits[6]["intercept"]) == (2, 7)
    assert all(row["residual_max"] == 0 for row in fits.values())


def test_dioph_vanishing_distance(runner, tmp_path):
    """A distance that vanishes at the precision is reported as a bound"""
    out = tmp_path / "vanishing.csv"
    result = runner.invoke(cli, ["dioph", "--p", "9", "--k", "6", "--field", "F3",
                                 "--out", str(out)])
    assert result.exit_code == 0, result.output
    row, = read_csv(out)
    assert (row["regime"], row["distance_exact"]) == ("geq", "false")
    assert int(row["ord_distance"]) >= 43


def test_dioph_gamma(runner, tmp_path):
    """Best measured order per p and ord v"""
    out = tmp_path / "gamma.json"
    result = runner.invoke(cli, ["dioph", "--p", "3,5", "--k", "3..4", "--gamma",
                                 "--format", "json", "--out", str(out)])
    assert result.exit_code == 0, result.output
    profile = {}
    for row in json.loads(out.read_text()):
        profile.setdefault(row["p"], {})[row["ord_v"]] = row["ord_distance"]
    assert profile == {3: {3: 4, 5: 5}, 5: {3: 10, 5: 13}}
    result = runner.invoke(cli, ["dioph", "--p", "3", "--k", "3..4", "--gamma", "--fit"])
    assert result.exit_code == 2


def test_square_obstruction_command(runner, tmp_path):
    """Lifting and exhaustive search agree"""
    out = tmp_path / "square.json"
    result = runner.invoke(cli, ["square-obstruction", "--p", "3..4", "--field", "F3",
                                 "--exhaustive", "--format", "json", "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = json.loads(out.read_text())
    assert [row["max_order"] for row in rows] == [3, 4]
    assert [row["exhaustive_max"] for row in rows] == [3, 4]
    assert rows[0]["best_t"] == "T1"


def test_beta_bound_command(runner, tmp_path):
    """Quadratic lower bounds, odd i through i-1"""
    out = tmp_path / "bounds.json"
    result = runner.invoke(cli, ["beta-bound", "--i", "8..9", "--format", "json",
                                 "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = json.loads(out.read_text())
    assert [(row["i"], row["via"], row["lower_bound"]) for row in rows] == \
        [(8, 8, 20), (9, 8, "61/4")]
    assert all(row["status"] == "pass" for row in rows)

    result = runner.invoke(cli, ["beta-bound", "--i", "7"])
    assert result.exit_code == 2


def test_artin_estimate(runner, tmp_path):
    """beta(i) = i for f = X"""
    out = tmp_path / "beta.json"
    result = runner.invoke(cli, ["artin-estimate", "--poly", "X", "--i", "0..2",
                                 "--field", "F3", "--oracle", "zero", "--out", str(out)])
    assert result.exit_code == 0, result.output
    records = json.loads(out.read_text())
    assert [record["beta_exact"] for record in records] == [0, 1, 2]
    assert all(record["exact_flag"] for record in records)
    assert all(record["timing_ms"] is None for record in records)

    out = tmp_path / "single.json"
    result = runner.invoke(cli, ["artin-estimate", "--poly", "X^2 - T", "--i", "1",
                                 "--timing", "--out", str(out)])
    assert result.exit_code == 0, result.output
    record = json.loads(out.read_text())
    assert record["field"] == "F3"
    assert record["beta_lower"] == 1
    assert record["beta_exact"] is None
    assert record["exact_flag"] is False
    assert record["timing_ms"] is not None


def test_artin_estimate_errors(runner):
    """Exit codes: 2 usage, 3 budget, 1 when no bound exists below the jet order"""
    result = runner.invoke(cli, ["artin-estimate", "--poly", "X +", "--i", "1"])
    assert result.exit_code == 2
    result = runner.invoke(cli, ["artin-estimate", "--poly", "X^2 - Z*Y^2", "--N", "2",
                                 "--n", "3", "--i", "2", "--oracle", "square-or-zero"])
    assert result.exit_code == 3
    result = runner.invoke(cli, ["artin-estimate", "--poly", "X^2 - T*Y^2", "--n", "2",
                                 "--i", "1", "--jet-order", "3", "--oracle", "zero"])
    assert result.exit_code == 1
    result = runner.invoke(cli, ["artin-estimate", "--poly", "X", "--i", "1",
                                 "--oracle", "bogus"])
    assert result.exit_code == 2
    result = runner.invoke(cli, ["artin-estimate", "--poly", "X - 1/3", "--field", "F3",
                                 "--i", "1"])
    assert result.exit_code == 2
    result = runner.invoke(cli, ["artin-estimate", "--poly", "X", "--N", "0", "--i", "1"])
    assert result.exit_code == 2
    result = runner.invoke(cli, ["artin-estimate", "--poly", "X", "--i", "1",
                                 "--oracle", "square-or-zero"])
    assert result.exit_code == 2
    assert "reads 3 unknowns" in result.output
    result = runner.invoke(cli, ["artin-estimate", "--poly", "X", "--i", "1",
                                 "--jet-order", "0"])
    assert result.exit_code == 2


def test_greenberg_command(runner, tmp_path):
    """One-variable systems stay under their affine fits"""
    out = tmp_path / "greenberg.csv"
    result = runner.invoke(cli, ["greenberg", "--max-i", "1", "--max-jet-order", "4",
                                 "--format", "csv", "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = read_csv(out)
    assert [(row["system"], row["i"], row["beta"]) for row in rows] == [
        ("X", "0", "0"), ("X", "1", "1"),
        ("X^2 - T", "0", "1"), ("X^2 - T", "1", "1"),
        ("X^2 - T*Y^2", "0", "1"), ("X^2 - T*Y^2", "1", "3"),
    ]


def test_presets_commands(runner, tmp_path):
    """List, show and run presets"""
    result = runner.invoke(cli, ["list-presets"])
    assert result.exit_code == 0
    assert "counterexample-grid" in result.output

    result = runner.invoke(cli, ["show-preset", "greenberg"])
    assert result.exit_code == 0
    assert "Command: greenberg" in result.output

    result = runner.invoke(cli, ["show-preset", "nope"])
    assert result.exit_code == 2

    out = tmp_path / "preset.json"
    result = runner.invoke(cli, ["run-preset", "square-obstruction-f3", "--format", "json",
                                 "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = json.loads(out.read_text())
    assert [row["max_order"] for row in rows] == [3, 4, 5]
    assert all(row["status"] == "pass" for row in rows)


def test_config_file_option(runner, tmp_path):
    """Settings files set the field and the output format"""
    config = tmp_path / "run.yaml"
    config.write_text("field: F5\nformat: json\n")
    out = tmp_path / "verify.json"
    result = runner.invoke(cli, ["--config", str(config), "verify-counterexample",
                                 "--p", "3", "--k", "3", "--out", str(out)])
    assert result.exit_code == 0, result.output
    rows = json.loads(out.read_text())
    assert rows[0]["field"] == "F5"

    bad = tmp_path / "bad.yaml"
    bad.write_text("jobs: 0\n")
    result = runner.invoke(cli, ["--config", str(bad), "info"])
    assert result.exit_code == 2


def test_main_keyboard_interrupt(monkeypatch):
    """Ctrl-C exits with 130"""
    def interrupted(**kwargs):
        raise KeyboardInterrupt

    monkeypatch.setattr(cli_module, "cli", interrupted)
    with pytest.raises(SystemExit) as excinfo:
        main()
    assert excinfo.value.code == 130


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
