"""
Tests for run configuration, presets and report output
"""

import json
from fractions import Fraction

import pytest

from artinlab.config import RunConfig
from artinlab.error import ConfigError, PresetError
from artinlab.presets import BUILTIN_PRESETS, PRESET_COMMANDS, PresetManager
from artinlab.series import INFINITY
from artinlab.storage import ReportWriter, cell_text, plain_value, write_report


def test_config_defaults():
    """Test default settings"""
    config = RunConfig()
    assert config.field == "Q"
    assert config.jobs == 1
    assert config.guard == 2
    assert config.format == "table"
    assert not config.descriptor.is_prime


def test_config_validation():
    """Invalid settings become ConfigError"""
    assert RunConfig(field="f5").field == "F5"
    assert RunConfig(field="GF(7)").descriptor.characteristic == 7
    for data in ({"field": "F4"}, {"field": "F2"}, {"jobs": 0}, {"colour": "red"},
                 {"format": "xml"}):
        with pytest.raises(ConfigError):
            RunConfig.from_dict(data)


def test_config_merged():
    """None overrides are ignored"""
    config = RunConfig(field="F3", jobs=2)
    merged = config.merged(field=None, jobs=4, timing=True)
    assert merged.field == "F3"
    assert merged.jobs == 4
    assert merged.timing
    assert config.jobs == 2


def test_config_files(tmp_path):
    """JSON, YAML and TOML settings files"""
    (tmp_path / "run.json").write_text(json.dumps({"field": "F3", "jobs": 2}))
    (tmp_path / "run.yaml").write_text("field: F5\nformat: csv\n")
    (tmp_path / "run.toml").write_text('field = "Q"\nguard = 4\n')
    assert RunConfig.from_file(tmp_path / "run.json").jobs == 2
    assert RunConfig.from_file(tmp_path / "run.yaml").format == "csv"
    assert RunConfig.from_file(tmp_path / "run.toml").guard == 4

    config = RunConfig(field="F7")
    config.to_json(tmp_path / "saved.json")
    assert RunConfig.from_file(tmp_path / "saved.json") == config


def test_config_documented_keys(tmp_path):
    """Every documented key loads; per-command options are not config keys"""
    (tmp_path / "run.yaml").write_text(
        "field: F5\njobs: 4\nguard: 2\njet_budget: 2000000\nformat: json\n")
    config = RunConfig.from_file(tmp_path / "run.yaml")
    assert (config.field, config.jobs, config.jet_budget) == ("F5", 4, 2_000_000)
    assert set(RunConfig.model_fields) == {"field", "jobs", "guard", "jet_budget",
                                           "search_budget", "lift_budget", "format",
                                           "timing", "verbose"}
    for key in ("precision", "horizon", "jet_order"):
        with pytest.raises(ConfigError):
            RunConfig.from_dict({key: 4})


def test_config_file_errors(tmp_path):
    """Unreadable settings files"""
    with pytest.raises(ConfigError):
        RunConfig.from_file(tmp_path / "missing.json")
    (tmp_path / "run.ini").write_text("field=Q")
    with pytest.raises(ConfigError):
        RunConfig.from_file(tmp_path / "run.ini")
    (tmp_path / "bad.yaml").write_text("field: [F3\n")
    with pytest.raises(ConfigError):
        RunConfig.from_file(tmp_path / "bad.yaml")
    (tmp_path / "list.json").write_text("[1, 2]")
    with pytest.raises(ConfigError):
        RunConfig.from_file(tmp_path / "list.json")


def test_plain_values():
    """JSON-ready conversion"""
    assert plain_value(Fraction(4, 2)) == 2
    assert plain_value(Fraction(61, 4)) == "61/4"
    assert plain_value(INFINITY) == "inf"
    assert plain_value({"a": [Fraction(1, 2)]}) == {"a": ["1/2"]}
    assert cell_text(None) == ""
    assert cell_text(True) == "true"
    assert cell_text(1234567) == "1234567"
    assert cell_text(1234567, humanize_counts=True) == "1,234,567"


def test_csv_report(tmp_path):
    """CSV output is byte-stable"""
    rows = [{"p": 3, "k": 3, "slope": Fraction(1, 2)}, {"p": 4, "k": 3, "slope": Fraction(1)}]
    path = tmp_path / "out" / "report.csv"
    assert write_report(rows, "csv", path) == 2
    assert path.read_text() == "p,k,slope\n3,3,1/2\n4,3,1\n"


def test_json_report(tmp_path):
    """JSON output, single objects unwrapped on request"""
    path = tmp_path / "one.json"
    write_report([{"i": 1, "beta_exact": None}], "json", path, single=True)
    assert json.loads(path.read_text()) == {"i": 1, "beta_exact": None}
    path = tmp_path / "many.json"
    write_report([{"i": 1}, {"i": 2}], "json", path, single=True)
    assert json.loads(path.read_text()) == [{"i": 1}, {"i": 2}]


def test_table_report(tmp_path):
    """Tables are printed with rich"""
    path = tmp_path / "table.txt"
    write_report([{"system": "X", "beta": 12345}], "table", path, title="Results")
    text = path.read_text()
    assert "Results" in text
    assert "12,345" in text


def test_report_writer_columns():
    """Explicit columns fix the order; missing cells are empty"""
    writer = ReportWriter(format="csv", columns=["b", "a"])
    writer.write({"a": 1})
    assert writer.rows_written == 1
    assert writer.render() == "b,a\n,1\n"
    with pytest.raises(ConfigError):
        ReportWriter(format="xml")


def test_builtin_presets():
    """Built-in presets name known commands"""
    preset_mgr = PresetManager()
    presets = preset_mgr.list_presets()
    assert "counterexample-grid" in presets
    assert "liouville-table" in presets
    for name in BUILTIN_PRESETS:
        preset = preset_mgr.get_preset(name)
        assert preset["command"] in PRESET_COMMANDS
        assert isinstance(preset["args"], dict)


def test_custom_presets(tmp_path):
    """Save, load, show and delete custom presets"""
    preset_mgr = PresetManager(tmp_path)
    preset_mgr.save_preset("tiny", "Small grid", "verify-counterexample",
                           {"p": "3", "k": "3..4"})
    assert "tiny" in preset_mgr.list_presets()
    preset = preset_mgr.get_preset("tiny")
    assert preset["args"] == {"p": "3", "k": "3..4"}
    text = preset_mgr.show_preset("tiny")
    assert "Command: verify-counterexample" in text
    assert "  k: 3..4" in text
    preset_mgr.delete_preset("tiny")
    assert "tiny" not in preset_mgr.list_presets()

    (tmp_path / "yaml-one.yaml").write_text(
        "description: from yaml\ncommand: dioph\nargs:\n  p: 3\n  k: 3..5\n")
    assert preset_mgr.get_preset("yaml-one")["args"]["k"] == "3..5"


def test_preset_errors(tmp_path):
    """Test preset errors"""
    preset_mgr = PresetManager(tmp_path)
    with pytest.raises(PresetError):
        preset_mgr.get_preset("nope")
    with pytest.raises(PresetError):
        preset_mgr.save_preset("greenberg", "", "greenberg", {})
    with pytest.raises(PresetError):
        preset_mgr.delete_preset("greenberg")
    with pytest.raises(PresetError):
        preset_mgr.save_preset("odd", "", "rm-rf", {})
    (tmp_path / "broken.json").write_text(json.dumps(["not", "a", "mapping"]))
    with pytest.raises(PresetError):
        preset_mgr.get_preset("broken")


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
