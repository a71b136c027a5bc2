"""Unit tests for scenario validation, config files and settings"""

import json
from pathlib import Path

import pytest

from ratsteer.config import Settings, get_settings
from ratsteer.schemas.scenario import Scenario
from ratsteer.cli.config import ConfigError, dump_config, parse_config, resolve_out_dir, scenario_from_dict


@pytest.fixture
def clean_settings(monkeypatch, tmp_path):
    """Settings read from a clean environment and working directory"""
    monkeypatch.chdir(tmp_path)
    for name in ("RAT_STEER_OUT", "RAT_STEER_LOG_LEVEL", "RAT_STEER_JOBS"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.mark.unit
class TestScenarioDefaults:
    """Built-in deployment"""

    def test_defaults(self):
        """Defaults describe the 60-UE, 4-small-cell scenario"""
        scenario = parse_config(None)
        assert scenario.topology.ue_count == 60
        assert scenario.topology.small_cell_count == 4
        assert sum(scenario.traffic.mix.values()) == pytest.approx(1.0)
        assert scenario.steering.goals == [0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
        assert scenario.experiment.episodes == 2
        assert scenario.experiment.episode_periods == 5000

    def test_with_load_leaves_original_untouched(self):
        """with_load returns a copy"""
        scenario = Scenario()
        loaded = scenario.with_load(3.0)
        assert loaded.traffic.per_ue_load_mbps == 3.0
        assert scenario.traffic.per_ue_load_mbps == 10.0


@pytest.mark.unit
class TestScenarioValidation:
    """Errors name the offending field"""

    def test_mix_must_sum_to_one(self):
        """A traffic mix not summing to 1 is rejected"""
        with pytest.raises(ConfigError) as exc_info:
            scenario_from_dict({"traffic": {"mix": {"video": 0.5, "gaming": 0.2, "voice": 0.2}}})
        assert exc_info.value.field_path == "traffic.mix"
        assert "traffic.mix" in str(exc_info.value)

    def test_unknown_key_rejected(self):
        """Unknown keys are rejected"""
        with pytest.raises(ConfigError) as exc_info:
            scenario_from_dict({"topology": {"ue_count": 10, "cell_colour": "red"}})
        assert exc_info.value.field_path == "topology.cell_colour"

    def test_small_cells_inside_macro(self):
        """Small cells must fit inside the macro cell"""
        with pytest.raises(ConfigError):
            scenario_from_dict({"topology": {"macro_radius_m": 100.0}})

    def test_unsorted_goals(self):
        """Goals must be sorted ascending"""
        with pytest.raises(ConfigError) as exc_info:
            scenario_from_dict({"steering": {"goals": [0.9, 0.5]}})
        assert exc_info.value.field_path == "steering.goals"

    def test_batch_not_above_capacity(self):
        """Batch size may not exceed the buffer"""
        with pytest.raises(ConfigError):
            scenario_from_dict({"learning": {"buffer_capacity": 4, "batch_size": 8}})


@pytest.mark.unit
class TestConfigFiles:
    def test_dump_and_parse(self, tmp_path):
        """A dumped scenario parses back equal"""
        scenario = Scenario().with_load(7.5)
        path = tmp_path / "scenario.json"
        path.write_text(dump_config(scenario))
        assert parse_config(path) == scenario

    def test_bandwidth_survives_file(self, tmp_path):
        """NR radio settings load from a file"""
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps({"radio": {"nr": {"carrier_freq_mhz": 3500, "tx_power_w": 20, "bandwidth_mhz": 100, "num_rbgs": 50}}}))
        scenario = parse_config(path)
        assert scenario.radio.nr.bandwidth_mhz == 100.0
        assert scenario.radio.nr.num_rbgs == 50

    def test_missing_file(self, tmp_path):
        """A missing config file raises ConfigError"""
        with pytest.raises(ConfigError) as exc_info:
            parse_config(tmp_path / "missing.json")
        assert "not found" in str(exc_info.value)

    def test_invalid_json(self, tmp_path):
        """Malformed JSON raises ConfigError"""
        path = tmp_path / "broken.json"
        path.write_text("{ not json")
        with pytest.raises(ConfigError) as exc_info:
            parse_config(path)
        assert "invalid JSON" in str(exc_info.value)

    def test_top_level_must_be_object(self, tmp_path):
        """A non-object top level raises ConfigError"""
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigError):
            parse_config(path)


@pytest.mark.unit
class TestSettings:
    """RAT_STEER_* environment"""

    def test_out_dir_precedence(self, clean_settings, monkeypatch, tmp_path):
        """The environment beats an explicit out dir, which beats the default"""
        assert resolve_out_dir(None) == Path("results")
        assert resolve_out_dir(tmp_path / "cli") == tmp_path / "cli"

        monkeypatch.setenv("RAT_STEER_OUT", str(tmp_path / "env"))
        get_settings.cache_clear()
        assert resolve_out_dir(tmp_path / "cli") == tmp_path / "env"

    def test_effective_jobs(self, clean_settings, monkeypatch):
        """RAT_STEER_JOBS sets the worker count"""
        assert Settings().effective_jobs >= 1
        monkeypatch.setenv("RAT_STEER_JOBS", "3")
        assert Settings().effective_jobs == 3
