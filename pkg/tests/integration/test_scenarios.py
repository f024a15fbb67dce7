"""Scenario files, built-in sites and config validation."""
from pathlib import Path

import pandas as pd
import pytest

from app.errors import ConfigError
from app.experiments import dense_site, load_scenario, policy_violations, sparse_site
from app.models.policies import PolicyKind
from app.tools.config_validator import main as validator_main
from app.tools.config_validator import validate_config

NETWORK = {
    "n_lots": 2,
    "drive_time": [[0, 10, 10], [10, 0, 6], [10, 6, 0]],
    "walk_time": [5, 7],
    "wait_time": 5,
    "initial_probs": [0.5, 0.8],
}


class TestLoadScenario:
    def test_documented_example_loads(self, tmp_path):
        path = tmp_path / "three-lots.yaml"
        path.write_text(
            "name: three-lots\n"
            "network:\n"
            "  n_lots: 3\n"
            "  drive_time: [[0,10,10,10],[10,0,6,4],[10,6,0,3],[10,4,3,0]]\n"
            "  walk_time: [5, 8, 9]\n"
            "  wait_time: 5\n"
            "  initial_probs: [0.5, 0.6, 0.9]\n"
            "traces:\n"
            "  kind: constant\n"
            "observation: {lambda_per_hour: 20, adoptions: [0.1, 0.5]}\n"
            "policies:\n"
            "  - {name: pa1}\n"
            "  - {name: pa2, oracle: true}\n"
            "  - {name: baseline-patient, cap: 60}\n"
            "  - {name: baseline-impatient, exclude_failed_on_reset: true}\n"
            "departures: [480, 540, 600]\n"
            "seeds: 5\n"
            "horizon: 240\n"
            "references: {time_to_drive: 10, transit_time: 30}\n",
            encoding="utf-8",
        )
        site = load_scenario(str(path))
        assert [p.name for p in site.scenario.policies] == [
            "pa1", "pa2-oracle", "baseline-patient", "baseline-impatient"]
        assert site.scenario.adoptions == (0.1, 0.5)
        assert (site.time_to_drive, site.transit_time) == (10, 30)
        assert validate_config(str(path)).valid

    def test_constant_traces(self, write_yaml):
        path = write_yaml("scenario.yaml", {
            "name": "two-lots",
            "network": NETWORK,
            "policies": ["pa1", {"name": "baseline-patient", "cap": 30}],
            "departures": [480, 600],
            "seeds": 3,
            "observation": {"lambda_per_hour": [10, 30], "adoptions": [0.2]},
            "references": {"time_to_drive": 12, "transit_time": 25},
        })
        site = load_scenario(str(path), master_seed=7)
        cfg = site.scenario
        assert cfg.name == "two-lots"
        assert cfg.departures == (480.0, 600.0)
        assert cfg.adoptions == (0.2,)
        assert cfg.master_seed == 7
        assert cfg.rate_for(2) == 30.0
        assert cfg.traces[2].value_at(900.0) == 0.8
        assert cfg.policies[1].kind is PolicyKind.BASELINE_PATIENT
        assert cfg.policies[1].cap == 30.0
        assert (site.time_to_drive, site.transit_time) == (12, 25)

    def test_time_to_drive_defaults_to_the_nearest_lot(self, write_yaml):
        site = load_scenario(str(write_yaml("s.yaml", {"network": NETWORK})))
        assert site.time_to_drive == 10.0

    def test_csv_traces_resolve_relative_to_the_file(self, write_yaml, tmp_path):
        minutes = list(range(0, 1441, 60))
        frame = pd.DataFrame({
            "minute": minutes * 2,
            "lot_id": [1] * len(minutes) + [2] * len(minutes),
            "p": [0.4] * len(minutes) + [0.9] * len(minutes),
        })
        frame.to_csv(tmp_path / "traces.csv", index=False)
        path = write_yaml("csv.yaml", {"network": NETWORK, "traces": {"kind": "csv", "path": "traces.csv"}})
        cfg = load_scenario(str(path)).scenario
        assert cfg.traces[1].value_at(500.0) == 0.4
        assert cfg.traces[2].value_at(500.0) == 0.9

    def test_csv_missing_lot(self, write_yaml, tmp_path):
        pd.DataFrame({"minute": [0, 1440], "lot_id": [1, 1], "p": [0.5, 0.5]}).to_csv(
            tmp_path / "traces.csv", index=False)
        path = write_yaml("csv.yaml", {"network": NETWORK, "traces": {"kind": "csv", "path": "traces.csv"}})
        with pytest.raises(ConfigError, match="no rows for lot 2"):
            load_scenario(str(path))

    def test_site_traces(self, write_yaml):
        path = write_yaml("site.yaml", {"traces": {"kind": "site", "site": "sparse"}, "policies": ["pa1"]})
        site = load_scenario(str(path))
        assert site.scenario.name == "sparse"
        assert [p.name for p in site.scenario.policies] == ["pa1"]

    def test_unknown_site(self, write_yaml):
        path = write_yaml("site.yaml", {"traces": {"kind": "site", "site": "harbour"}})
        with pytest.raises(ConfigError, match="unknown site"):
            load_scenario(str(path))

    def test_network_required_without_a_site(self, write_yaml):
        with pytest.raises(ConfigError, match="needs a network section"):
            load_scenario(str(write_yaml("s.yaml", {"seeds": 2})))

    def test_unknown_keys_are_rejected(self, write_yaml):
        with pytest.raises(ConfigError) as err:
            load_scenario(str(write_yaml("s.yaml", {"network": NETWORK, "colour": "red"})))
        assert any("colour" in v for v in err.value.violations)

    def test_short_trace_is_reported_as_config_error(self, write_yaml, tmp_path):
        pd.DataFrame({"minute": [0, 500, 0, 500], "lot_id": [1, 1, 2, 2], "p": [0.5] * 4}).to_csv(
            tmp_path / "traces.csv", index=False)
        path = write_yaml("csv.yaml", {"network": NETWORK, "traces": {"kind": "csv", "path": "traces.csv"}})
        with pytest.raises(ConfigError, match="inconsistent"):
            load_scenario(str(path))


class TestSites:
    def test_dense_site_dips_at_midday(self):
        traces = dense_site().scenario.traces
        assert traces[1].value_at(13 * 60.0) < traces[1].value_at(8 * 60.0)
        assert traces[3].value_at(13 * 60.0) > traces[1].value_at(13 * 60.0)

    def test_high_availability_stays_high(self):
        traces = dense_site(high_availability=True).scenario.traces
        assert min(traces[j].values.min() for j in (1, 2, 3)) > 0.95 - 1e-9

    def test_sites_start_from_the_trace(self):
        site = sparse_site()
        net = site.scenario.network
        assert net.prob(1) == pytest.approx(site.scenario.traces[1].value_at(480.0))


class TestValidation:
    def test_valid_scenario(self, write_yaml):
        report = validate_config(str(write_yaml("ok.yaml", {"network": NETWORK})))
        assert report.valid
        assert report.as_dict()["violations"] == []

    def test_bare_network(self, write_yaml):
        assert validate_config(str(write_yaml("net.yaml", NETWORK))).valid

    def test_zero_probability_is_a_violation(self, write_yaml):
        bad = dict(NETWORK, initial_probs=[0.0, 0.8])
        report = validate_config(str(write_yaml("bad.yaml", {"network": bad})))
        assert not report.valid
        assert any("(0, 1]" in v for v in report.violations)

    def test_every_problem_is_listed(self, write_yaml):
        bad = dict(NETWORK, wait_time=0, walk_time=[5])
        report = validate_config(str(write_yaml("bad.yaml", {
            "network": bad,
            "policies": ["pa9", "pa1"],
            "observation": {"adoptions": [0.0]},
        })))
        text = "\n".join(report.violations)
        assert "wait_time" in text
        assert "walk_time" in text
        assert "policies[0]" in text
        assert "observation.adoptions" in text

    def test_missing_network(self, write_yaml):
        report = validate_config(str(write_yaml("s.yaml", {"seeds": 2})))
        assert report.violations == ["network: required unless traces.kind is 'site'"]

    def test_unknown_policy(self):
        violations = policy_violations(["pa1", "valet"])
        assert len(violations) == 1
        assert violations[0].startswith("policies[1]")

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigError):
            validate_config(str(tmp_path / "missing.yaml"))

    def test_tool_exit_codes(self, write_yaml, capsys):
        assert validator_main([str(write_yaml("ok.yaml", NETWORK))]) == 0
        assert "OK" in capsys.readouterr().out
        bad = dict(NETWORK, initial_probs=[0.5, 1.5])
        assert validator_main([str(write_yaml("bad.yaml", bad))]) == 2


CONFIGS = Path(__file__).resolve().parents[2] / "configs"


@pytest.mark.parametrize("name", ["network.yaml", "constant.yaml", "dense.yaml"])
def test_shipped_configs_validate(name):
    report = validate_config(str(CONFIGS / name))
    assert report.valid, report.violations


def test_shipped_constant_scenario_loads():
    site = load_scenario(str(CONFIGS / "constant.yaml"))
    assert [p.name for p in site.scenario.policies] == [
        "pa1", "pa2", "pa3", "pa1-oracle", "baseline-patient", "baseline-impatient"]
