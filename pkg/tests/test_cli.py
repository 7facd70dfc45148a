"""
Tests for the command back-ends in core.report and the typer CLI.
"""
import json

import pytest
from typer.testing import CliRunner

from cli import app
from core.errors import InvalidArgumentError
from core.lattice import path_graph
from core.lhv import window_argument_1d
from core.report import ReproductionSuite, build_state, cmd_bounds, cmd_group, cmd_paradox
from core.utils import load_settings

runner = CliRunner()


def invoke_json(*args):
    result = runner.invoke(app, [*args, "--json"])
    return result, json.loads(result.stdout) if result.exit_code in (0, 1) else None


class TestReports:

    def test_group_report(self, settings):
        report = cmd_group("1d:4", settings)
        assert report.results["size"] == 16
        assert report.results["sign_histogram"] == {"+1": 14, "-1": 2}
        assert report.graph.edges == [(0, 1), (1, 2), (2, 3)]

    def test_paradox_on_eight_sites_covers_every_window(self, settings):
        report = cmd_paradox("1d:8", settings)
        windows = {tuple(w) for w in report.results["windows"]}
        for k in range(1, 7):
            assert window_argument_1d(8, k).window in windows
        assert all(a["verified"] and a["max_satisfied"] < len(a["elements"]) for a in report.results["arguments"])

    def test_paradox_excluding_star_center(self, settings):
        report = cmd_paradox("star:4", settings, exclude=[0])
        assert report.results["count"] == 0
        assert cmd_paradox("star:4", settings).results["count"] > 0

    def test_bounds_body_is_deterministic(self, settings):
        first = cmd_bounds("cluster4", "ghz", settings)
        second = cmd_bounds("cluster4", "ghz", settings)
        assert first.body() == second.body()
        assert "timing" not in json.loads(first.body())

    def test_bounds_reference_section(self, settings):
        report = cmd_bounds("cluster4", "cluster", settings)
        assert report.results["reference"]["quantum_value"] == pytest.approx(4.0, abs=1e-10)
        assert report.results["optimized"]["classical_bound"] == pytest.approx(2.0)

    def test_reduced_window_state(self):
        rho = build_state("reduced-window(8,3)", path_graph(4))
        assert rho.num_sites == 5

    def test_unknown_state(self):
        with pytest.raises(InvalidArgumentError):
            build_state("bell", path_graph(4))

    def test_perturbed_eigenvalue_checks_fail(self, settings):
        suite = ReproductionSuite(settings, perturb=True)
        suite.check_eigenvalue_family()
        assert suite.checks
        assert not all(check.passed for check in suite.checks)

    def test_unperturbed_structural_checks_pass(self, settings):
        suite = ReproductionSuite(settings)
        suite.check_eigenvalue_family()
        suite.check_group_census()
        suite.check_four_qubit_argument()
        suite.check_lhv_satisfiability()
        suite.check_cluster4()
        suite.check_mixed_windows()
        suite.check_consecutiveness()
        suite.check_path_criterion()
        suite.check_star_graph()
        failed = [check.name for check in suite.checks if not check.passed]
        assert failed == []


class TestSettings:

    def test_defaults(self, clean_env):
        settings = load_settings()
        assert settings.restarts == 64
        assert settings.max_subset == 4

    def test_environment_and_overrides(self, monkeypatch, clean_env):
        monkeypatch.setenv("CLUSTER_NL_RESTARTS", "16")
        monkeypatch.setenv("CLUSTER_NL_SEED", "7")
        settings = load_settings(seed=3)
        assert settings.restarts == 16
        assert settings.seed == 3

    def test_env_file(self, tmp_path, clean_env):
        env_file = tmp_path / ".env"
        env_file.write_text("CLUSTER_NL_MAX_SUBSET=5\n", encoding="utf-8")
        assert load_settings(env_file).max_subset == 5

    def test_invalid_value(self, clean_env):
        with pytest.raises(ValueError):
            load_settings(max_subset=9)


class TestCli:

    def test_group_json(self):
        result, data = invoke_json("group", "--graph", "1d:4")
        assert result.exit_code == 0
        assert data["command"] == "group"
        labels = [e["label"] for e in data["results"]["elements"]]
        assert labels[:5] == ["+IIII", "+XZII", "+ZXZI", "+YYZI", "+IZXZ"]

    def test_bad_graph_spec_exits_2(self):
        result = runner.invoke(app, ["group", "--graph", "hexagon"])
        assert result.exit_code == 2

    def test_group_too_large_exits_3(self):
        result = runner.invoke(app, ["group", "--graph", "1d:21"])
        assert result.exit_code == 3

    def test_paradox_json(self):
        result, data = invoke_json("paradox", "--graph", "1d:4")
        assert result.exit_code == 0
        found = [set(a["elements"]) for a in data["results"]["arguments"]]
        assert {"+XIXZ", "+ZYYZ", "+XIYY", "-ZYXY"} in found

    def test_paradox_exclude(self):
        result, data = invoke_json("paradox", "--graph", "star:4", "--exclude", "0")
        assert result.exit_code == 0
        assert data["results"]["count"] == 0

    def test_paradox_cap_above_ceiling_exits_3(self):
        result = runner.invoke(app, ["paradox", "--graph", "1d:4", "--max-size", "7"])
        assert result.exit_code == 3

    def test_bounds_json(self):
        result, data = invoke_json("bounds", "--ineq", "cluster4", "--state", "cluster", "--restarts", "4")
        assert result.exit_code == 0
        optimized = data["results"]["optimized"]
        assert optimized["quantum_value"] == pytest.approx(4.0, abs=1e-9)
        assert optimized["classical_bound"] == pytest.approx(2.0)
        assert optimized["violation"] is True
        assert data["invocation"]["restarts"] == 4

    def test_unknown_inequality_exits_2(self):
        result = runner.invoke(app, ["bounds", "--ineq", "chsh"])
        assert result.exit_code == 2

    def test_bounds_tables(self):
        result = runner.invoke(app, ["bounds", "--ineq", "cluster4", "--state", "cluster", "--restarts", "2"])
        assert result.exit_code == 0
        assert "classical bound" in result.stdout

    def test_amplitudes(self):
        result = runner.invoke(app, ["amplitudes", "--state", "ghz", "--graph", "1d:2"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert [line.split()[0] for line in lines] == ["00", "01", "10", "11"]

    def test_amplitudes_reject_mixed_state(self):
        result = runner.invoke(app, ["amplitudes", "--state", "reduced-window(8,3)"])
        assert result.exit_code == 2

    def test_export_graph(self, tmp_path):
        output = tmp_path / "chain.json"
        result = runner.invoke(app, ["export-graph", "--graph", "1d:3", "--output", str(output)])
        assert result.exit_code == 0
        data = json.loads(output.read_text(encoding="utf-8"))
        assert [node["generator"] for node in data["nodes"]] == ["+XZI", "+ZXZ", "+IZX"]

    def test_report_written_to_file(self, tmp_path):
        output = tmp_path / "group.json"
        result = runner.invoke(app, ["group", "--graph", "1d:2", "--output", str(output)])
        assert result.exit_code == 0
        assert json.loads(output.read_text(encoding="utf-8"))["results"]["size"] == 4

    def test_workflow(self):
        result = runner.invoke(app, ["workflow"])
        assert result.exit_code == 0
        assert "report-paper" in result.stdout

    def test_report_paper_passes(self):
        result, data = invoke_json("report-paper")
        failed = [c["name"] for c in data["results"]["checks"] if not c["passed"]]
        assert failed == []
        assert result.exit_code == 0
        assert data["results"]["passed"] == len(data["results"]["checks"])
