"""Tests for the command-line interface."""
import json
import math

import pytest
from click.testing import CliRunner

from cauchybures.cli import main
from cauchybures.correlations import CorrelationRequest, rho_cauchy
from cauchybures.ensembles import EnsembleParams, partition_cauchy


@pytest.fixture
def runner():
    return CliRunner()


def write_spec(tmp_path, payload):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(payload))
    return str(path)


EXP_SPEC = {"upper": [], "lower": [[0.0, 1.0]], "m": 1, "n": 0}


class TestFoxH:
    def test_exponential_spec(self, runner, tmp_path):
        spec = write_spec(tmp_path, EXP_SPEC)
        res = runner.invoke(main, ["foxh", spec, "--z", "0.5", "--z", "2.0"])
        assert res.exit_code == 0
        lines = [json.loads(ln) for ln in res.output.strip().splitlines()]
        assert len(lines) == 2
        for rec in lines:
            assert rec["value"] == pytest.approx(math.exp(-rec["z"]),
                                                 rel=1e-10)
            assert rec["strategy"] in ("ResidueSum", "HankelLoop")
            assert rec["est_error"] > 0

    def test_output_file(self, runner, tmp_path):
        spec = write_spec(tmp_path, EXP_SPEC)
        out = tmp_path / "res.json"
        res = runner.invoke(main, ["foxh", spec, "--z", "1.0",
                                   "--out", str(out)])
        assert res.exit_code == 0
        payload = json.loads(out.read_text())
        assert payload["records"][0]["value"] == pytest.approx(math.exp(-1.0),
                                                               rel=1e-10)
        assert payload["config"]["command"] == "foxh"

    def test_malformed_spec_exits_one(self, runner, tmp_path):
        spec = write_spec(tmp_path, {"upper": [], "m": 1})
        res = runner.invoke(main, ["foxh", spec, "--z", "1.0"])
        assert res.exit_code == 1

    def test_bad_pair_shape_exits_one(self, runner, tmp_path):
        spec = write_spec(tmp_path, {"upper": [[1.0]], "lower": [],
                                     "m": 0, "n": 1})
        res = runner.invoke(main, ["foxh", spec, "--z", "1.0"])
        assert res.exit_code == 1

    def test_nonpositive_z_exits_one(self, runner, tmp_path):
        spec = write_spec(tmp_path, EXP_SPEC)
        res = runner.invoke(main, ["foxh", spec, "--z", "-1.0"])
        assert res.exit_code == 1

    def test_missing_file_exits_nonzero(self, runner):
        res = runner.invoke(main, ["foxh", "/nonexistent.json", "--z", "1.0"])
        assert res.exit_code != 0


class TestKernelGrid:
    ARGS = ["kernel-grid", "--a", "0.5", "--b", "0.7", "--theta", "1.5",
            "--n", "2", "--kind", "K00", "--grid-min", "0.5",
            "--grid-max", "1.5", "--grid-count", "3"]

    def test_csv_output_is_deterministic(self, runner):
        out1 = runner.invoke(main, self.ARGS)
        out2 = runner.invoke(main, self.ARGS)
        assert out1.exit_code == 0
        assert out1.output == out2.output
        assert "x,y,value" in out1.output

    def test_json_format(self, runner):
        res = runner.invoke(main, self.ARGS + ["--format", "json"])
        assert res.exit_code == 0
        payload = json.loads(res.output)
        assert payload["kind"] == "K00"
        assert len(payload["values"]) == 3

    def test_file_output(self, runner, tmp_path):
        out = tmp_path / "grid.csv"
        res = runner.invoke(main, self.ARGS + ["--out", str(out)])
        assert res.exit_code == 0
        assert out.read_text().splitlines()[1] == "x,y,value"

    def test_invalid_grid_exits_one(self, runner):
        res = runner.invoke(main, ["kernel-grid", "--grid-min", "2.0",
                                   "--grid-max", "1.0"])
        assert res.exit_code == 1


class TestVerify:
    @pytest.mark.parametrize("suite", ["numerics", "raney"])
    def test_single_suite_passes(self, runner, suite):
        res = runner.invoke(main, ["verify", "--suite", suite])
        assert res.exit_code == 0
        report = json.loads(res.output)
        assert all(item["status"] == "pass" for item in report)
        assert all(item["check_name"].startswith(suite + ".")
                   for item in report)

    def test_unknown_suite_exits_one(self, runner):
        res = runner.invoke(main, ["verify", "--suite", "astrology"])
        assert res.exit_code == 1

    def test_unreasonable_tolerance_exits_one(self, runner):
        res = runner.invoke(main, ["verify", "--tol", "1.0"])
        assert res.exit_code == 1

    def test_impossible_tolerance_exits_three(self, runner):
        res = runner.invoke(main, ["verify", "--suite", "ensembles",
                                   "--tol", "1e-14"])
        assert res.exit_code == 3


class TestPartition:
    def test_cauchy_matches_library(self, runner):
        res = runner.invoke(main, ["partition", "--model", "cauchy",
                                   "--a", "0.5", "--b", "0.7",
                                   "--theta", "1.5", "--n", "3"])
        assert res.exit_code == 0
        rec = json.loads(res.output)
        want = partition_cauchy(EnsembleParams(0.5, 0.7, 1.5, 3))
        assert rec["value"] == pytest.approx(want.to_real(), rel=1e-12)
        assert rec["log_abs"] == pytest.approx(want.log_mag, rel=1e-12)

    def test_cauchy_requires_b(self, runner):
        res = runner.invoke(main, ["partition", "--model", "cauchy",
                                   "--a", "0.5", "--n", "2"])
        assert res.exit_code == 1

    def test_invalid_parameters_exit_one(self, runner):
        res = runner.invoke(main, ["partition", "--model", "cauchy",
                                   "--a", "-2.0", "--b", "0.0", "--n", "2"])
        assert res.exit_code == 1


class TestCorr:
    def test_cauchy_matches_library(self, runner):
        res = runner.invoke(main, ["corr", "--model", "cauchy",
                                   "--a", "0.5", "--b", "0.7",
                                   "--theta", "1.5", "--n", "2",
                                   "--x", "0.8"])
        assert res.exit_code == 0
        rec = json.loads(res.output)
        p = EnsembleParams(0.5, 0.7, 1.5, 2)
        want = rho_cauchy(CorrelationRequest("cauchy", p, (0.8,)))
        assert rec["value"] == pytest.approx(want, rel=1e-12)

    def test_oracle_flag_reports_discrepancy(self, runner):
        res = runner.invoke(main, ["corr", "--model", "bures",
                                   "--a", "0.3", "--theta", "1.0",
                                   "--n", "2", "--z", "0.9", "--oracle"])
        assert res.exit_code == 0
        rec = json.loads(res.output)
        assert rec["discrepancy"] < 1e-6 * abs(rec["value"])

    def test_species_flags_are_model_checked(self, runner):
        res = runner.invoke(main, ["corr", "--model", "bures", "--a", "0.3",
                                   "--n", "2", "--x", "0.9"])
        assert res.exit_code == 1
        res = runner.invoke(main, ["corr", "--model", "cauchy", "--a", "0.3",
                                   "--b", "0.5", "--n", "2", "--z", "0.9"])
        assert res.exit_code == 1
