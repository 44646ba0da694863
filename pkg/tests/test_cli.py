import os
import json
import tempfile
from unittest.mock import patch

import pytest
from click.testing import CliRunner

from ocs_cli.cli import cli
from ocs_cli.core.exceptions import SingularMatrixError
from ocs_cli.utils.utils import ARTIFACTS_LOG, read_frame, read_payload


COMMANDS = (
    "init",
    "clean",
    "nodes",
    "cond-table",
    "recover",
    "rotate-sweep",
    "perturb-sweep",
    "slope-cond",
    "lebesgue-curve",
    "optimize",
    "asymptotics",
    "radii-compare",
    "completion",
)


def test_help_lists_commands():
    runner = CliRunner()
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    for command in COMMANDS:
        assert command in result.output
    assert sorted(cli.commands) == sorted(COMMANDS)


def test_nodes_command():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(cli, ["nodes", "--order", "10", "--out", "nodes.csv"])
            assert result.exit_code == 0
            frame = read_frame("nodes.csv")
            assert list(frame.columns) == ["index", "rho", "theta", "x", "y"]
            assert len(frame) == 66
            with open("nodes.csv") as f:
                assert f.readline().startswith("# generated_at=")
            with open(ARTIFACTS_LOG) as f:
                assert "nodes.csv" in f.read()


def test_nodes_command_json_and_drop_innermost():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(
                cli, ["nodes", "--order", "10", "--drop-innermost", "--format", "json", "--out", "nodes.json"]
            )
            assert result.exit_code == 0
            with open("nodes.json") as f:
                document = json.load(f)
            assert "generated_at" in document
            assert len(document["result"]) == 65


def test_nodes_command_rejects_order_zero():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(cli, ["nodes", "--order", "0"])
            assert result.exit_code == 2


def test_nodes_command_rejects_bad_exponent():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(cli, ["nodes", "--order", "10", "--pattern", "carnicer", "--exponent", "2.5"])
            assert result.exit_code == 2


def test_nodes_command_exports_matrix_report_and_rings():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(
                cli,
                ["nodes", "--order", "4", "--out", "nodes.csv", "--export-matrix", "A.csv", "--report", "A.json", "--rings", "rings.csv"],
            )
            assert result.exit_code == 0
            matrix = read_frame("A.csv")
            assert matrix.shape == (15, 15)
            assert list(matrix.columns[:2]) == ["Z0", "Z1"]
            assert (matrix["Z0"] == 1.0).all()
            report = read_payload("A.json")
            assert report["mode"] == "elevation"
            assert report["n"] == 4
            assert report["kappa2"] >= 1.0
            rings = read_frame("rings.csv")
            assert rings["count"].tolist() == [9, 5, 1]
            assert rings["ring"].tolist() == [1, 2, 3]
            with open(ARTIFACTS_LOG) as f:
                logged = f.read()
            assert "A.csv" in logged and "rings.csv" in logged


def test_nodes_command_exports_slope_matrix():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(cli, ["nodes", "--order", "3", "--drop-innermost", "--export-matrix", "S.csv", "--report", "S.json"])
            assert result.exit_code == 0
            matrix = read_frame("S.csv")
            assert matrix.shape == (18, 9)
            assert matrix.columns[0] == "Z1"
            report = read_payload("S.json")
            assert report["mode"] == "slope"
            assert report["kappa_inf"] is None


def test_nodes_command_rejects_rings_of_spiral():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(cli, ["nodes", "--order", "4", "--pattern", "spiral", "--out", "s.csv", "--rings", "rings.csv"])
            assert result.exit_code == 2
            assert not os.path.exists("rings.csv")


def test_cond_table_command():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(
                cli, ["cond-table", "--orders", "6,10", "--pattern", "ocs", "--pattern", "spiral", "--out", "table.csv"]
            )
            assert result.exit_code == 0
            table = read_frame("table.csv")
            assert table["n"].tolist() == [6, 6, 10, 10]
            assert table["pattern"].tolist() == ["ocs", "spiral", "ocs", "spiral"]
            ocs_10 = table[(table["n"] == 10) & (table["pattern"] == "ocs")]["kappa2"].iloc[0]
            assert ocs_10 == pytest.approx(4.34, rel=0.02)


def test_cond_table_command_with_optimized_radii():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            fitted = runner.invoke(cli, ["cond-table", "--orders", "4", "--out", "fitted.csv"])
            optimized = runner.invoke(
                cli,
                ["cond-table", "--orders", "4", "--radii", "optimized", "--budget", "100", "--seed", "0", "--out", "opt.csv"],
            )
            assert fitted.exit_code == 0 and optimized.exit_code == 0
            fitted_table = read_frame("fitted.csv")
            optimized_table = read_frame("opt.csv")
            assert optimized_table["radii"].tolist() == ["optimized"]
            assert optimized_table["kappa2"].iloc[0] <= fitted_table["kappa2"].iloc[0] + 1e-12


def test_cond_table_rejects_small_budget_for_optimized_radii():
    runner = CliRunner()
    result = runner.invoke(cli, ["cond-table", "--orders", "4", "--radii", "optimized", "--budget", "10"])
    assert result.exit_code == 2


def test_cond_table_rejects_bad_orders():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(cli, ["cond-table", "--orders", "ten"])
            assert result.exit_code == 2


def test_numerical_failure_exits_with_code_3():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            with patch("ocs_cli.commands.cond_table.run_condition_table", side_effect=SingularMatrixError("singular")):
                result = runner.invoke(cli, ["cond-table", "--orders", "10"])
            assert result.exit_code == 3


def test_invalid_config_file_exits_with_code_2():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            with open("config.yaml", "w") as f:
                f.write("seed: [unterminated\n")
            result = runner.invoke(cli, ["nodes", "--order", "4"])
            assert result.exit_code == 2


def test_recover_command():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(
                cli, ["recover", "--orders", "6,8", "--trials", "3", "--seed", "1", "--format", "json", "--out", "r.json"]
            )
            assert result.exit_code == 0
            records = read_payload("r.json")
            assert [r["n"] for r in records] == [6, 8]
            assert all(r["rms_mean"] < 1e-12 for r in records)
            assert all(isinstance(r["worst_label"], str) for r in records)


def test_recover_command_writes_labelled_coefficients():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(
                cli, ["recover", "--orders", "2,4", "--trials", "2", "--out", "r.csv", "--coefficients", "coefficients.csv"]
            )
            assert result.exit_code == 0
            frame = read_frame("coefficients.csv")
            assert len(frame) == 6 + 15
            assert frame["order"].tolist() == [2] * 6 + [4] * 15
            assert frame["label"].iloc[4] == "defocus"
            assert frame["label"].iloc[-3] == "primary spherical"
            assert "worst_label" in read_frame("r.csv").columns


def test_slope_cond_command():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(cli, ["slope-cond", "--orders", "1-4", "--pattern", "ocs", "--out", "slope.csv"])
            assert result.exit_code == 0
            table = read_frame("slope.csv")
            assert table["n"].tolist() == [1, 2, 3, 4]
            assert table["cols"].tolist() == [2, 5, 9, 14]


def test_rotate_and_perturb_sweeps():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(cli, ["rotate-sweep", "--orders", "6", "--alphas", "4", "--out", "rot.csv"])
            assert result.exit_code == 0
            assert len(read_frame("rot.csv")) == 4
            result = runner.invoke(
                cli, ["perturb-sweep", "--orders", "6", "--magnitudes", "0,1e-3", "--trials", "2", "--out", "pert.csv"]
            )
            assert result.exit_code == 0
            assert len(read_frame("pert.csv")) == 4


def test_lebesgue_curve_command():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(
                cli,
                ["lebesgue-curve", "--orders", "0,2,3", "--density", "4", "--no-refine", "--format", "json", "--out", "l.json"],
            )
            assert result.exit_code == 0
            payload = read_payload("l.json")
            assert set(payload) == {"table", "fit"}
            assert payload["table"][0]["lambda"] == pytest.approx(1.0)


def test_optimize_command():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(
                cli, ["optimize", "--order", "2", "--budget", "100", "--trace", "trace.csv", "--out", "radii.json"]
            )
            assert result.exit_code == 0
            payload = read_payload("radii.json")
            assert payload["n"] == 2
            assert len(payload["radii"]) == 2
            assert payload["kappa2"] <= payload["seed_kappa2"]
            assert list(read_frame("trace.csv").columns) == ["evaluation", "best_kappa2"]


def test_optimize_rejects_small_budget():
    runner = CliRunner()
    result = runner.invoke(cli, ["optimize", "--order", "4", "--budget", "10"])
    assert result.exit_code == 2


def test_asymptotics_command():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(cli, ["asymptotics", "--variant", "g2", "--out", "a.json"])
            assert result.exit_code == 0
            payload = read_payload("a.json")
            assert payload["variant"] == "g2"
            assert payload["L"] == pytest.approx(-0.675676, abs=1e-4)


def test_init_and_clean_commands():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            result = runner.invoke(cli, ["init"])
            assert result.exit_code == 0
            assert os.path.exists("config.yaml")
            with open("config.yaml") as f:
                written = f.read()
            assert "seed: 42" in written
            assert "output_dir" not in written

            result = runner.invoke(cli, ["init"])
            assert result.exit_code == 2
            result = runner.invoke(cli, ["init", "--force"])
            assert result.exit_code == 0

            result = runner.invoke(cli, ["nodes", "--order", "4", "--out", "nodes.csv"])
            assert result.exit_code == 0

            result = runner.invoke(cli, ["clean"])
            assert result.exit_code == 0
            assert not os.path.exists("nodes.csv")
            assert not os.path.exists("config.yaml")
            assert not os.path.exists(ARTIFACTS_LOG)


def test_config_file_overrides_seed():
    runner = CliRunner()
    with tempfile.TemporaryDirectory() as tmpdir:
        with runner.isolated_filesystem(temp_dir=tmpdir):
            with open("config.yaml", "w") as f:
                f.write("seed: 7\nprogress: false\n")
            first = runner.invoke(cli, ["recover", "--orders", "4", "--trials", "2", "--out", "a.csv"])
            second = runner.invoke(cli, ["recover", "--orders", "4", "--trials", "2", "--seed", "7", "--out", "b.csv"])
            assert first.exit_code == 0 and second.exit_code == 0
            assert read_frame("a.csv")["rms_mean"].tolist() == read_frame("b.csv")["rms_mean"].tolist()


@pytest.mark.parametrize("shell", ["bash", "zsh", "fish"])
def test_completion_command(shell):
    runner = CliRunner()
    result = runner.invoke(cli, ["completion", shell])
    assert result.exit_code == 0
    assert "_OCS_COMPLETE" in result.output
