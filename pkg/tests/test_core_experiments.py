import numpy as np
import pytest
from pydantic import ValidationError

from ocs_cli.core.exceptions import DomainError
from ocs_cli.core.experiments import (
    ExperimentConfig,
    run_condition_table,
    run_lebesgue_curve,
    run_perturbation_sweep,
    run_radii_comparison,
    run_recovery_experiment,
    run_rotation_sweep,
    run_slope_condition_curve,
)
from ocs_cli.core.lebesgue import MeshSpec


def test_condition_table():
    table = run_condition_table([9, 10], ["ocs", "spiral"])
    assert list(table.columns) == [
        "n",
        "N",
        "pattern",
        "stand_in",
        "radii",
        "kappa2",
        "kappa_inf",
        "sigma_min",
        "sigma_max",
    ]
    assert table["N"].tolist() == [55, 55, 66, 66]
    assert table["stand_in"].tolist() == [False, True, False, True]
    assert table["radii"].tolist() == ["fitted", "n/a", "fitted", "n/a"]
    ocs_10 = table[(table["n"] == 10) & (table["pattern"] == "ocs")]["kappa2"].iloc[0]
    assert ocs_10 == pytest.approx(4.34, rel=0.02)


def test_condition_table_with_optimized_radii():
    fitted = run_condition_table([4], ["ocs"])
    optimized = run_condition_table([4], ["ocs", "carnicer"], radii="optimized", seed=0, budget=100)
    assert optimized["radii"].tolist() == ["optimized", "n/a"]
    assert optimized["kappa2"].iloc[0] <= fitted["kappa2"].iloc[0] + 1e-12
    carnicer = run_condition_table([4], ["carnicer"])
    assert optimized["kappa2"].iloc[1] == carnicer["kappa2"].iloc[0]


def test_condition_table_rejects_unknown_radii_source():
    with pytest.raises(DomainError):
        run_condition_table([4], ["ocs"], radii="published")


def test_condition_table_skips_kappa_inf_above_limit():
    table = run_condition_table([4], ["ocs", "carnicer"], kappa_inf_max_dim=0)
    assert table["kappa_inf"].isna().all()
    assert np.isfinite(table["kappa2"]).all()


def test_recovery_is_exact_to_rounding():
    stats = run_recovery_experiment(10, trials=5, seed=42)
    assert stats.rms_mean < 1e-12
    assert stats.to_dict()["N"] == 66
    assert len(stats.rms_values) == 5


def test_recovery_reports_labelled_coefficients():
    stats = run_recovery_experiment(4, trials=3, seed=1)
    frame = stats.coefficient_frame()
    assert list(frame.columns) == ["order", "j", "n", "m", "label", "mean_abs_error"]
    assert len(frame) == 15
    assert frame["label"].tolist()[:5] == ["piston", "vertical tilt", "horizontal tilt", "oblique astigmatism", "defocus"]
    assert frame.loc[12, "label"] == "primary spherical"
    assert (frame["mean_abs_error"] < 1e-12).all()

    row = stats.to_dict()
    worst = frame["mean_abs_error"].idxmax()
    assert row["worst_j"] == worst
    assert row["worst_label"] == frame.loc[worst, "label"]
    assert row["worst_abs_error"] == frame.loc[worst, "mean_abs_error"]


def test_recovery_is_deterministic():
    first = run_recovery_experiment(8, trials=4, seed=7)
    second = run_recovery_experiment(8, trials=4, seed=7)
    assert first.rms_values == second.rms_values


def test_single_recovery_trial_has_zero_spread():
    assert run_recovery_experiment(6, trials=1).rms_std == 0.0


def test_recovery_rejects_zero_trials():
    with pytest.raises(DomainError):
        run_recovery_experiment(6, trials=0)


def test_rotation_sweep():
    table = run_rotation_sweep(6, alphas_per_ring=8)
    assert table["ring"].tolist() == [1, 2, 3, 4]
    assert table["count"].tolist() == [13, 9, 5, 1]
    assert table.loc[0, "max_relative_change"] <= 1e-9


def test_rotation_sweep_rejects_empty_sweep():
    with pytest.raises(DomainError):
        run_rotation_sweep(6, alphas_per_ring=0)


def test_perturbation_sweep():
    table = run_perturbation_sweep(6, magnitudes=[0.0, 1e-3], trials=3, seed=1)
    assert len(table) == 4
    assert set(table["mode"]) == {"radii", "points"}
    unperturbed = table[table["magnitude"] == 0.0]
    assert (unperturbed["max_kappa2"] == unperturbed["baseline_kappa2"]).all()
    assert (table["singular_trials"] == 0).all()


def test_perturbation_sweep_validation():
    with pytest.raises(DomainError):
        run_perturbation_sweep(6, magnitudes=[1e-3, 0.0])
    with pytest.raises(DomainError):
        run_perturbation_sweep(6, magnitudes=[-1e-3])
    with pytest.raises(DomainError):
        run_perturbation_sweep(6, trials=0)


def test_slope_condition_curve():
    table = run_slope_condition_curve([1, 2, 3], ["ocs"])
    assert table["rows"].tolist() == [4, 10, 18]
    assert table["cols"].tolist() == [2, 5, 9]
    assert np.isfinite(table["kappa2"]).all()


def test_lebesgue_curve():
    table, fit = run_lebesgue_curve([0, 2, 3, 4], MeshSpec(density=4, refine=False))
    assert table["lambda"].iloc[0] == pytest.approx(1.0)
    assert (table["lambda"] >= 1.0 - 1e-12).all()
    assert set(fit) == {"slope", "intercept", "r2", "orders"}
    assert np.isfinite(fit["r2"])


def test_lebesgue_curve_order_limit():
    with pytest.raises(DomainError):
        run_lebesgue_curve([26])


def test_radii_comparison():
    table, fit = run_radii_comparison([2, 3], seed=0, budget=100)
    assert fit is None
    assert table["n"].tolist() == [2, 3]
    assert (table["kappa2_optimized"] <= table["kappa2_fitted"]).all()
    assert (table["relative_gap"] >= 0.0).all()


def test_experiment_config_defaults():
    config = ExperimentConfig()
    assert config.orders == [10]
    assert config.patterns == ["ocs"]


@pytest.mark.parametrize(
    "kwargs",
    [
        {"trials": 0},
        {"orders": [0]},
        {"orders": []},
        {"patterns": ["hexagonal"]},
        {"experiment": "train"},
        {"format": "parquet"},
    ],
)
def test_experiment_config_rejects(kwargs):
    with pytest.raises(ValidationError):
        ExperimentConfig(**kwargs)


def test_experiment_config_allows_order_zero_for_lebesgue():
    config = ExperimentConfig(experiment="lebesgue-curve", orders=[0, 5])
    assert config.orders == [0, 5]
