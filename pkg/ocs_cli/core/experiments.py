"""
Experiment drivers: condition tables, coefficient recovery, ring rotation and
node perturbation sweeps, slope conditioning, Lebesgue growth and the
fitted-versus-optimized radii comparison.

Every driver returns pandas DataFrames (plus small summary dicts) that the
commands serialize. All randomness derives from one integer seed through
``numpy.random.SeedSequence``; work is fanned out with joblib in submission
order so results do not depend on the number of workers.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from pydantic import BaseModel, Field, field_validator, model_validator
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score
from tqdm import tqdm

from ocs_cli.core.collocation import (
    KAPPA_INF_MAX_DIM,
    build_elevation_matrix,
    build_slope_matrix,
    condition_numbers,
    interpolate,
)
from ocs_cli.core.exceptions import DomainError
from ocs_cli.core.lebesgue import MeshSpec, lebesgue_constant
from ocs_cli.core.optimizer import optimize_radii, refit_radii_formula
from ocs_cli.core.patterns import (
    CARNICER_DEFAULT_EXPONENT,
    PATTERN_NAMES,
    TWO_PI,
    NodeSet,
    drop_innermost,
    ocs_pattern,
    pattern_nodes,
    pattern_with_radii,
    perturb,
    realize_nodes,
    rotate_ring,
)
from ocs_cli.core.settings import OptimizerSettings
from ocs_cli.core.zernike import ZernikeIndex, basis_dimension, nm_from_index, zernike_label

DEFAULT_MAGNITUDES: Tuple[float, ...] = (0.0, 1e-5, 1e-4, 1e-3, 1e-2)
PERTURBATION_MODES = ("radii", "points")
STAND_IN_PATTERNS = ("spiral",)
RADII_SOURCES = ("fitted", "optimized")
DEFAULT_TABLE_BUDGET = 2000
LEBESGUE_MAX_ORDER = 25
EXPERIMENTS = (
    "cond-table",
    "recover",
    "rotate-sweep",
    "perturb-sweep",
    "slope-cond",
    "lebesgue-curve",
    "optimize",
    "radii-compare",
)


class ExperimentConfig(BaseModel):
    """Validated inputs of one experiment run."""

    experiment: str = "cond-table"
    orders: List[int] = Field(default_factory=lambda: [10])
    patterns: List[str] = Field(default_factory=lambda: ["ocs"])
    trials: int = Field(1, ge=1)
    seed: int = 42
    output: Optional[str] = None
    format: str = "csv"

    @field_validator("experiment")
    @classmethod
    def _known_experiment(cls, value):
        if value not in EXPERIMENTS:
            raise ValueError(f"unknown experiment '{value}'")
        return value

    @field_validator("patterns")
    @classmethod
    def _known_patterns(cls, value):
        unknown = [p for p in value if p not in PATTERN_NAMES]
        if unknown or not value:
            raise ValueError(f"patterns must be drawn from {PATTERN_NAMES}, got {value}")
        return value

    @field_validator("format")
    @classmethod
    def _known_format(cls, value):
        if value not in ("csv", "json"):
            raise ValueError("format must be 'csv' or 'json'")
        return value

    @model_validator(mode="after")
    def _check_orders(self):
        # Lambda at n = 0 is a meaningful (trivial) point of the Lebesgue curve
        lowest = 0 if self.experiment == "lebesgue-curve" else 1
        if not self.orders or min(self.orders) < lowest:
            raise ValueError(f"orders must be non-empty and >= {lowest}, got {self.orders}")
        return self


@dataclass(frozen=True)
class RecoveryStats:
    n: int
    trials: int
    rms_mean: float
    rms_std: float
    pattern: str = "ocs"
    rms_values: Tuple[float, ...] = field(default=(), repr=False)
    # mean |recovered - exact| per single index j, over the trials
    coefficient_errors: Tuple[float, ...] = field(default=(), repr=False)

    @property
    def worst_index(self) -> Optional[ZernikeIndex]:
        if not self.coefficient_errors:
            return None
        return nm_from_index(int(np.argmax(self.coefficient_errors)))

    def to_dict(self) -> Dict:
        worst = self.worst_index
        return {
            "n": self.n,
            "N": basis_dimension(self.n),
            "pattern": self.pattern,
            "trials": self.trials,
            "rms_mean": self.rms_mean,
            "rms_std": self.rms_std,
            "rms_max": max(self.rms_values) if self.rms_values else float("nan"),
            "worst_j": worst.j if worst else None,
            "worst_label": zernike_label(worst) if worst else None,
            "worst_abs_error": max(self.coefficient_errors) if self.coefficient_errors else float("nan"),
        }

    def coefficient_frame(self) -> pd.DataFrame:
        """Mean absolute recovery error of every coefficient, labelled by its aberration name."""
        indices = [nm_from_index(j) for j in range(len(self.coefficient_errors))]
        return pd.DataFrame(
            {
                "order": self.n,
                "j": [idx.j for idx in indices],
                "n": [idx.n for idx in indices],
                "m": [idx.m for idx in indices],
                "label": [zernike_label(idx) for idx in indices],
                "mean_abs_error": list(self.coefficient_errors),
            }
        )


def _parallel(n_jobs: int):
    return Parallel(n_jobs=n_jobs)


def _condition_row(
    n: int,
    pattern: str,
    exponent: float,
    kappa_inf_max_dim: int,
    radii: str,
    seed: int,
    budget: int,
    settings: Optional[OptimizerSettings],
) -> Dict:
    radii_source = radii if pattern == "ocs" else "n/a"
    if radii_source == "optimized":
        result = optimize_radii(n, seed, budget, settings)
        nodes = realize_nodes(pattern_with_radii(n, result.radii))
    else:
        nodes = pattern_nodes(pattern, n, exponent)
    report = condition_numbers(build_elevation_matrix(nodes, n), kappa_inf_max_dim)
    row = report.to_dict()
    return {
        "n": n,
        "N": basis_dimension(n),
        "pattern": pattern,
        "stand_in": pattern in STAND_IN_PATTERNS,
        "radii": radii_source,
        "kappa2": row["kappa2"],
        "kappa_inf": np.nan if row["kappa_inf"] is None else row["kappa_inf"],
        "sigma_min": row["sigma_min"],
        "sigma_max": row["sigma_max"],
    }


def run_condition_table(
    orders: Sequence[int],
    patterns: Sequence[str] = ("ocs",),
    exponent: float = CARNICER_DEFAULT_EXPONENT,
    kappa_inf_max_dim: int = KAPPA_INF_MAX_DIM,
    radii: str = "fitted",
    seed: int = 42,
    budget: int = DEFAULT_TABLE_BUDGET,
    settings: Optional[OptimizerSettings] = None,
    n_jobs: int = 1,
    progress: bool = False,
) -> pd.DataFrame:
    """kappa_2 (and kappa_inf where affordable) of the elevation matrix per order and pattern.

    ``radii`` selects the OCS ring radii: ``fitted`` uses the cubic formula, ``optimized``
    runs :func:`optimize_radii` per order with ``seed`` and ``budget`` first. Other patterns
    ignore it and report ``n/a``.
    """
    if radii not in RADII_SOURCES:
        raise DomainError(f"Unknown radii source '{radii}'. Choose from {', '.join(RADII_SOURCES)}.")
    jobs = [(n, p) for n in orders for p in patterns]
    rows = _parallel(n_jobs)(
        delayed(_condition_row)(n, p, exponent, kappa_inf_max_dim, radii, seed, budget, settings)
        for n, p in tqdm(jobs, desc="condition table", disable=not progress)
    )
    table = pd.DataFrame(rows)
    singular = table[~np.isfinite(table["kappa2"])]
    for row in singular.itertuples(index=False):
        logging.warning(f"Singular collocation matrix recorded as +inf: n={row.n}, pattern={row.pattern}")
    return table


def _recovery_trial(A, seed_sequence) -> np.ndarray:
    rng = np.random.default_rng(seed_sequence)
    exact = rng.uniform(-1.0, 1.0, size=A.cols)
    recovered = interpolate(A, A.entries @ exact)
    return recovered - exact


def run_recovery_experiment(
    n: int,
    trials: int = 100,
    seed: int = 42,
    pattern: str = "ocs",
    n_jobs: int = 1,
    progress: bool = False,
) -> RecoveryStats:
    """RMS coefficient error of interpolating exact samples of random uniform[-1, 1] expansions."""
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}.")
    A = build_elevation_matrix(pattern_nodes(pattern, n), n)
    _ = A.singular_values  # computed once, shared by all trials
    children = np.random.SeedSequence(seed).spawn(trials)
    errors = _parallel(n_jobs)(
        delayed(_recovery_trial)(A, child) for child in tqdm(children, desc=f"recovery n={n}", disable=not progress)
    )
    errors = np.asarray(errors)  # (trials, N)
    rms = np.sqrt(np.mean(errors**2, axis=1))
    stats = RecoveryStats(
        n,
        trials,
        float(rms.mean()),
        float(rms.std()),
        pattern,
        tuple(rms.tolist()),
        tuple(np.abs(errors).mean(axis=0).tolist()),
    )
    logging.info(f"Recovery n={n} ({pattern}, {trials} trials): mean RMS {stats.rms_mean:.3e} +/- {stats.rms_std:.3e}")
    return stats


def _rotation_row(n: int, pattern, ring_index: int, alphas_per_ring: int, reference: float) -> Dict:
    ring = pattern.rings[ring_index]
    alphas = TWO_PI / ring.count * np.arange(alphas_per_ring) / alphas_per_ring
    kappas = np.array(
        [
            condition_numbers(build_elevation_matrix(realize_nodes(rotate_ring(pattern, ring_index, a)), n), 0).kappa2
            for a in alphas
        ]
    )
    change = np.abs(kappas - reference)
    return {
        "n": n,
        "ring": ring_index + 1,
        "radius": ring.radius,
        "count": ring.count,
        "baseline_kappa2": reference,
        "max_kappa2": float(kappas.max()),
        "max_abs_change": float(change.max()),
        "max_relative_change": float(change.max() / reference),
    }


def run_rotation_sweep(n: int, alphas_per_ring: int = 32, n_jobs: int = 1, progress: bool = False) -> pd.DataFrame:
    """Max kappa_2 change when each OCS ring alone is rotated over [0, 2 pi / count)."""
    if alphas_per_ring < 1:
        raise DomainError("alphas_per_ring must be >= 1.")
    pattern = ocs_pattern(n)
    reference = condition_numbers(build_elevation_matrix(realize_nodes(pattern), n), 0).kappa2
    rows = _parallel(n_jobs)(
        delayed(_rotation_row)(n, pattern, j, alphas_per_ring, reference)
        for j in tqdm(range(len(pattern.rings)), desc=f"rotation n={n}", disable=not progress)
    )
    return pd.DataFrame(rows)


def _perturbed_kappa(n: int, nodes, mode: str, magnitude: float, seed_sequence) -> float:
    perturbed = perturb(nodes, mode, magnitude, seed_sequence)
    return condition_numbers(build_elevation_matrix(perturbed, n), 0).kappa2


def run_perturbation_sweep(
    n: int,
    magnitudes: Sequence[float] = DEFAULT_MAGNITUDES,
    trials: int = 20,
    seed: int = 42,
    pattern: str = "ocs",
    n_jobs: int = 1,
    progress: bool = False,
) -> pd.DataFrame:
    """kappa_2 versus perturbation magnitude for ring-radius and single-node perturbations."""
    magnitudes = [float(m) for m in magnitudes]
    if any(m < 0 for m in magnitudes) or magnitudes != sorted(magnitudes):
        raise DomainError(f"Magnitudes must be non-negative and ascending, got {magnitudes}.")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}.")

    nodes = pattern_nodes(pattern, n)
    baseline = condition_numbers(build_elevation_matrix(nodes, n), 0).kappa2
    jobs = [(mode, magnitude) for mode in PERTURBATION_MODES for magnitude in magnitudes]
    children = np.random.SeedSequence(seed).spawn(len(jobs) * trials)
    kappas = _parallel(n_jobs)(
        delayed(_perturbed_kappa)(n, nodes, mode, magnitude, children[i * trials + t])
        for i, (mode, magnitude) in enumerate(tqdm(jobs, desc=f"perturbation n={n}", disable=not progress))
        for t in range(trials)
    )
    kappas = np.asarray(kappas).reshape(len(jobs), trials)

    rows = []
    for (mode, magnitude), values in zip(jobs, kappas):
        finite = np.isfinite(values)
        rows.append(
            {
                "n": n,
                "pattern": pattern,
                "mode": mode,
                "magnitude": magnitude,
                "baseline_kappa2": baseline,
                "max_kappa2": float(values.max()),
                "mean_kappa2": float(values.mean()),
                "singular_trials": int((~finite).sum()),
            }
        )
        if not finite.all():
            logging.warning(f"{(~finite).sum()} singular configurations at n={n}, mode={mode}, magnitude={magnitude}")
    return pd.DataFrame(rows)


def _slope_row(n: int, pattern: str, exponent: float) -> Dict:
    nodes = drop_innermost(pattern_nodes(pattern, n, exponent))
    A = build_slope_matrix(nodes, n)
    report = condition_numbers(A, 0)
    return {
        "n": n,
        "pattern": pattern,
        "stand_in": pattern in STAND_IN_PATTERNS,
        "rows": A.rows,
        "cols": A.cols,
        "kappa2": report.kappa2,
    }


def run_slope_condition_curve(
    orders: Sequence[int],
    patterns: Sequence[str] = ("ocs",),
    exponent: float = CARNICER_DEFAULT_EXPONENT,
    n_jobs: int = 1,
    progress: bool = False,
) -> pd.DataFrame:
    """kappa_2 of the slope matrix with the innermost node removed, per order and pattern."""
    jobs = [(n, p) for n in orders for p in patterns]
    rows = _parallel(n_jobs)(
        delayed(_slope_row)(n, p, exponent) for n, p in tqdm(jobs, desc="slope conditioning", disable=not progress)
    )
    return pd.DataFrame(rows)


def _lebesgue_row(n: int, pattern: str, mesh: MeshSpec) -> Dict:
    # order 0 is the single node at the origin for every pattern
    nodes = NodeSet([0.0], [0.0], "custom") if n == 0 else pattern_nodes(pattern, n)
    return {"n": n, "pattern": pattern, **lebesgue_constant(nodes, n, mesh).to_dict()}


def run_lebesgue_curve(
    orders: Sequence[int],
    mesh: MeshSpec = MeshSpec(),
    pattern: str = "ocs",
    max_order: int = LEBESGUE_MAX_ORDER,
    n_jobs: int = 1,
    progress: bool = False,
) -> Tuple[pd.DataFrame, Dict]:
    """Lambda per order plus a linear fit of Lambda against the dimension N.

    Returns the per-order table and a summary with the fit's slope, intercept and R^2.
    """
    if max(orders) > max_order:
        raise DomainError(f"Lebesgue curve is limited to n <= {max_order}; got {max(orders)}.")
    rows = _parallel(n_jobs)(
        delayed(_lebesgue_row)(n, pattern, mesh) for n in tqdm(list(orders), desc="lebesgue", disable=not progress)
    )
    table = pd.DataFrame(rows)

    summary = {"slope": float("nan"), "intercept": float("nan"), "r2": float("nan"), "orders": list(orders)}
    if len(table) >= 2:
        features = table[["N"]].to_numpy(dtype=float)
        model = LinearRegression().fit(features, table["lambda"])
        summary.update(
            slope=float(model.coef_[0]),
            intercept=float(model.intercept_),
            r2=float(r2_score(table["lambda"], model.predict(features))),
        )
        logging.info(f"Lebesgue growth: Lambda ~ {summary['slope']:.4g} N + {summary['intercept']:.4g} (R^2={summary['r2']:.4f})")
    return table, summary


def run_radii_comparison(
    orders: Sequence[int],
    seed: int = 42,
    budget: int = 2000,
    settings: Optional[OptimizerSettings] = None,
    refit: bool = False,
    n_jobs: int = 1,
    progress: bool = False,
) -> Tuple[pd.DataFrame, Optional[Dict]]:
    """kappa_2 at the fitted radii versus the optimized radii, per order.

    With ``refit`` the cubic radii formula is refitted from the optimized radii.
    """
    results = _parallel(n_jobs)(
        delayed(optimize_radii)(n, seed, budget, settings)
        for n in tqdm(list(orders), desc="radii optimization", disable=not progress)
    )
    rows = []
    for result in results:
        rows.append(
            {
                "n": result.n,
                "kappa2_fitted": result.seed_kappa2,
                "kappa2_optimized": result.kappa2,
                "relative_gap": (result.seed_kappa2 - result.kappa2) / result.kappa2,
                "max_radius_deviation": float(np.max(np.abs(result.radii - result.seed_radii))),
                "evaluations": result.evaluations,
                "converged": result.converged,
            }
        )
    fit = None
    if refit:
        fit = refit_radii_formula({result.n: result.radii for result in results}).to_dict()
    return pd.DataFrame(rows), fit
