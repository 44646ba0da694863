"""
Ring-radius optimization for minimal condition number.

The objective is kappa_2 of the elevation collocation matrix of the Bos array
with the given radii (counts and zero phases fixed). The search starts at the
fitted OCS radii, anneals with proposals that move one radius inside the
interval left by its neighbours, and finishes with a coordinate search whose
step is halved until it drops below the tolerance.
"""
import math
import logging
import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from sklearn.linear_model import LinearRegression

from ocs_cli.core.collocation import build_elevation_matrix, condition_numbers
from ocs_cli.core.exceptions import BudgetExhaustedWarning, DomainError, RankDeficiencyError
from ocs_cli.core.patterns import OCS_COEFFICIENTS, chebyshev_zeta, ocs_radii, pattern_with_radii, radii_from_zeta, realize_nodes, ring_sizes
from ocs_cli.core.settings import OptimizerSettings

MIN_BUDGET = 100
MIN_REFIT_ORDERS = 10
ORDER_GAP = 1e-9


@dataclass(frozen=True)
class RadiiOptimizationProblem:
    """kappa_2 of the order-n Bos array as a function of its ring radii."""

    n: int
    r_max: float = 1.0 - 1e-6

    @property
    def k(self) -> int:
        return len(ring_sizes(self.n))

    def seed_radii(self) -> np.ndarray:
        radii = ocs_radii(self.n)
        radii[0] = min(radii[0], self.r_max)
        return radii

    def feasible(self, radii) -> bool:
        radii = np.asarray(radii, dtype=float)
        return bool(
            radii.size == self.k and radii[0] <= self.r_max and radii[-1] >= 0.0 and np.all(np.diff(radii) < 0.0)
        )

    def objective(self, radii) -> float:
        if not self.feasible(radii):
            return math.inf
        nodes = realize_nodes(pattern_with_radii(self.n, radii))
        kappa2 = condition_numbers(build_elevation_matrix(nodes, self.n), kappa_inf_max_dim=0).kappa2
        return kappa2 if np.isfinite(kappa2) else math.inf

    def neighbour_interval(self, radii: np.ndarray, i: int) -> Tuple[float, float]:
        """Open interval radius i may move in while keeping the radii strictly decreasing."""
        lo = radii[i + 1] + ORDER_GAP if i + 1 < self.k else 0.0
        hi = radii[i - 1] - ORDER_GAP if i > 0 else self.r_max
        return lo, hi


@dataclass
class OptimizationResult:
    n: int
    radii: np.ndarray
    kappa2: float
    iterations: int
    trace: List[Tuple[int, float]] = field(default_factory=list)
    seed_radii: Optional[np.ndarray] = None
    seed_kappa2: float = math.inf
    evaluations: int = 0
    converged: bool = False

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "radii": self.radii,
            "kappa2": self.kappa2,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "seed_radii": self.seed_radii,
            "seed_kappa2": self.seed_kappa2,
        }

    def trace_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.trace, columns=["evaluation", "best_kappa2"])


@dataclass(frozen=True)
class RadiiFit:
    coefficients: Tuple[float, float, float]
    residual_rms: float
    reference_rms: float
    orders: Tuple[int, ...]

    def to_dict(self) -> Dict:
        return {
            "coefficients": list(self.coefficients),
            "residual_rms": self.residual_rms,
            "reference_rms": self.reference_rms,
            "orders": list(self.orders),
        }


class _Search:
    """Evaluation bookkeeping shared by both phases."""

    def __init__(self, problem: RadiiOptimizationProblem, budget: int, n_jobs: int):
        self.problem = problem
        self.budget = budget
        self.n_jobs = n_jobs
        self.evaluations = 0
        self.best_radii: Optional[np.ndarray] = None
        self.best_value = math.inf
        self.trace: List[Tuple[int, float]] = []

    @property
    def remaining(self) -> int:
        return self.budget - self.evaluations

    def _record(self, radii: np.ndarray, value: float):
        if value < self.best_value:
            self.best_value, self.best_radii = value, radii.copy()
            self.trace.append((self.evaluations, value))

    def evaluate(self, radii: np.ndarray) -> float:
        value = self.problem.objective(radii)
        self.evaluations += 1
        self._record(radii, value)
        return value

    def evaluate_batch(self, candidates: List[np.ndarray]) -> List[float]:
        # joblib keeps results in submission order, so the outcome does not depend on n_jobs
        if self.n_jobs == 1 or len(candidates) < 2:
            values = [self.problem.objective(c) for c in candidates]
        else:
            values = Parallel(n_jobs=self.n_jobs)(delayed(self.problem.objective)(c) for c in candidates)
        for candidate, value in zip(candidates, values):
            self.evaluations += 1
            self._record(candidate, value)
        return values


def _anneal(search: _Search, start: np.ndarray, start_value: float, settings, rng) -> int:
    problem = search.problem
    anneal_budget = int(settings.anneal_fraction * search.budget)
    t0 = settings.initial_temperature_fraction * start_value
    temperature = t0
    current, current_value = start.copy(), start_value
    stage_length = settings.proposals_per_stage * problem.k
    stages = 0

    while search.evaluations < anneal_budget and temperature > settings.final_temperature_ratio * t0:
        for _ in range(stage_length):
            if search.evaluations >= anneal_budget:
                break
            i = int(rng.integers(problem.k))
            lo, hi = problem.neighbour_interval(current, i)
            width = hi - lo
            if width <= 0.0:
                continue
            step = width * max(0.25 * math.sqrt(temperature / t0), 1e-3)
            candidate = current.copy()
            candidate[i] = min(max(current[i] + rng.uniform(-step, step), lo), hi)
            value = search.evaluate(candidate)
            delta = value - current_value
            if delta <= 0.0 or (np.isfinite(value) and rng.random() < math.exp(-delta / temperature)):
                current, current_value = candidate, value
        temperature *= settings.cooling_factor
        stages += 1

    logging.info(
        f"Annealing finished for n={problem.n}: {stages} stages, {search.evaluations} evaluations, "
        f"best kappa2={search.best_value:.6g}"
    )
    return stages


def _coordinate_search(search: _Search, settings) -> Tuple[int, bool]:
    problem = search.problem
    step = settings.initial_step
    sweeps = 0
    while step >= settings.tolerance and search.remaining > 0:
        x = search.best_radii
        candidates = []
        for i in range(problem.k):
            for sign in (1.0, -1.0):
                candidate = x.copy()
                candidate[i] += sign * step
                if problem.feasible(candidate):
                    candidates.append(candidate)
        best_before = search.best_value
        search.evaluate_batch(candidates[: search.remaining])
        sweeps += 1
        if not search.best_value < best_before:
            step *= settings.shrink
    converged = step < settings.tolerance
    logging.info(f"Coordinate search finished for n={problem.n}: {sweeps} sweeps, final step {step:.3g}")
    return sweeps, converged


def optimize_radii(
    n: int,
    seed: int = 42,
    budget: int = 2000,
    settings: Optional[OptimizerSettings] = None,
    n_jobs: int = 1,
) -> OptimizationResult:
    """Minimize kappa_2 over the ring radii of the order-n Bos array.

    Args:
        n: Maximal radial order (1..30 is the fitted range of the starting radii).
        seed: Seed of the proposal generator; the result is a pure function of (n, seed, budget).
        budget: Maximum number of objective evaluations, at least 100.
        settings: Annealing and refinement parameters.
        n_jobs: Workers for batched coordinate-search evaluations.

    Returns:
        The best radii found, never worse than the starting radii.
    """
    if n < 1:
        raise DomainError(f"Radii optimization needs n >= 1, got {n}.")
    if budget < MIN_BUDGET:
        raise DomainError(f"Evaluation budget must be at least {MIN_BUDGET}, got {budget}.")
    settings = settings or OptimizerSettings()
    problem = RadiiOptimizationProblem(n, settings.r_max)
    rng = np.random.default_rng(seed)

    search = _Search(problem, budget, n_jobs)
    start = problem.seed_radii()
    seed_value = search.evaluate(start)
    logging.info(f"Optimizing {problem.k} radii for n={n}: starting kappa2={seed_value:.6g}, budget={budget}")

    stages = _anneal(search, start, seed_value, settings.annealing, rng)
    sweeps, converged = _coordinate_search(search, settings.refinement)

    if not converged:
        message = f"Evaluation budget of {budget} exhausted for n={n} before the coordinate search converged."
        logging.warning(message)
        warnings.warn(message, BudgetExhaustedWarning, stacklevel=2)

    return OptimizationResult(
        n=n,
        radii=search.best_radii,
        kappa2=search.best_value,
        iterations=stages + sweeps,
        trace=search.trace,
        seed_radii=start,
        seed_kappa2=seed_value,
        evaluations=search.evaluations,
        converged=converged,
    )


def refit_radii_formula(optimal_radii: Mapping[int, np.ndarray]) -> RadiiFit:
    """Least-squares cubic r = c1 zeta + c2 zeta^2 + c3 zeta^3 (no constant) through optimal radii."""
    if len(optimal_radii) < MIN_REFIT_ORDERS:
        raise DomainError(f"Refitting needs radii for at least {MIN_REFIT_ORDERS} orders, got {len(optimal_radii)}.")
    zeta_parts, radii_parts = [], []
    for n in sorted(optimal_radii):
        radii = np.asarray(optimal_radii[n], dtype=float)
        zeta = chebyshev_zeta(n)
        if radii.size != zeta.size:
            raise DomainError(f"Order {n} needs {zeta.size} radii, got {radii.size}.")
        zeta_parts.append(zeta)
        radii_parts.append(radii)
    zeta = np.concatenate(zeta_parts)
    radii = np.concatenate(radii_parts)
    if np.unique(np.round(zeta, 12)).size < 3:
        raise RankDeficiencyError("At least three distinct zeta values are needed for the cubic fit.")

    features = np.column_stack([zeta, zeta**2, zeta**3])
    model = LinearRegression(fit_intercept=False).fit(features, radii)
    residual_rms = float(np.sqrt(np.mean((model.predict(features) - radii) ** 2)))
    reference_rms = float(np.sqrt(np.mean((radii_from_zeta(zeta, OCS_COEFFICIENTS) - radii) ** 2)))
    coefficients = tuple(float(c) for c in model.coef_)
    logging.info(f"Refitted radii cubic {coefficients} (residual RMS {residual_rms:.3g})")
    return RadiiFit(coefficients, residual_rms, reference_rms, tuple(sorted(optimal_radii)))
