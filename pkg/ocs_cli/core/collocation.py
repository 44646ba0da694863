"""
Collocation matrices of the orthonormal Zernike basis and the solvers built on them.

Elevation mode samples function values (square N x N system, solved by
pivoted LU). Slope mode samples Cartesian gradients at N - 1 nodes and drops
the piston column, giving a 2(N-1) x (N-1) least-squares system solved by
column-pivoted QR. Condition numbers come from the full singular spectrum.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Optional

import numpy as np
import pandas as pd
from scipy import linalg

from ocs_cli.core.exceptions import DomainError, RankDeficiencyError, SingularMatrixError, SizeMismatchError
from ocs_cli.core.patterns import NodeSet, ocs_pattern, realize_nodes, rotate_ring
from ocs_cli.core.zernike import basis_dimension, zernike_basis, zernike_basis_gradient

MODES = ("elevation", "slope")
KAPPA_INF_MAX_DIM = 496
EPS = np.finfo(float).eps


@dataclass(eq=False)
class CollocationMatrix:
    entries: np.ndarray
    mode: str
    max_order: int
    node_provenance: str = "custom"

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"Unknown collocation mode '{self.mode}'.")
        self.entries = np.asarray(self.entries, dtype=float)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @cached_property
    def singular_values(self) -> np.ndarray:
        """Singular values in descending order."""
        return linalg.svdvals(self.entries)

    @property
    def first_index(self) -> int:
        """Single index of the first column (1 in slope mode, where piston is dropped)."""
        return 1 if self.mode == "slope" else 0

    def to_frame(self) -> pd.DataFrame:
        columns = [f"Z{j}" for j in range(self.first_index, self.first_index + self.cols)]
        return pd.DataFrame(self.entries, columns=columns)


@dataclass(frozen=True)
class ConditionReport:
    n: int
    mode: str
    kappa2: float
    kappa_inf: Optional[float]
    sigma_min: float
    sigma_max: float
    pattern: str = "custom"

    @property
    def singular(self) -> bool:
        return not np.isfinite(self.kappa2)

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "kappa2": self.kappa2,
            "kappa_inf": self.kappa_inf,
            "sigma_min": self.sigma_min,
            "sigma_max": self.sigma_max,
            "pattern": self.pattern,
        }


def build_elevation_matrix(nodes: NodeSet, n: int) -> CollocationMatrix:
    """A[i, j] = Z_j(P_i) for j < N(n); rows follow node order."""
    size = basis_dimension(n)
    if len(nodes) != size:
        raise SizeMismatchError(f"Elevation mode at n={n} needs {size} nodes, got {len(nodes)}.")
    entries = zernike_basis(n, nodes.rho, nodes.theta)
    logging.debug(f"Elevation matrix built: n={n}, shape={entries.shape}, nodes={nodes.source}")
    return CollocationMatrix(entries, "elevation", n, nodes.source)


def build_slope_matrix(nodes: NodeSet, n: int) -> CollocationMatrix:
    """Gradient collocation matrix with rows (d/dx, d/dy) per node and no piston column."""
    if n < 1:
        raise DomainError(f"Slope mode needs n >= 1, got {n}.")
    size = basis_dimension(n) - 1
    if len(nodes) != size:
        raise SizeMismatchError(f"Slope mode at n={n} needs {size} nodes, got {len(nodes)}.")
    gradient = zernike_basis_gradient(n, nodes.rho, nodes.theta)[:, 1:, :]
    # (nodes, cols, 2) -> rows 2i (d/dx) and 2i + 1 (d/dy)
    entries = gradient.transpose(0, 2, 1).reshape(2 * len(nodes), size)
    logging.debug(f"Slope matrix built: n={n}, shape={entries.shape}, nodes={nodes.source}")
    return CollocationMatrix(entries, "slope", n, nodes.source)


def condition_numbers(A: CollocationMatrix, kappa_inf_max_dim: int = KAPPA_INF_MAX_DIM) -> ConditionReport:
    """kappa_2 from the singular values; kappa_inf only for square matrices up to ``kappa_inf_max_dim``."""
    if A.entries.size == 0:
        raise DomainError("Cannot compute condition numbers of an empty matrix.")
    sigma = A.singular_values
    sigma_max, sigma_min = float(sigma[0]), float(sigma[-1])
    kappa2 = sigma_max / sigma_min if sigma_min > 0.0 else float("inf")
    if not np.isfinite(kappa2):
        logging.warning(f"Collocation matrix is singular (n={A.max_order}, mode={A.mode}, nodes={A.node_provenance}).")

    kappa_inf = None
    if A.is_square and A.rows <= kappa_inf_max_dim:
        kappa_inf = float("inf")
        if np.isfinite(kappa2):
            try:
                inverse = linalg.inv(A.entries)
                kappa_inf = float(linalg.norm(A.entries, np.inf) * linalg.norm(inverse, np.inf))
            except linalg.LinAlgError:
                pass
    return ConditionReport(A.max_order, A.mode, kappa2, kappa_inf, sigma_min, sigma_max, A.node_provenance)


def _check_nonsingular(A: CollocationMatrix):
    sigma = A.singular_values
    if sigma[-1] <= max(A.entries.shape) * EPS * sigma[0]:
        raise SingularMatrixError(
            f"Collocation matrix is numerically singular (sigma_min={sigma[-1]:.3e}, n={A.max_order}); "
            "the node set is not unisolvent."
        )


def interpolate(A: CollocationMatrix, samples) -> np.ndarray:
    """Zernike coefficients c (ordered by j) with A c = samples.

    ``samples`` may be a vector or a matrix with one right-hand side per column.
    """
    if A.mode != "elevation" or not A.is_square:
        raise DomainError("Interpolation needs a square elevation-mode matrix.")
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] != A.rows:
        raise SizeMismatchError(f"Expected {A.rows} samples, got {samples.shape[0]}.")
    _check_nonsingular(A)
    return linalg.lu_solve(linalg.lu_factor(A.entries), samples)


def fit_slopes(A: CollocationMatrix, slope_samples, rcond: Optional[float] = None) -> np.ndarray:
    """Least-squares non-piston coefficients (j = 1..N-1) from interleaved (d/dx, d/dy) samples."""
    if A.mode != "slope":
        raise DomainError("Slope fitting needs a slope-mode matrix.")
    slope_samples = np.asarray(slope_samples, dtype=float)
    if slope_samples.shape[0] != A.rows:
        raise SizeMismatchError(f"Expected {A.rows} slope samples, got {slope_samples.shape[0]}.")

    q, r, perm = linalg.qr(A.entries, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r))
    rcond = max(A.entries.shape) * EPS if rcond is None else rcond
    rank = int(np.sum(diagonal > rcond * diagonal[0])) if diagonal.size and diagonal[0] > 0 else 0
    if rank < A.cols:
        raise RankDeficiencyError(f"Slope matrix has numerical rank {rank} < {A.cols} columns (n={A.max_order}).")

    solution = linalg.solve_triangular(r, q.T @ slope_samples)
    coefficients = np.empty_like(solution)
    coefficients[perm] = solution
    return coefficients


def gram_rotation_invariance_check(n: int, alphas: Iterable[float]) -> float:
    """Max relative kappa_2 deviation when the outermost OCS ring is rotated by each alpha."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}.")
    pattern = ocs_pattern(n)
    reference = condition_numbers(build_elevation_matrix(realize_nodes(pattern), n)).kappa2
    deviation = 0.0
    for alpha in alphas:
        rotated = realize_nodes(rotate_ring(pattern, 0, alpha))
        kappa2 = condition_numbers(build_elevation_matrix(rotated, n)).kappa2
        deviation = max(deviation, abs(kappa2 - reference) / reference)
    logging.info(f"Outermost-ring rotation at n={n}: max relative kappa2 deviation {deviation:.3e}")
    return deviation
