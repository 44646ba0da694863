"""
Lagrange fundamental polynomials and Lebesgue-constant estimates on the disk.

The fundamental polynomials are assembled by linear solves against the
elevation collocation matrix: with C = A^{-1}, column i of C holds the
Zernike coefficients of l_i, so l_i(P_k) = delta_ik. The Lebesgue constant is
the maximum of sum_i |l_i| over a dense disk mesh, optionally refined around
the discrete maximizer.
"""
import math
import logging
from dataclasses import dataclass
from typing import Dict, Literal, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from ocs_cli.core.collocation import build_elevation_matrix, interpolate
from ocs_cli.core.exceptions import DomainError
from ocs_cli.core.patterns import NodeSet
from ocs_cli.core.zernike import DiskPoint, basis_dimension, zernike_basis

CHUNK_SIZE = 4096
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class LagrangeBasis:
    coefficients: np.ndarray
    nodes: NodeSet
    n: int

    def evaluate(self, rho, theta) -> np.ndarray:
        """Values l_i at the given points, shape (points, N)."""
        return zernike_basis(self.n, rho, theta) @ self.coefficients

    def lebesgue_values(self, rho, theta) -> np.ndarray:
        return np.abs(self.evaluate(rho, theta)).sum(axis=1)


@dataclass(frozen=True)
class LebesgueReport:
    n: int
    N: int
    lambda_: float
    argmax_point: DiskPoint
    mesh_size: int

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "N": self.N,
            "lambda": self.lambda_,
            "argmax_rho": self.argmax_point.rho,
            "argmax_theta": self.argmax_point.theta,
            "argmax_x": self.argmax_point.x,
            "argmax_y": self.argmax_point.y,
            "mesh_size": self.mesh_size,
        }


@dataclass(frozen=True)
class MeshSpec:
    """Evaluation mesh for the Lebesgue function.

    ``density`` is the constant c in ceil(c * n) mesh lines; ``polar`` uses
    radii sin(pi i / 2m) clustered at the boundary with uniform angles, and
    ``cartesian`` a square grid clipped to the disk. Both add the boundary
    circle. Doubling an integer density gives a superset of the mesh.
    """

    kind: Literal["polar", "cartesian"] = "polar"
    density: float = 8.0
    refine: bool = True
    refine_factor: int = 10
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in ("polar", "cartesian"):
            raise DomainError(f"Unknown mesh kind '{self.kind}'.")
        if self.density < 4.0:
            raise DomainError(f"Mesh density must be >= 4 (got {self.density}).")
        if self.refine_factor < 2:
            raise DomainError("Refinement factor must be at least 2.")

    def lines(self, n: int) -> int:
        return int(math.ceil(self.density * max(n, 1)))

    def points(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """Mesh points (rho, theta) for maximal order n."""
        m = self.lines(n)
        boundary_theta = TWO_PI * np.arange(4 * m) / (4 * m)
        if self.kind == "polar":
            radii = np.sin(np.pi * np.arange(1, m + 1) / (2 * m))
            angles = TWO_PI * np.arange(m) / m
            rho, theta = np.meshgrid(radii, angles, indexing="ij")
            rho = np.concatenate([[0.0], rho.ravel(), np.ones_like(boundary_theta)])
            theta = np.concatenate([[0.0], theta.ravel(), boundary_theta])
        else:
            axis = np.linspace(-1.0, 1.0, m + 1)
            x, y = np.meshgrid(axis, axis, indexing="ij")
            x, y = x.ravel(), y.ravel()
            inside = x**2 + y**2 <= 1.0
            rho = np.concatenate([np.hypot(x[inside], y[inside]), np.ones_like(boundary_theta)])
            theta = np.concatenate([np.arctan2(y[inside], x[inside]), boundary_theta])
        return np.minimum(rho, 1.0), np.mod(theta + self.offset, TWO_PI)

    def spacing(self, n: int, rho: float) -> Tuple[float, float]:
        """Local (radial, angular) mesh spacing around radius ``rho``."""
        m = self.lines(n)
        if self.kind == "polar":
            # d/dt sin(pi t / 2m) = (pi / 2m) sqrt(1 - rho^2), floored by the last radial gap
            d_rho = max(math.pi / (2 * m) * math.sqrt(max(1.0 - rho**2, 0.0)), 1.0 - math.cos(math.pi / (2 * m)))
            return d_rho, TWO_PI / m
        h = 2.0 / m
        return h, min(TWO_PI / m, h / max(rho, h))


def lagrange_basis(nodes: NodeSet, n: int) -> LagrangeBasis:
    """Fundamental polynomials of interpolation at ``nodes`` in the Zernike basis of order n."""
    A = build_elevation_matrix(nodes, n)
    coefficients = interpolate(A, np.eye(A.rows))
    return LagrangeBasis(coefficients, nodes, n)


def lebesgue_function(basis: LagrangeBasis, p: DiskPoint) -> float:
    """sum_i |l_i(p)|."""
    return float(basis.lebesgue_values(np.array([p.rho]), np.array([p.theta]))[0])


def _chunked_values(basis: LagrangeBasis, rho: np.ndarray, theta: np.ndarray, n_jobs: int) -> np.ndarray:
    starts = range(0, rho.size, CHUNK_SIZE)
    if n_jobs == 1:
        chunks = [basis.lebesgue_values(rho[s : s + CHUNK_SIZE], theta[s : s + CHUNK_SIZE]) for s in starts]
    else:
        chunks = Parallel(n_jobs=n_jobs)(
            delayed(basis.lebesgue_values)(rho[s : s + CHUNK_SIZE], theta[s : s + CHUNK_SIZE]) for s in starts
        )
    return np.concatenate(chunks) if chunks else np.empty(0)


def _local_grid(mesh: MeshSpec, n: int, rho0: float, theta0: float) -> Tuple[np.ndarray, np.ndarray]:
    d_rho, d_theta = mesh.spacing(n, rho0)
    steps = np.arange(-mesh.refine_factor, mesh.refine_factor + 1) / mesh.refine_factor
    rho = np.clip(rho0 + d_rho * steps, 0.0, 1.0)
    theta = theta0 + d_theta * steps
    rho, theta = np.meshgrid(np.unique(rho), theta, indexing="ij")
    return rho.ravel(), np.mod(theta.ravel(), TWO_PI)


def lebesgue_constant(nodes: NodeSet, n: int, mesh: MeshSpec = MeshSpec(), n_jobs: int = 1) -> LebesgueReport:
    """Estimate Lambda = max over the disk of the Lebesgue function of ``nodes``."""
    basis = lagrange_basis(nodes, n)
    rho, theta = mesh.points(n)
    values = _chunked_values(basis, rho, theta, n_jobs)
    best = int(np.argmax(values))
    lam, rho_best, theta_best = float(values[best]), float(rho[best]), float(theta[best])
    mesh_size = int(rho.size)

    if mesh.refine:
        local_rho, local_theta = _local_grid(mesh, n, rho_best, theta_best)
        local_values = _chunked_values(basis, local_rho, local_theta, 1)
        local_best = int(np.argmax(local_values))
        mesh_size += int(local_rho.size)
        if local_values[local_best] > lam:
            lam = float(local_values[local_best])
            rho_best, theta_best = float(local_rho[local_best]), float(local_theta[local_best])

    logging.info(f"Lebesgue constant n={n} ({nodes.source}): {lam:.6g} over {mesh_size} mesh points")
    return LebesgueReport(n, basis_dimension(n), lam, DiskPoint.from_polar(rho_best, theta_best), mesh_size)


def lebesgue_mesh_values(basis: LagrangeBasis, mesh: MeshSpec = MeshSpec()) -> pd.DataFrame:
    """Lebesgue function over the (unrefined) mesh as columns x, y, lebesgue."""
    rho, theta = mesh.points(basis.n)
    values = _chunked_values(basis, rho, theta, 1)
    return pd.DataFrame({"x": rho * np.cos(theta), "y": rho * np.sin(theta), "lebesgue": values})
