"""
Orthonormal Zernike polynomials on the unit disk.

Indexing follows the ANSI single-index convention j = (n(n+2)+m)/2. Radial
parts are evaluated through shifted Jacobi polynomials,
R_n^m(rho) = rho^m P_s^{(0,m)}(2 rho^2 - 1) with s = (n-m)/2, using the
three-term recurrence so the evaluation stays stable up to radial order 30
and beyond.
"""
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from ocs_cli.core.exceptions import DomainError, InvalidIndexError

BOUNDARY_TOL = 1e-12

ABERRATION_NAMES = {
    (0, 0): "piston",
    (1, -1): "vertical tilt",
    (1, 1): "horizontal tilt",
    (2, -2): "oblique astigmatism",
    (2, 0): "defocus",
    (2, 2): "vertical astigmatism",
    (3, -3): "vertical trefoil",
    (3, -1): "vertical coma",
    (3, 1): "horizontal coma",
    (3, 3): "oblique trefoil",
    (4, -4): "oblique quadrafoil",
    (4, -2): "oblique secondary astigmatism",
    (4, 0): "primary spherical",
    (4, 2): "vertical secondary astigmatism",
    (4, 4): "vertical quadrafoil",
}


@dataclass(frozen=True)
class ZernikeIndex:
    """Double index (n, m) of a Zernike polynomial together with its single index j."""

    n: int
    m: int
    j: int

    @property
    def m_abs(self) -> int:
        return abs(self.m)

    @property
    def gamma(self) -> float:
        """Orthonormalizing factor sqrt((2 - delta_{0,m})(n + 1))."""
        return math.sqrt((1 if self.m == 0 else 2) * (self.n + 1))


@dataclass(frozen=True)
class DiskPoint:
    """A point of the closed unit disk in polar and Cartesian form."""

    rho: float
    theta: float

    def __post_init__(self):
        if not (0.0 <= self.rho <= 1.0 + BOUNDARY_TOL):
            raise DomainError(f"rho={self.rho} is outside the closed unit disk.")
        theta = 0.0 if self.rho == 0.0 else math.fmod(self.theta, 2.0 * math.pi)
        if theta < 0.0:
            theta += 2.0 * math.pi
        if theta >= 2.0 * math.pi:
            theta = 0.0
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_polar(cls, rho: float, theta: float) -> "DiskPoint":
        return cls(float(rho), float(theta))

    @classmethod
    def from_cartesian(cls, x: float, y: float) -> "DiskPoint":
        rho = math.hypot(x, y)
        return cls(rho, math.atan2(y, x) if rho > 0.0 else 0.0)

    @property
    def x(self) -> float:
        return self.rho * math.cos(self.theta)

    @property
    def y(self) -> float:
        return self.rho * math.sin(self.theta)


def _check_nm(n: int, m: int):
    if n < 0 or abs(m) > n or (n - m) % 2 != 0:
        raise InvalidIndexError(f"Invalid Zernike index (n={n}, m={m}): need n >= 0, |m| <= n and n - m even.")


def index_from_nm(n: int, m: int) -> ZernikeIndex:
    """Single index j = (n(n+2)+m)/2 of Z_n^m."""
    n, m = int(n), int(m)
    _check_nm(n, m)
    return ZernikeIndex(n, m, (n * (n + 2) + m) // 2)


def nm_from_index(j: int) -> ZernikeIndex:
    """Inverse of :func:`index_from_nm`."""
    j = int(j)
    if j < 0:
        raise InvalidIndexError(f"Single index must be non-negative, got {j}.")
    # j lies in [n(n+1)/2, n(n+1)/2 + n] for radial order n
    n = (math.isqrt(8 * j + 1) - 1) // 2
    m = 2 * j - n * (n + 2)
    return ZernikeIndex(n, m, j)


def basis_dimension(n: int) -> int:
    """Number N = (n+1)(n+2)/2 of Zernike polynomials of radial order <= n."""
    if n < 0:
        raise DomainError(f"Radial order must be non-negative, got {n}.")
    return (n + 1) * (n + 2) // 2


def zernike_label(idx: ZernikeIndex) -> str:
    return ABERRATION_NAMES.get((idx.n, idx.m), f"Z({idx.n},{idx.m})")


def jacobi_family(s_max: int, alpha: float, beta: float, x: np.ndarray) -> List[np.ndarray]:
    """Jacobi polynomials P_0^{(alpha,beta)}, ..., P_{s_max}^{(alpha,beta)} at ``x``."""
    x = np.asarray(x, dtype=float)
    family = [np.ones_like(x)]
    if s_max >= 1:
        family.append((alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0)
    for s in range(2, s_max + 1):
        c = 2 * s + alpha + beta
        a1 = 2 * s * (c - s) * (c - 2)
        a2 = (c - 1) * (c * (c - 2) * x + (alpha - beta) * (alpha + beta))
        a3 = 2 * (s + alpha - 1) * (s + beta - 1) * c
        family.append((a2 * family[-1] - a3 * family[-2]) / a1)
    return family


def _check_rho(rho: np.ndarray):
    if rho.size and (rho.min() < 0.0 or rho.max() > 1.0 + BOUNDARY_TOL):
        raise DomainError("Radial coordinates must lie in [0, 1].")


def _scalar_or_array(value: np.ndarray, scalar: bool):
    return float(value) if scalar else value


def radial_eval(n: int, m_abs: int, rho):
    """Radial polynomial R_n^{|m|}(rho); accepts a scalar or an array of radii."""
    _check_nm(n, m_abs)
    if m_abs < 0:
        raise InvalidIndexError("m_abs must be non-negative.")
    scalar = np.isscalar(rho)
    rho = np.asarray(rho, dtype=float)
    _check_rho(rho)
    s = (n - m_abs) // 2
    p_s = jacobi_family(s, 0.0, float(m_abs), 2.0 * rho**2 - 1.0)[s]
    return _scalar_or_array(rho**m_abs * p_s, scalar)


def radial_derivative(n: int, m_abs: int, rho):
    """d/drho of R_n^{|m|}, from the Jacobi derivative identity."""
    _check_nm(n, m_abs)
    scalar = np.isscalar(rho)
    rho = np.asarray(rho, dtype=float)
    _check_rho(rho)
    s = (n - m_abs) // 2
    x = 2.0 * rho**2 - 1.0
    value = _radial_derivative_terms(s, m_abs, rho, jacobi_family(s, 0.0, m_abs, x), x)
    return _scalar_or_array(value, scalar)


def _radial_derivative_terms(s, m_abs, rho, p_family, x, q_family=None):
    # d/dx P_s^{(0,m)} = (s+m+1)/2 P_{s-1}^{(1,m+1)}, and dx/drho = 4 rho
    derivative = np.zeros_like(rho)
    if m_abs > 0:
        derivative += m_abs * rho ** (m_abs - 1) * p_family[s]
    if s > 0:
        if q_family is None:
            q_family = jacobi_family(s - 1, 1.0, m_abs + 1.0, x)
        derivative += 2.0 * (s + m_abs + 1) * rho ** (m_abs + 1) * q_family[s - 1]
    return derivative


def _angular(m: int, theta):
    if m >= 0:
        return np.cos(m * theta), -m * np.sin(m * theta)
    return np.sin(-m * theta), -m * np.cos(-m * theta)


def zernike_eval(idx: ZernikeIndex, p: DiskPoint) -> float:
    """Value of the orthonormal Z_n^m at a disk point."""
    radial = radial_eval(idx.n, idx.m_abs, p.rho)
    angular, _ = _angular(idx.m, p.theta)
    return float(idx.gamma * radial * angular)


def zernike_gradient(idx: ZernikeIndex, p: DiskPoint) -> Tuple[float, float]:
    """Cartesian gradient (d/dx, d/dy) of the orthonormal Z_n^m at a disk point."""
    gradient = zernike_basis_gradient(idx.n, np.array([p.rho]), np.array([p.theta]))
    return float(gradient[0, idx.j, 0]), float(gradient[0, idx.j, 1])


def zernike_basis(n: int, rho, theta) -> np.ndarray:
    """Evaluate every Z_j, j < N(n), at the given points.

    Returns an array of shape (points, N) whose column j holds Z_j.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    _check_rho(rho)
    x = 2.0 * rho**2 - 1.0
    out = np.empty((rho.size, basis_dimension(n)))
    for m_abs in range(n + 1):
        s_max = (n - m_abs) // 2
        p_family = jacobi_family(s_max, 0.0, float(m_abs), x)
        rho_m = rho**m_abs
        cos_m, sin_m = np.cos(m_abs * theta), np.sin(m_abs * theta)
        for s in range(s_max + 1):
            radial = rho_m * p_family[s]
            order = m_abs + 2 * s
            if m_abs == 0:
                out[:, index_from_nm(order, 0).j] = math.sqrt(order + 1) * radial
            else:
                gamma = math.sqrt(2 * (order + 1))
                out[:, index_from_nm(order, m_abs).j] = gamma * radial * cos_m
                out[:, index_from_nm(order, -m_abs).j] = gamma * radial * sin_m
    return out


def zernike_basis_gradient(n: int, rho, theta) -> np.ndarray:
    """Cartesian gradients of every Z_j, j < N(n), at the given points.

    Returns an array of shape (points, N, 2) with d/dx in ``[..., 0]`` and d/dy in
    ``[..., 1]``. The chain rule is applied with R/rho written as
    rho^(m-1) P_s, so the origin (where theta is 0 by convention) needs no special case.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    _check_rho(rho)
    x = 2.0 * rho**2 - 1.0
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    out = np.zeros((rho.size, basis_dimension(n), 2))
    for m_abs in range(n + 1):
        s_max = (n - m_abs) // 2
        p_family = jacobi_family(s_max, 0.0, float(m_abs), x)
        q_family = jacobi_family(s_max - 1, 1.0, m_abs + 1.0, x) if s_max > 0 else None
        for s in range(s_max + 1):
            order = m_abs + 2 * s
            d_radial = _radial_derivative_terms(s, m_abs, rho, p_family, x, q_family)
            radial_over_rho = rho ** (m_abs - 1) * p_family[s] if m_abs > 0 else None
            for m in ((0,) if m_abs == 0 else (m_abs, -m_abs)):
                idx = index_from_nm(order, m)
                angular, d_angular = _angular(m, theta)
                dx = d_radial * angular * cos_t
                dy = d_radial * angular * sin_t
                if radial_over_rho is not None:
                    dx = dx - radial_over_rho * d_angular * sin_t
                    dy = dy + radial_over_rho * d_angular * cos_t
                out[:, idx.j, 0] = idx.gamma * dx
                out[:, idx.j, 1] = idx.gamma * dy
    return out


def disk_quadrature(order: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tensor quadrature on the disk for the normalized area measure dA/pi.

    Gauss-Legendre in rho (``order`` nodes, weight rho) times ``2*order``
    equispaced angles; exact for polynomials of total degree <= 2*order - 1.
    Returns (rho, theta, weights) with weights summing to one.
    """
    if order < 1:
        raise DomainError(f"Quadrature order must be positive, got {order}.")
    t, w = np.polynomial.legendre.leggauss(order)
    radii = (t + 1.0) / 2.0
    # dA/pi = 2 rho drho (dtheta / 2pi)
    radial_weights = w * radii
    angles = 2.0 * np.pi * np.arange(2 * order) / (2 * order)
    rho, theta = np.meshgrid(radii, angles, indexing="ij")
    weights = np.outer(radial_weights, np.full(angles.size, 1.0 / angles.size))
    return rho.ravel(), theta.ravel(), weights.ravel()


def fourier_coefficients(func: Callable[[np.ndarray, np.ndarray], np.ndarray], n: int, order: Optional[int] = None) -> np.ndarray:
    """Zernike coefficients c_j = <f, Z_j> of ``func(x, y)`` by disk quadrature.

    Exact for polynomial ``func`` of total degree <= n when ``order`` >= n + 1.
    """
    order = order or n + 1
    rho, theta, weights = disk_quadrature(order)
    values = np.asarray(func(rho * np.cos(theta), rho * np.sin(theta)), dtype=float)
    return zernike_basis(n, rho, theta).T @ (weights * values)
