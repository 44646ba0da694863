"""
Sampling node sets on the unit disk.

A ring pattern (Bos array) is a list of concentric rings, outermost first,
each carrying equally spaced nodes. For maximal radial order n there are
k = floor(n/2) + 1 rings and ring i (1-based) holds 2n + 5 - 4i nodes, so the
total is the basis dimension N(n). Patterns are realized into flat NodeSets
that the collocation, Lebesgue and experiment modules consume.
"""
import math
import logging
import warnings
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ocs_cli.core.exceptions import DomainError, ExtrapolationWarning, RingIndexError
from ocs_cli.core.zernike import BOUNDARY_TOL, DiskPoint, basis_dimension

# Cubic fit of the optimal radii in the Chebyshev variable zeta
OCS_COEFFICIENTS: Tuple[float, float, float] = (1.1565, -0.76535, 0.60517)
OCS_VALIDATED_MAX_ORDER = 30
CARNICER_DEFAULT_EXPONENT = 1.46
PATTERN_NAMES = ("ocs", "spiral", "carnicer")
NODE_SOURCES = ("ocs", "spiral", "carnicer", "custom", "perturbed")
GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0
TWO_PI = 2.0 * math.pi


def ring_count(n: int) -> int:
    return n // 2 + 1


def ring_sizes(n: int) -> List[int]:
    """Node counts 2n + 5 - 4i of rings i = 1..k, outermost first."""
    return [2 * n + 5 - 4 * i for i in range(1, ring_count(n) + 1)]


def chebyshev_zeta(n: int) -> np.ndarray:
    """zeta_j = cos((2j - 1) pi / (2(n + 1))) for j = 1..k; the last one is exactly 0 for even n."""
    j = np.arange(1, ring_count(n) + 1)
    zeta = np.cos((2 * j - 1) * np.pi / (2 * (n + 1)))
    if n % 2 == 0:
        zeta[-1] = 0.0
    return zeta


def radii_from_zeta(zeta, coefficients: Sequence[float] = OCS_COEFFICIENTS) -> np.ndarray:
    c1, c2, c3 = coefficients
    zeta = np.asarray(zeta, dtype=float)
    return zeta * (c1 + zeta * (c2 + zeta * c3))


@dataclass(frozen=True)
class Ring:
    radius: float
    count: int
    phase: float = 0.0


@dataclass(frozen=True)
class RingPattern:
    """Concentric rings of equally spaced nodes, ordered from the outermost ring inwards."""

    max_order: int
    rings: Tuple[Ring, ...]
    source: str = "ocs"

    def __post_init__(self):
        object.__setattr__(self, "rings", tuple(self.rings))
        counts = [ring.count for ring in self.rings]
        if counts != ring_sizes(self.max_order):
            raise DomainError(f"Ring counts {counts} do not match the Bos-array rule for n={self.max_order}.")
        radii = self.radii
        if np.any(radii < 0.0) or np.any(radii > 1.0 + BOUNDARY_TOL):
            raise DomainError("Ring radii must lie in [0, 1].")
        if np.any(np.diff(radii) >= 0.0):
            raise DomainError(f"Ring radii must be strictly decreasing, got {radii.tolist()}.")

    @property
    def radii(self) -> np.ndarray:
        return np.array([ring.radius for ring in self.rings], dtype=float)

    @property
    def counts(self) -> List[int]:
        return [ring.count for ring in self.rings]

    @property
    def size(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True, eq=False)
class NodeSet:
    """Flat, ordered node list in polar form.

    ``rings`` labels each node with the 0-based ring it came from (-1 for
    patterns that are not ring based).
    """

    rho: np.ndarray
    theta: np.ndarray
    source: str = "custom"
    rings: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        rho = np.atleast_1d(np.asarray(self.rho, dtype=float))
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        if rho.shape != theta.shape:
            raise DomainError("rho and theta must have the same length.")
        if rho.size and (rho.min() < 0.0 or rho.max() > 1.0 + BOUNDARY_TOL):
            raise DomainError("Nodes must lie in the closed unit disk.")
        if self.source not in NODE_SOURCES:
            raise DomainError(f"Unknown node source '{self.source}'.")
        theta = np.mod(theta, TWO_PI)
        theta[(rho == 0.0) | (theta >= TWO_PI)] = 0.0
        rings = np.full(rho.size, -1, dtype=int) if self.rings is None else np.asarray(self.rings, dtype=int)
        if rings.shape != rho.shape:
            raise DomainError("Ring labels must match the number of nodes.")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "rings", rings)

    @classmethod
    def from_cartesian(cls, x, y, source: str = "custom", rings=None) -> "NodeSet":
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        rho = np.hypot(x, y)
        return cls(np.minimum(rho, 1.0), np.arctan2(y, x), source, rings)

    def __len__(self) -> int:
        return int(self.rho.size)

    @property
    def x(self) -> np.ndarray:
        return self.rho * np.cos(self.theta)

    @property
    def y(self) -> np.ndarray:
        return self.rho * np.sin(self.theta)

    @property
    def points(self) -> List[DiskPoint]:
        return [DiskPoint.from_polar(r, t) for r, t in zip(self.rho, self.theta)]

    def subset(self, keep) -> "NodeSet":
        return NodeSet(self.rho[keep], self.theta[keep], self.source, self.rings[keep])


def ocs_radii(n: int) -> np.ndarray:
    """Fitted OCS ring radii r_1 > ... > r_k for maximal radial order n."""
    if n < 1:
        raise DomainError(f"OCS radii need n >= 1, got {n}.")
    if n > OCS_VALIDATED_MAX_ORDER:
        message = f"OCS radii formula was fitted for n <= {OCS_VALIDATED_MAX_ORDER}; extrapolating to n={n}."
        logging.warning(message)
        warnings.warn(message, ExtrapolationWarning, stacklevel=2)
    return radii_from_zeta(chebyshev_zeta(n))


def pattern_with_radii(n: int, radii, phases: Optional[Sequence[float]] = None, source: str = "ocs") -> RingPattern:
    """Bos-array pattern for order n with the given ring radii (outermost first)."""
    if n < 0:
        raise DomainError(f"Radial order must be non-negative, got {n}.")
    radii = np.asarray(radii, dtype=float)
    counts = ring_sizes(n)
    if radii.size != len(counts):
        raise DomainError(f"Order {n} needs {len(counts)} radii, got {radii.size}.")
    phases = [0.0] * len(counts) if phases is None else list(phases)
    rings = tuple(Ring(float(r), c, float(p)) for r, c, p in zip(radii, counts, phases))
    return RingPattern(n, rings, source)


def ocs_pattern(n: int) -> RingPattern:
    return pattern_with_radii(n, ocs_radii(n), source="ocs")


def carnicer_pattern(n: int, a: float = CARNICER_DEFAULT_EXPONENT) -> RingPattern:
    """Power-law radii r_j = 1 - (2(j-1)/n)^a on the Bos-array ring layout."""
    if not 1.0 < a < 2.0:
        raise DomainError(f"Carnicer exponent must lie in (1, 2), got {a}.")
    if n < 1:
        raise DomainError(f"Radial order must be >= 1, got {n}.")
    j = np.arange(1, ring_count(n) + 1)
    radii = 1.0 - (2.0 * (j - 1) / n) ** a
    return pattern_with_radii(n, radii, source="carnicer")


def realize_nodes(p: RingPattern) -> NodeSet:
    """Place count equally spaced nodes on every ring, outermost ring first, angles ascending."""
    rho, theta, labels = [], [], []
    for index, ring in enumerate(p.rings):
        angles = ring.phase + TWO_PI * np.arange(ring.count) / ring.count
        rho.append(np.full(ring.count, ring.radius))
        theta.append(angles)
        labels.append(np.full(ring.count, index))
    return NodeSet(np.concatenate(rho), np.concatenate(theta), p.source, np.concatenate(labels))


def spiral_pattern(n: int) -> NodeSet:
    """Vogel (Fermat) spiral with N(n) points; stand-in baseline for the spiral comparison."""
    if n < 1:
        raise DomainError(f"Radial order must be >= 1, got {n}.")
    total = basis_dimension(n)
    t = np.arange(1, total + 1)
    return NodeSet(np.sqrt(t / total), t * TWO_PI * (1.0 - 1.0 / GOLDEN_RATIO), "spiral")


def rotate_ring(p: RingPattern, ring_index: int, alpha: float) -> RingPattern:
    """Copy of ``p`` with the phase of ring ``ring_index`` (0 = outermost) set to ``alpha``."""
    if not 0 <= ring_index < len(p.rings):
        raise RingIndexError(f"Ring index {ring_index} out of range for a pattern with {len(p.rings)} rings.")
    ring = p.rings[ring_index]
    if not 0.0 <= alpha < TWO_PI / ring.count:
        raise DomainError(f"Rotation angle {alpha} outside [0, 2*pi/{ring.count}).")
    rings = list(p.rings)
    rings[ring_index] = replace(ring, phase=float(alpha))
    return replace(p, rings=tuple(rings))


def rotate_nodes(nodes: NodeSet, beta: float) -> NodeSet:
    return NodeSet(nodes.rho, nodes.theta + beta, nodes.source, nodes.rings)


def perturb(nodes: NodeSet, mode: str, magnitude: float, seed) -> NodeSet:
    """Randomly perturb a node set.

    ``radii`` scales every ring radius by (1 + u * magnitude) with one
    u ~ U[-1, 1] per ring (nodes without a ring label are scaled individually);
    ``points`` moves each node by a vector drawn uniformly from the disk of
    radius ``magnitude``. Results are clipped to the closed unit disk.
    """
    if magnitude < 0:
        raise DomainError(f"Perturbation magnitude must be non-negative, got {magnitude}.")
    if mode not in ("radii", "points"):
        raise DomainError(f"Unknown perturbation mode '{mode}' (use 'radii' or 'points').")
    if magnitude == 0:
        return nodes

    rng = np.random.default_rng(seed)
    if mode == "radii":
        labels = nodes.rings.copy()
        unlabeled = labels < 0
        labels[unlabeled] = labels.max(initial=-1) + 1 + np.arange(unlabeled.sum())
        unique, inverse = np.unique(labels, return_inverse=True)
        factors = 1.0 + rng.uniform(-1.0, 1.0, size=unique.size) * magnitude
        rho = np.clip(nodes.rho * factors[inverse], 0.0, 1.0)
        return NodeSet(rho, nodes.theta, "perturbed", nodes.rings)

    length = magnitude * np.sqrt(rng.uniform(0.0, 1.0, size=len(nodes)))
    direction = rng.uniform(0.0, TWO_PI, size=len(nodes))
    return NodeSet.from_cartesian(
        nodes.x + length * np.cos(direction),
        nodes.y + length * np.sin(direction),
        "perturbed",
        nodes.rings,
    )


def drop_innermost(nodes: NodeSet) -> NodeSet:
    """Remove the node closest to the center (the last one on ties)."""
    if len(nodes) == 0:
        raise DomainError("Cannot drop a node from an empty node set.")
    candidates = np.flatnonzero(nodes.rho == nodes.rho.min())
    keep = np.ones(len(nodes), dtype=bool)
    keep[candidates[-1]] = False
    return nodes.subset(keep)


def pattern_rings(name: str, n: int, exponent: float = CARNICER_DEFAULT_EXPONENT) -> RingPattern:
    """Ring layout of a ring-based pattern (ocs or carnicer)."""
    if name == "ocs":
        return ocs_pattern(n)
    if name == "carnicer":
        return carnicer_pattern(n, exponent)
    if name == "spiral":
        raise DomainError("The spiral pattern has no rings.")
    raise DomainError(f"Unknown pattern '{name}'. Choose from {', '.join(PATTERN_NAMES)}.")


def pattern_nodes(name: str, n: int, exponent: float = CARNICER_DEFAULT_EXPONENT) -> NodeSet:
    """Realized node set of a named pattern (ocs, spiral or carnicer)."""
    if name == "spiral":
        return spiral_pattern(n)
    return realize_nodes(pattern_rings(name, n, exponent))


def nodes_to_frame(nodes: NodeSet) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "index": np.arange(len(nodes)),
            "rho": nodes.rho,
            "theta": nodes.theta,
            "x": nodes.x,
            "y": nodes.y,
        }
    )


def pattern_to_frame(p: RingPattern) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "ring": np.arange(1, len(p.rings) + 1),
            "radius": p.radii,
            "count": p.counts,
            "phase": [ring.phase for ring in p.rings],
        }
    )
