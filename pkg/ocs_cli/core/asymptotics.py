"""
Radial node distributions and the logarithmic-energy functional

    L(G) = int_0^1 x^2 log G(x) dx + 2 int_0^1 int_x^1 x log(G(y) - G(x)) dy dx,

whose value -2/3 characterizes asymptotically optimal radial distributions.
The inner integral is taken in t with y = x + t^2, which turns the log
singularity at y = x into a bounded t log t integrand, and G(y) - G(x) is
evaluated from factorized forms so no cancellation occurs near the diagonal.
"""
import math
import logging
from dataclasses import dataclass
from typing import Dict

from scipy import integrate

from ocs_cli.core.exceptions import ConvergenceError, DomainError
from ocs_cli.core.patterns import OCS_COEFFICIENTS

VARIANTS = ("fitted", "g1", "g2")
OPTIMAL_L = -2.0 / 3.0
ACCURACY_TARGET = 1e-5
HALF_PI = math.pi / 2.0


def _normalize_variant(variant: str) -> str:
    key = str(variant).lower()
    if key not in VARIANTS:
        raise DomainError(f"Unknown variant '{variant}'. Choose from {', '.join(VARIANTS)}.")
    return key


@dataclass(frozen=True)
class RadialDistribution:
    """G(x) for one of the variants; ``fitted`` is p(sin(pi x / 2)) with p the squared radii cubic."""

    variant: str = "fitted"

    def __post_init__(self):
        object.__setattr__(self, "variant", _normalize_variant(self.variant))

    @staticmethod
    def q(s: float) -> float:
        c1, c2, c3 = OCS_COEFFICIENTS
        return s * (c1 + s * (c2 + s * c3))

    def p(self, s: float) -> float:
        return self.q(s) ** 2

    def G(self, x: float) -> float:
        if self.variant == "fitted":
            return self.p(math.sin(HALF_PI * x))
        if self.variant == "g1":
            return math.sin(HALF_PI * x) ** 2
        return 1.0 - (x * x - 1.0) ** 2

    def log_G(self, x: float) -> float:
        s = math.sin(HALF_PI * x)
        if self.variant == "fitted":
            return 2.0 * math.log(self.q(s))
        if self.variant == "g1":
            return 2.0 * math.log(s)
        return 2.0 * math.log(x) + math.log(2.0 - x * x)

    def difference(self, x: float, gap: float) -> float:
        """G(x + gap) - G(x) for gap > 0, with 1 - x and 1 - y kept separate near the corner."""
        y = x + gap
        u, v = 1.0 - x, 1.0 - y
        if self.variant == "g1":
            # sin^2 b - sin^2 a = sin(b - a) sin(b + a), and sin(pi (x+y)/2) = sin(pi (u+v)/2)
            return math.sin(HALF_PI * gap) * math.sin(HALF_PI * (u + v))
        if self.variant == "g2":
            return gap * (x + y) * (u * (1.0 + x) + v * (1.0 + y))
        c1, c2, c3 = OCS_COEFFICIENTS
        a, b = math.sin(HALF_PI * x), math.sin(HALF_PI * y)
        # sin b - sin a = 2 cos((x+y) pi/4) sin((y-x) pi/4), cos((x+y) pi/4) = sin((u+v) pi/4)
        d_s = 2.0 * math.sin(math.pi * (u + v) / 4.0) * math.sin(math.pi * gap / 4.0)
        d_q = d_s * (c1 + c2 * (a + b) + c3 * (a * a + a * b + b * b))
        return d_q * (self.q(a) + self.q(b))


def eval_G(x: float, variant: str = "fitted") -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"G is defined on [0, 1], got x={x}.")
    return RadialDistribution(variant).G(x)


def L_functional(variant: str = "fitted", epsabs: float = 1e-10, epsrel: float = 1e-10) -> float:
    """Evaluate L(G) by adaptive quadrature; raises ConvergenceError above an error estimate of 1e-5."""
    dist = RadialDistribution(variant)

    def single(x):
        return x * x * dist.log_G(x) if x > 0.0 else 0.0

    def inner(t, x):
        if t <= 0.0 or x <= 0.0:
            return 0.0
        return 2.0 * x * math.log(dist.difference(x, t * t)) * 2.0 * t

    first, first_error = integrate.quad(single, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel, limit=200)
    second, second_error = integrate.dblquad(
        inner, 0.0, 1.0, lambda x: 0.0, lambda x: math.sqrt(1.0 - x), epsabs=epsabs, epsrel=epsrel
    )
    error = first_error + second_error
    if not error <= ACCURACY_TARGET:
        raise ConvergenceError(f"L({dist.variant}) quadrature error estimate {error:.2e} exceeds {ACCURACY_TARGET:.0e}.")
    value = first + second
    logging.info(f"L({dist.variant}) = {value:.8f} (error estimate {error:.1e})")
    return value


def asymptotics_report(variant: str = "fitted") -> Dict:
    variant = _normalize_variant(variant)
    value = L_functional(variant)
    return {"variant": variant, "L": value, "target_minus_two_thirds_gap": value - OPTIMAL_L}
