"""Model parameters (b, alpha, r, u, a) and their validity constraints."""

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class Params:
    """Parameter tuple of the radial two-dimensional ensemble.

    b      : potential exponent, > 0
    alpha  : pointwise root-type charge at the origin, > -1
    r      : radius of the circular singularity, strictly inside the
             droplet: 0 < r < b**(-1/(2b))
    u      : jump strength (weight is multiplied by e^u inside radius r)
    a      : root-type exponent along |z| = r, a nonnegative integer
    """

    b: float
    alpha: float
    r: float
    u: float
    a: int

    def __post_init__(self):
        if not (self.b > 0 and math.isfinite(self.b)):
            raise DomainError("b must be positive and finite", constraint="b")
        if not (self.alpha > -1 and math.isfinite(self.alpha)):
            raise DomainError("alpha must be > -1", constraint="alpha")
        edge = self.b ** (-1.0 / (2.0 * self.b))
        if not (0.0 < self.r < edge):
            raise DomainError(
                f"r must lie strictly inside (0, {edge!r})", constraint="r"
            )
        if not math.isfinite(self.u):
            raise DomainError("u must be finite", constraint="u")
        if not (isinstance(self.a, int) and self.a >= 0):
            raise DomainError("a must be a nonnegative integer", constraint="a")

    @property
    def edge_radius(self):
        """Right edge b**(-1/(2b)) of the support of the radial law."""
        return self.b ** (-1.0 / (2.0 * self.b))

    @property
    def bulk_mass(self):
        """Mass b*r^(2b) of the radial law on [0, r]."""
        return self.b * self.r ** (2.0 * self.b)
