"""Borel measures with certified growth nu(B(x,r)) <= Q r^{sigma n}.

A measure is either Lebesgue, a radial density w(|x|) dx, the hyperbolic
volume (geodesic polar weight sinh^{n-1}), or arc length on a line through
the origin (n = 2).  Only the radial weight enters quadrature; growth
certificates (Q, sigma) ride along for the trace inequalities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .constants import sphere_area
from .errors import DomainError, GrowthViolated, NegativeDensity


@dataclass(frozen=True)
class MeasureDensity:
    """A measure given by its radial weight profile.

    kind: 'lebesgue' | 'radial' | 'hyperbolic' | 'hyperplane'
    radial_density: w(r) for kind='radial' (w >= 0)
    growth_Q, growth_sigma: certified bound nu(B(x,r)) <= Q r^{sigma n}
    tail_bound_Qprime: optional Q' with nu(E) <= Q' |E| far from the origin
    """

    kind: str
    n: int
    radial_density: Optional[Callable[[np.ndarray], np.ndarray]] = None
    growth_Q: Optional[float] = None
    growth_sigma: float = 1.0
    tail_bound_Qprime: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("lebesgue", "radial", "hyperbolic", "hyperplane"):
            raise DomainError(f"unknown measure kind {self.kind!r}")
        if self.kind == "radial" and self.radial_density is None:
            raise DomainError("radial measure needs a density profile")
        if not 0 < self.growth_sigma <= 1:
            raise DomainError("growth exponent sigma must lie in (0, 1]")
        if self.kind == "hyperplane" and self.n != 2:
            raise DomainError("hyperplane (line) measure implemented for n=2")

    def radial_weight(self, r: np.ndarray) -> np.ndarray:
        """Weight W(r) with integral h -> int h(|x|) dnu = int h(r) W(r) dr."""
        r = np.asarray(r, dtype=float)
        if self.kind == "lebesgue":
            return sphere_area(self.n) * r ** (self.n - 1)
        if self.kind == "radial":
            w = np.asarray(self.radial_density(r), dtype=float)
            if np.any(w < 0):
                raise NegativeDensity("measure density must be nonnegative")
            return sphere_area(self.n) * w * r ** (self.n - 1)
        if self.kind == "hyperbolic":
            return sphere_area(self.n) * np.sinh(r) ** (self.n - 1)
        # hyperplane: arc length on a line through the origin, two rays
        return np.full_like(r, 2.0)

    def ball_mass_origin(self, r: float) -> float:
        """nu(B(0, r)), computed analytically where possible."""
        if self.kind == "lebesgue":
            return sphere_area(self.n) / self.n * r**self.n
        if self.kind == "hyperplane":
            return 2.0 * r
        if self.kind == "hyperbolic":
            from scipy.integrate import quad
            val, _ = quad(lambda s: math.sinh(s) ** (self.n - 1), 0.0, r)
            return sphere_area(self.n) * val
        from scipy.integrate import quad
        val, _ = quad(
            lambda s: float(self.radial_density(np.array([s]))[0]) * s ** (self.n - 1),
            0.0, r, limit=200)
        return sphere_area(self.n) * val

    def spot_check_growth(self, rng=None, samples: int = 24, tol: float = 1e-6) -> None:
        """Verify nu(B(x,r)) <= Q r^{sigma n} on sampled balls.

        Off-center balls are checked by quadrature for radial densities;
        raises GrowthViolated on failure beyond quadrature tolerance.
        """
        if self.growth_Q is None:
            return
        rng = np.random.default_rng(rng)
        sn = self.growth_sigma * self.n
        for _ in range(samples):
            r = float(np.exp(rng.uniform(math.log(1e-3), math.log(10.0))))
            c = float(rng.uniform(0.0, 3.0))
            mass = self._ball_mass(c, r)
            if mass > self.growth_Q * r**sn * (1.0 + tol) + 1e-12:
                raise GrowthViolated(
                    f"ball at |x|={c:.3g}, r={r:.3g}: mass {mass:.6g} exceeds "
                    f"Q r^(sigma n) = {self.growth_Q * r ** sn:.6g}")

    def _ball_mass(self, center_radius: float, r: float) -> float:
        if center_radius == 0.0:
            return self.ball_mass_origin(r)
        if self.kind == "lebesgue":
            return sphere_area(self.n) / self.n * r**self.n
        if self.kind == "hyperplane":
            # line through origin: chord of the ball on that line
            if center_radius >= r:
                # ball may still intersect the line; center sits on the line
                return 2.0 * r
            return 2.0 * r
        if self.kind == "radial":
            # integrate in polar coordinates about the origin: shells around
            # the ball's center pass through the density singularity, while
            # origin-centered shells meet the ball in a bounded wedge
            from scipy.integrate import quad
            c = center_radius

            def wedge(rho):
                if rho <= 0:
                    return 0.0
                cos_phi = (c * c + rho * rho - r * r) / (2.0 * c * rho)
                if cos_phi <= -1.0:
                    phi = math.pi
                elif cos_phi >= 1.0:
                    return 0.0
                else:
                    phi = math.acos(cos_phi)
                w = float(self.radial_density(np.array([rho]))[0])
                if self.n == 2:
                    angle = 2.0 * phi
                else:
                    angle = 2.0 * math.pi * (1.0 - math.cos(phi))
                return angle * w * rho ** (self.n - 1)

            lo = max(0.0, c - r)
            val, _ = quad(wedge, lo, c + r, limit=200,
                          points=[c, min(c + r, max(lo, 1e-12))])
            return val
        raise DomainError("off-center mass not available for this measure kind")


def lebesgue(n: int) -> MeasureDensity:
    return MeasureDensity(kind="lebesgue", n=n, growth_Q=sphere_area(n) / n,
                          growth_sigma=1.0, tail_bound_Qprime=1.0)


def hyperbolic_volume(n: int) -> MeasureDensity:
    return MeasureDensity(kind="hyperbolic", n=n)


def singular_measure(n: int, sigma: float) -> MeasureDensity:
    """Density |x|^{(sigma-1) n}: mass of B(0,r) is omega r^{sigma n}/(sigma n).

    The density is radially decreasing, so the origin ball is extremal and
    Q = omega_{n-1}/(sigma n) certifies the growth bound.
    """
    if not 0 < sigma <= 1:
        raise DomainError("sigma must lie in (0, 1]")
    expo = (sigma - 1.0) * n
    q = sphere_area(n) / (sigma * n)
    return MeasureDensity(
        kind="lebesgue" if sigma == 1.0 else "radial",
        n=n,
        radial_density=None if sigma == 1.0 else (lambda r, e=expo: np.asarray(r) ** e),
        growth_Q=q,
        growth_sigma=sigma,
        tail_bound_Qprime=1.0,  # density <= 1 for |x| >= 1
    )


def hyperplane_measure() -> MeasureDensity:
    """Arc length on a line through the origin in the plane: sigma = 1/2, Q = 2."""
    return MeasureDensity(kind="hyperplane", n=2, growth_Q=2.0, growth_sigma=0.5)
