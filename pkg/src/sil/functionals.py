"""Exponential functionals over Lebesgue sets, trace measures, and
hyperbolic volume.

All integrals accumulate in log space (max-shifted), so coefficients that
push |u|^beta past the float exponent range still produce meaningful
log-values; results report both the value (possibly inf) and its log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from .constants import moser_gamma
from .errors import (DivergentIntegral, DomainError, HypothesisViolated,
                     NonIntegrable)
from .grids import CartesianField, RadialFunction
from .measures import (MeasureDensity, hyperplane_measure, lebesgue,
                       singular_measure)
from .norms import head_mass, node_masses
from .params import Params
from .rearrange import exp_regularized

Field = Union[RadialFunction, CartesianField]


@dataclass(frozen=True)
class Domain:
    """Set descriptor: ball, annulus, ball complement, axis-aligned slab,
    half space through the origin, or all of space.

    Slabs ({lo <= x_axis <= hi}) integrate on Cartesian fields; the
    origin half space also integrates radial profiles (half of the full
    integral by symmetry)."""

    kind: str
    inner: float = 0.0
    outer: float = math.inf
    axis: int = 0

    @staticmethod
    def ball(radius: float) -> "Domain":
        return Domain("ball", 0.0, radius)

    @staticmethod
    def annulus(inner: float, outer: float) -> "Domain":
        return Domain("annulus", inner, outer)

    @staticmethod
    def ball_complement(radius: float) -> "Domain":
        return Domain("complement", radius, math.inf)

    @staticmethod
    def whole_space() -> "Domain":
        return Domain("all")

    @staticmethod
    def slab(axis: int, lo: float, hi: float) -> "Domain":
        return Domain("slab", lo, hi, axis=axis)

    @staticmethod
    def half_space(axis: int = 0) -> "Domain":
        return Domain("halfspace", 0.0, math.inf, axis=axis)

    def radial_mask(self, r: np.ndarray) -> np.ndarray:
        if self.kind in ("slab",):
            raise DomainError("slab domains integrate Cartesian fields only")
        if self.kind == "halfspace":
            return np.ones_like(r, dtype=bool)
        return (r >= self.inner) & (r <= self.outer)

    def cartesian_mask(self, coords) -> np.ndarray:
        """Boolean mask from per-axis coordinate arrays."""
        if self.kind == "slab":
            x = coords[self.axis]
            return (x >= self.inner) & (x <= self.outer)
        if self.kind == "halfspace":
            return coords[self.axis] >= 0.0
        r = np.sqrt(sum(c**2 for c in coords))
        return self.radial_mask(r)

    @property
    def bounded(self) -> bool:
        if self.kind == "slab":
            return False
        return math.isfinite(self.outer)

    @staticmethod
    def parse(text: str) -> "Domain":
        if text == "all":
            return Domain.whole_space()
        kind, _, rest = text.partition(":")
        if kind == "ball":
            return Domain.ball(float(rest))
        if kind == "annulus":
            a, b = rest.split(",")
            return Domain.annulus(float(a), float(b))
        if kind == "complement":
            return Domain.ball_complement(float(rest))
        if kind == "slab":
            axis, lo, hi = rest.split(",")
            return Domain.slab(int(axis), float(lo), float(hi))
        if kind == "halfspace":
            return Domain.half_space(int(rest) if rest else 0)
        raise DomainError(f"cannot parse domain {text!r}")


@dataclass(frozen=True)
class FunctionalSpec:
    """Exponential functional: int_E exp(gamma |u|^power) d nu, optionally
    regularized (Taylor polynomial of the given order stripped) on
    unbounded domains."""

    gamma_coeff: float
    power: float
    domain: Domain
    regularized: bool = False
    order: int = 0
    measure: Optional[MeasureDensity] = None

    @staticmethod
    def sharp(params: Params, coefficient: float, domain: Domain,
              regularized: bool = False,
              measure: Optional[MeasureDensity] = None) -> "FunctionalSpec":
        return FunctionalSpec(
            gamma_coeff=coefficient, power=params.beta, domain=domain,
            regularized=regularized, order=params.regularization_order,
            measure=measure)


@dataclass(frozen=True)
class FunctionalResult:
    value: float
    log_value: float
    truncation_error: float = 0.0

    def __float__(self):
        return self.value


def _field_cells(u: Field, spec: FunctionalSpec):
    if isinstance(u, CartesianField):
        if spec.measure is not None and spec.measure.kind != "lebesgue":
            raise DomainError("cartesian functionals support Lebesgue measure")
        ax = u.axes()
        coords = np.meshgrid(*([ax] * u.n), indexing="ij")
        mask = spec.domain.cartesian_mask([c.ravel() for c in coords])
        vals = np.abs(u.values).ravel()[mask]
        masses = np.full(vals.shape, u.h**u.n)
        return vals, masses
    if spec.domain.kind == "slab":
        raise DomainError("slab domains integrate Cartesian fields only")
    nu = spec.measure if spec.measure is not None else lebesgue(u.n)
    mag = u.magnitude()
    share = 0.5 if spec.domain.kind == "halfspace" else 1.0
    masses = node_masses(u, nu) * _cell_fractions(u.grid, spec.domain) * share
    keep = masses > 0
    vals = mag[keep]
    masses = masses[keep]
    if spec.domain.inner <= u.grid[0]:
        vals = np.concatenate([[mag[0]], vals])
        masses = np.concatenate([[head_mass(u, nu) * share], masses])
    return vals, masses


def _cell_fractions(grid: np.ndarray, domain: Domain) -> np.ndarray:
    """Fraction of each node's log-cell inside the domain window.

    Node j owns [t_j - h/2, t_j + h/2] in t = log r; boundary cells get the
    clipped overlap so that set additivity and ball volumes hold to O(h^2).
    """
    # half spaces intersect their radial window; pure all-space is trivial
    if domain.kind == "all" or (domain.kind == "halfspace"
                                and not math.isfinite(domain.outer)
                                and domain.inner == 0.0):
        return np.ones_like(grid)
    t = np.log(grid)
    half = np.empty_like(t)
    half[1:-1] = 0.25 * (t[2:] - t[:-2])
    half[0] = 0.5 * (t[1] - t[0])
    half[-1] = 0.5 * (t[-1] - t[-2])
    lo = t - half
    hi = t + half
    t_in = math.log(domain.inner) if domain.inner > 0 else -math.inf
    t_out = math.log(domain.outer) if math.isfinite(domain.outer) else math.inf
    overlap = np.minimum(hi, t_out) - np.maximum(lo, t_in)
    return np.clip(overlap / (hi - lo), 0.0, 1.0)


def _log_accumulate(exponents: np.ndarray, log_masses: np.ndarray) -> float:
    terms = exponents + log_masses
    peak = float(np.max(terms)) if terms.size else -math.inf
    if not math.isfinite(peak):
        return peak
    return peak + math.log(float(np.sum(np.exp(terms - peak))))


def mt_functional(u: Field, spec: FunctionalSpec) -> FunctionalResult:
    """Evaluate the exponential functional; regularized form required on
    unbounded domains (DivergentIntegral otherwise).

    Cartesian fields integrate over their own box, which bounds every
    domain descriptor, so the guard applies to radial inputs only."""
    if not spec.domain.bounded and not spec.regularized \
            and not isinstance(u, CartesianField):
        nu = spec.measure
        if nu is None or nu.kind in ("lebesgue", "hyperbolic"):
            raise DivergentIntegral(
                "whole-space exponential integral needs the regularized form")
    vals, masses = _field_cells(u, spec)
    t = spec.gamma_coeff * vals**spec.power
    truncation = 0.0
    if spec.regularized:
        big = t >= 500.0
        direct = float(np.sum(masses[~big] * exp_regularized(t[~big], spec.order)))
        log_big = _log_accumulate(t[big], np.log(np.clip(masses[big], 1e-300, None))) \
            if np.any(big) else -math.inf
        log_value = np.logaddexp(math.log(max(direct, 1e-300)), log_big) \
            if direct > 0 or math.isfinite(log_big) else -math.inf
        value = float(np.exp(log_value)) if math.isfinite(log_value) else 0.0
        if isinstance(u, RadialFunction) and not spec.domain.bounded:
            truncation = _tail_estimate(u, spec)
            value += truncation
            log_value = math.log(max(value, 1e-300))
    else:
        log_masses = np.log(np.clip(masses, 1e-300, None))
        log_value = _log_accumulate(t, log_masses)
        value = float(np.exp(log_value)) if log_value < 709.0 else math.inf
    return FunctionalResult(value=value, log_value=float(log_value),
                            truncation_error=truncation)


def _tail_estimate(u: RadialFunction, spec: FunctionalSpec) -> float:
    """Leading tail term of the regularized integrand beyond the grid."""
    mag_end = float(u.magnitude()[-1])
    if mag_end == 0.0 or u.tail_exponent is None:
        return 0.0
    k = spec.order + 1
    decay = -u.tail_exponent * spec.power * k
    if decay <= u.n:
        raise NonIntegrable(
            "regularized functional diverges for the declared tail")
    nu = spec.measure if spec.measure is not None else lebesgue(u.n)
    if nu.kind not in ("lebesgue", "radial"):
        return 0.0
    # int_{r_max}^inf gamma^k |u|^{power k} / k! weight dr, leading term
    from scipy.integrate import quad
    r_max = float(u.grid[-1])
    coef = spec.gamma_coeff**k * mag_end ** (spec.power * k) / math.factorial(k)
    val, _ = quad(
        lambda r: (r / r_max) ** (u.tail_exponent * spec.power * k)
        * float(nu.radial_weight(np.array([r]))[0]), r_max, np.inf, limit=200)
    return coef * val


def adachi_functional(u: Field, grad_norm: float, u_norm: float, theta: float,
                      params: Params) -> Tuple[float, float]:
    """Dilation-invariant subcritical pair.

    Left side: whole-space regularized integral at coefficient
    theta * gamma_{n,alpha} of (|u| / ||grad u||)^{beta}; right-side scale
    (||u|| / ||grad u||)^{n/alpha}.
    """
    if grad_norm <= 0:
        raise DomainError("gradient norm must be positive")
    from .constants import sharp_gamma
    gamma = sharp_gamma(params.n, int(params.alpha))
    spec = FunctionalSpec(
        gamma_coeff=theta * gamma / grad_norm**params.beta,
        power=params.beta, domain=Domain.whole_space(),
        regularized=True, order=params.regularization_order)
    lhs = mt_functional(u, spec).value
    rhs_scale = (u_norm / grad_norm) ** params.p_crit
    return lhs, rhs_scale


def masmoudi_functional(u: Field, variant: Tuple[str, float],
                        params: Params,
                        gamma: Optional[float] = None) -> float:
    """Ratio functional: regularized exponential over (1 + |u|)^{beta (.)}.

    variant ('q_power', q) uses denominator power beta; ('eps_power', eps)
    uses beta * (1 + eps).
    """
    kind, _arg = variant
    if kind not in ("q_power", "eps_power"):
        raise DomainError(f"unknown variant {kind!r}")
    denom_power = params.beta if kind == "q_power" else params.beta * (1.0 + _arg)
    if gamma is None:
        from .constants import sharp_gamma
        gamma = sharp_gamma(params.n, int(params.alpha))
    spec = FunctionalSpec(gamma_coeff=gamma, power=params.beta,
                          domain=Domain.whole_space(), regularized=True,
                          order=params.regularization_order)
    vals, masses = _field_cells(u, spec)
    t = gamma * vals**params.beta
    ratio = exp_regularized(t, spec.order) / (1.0 + vals) ** denom_power
    total = float(np.sum(masses * ratio))
    if isinstance(u, RadialFunction) and u.tail_exponent is not None \
            and float(u.magnitude()[-1]) > 0:
        total += _tail_estimate(u, spec)
    return total


def masmoudi_series_oracle(u: Field, variant: Tuple[str, float], params: Params,
                           gamma: Optional[float] = None, terms: int = 24) -> float:
    """Truncated-series evaluation of the ratio functional for small u."""
    kind, _arg = variant
    denom_power = params.beta if kind == "q_power" else params.beta * (1.0 + _arg)
    if gamma is None:
        from .constants import sharp_gamma
        gamma = sharp_gamma(params.n, int(params.alpha))
    spec = FunctionalSpec(gamma_coeff=gamma, power=params.beta,
                          domain=Domain.whole_space(), regularized=True,
                          order=params.regularization_order)
    vals, masses = _field_cells(u, spec)
    acc = np.zeros_like(vals)
    for k in range(spec.order + 1, spec.order + 1 + terms):
        acc += gamma**k * vals ** (params.beta * k) / math.factorial(k)
    return float(np.sum(masses * acc / (1.0 + vals) ** denom_power))


# ---------------------------------------------------------------------------
# additive-shift bounds (the seminorm splitting device)
# ---------------------------------------------------------------------------

def holder_split_inequality(a, b, theta, beta):
    """(lhs, rhs) of a theta^{1/b'} + b (1-theta)^{1/b'} <= (a^b + b^b)^{1/b}."""
    a = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    theta = np.asarray(theta, dtype=float)
    beta = np.asarray(beta, dtype=float)
    bc = beta / (beta - 1.0)
    lhs = a * theta ** (1.0 / bc) + b_arr * (1.0 - theta) ** (1.0 / bc)
    rhs = (a**beta + b_arr**beta) ** (1.0 / beta)
    return lhs, rhs


@dataclass(frozen=True)
class ShiftBounds:
    shifted_a: float
    bound_a: float
    shifted_b: float
    bound_b: float


def shifted_functional_bounds(tf: Field, K: float, p_f: float,
                              spec: FunctionalSpec, c0: float,
                              beta: Optional[float] = None) -> ShiftBounds:
    """Evaluate the two additive-shift functionals and their closed-form
    bounds, given the measured unshifted bound c0.

    Shift (a): exponent (|Tf| + K)^beta, bound
      c0 * exp[gamma (K^{b'} / (1 - p_f^{b'}))^{beta/b'}]; needs p_f < 1.
    Shift (b): exponent (|Tf| + K (1 - p_f^{b'})^{1/b'})^beta, bound
      c0 * exp[gamma K^beta].
    """
    beta = spec.power if beta is None else beta
    bc = beta / (beta - 1.0)
    if p_f < 0 or p_f > 1:
        raise HypothesisViolated("seminorm value must lie in [0, 1]")
    vals, masses = _field_cells(tf, spec)
    log_masses = np.log(np.clip(masses, 1e-300, None))

    def shifted(shift: float) -> float:
        t = spec.gamma_coeff * (vals + shift) ** beta
        return float(np.exp(_log_accumulate(t, log_masses)))

    shifted_b = shifted(K * (1.0 - p_f**bc) ** (1.0 / bc))
    bound_b = c0 * math.exp(spec.gamma_coeff * K**beta)
    if p_f >= 1.0:
        raise HypothesisViolated("shift (a) needs seminorm strictly below 1")
    shifted_a = shifted(K)
    bound_a = c0 * math.exp(spec.gamma_coeff
                            * (K**bc / (1.0 - p_f**bc)) ** (beta / bc))
    return ShiftBounds(shifted_a=shifted_a, bound_a=bound_a,
                       shifted_b=shifted_b, bound_b=bound_b)


# ---------------------------------------------------------------------------
# trace measures
# ---------------------------------------------------------------------------

def trace_measure(kind: str, params: Params, density=None) -> MeasureDensity:
    """Measures with certified growth for the trace inequalities.

    'singular': density |x|^{(sigma-1) n}; 'hyperplane': arc length on a
    line (n = 2); 'custom_density': user radial density, growth bound
    spot-checked.
    """
    if kind == "singular":
        nu = singular_measure(params.n, params.sigma)
    elif kind == "hyperplane":
        nu = hyperplane_measure()
    elif kind == "custom_density":
        if density is None:
            raise DomainError("custom_density needs a density callable")
        nu = MeasureDensity(kind="radial", n=params.n, radial_density=density,
                            growth_sigma=params.sigma, growth_Q=None)
    else:
        raise DomainError(f"unknown trace measure kind {kind!r}")
    nu.spot_check_growth(rng=0)
    return nu


def no_boundary_trudinger_coeff(n: int) -> float:
    """Sharp first-order coefficient on smooth bounded domains without
    boundary conditions: 2^{-1/(n-1)} times the Moser constant."""
    return 2.0 ** (-1.0 / (n - 1)) * moser_gamma(n)
