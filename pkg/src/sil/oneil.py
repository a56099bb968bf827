"""Kernel rearrangements, the convolution majorant, and the exponential
change of variables that reduces the sharp bound to a level-set estimate.

The majorant for (Tf)**(t) combines a local average term with the tail
integral of k1* f*; its first-term constant in the sigma = 1, p = 1,
q = beta configuration is the classical O'Neil value beta' A^{1/beta}
(times 1 + H when the kernel profile carries a log correction).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .constants import ball_volume
from .errors import (DomainError, ExponentConstraintViolated, JInfinite,
                     MassNotCaptured, TailNotConverged)
from .grids import RadialFunction, log_grid
from .kernels import (KernelSpec, bessel_kernel, hyperbolic_green)
from .measures import hyperbolic_volume
from .params import Params
from .rearrange import RearrangedProfile, decreasing_rearrangement


@dataclass
class KernelProfile:
    """Rearrangement data of a kernel: k1*(t), the profile constants of the
    power bound k1*(t) <= A^{1/beta} t^{-1/beta} (1 + H (1+|log t|)^{-gamma})
    on (0, 1], and the tail integral J = (1/A) int_1^inf (k1*)^beta dt."""

    beta: float
    A: float
    H: float
    gamma_exp: float
    B: float
    J: float
    k1star: Callable[[np.ndarray], np.ndarray]
    sigma: float = 1.0
    t_cut: Optional[float] = None  # pure truncated profiles vanish past this

    def k2star(self, t: np.ndarray) -> np.ndarray:
        """Convolution kernels share both rearrangements: k2* = k1*."""
        return self.k1star(t)

    def k1_antideriv(self, u) -> np.ndarray:
        """int_0^u k1*(s) ds; closed form for pure truncated power profiles,
        cached log-grid cumulative trapezoid otherwise."""
        u = np.asarray(u, dtype=float)
        if self.t_cut is not None:
            bc = self.beta / (self.beta - 1.0)
            uu = np.minimum(u, self.t_cut)
            out = self.A ** (1.0 / self.beta) * bc * uu ** (1.0 / bc)
            return out
        if not hasattr(self, "_cum_grid"):
            g = np.exp(np.linspace(math.log(1e-12), math.log(1e12), 8192))
            vals = np.asarray(self.k1star(g), dtype=float) * g
            cum = np.concatenate([[0.0], np.cumsum(
                0.5 * (vals[1:] + vals[:-1]) * np.diff(np.log(g)))])
            object.__setattr__(self, "_cum_grid", g)
            object.__setattr__(self, "_cum_vals", cum)
        return np.interp(np.log(np.clip(u, 1e-12, 1e12)),
                         np.log(self._cum_grid), self._cum_vals)


def _pure_profile(a_g: float, beta: float, t_cut: Optional[float]):
    """k1* of a purely homogeneous kernel, optionally truncated to a ball
    (mass cutoff t_cut)."""

    def k1(t):
        t = np.asarray(t, dtype=float)
        vals = (a_g / np.clip(t, 1e-300, None)) ** (1.0 / beta)
        if t_cut is not None:
            vals = np.where(t > t_cut, 0.0, vals)
        return vals

    return k1


def kernel_profile(kernel: KernelSpec, truncation_radius: Optional[float] = None,
                   grid: Optional[np.ndarray] = None) -> KernelProfile:
    """Rearrangement profile of a kernel with its bound constants.

    Purely homogeneous kernels give the exact power profile; with a
    truncation radius the tail integral J is finite, without one it
    diverges (JInfinite).  Bessel and hyperbolic kernels are rearranged
    numerically from a radial sampling.
    """
    p = kernel.params
    beta = p.beta
    if kernel.kind == "homogeneous":
        from .constants import kernel_sharp_constant
        a_g = kernel_sharp_constant(kernel)
        if truncation_radius is None:
            raise JInfinite(
                "purely homogeneous kernels have a divergent tail integral; "
                "truncate to a ball to make J finite")
        # mass where the truncated kernel first vanishes
        kappa = abs(kernel.constant_angular_value) if kernel.is_constant_angular \
            else None
        if kappa is None:
            raise DomainError("profile truncation implemented for constant "
                              "angular parts")
        t_cut = ball_volume(p.n) * truncation_radius**p.n
        k1 = _pure_profile(a_g, beta, t_cut)
        j = _exact_pure_j(a_g, beta, t_cut)
        return KernelProfile(beta=beta, A=a_g, H=0.0, gamma_exp=1.0,
                             B=a_g ** (1.0 / beta), J=j, k1star=k1,
                             t_cut=t_cut)
    if kernel.kind == "bessel":
        g = grid if grid is not None else log_grid(1e-5, 60.0, 4096)
        vals = bessel_kernel(p.n, p.alpha, g)
        prof = RadialFunction(g, vals, p.n, tail_exponent=None)
        rearr = decreasing_rearrangement(prof)
        from .constants import riesz_normalization
        c_a = riesz_normalization(p.n, p.alpha)
        a = ball_volume(p.n) * c_a**beta
        k1 = lambda t: rearr.fstar_at(np.asarray(t, dtype=float))
        j = _tail_j(k1, a, beta)
        h = _fit_profile_h(k1, a, beta)
        return KernelProfile(beta=beta, A=a, H=h, gamma_exp=1.0,
                             B=a ** (1.0 / beta) * (1.0 + h), J=j, k1star=k1)
    # hyperbolic kernels: rearrange against the hyperbolic volume
    g = grid if grid is not None else log_grid(1e-5, 40.0, 4096)
    if kernel.kind == "hyperbolic_exact":
        vals = hyperbolic_green(p.n, g, mode="exact_H2")
        alpha_eff = 2.0
    else:
        vals = hyperbolic_green(p.n, g, mode="asymptotic", alpha=p.alpha)
        alpha_eff = p.alpha
    prof = RadialFunction(g, vals, p.n, tail_exponent=None)
    rearr = decreasing_rearrangement(prof, hyperbolic_volume(p.n))
    beta_eff = p.n / (p.n - alpha_eff)
    from .constants import riesz_normalization
    c_a = riesz_normalization(p.n, alpha_eff)
    a = ball_volume(p.n) * c_a**beta_eff
    k1 = lambda t: rearr.fstar_at(np.asarray(t, dtype=float))
    j = _tail_j(k1, a, beta_eff)
    h = _fit_profile_h(k1, a, beta_eff)
    return KernelProfile(beta=beta_eff, A=a, H=h, gamma_exp=1.0,
                         B=a ** (1.0 / beta_eff) * (1.0 + h), J=j, k1star=k1)


def _exact_pure_j(a: float, beta: float, t_cut: float) -> float:
    """J of the truncated power profile: (1/A) int_1^{t_cut} (A/t) dt."""
    if t_cut <= 1.0:
        return 0.0
    return math.log(t_cut)


def _tail_j(k1, a: float, beta: float, t_max: float = 1e9) -> float:
    """J = (1/A) int_1^inf (k1*)^beta dt by log-grid quadrature."""
    t = np.exp(np.linspace(0.0, math.log(t_max), 4096))
    vals = np.asarray(k1(t), dtype=float) ** beta * t
    j = float(np.trapezoid(vals, np.log(t))) / a
    # convergence: the last decade must contribute a negligible share
    last = t > t_max / 10.0
    if float(np.trapezoid(vals[last], np.log(t[last]))) / a > 1e-3 * max(j, 1e-30):
        raise JInfinite("kernel tail integral does not converge")
    return j


def _fit_profile_h(k1, a: float, beta: float) -> float:
    """Smallest H >= 0 with k1*(t) <= A^{1/b} t^{-1/b} (1 + H (1+|log t|)^{-1})."""
    t = np.exp(np.linspace(math.log(1e-6), 0.0, 400))
    ratio = np.asarray(k1(t), dtype=float) / (a ** (1.0 / beta) * t ** (-1.0 / beta))
    excess = (ratio - 1.0) * (1.0 + np.abs(np.log(t)))
    return float(max(0.0, np.max(excess)))


# ---------------------------------------------------------------------------
# the convolution majorant
# ---------------------------------------------------------------------------

def oneil_constant(profile: KernelProfile) -> float:
    """Classical first-term constant beta' A^{1/beta} (1 + H) of the
    majorant in the sigma = 1, p = 1, q = beta configuration."""
    beta = profile.beta
    bc = beta / (beta - 1.0)
    return bc * profile.A ** (1.0 / beta) * (1.0 + profile.H)


def check_exponents(beta: float, sigma: float, p: float, q: float) -> None:
    lo = max(1.0, beta * (1.0 - sigma) / (beta - 1.0))
    bc = beta / (beta - 1.0)
    if not lo <= p < bc:
        raise ExponentConstraintViolated(
            f"need max(1, b(1-s)/(b-1)) <= p < b', got p={p}")
    q_expected = 1.0 / (1.0 / (sigma * beta) + (1.0 / p - 1.0) / sigma)
    if abs(q - q_expected) > 1e-9 * q_expected:
        raise ExponentConstraintViolated(
            f"q must satisfy 1/q = 1/(sigma b) + (1/p - 1)/sigma; expected "
            f"{q_expected}, got {q}")
    if q_expected <= p:
        raise ExponentConstraintViolated("the pair needs q > p")


def oneil_rhs(fstar: RearrangedProfile, profile: KernelProfile, t,
              p: float = 1.0, q: Optional[float] = None,
              sigma: float = 1.0, c0: Optional[float] = None):
    """Majorant C0 t^{-1/q} int_0^{t^{1/s}} f* u^{-1+1/p} du
    + int_{t^{1/s}}^inf k1* f* du for (Tf)**(t); vectorized in t.

    C0 defaults to the classical value beta' A^{1/beta} (1 + H) in the
    sigma = 1, p = 1, q = beta configuration (the value needed for the
    majorant to actually dominate; a unit constant fails on concentrated
    inputs).  For sigma < 1 pass a fitted C0.
    """
    beta = profile.beta
    if q is None:
        q = 1.0 / (1.0 / (sigma * beta) + (1.0 / p - 1.0) / sigma)
    check_exponents(beta, sigma, p, q)
    if c0 is None:
        if sigma != 1.0 or p != 1.0:
            raise DomainError("pass a fitted C0 outside the sigma=1, p=1 case")
        c0 = oneil_constant(profile)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    t_s = t ** (1.0 / sigma)
    breaks = np.concatenate([[0.0], fstar.t_grid])
    vals = fstar.fstar
    expo = 1.0 / p
    # prefix sums of int f* u^{1/p - 1} du and int k1* f* du on the steps
    pow_b = breaks**expo
    s1 = np.concatenate([[0.0], np.cumsum(vals * np.diff(pow_b) / expo)])
    k1a_b = profile.k1_antideriv(breaks)
    s2 = np.concatenate([[0.0], np.cumsum(vals * np.diff(k1a_b))])
    j = np.clip(np.searchsorted(breaks, t_s, side="right") - 1, 0, len(vals) - 1)
    inside = t_s < breaks[-1]
    x = np.minimum(t_s, breaks[-1])
    first = s1[j] + vals[j] * (x**expo - pow_b[j]) / expo * inside
    first = np.where(t_s >= breaks[-1], s1[-1], first)
    partial2 = s2[j] + vals[j] * (profile.k1_antideriv(x) - k1a_b[j]) * inside
    partial2 = np.where(t_s >= breaks[-1], s2[-1], partial2)
    second = s2[-1] - partial2
    out = c0 * t ** (-1.0 / q) * first + second
    return out if out.size > 1 else float(out[0])


# ---------------------------------------------------------------------------
# exponential change of variables and the level-set machinery
# ---------------------------------------------------------------------------

@dataclass
class GarsiaState:
    """The transformed profile phi(x) with its exponents and constants.

    phi(x) = (1/sigma)^{1/b'} f*(e^{-x/sigma}) e^{-x (b-1)/(sigma b)}; the
    change of variables is an isometry of the b'-norm.  C2 = C0^b / A and
    H1 = H / sigma feed the piecewise comparison kernel; d* collects
    C3 + C4 + sigma J.
    """

    beta: float
    sigma: float
    q_exp: float
    p_exp: float
    x_grid: np.ndarray
    phi: np.ndarray
    profile: KernelProfile
    c0: float
    c2: float = field(init=False)
    h1: float = field(init=False)
    c3: float = field(init=False)
    c4: float = field(init=False)
    d_star: float = field(init=False)

    def __post_init__(self):
        self.c2 = self.c0**self.beta / self.profile.A
        self.h1 = self.profile.H / self.sigma
        self.c3 = _c3_constant(self.h1, self.profile.gamma_exp, self.beta)
        self.c4 = self.q_exp * self.c2 / self.beta
        self.d_star = self.c3 + self.c4 + self.sigma * self.profile.J

    def phi_norm_bc(self) -> float:
        bc = self.beta / (self.beta - 1.0)
        return float(np.trapezoid(self.phi**bc, self.x_grid)) ** (1.0 / bc)

    def residual_mass(self, y: float) -> float:
        """L(y) = (int_y^inf phi^{b'})^{1/b'}, nonincreasing, <= 1."""
        bc = self.beta / (self.beta - 1.0)
        mask = self.x_grid >= y
        if not np.any(mask):
            return 0.0
        return float(np.trapezoid(self.phi[mask] ** bc, self.x_grid[mask])) ** (1.0 / bc)


def _c3_constant(h1: float, gamma_exp: float, beta: float) -> float:
    """int_0^inf [(1 + H1 (1+x)^{-gamma})^beta - 1] dx, finite for
    beta * gamma > 1; zero when H1 = 0."""
    if h1 == 0.0:
        return 0.0
    if beta * gamma_exp <= 1.0:
        raise DomainError("log-correction constant diverges: beta*gamma <= 1")
    from scipy.integrate import quad
    val, _ = quad(lambda x: (1.0 + h1 * (1.0 + x) ** (-gamma_exp)) ** beta - 1.0,
                  0.0, np.inf, limit=200)
    return val


def garsia_transform(fstar: RearrangedProfile, profile: KernelProfile,
                     params: Params, p: float = 1.0,
                     c0: Optional[float] = None,
                     x_max: float = 80.0, nodes: int = 8001) -> GarsiaState:
    """Build phi on a symmetric x-window capturing all but 1e-6 of the
    b'-norm mass; asserts the change-of-variables isometry to 1e-4."""
    beta = profile.beta
    sigma = params.sigma
    bc = beta / (beta - 1.0)
    q = 1.0 / (1.0 / (sigma * beta) + (1.0 / p - 1.0) / sigma)
    if c0 is None:
        c0 = oneil_constant(profile) if (sigma == 1.0 and p == 1.0) else None
    if c0 is None:
        raise DomainError("pass a fitted C0 outside the sigma=1, p=1 case")
    x = np.linspace(-x_max, x_max, nodes)
    if fstar.t_grid.size <= 256:
        # few-step profiles: make the jump abscissae explicit double nodes so
        # the trapezoid rule sees the discontinuities exactly
        xb = -sigma * np.log(np.clip(fstar.t_grid, 1e-300, None))
        xb = xb[(xb > -x_max) & (xb < x_max)]
        x = np.sort(np.concatenate([x, xb - 1e-9, xb + 1e-9]))
    phi = (1.0 / sigma) ** (1.0 / bc) \
        * fstar.fstar_at(np.exp(-x / sigma)) * np.exp(-(beta - 1.0) / (sigma * beta) * x)
    state = GarsiaState(beta=beta, sigma=sigma, q_exp=q, p_exp=p,
                        x_grid=x, phi=np.asarray(phi, dtype=float),
                        profile=profile, c0=c0)
    # exact step-function isometry: the b'-mass inside the x-window equals
    # the f* mass on [e^{-x_max/sigma}, e^{x_max/sigma}]; the window must
    # capture all but 1e-6 and the grid sampling must agree to 1e-4 of it
    target = fstar.p_norm_pth_power(bc)
    window = fstar.p_norm_pth_power_window(
        bc, math.exp(-x_max / sigma), math.exp(x_max / sigma))
    if target > 0 and target - window > 1e-6 * max(target, 1.0):
        raise MassNotCaptured(
            f"x-window captured {window:.8g} of {target:.8g} b'-mass")
    return state


def state_from_phi(phi_values: np.ndarray, x_grid: np.ndarray,
                   profile: KernelProfile, params: Params,
                   p: float = 1.0, c0: Optional[float] = None) -> GarsiaState:
    """GarsiaState from a directly supplied transformed profile.

    Used by the random-ensemble checks; phi must be admissible
    (nonnegative with b'-norm at most 1).
    """
    beta = profile.beta
    if c0 is None:
        c0 = oneil_constant(profile)
    q = 1.0 / (1.0 / (params.sigma * beta) + (1.0 / p - 1.0) / params.sigma)
    state = GarsiaState(beta=beta, sigma=params.sigma, q_exp=q, p_exp=p,
                        x_grid=np.asarray(x_grid, dtype=float),
                        phi=np.asarray(phi_values, dtype=float),
                        profile=profile, c0=c0)
    norm = state.phi_norm_bc()
    if norm > 1.0 + 1e-3:
        raise DomainError(f"phi must have b'-norm <= 1, got {norm}")
    return state


def piecewise_kernel(x, y: float, state: GarsiaState) -> np.ndarray:
    """Three-branch comparison kernel g(x, y).

    x <= 0:    A^{-1/b} k1*(e^{-x/s}) e^{-x/(s b)}
    0 < x <= y: 1 + H1 (1 + x)^{-gamma}
    x > y:     C2^{1/b} e^{(y-x)/q}
    Discontinuous at the branch points by construction.
    """
    if y < 0:
        raise DomainError("the level parameter must be nonnegative")
    x = np.asarray(x, dtype=float)
    beta, sigma = state.beta, state.sigma
    out = np.empty_like(x)
    left = x <= 0
    mid = (x > 0) & (x <= y)
    right = x > y
    out[left] = state.profile.A ** (-1.0 / beta) \
        * np.asarray(state.profile.k1star(np.exp(-x[left] / sigma))) \
        * np.exp(-x[left] / (sigma * beta))
    out[mid] = 1.0 + state.h1 * (1.0 + np.abs(x[mid])) ** (-state.profile.gamma_exp)
    out[right] = state.c2 ** (1.0 / beta) * np.exp((y - x[right]) / state.q_exp)
    return out


def _prefix_arrays(state: GarsiaState):
    """Cache the y-independent pieces of int g(x, y) phi(x) dx.

    left: the x <= 0 branch integral (constant in y);
    mid(y): cumulative of (1 + H1 (1+x)^{-gamma}) phi over [0, y];
    right(y) = C2^{1/b} e^{y/q} * tail(y), tail(y) = int_y^inf e^{-x/q} phi.
    """
    if hasattr(state, "_left"):
        return
    x, phi = state.x_grid, state.phi
    beta, sigma = state.beta, state.sigma
    neg = x <= 0
    if np.any(neg):
        gl = state.profile.A ** (-1.0 / beta) \
            * np.asarray(state.profile.k1star(np.exp(-x[neg] / sigma))) \
            * np.exp(-x[neg] / (sigma * beta))
        left = float(np.trapezoid(gl * phi[neg], x[neg]))
    else:
        left = 0.0
    pos = x >= 0
    xp = x[pos]
    mid_integrand = (1.0 + state.h1
                     * (1.0 + xp) ** (-state.profile.gamma_exp)) * phi[pos]
    mid_cum = np.concatenate([[0.0], np.cumsum(
        0.5 * (mid_integrand[1:] + mid_integrand[:-1]) * np.diff(xp))])
    tail_integrand = np.exp(-xp / state.q_exp) * phi[pos]
    pieces = 0.5 * (tail_integrand[1:] + tail_integrand[:-1]) * np.diff(xp)
    # accumulate from the right: no cancellation for e^{y/q} to amplify
    tail = np.concatenate([np.cumsum(pieces[::-1])[::-1], [0.0]])
    object.__setattr__(state, "_left", left)
    object.__setattr__(state, "_xp", xp)
    object.__setattr__(state, "_mid_cum", mid_cum)
    object.__setattr__(state, "_tail", tail)


def inner_integral(y, state: GarsiaState):
    """int g(x, y) phi(x) dx, vectorized over y >= 0."""
    _prefix_arrays(state)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    mid = np.interp(y, state._xp, state._mid_cum,
                    left=0.0, right=state._mid_cum[-1])
    tail = np.interp(y, state._xp, state._tail, left=state._tail[0], right=0.0)
    right = state.c2 ** (1.0 / state.beta) * np.exp(y / state.q_exp) * tail
    out = state._left + mid + right
    return out if out.size > 1 else float(out[0])


def F_functional(y, state: GarsiaState):
    """F(y) = y - (int g(x, y) phi(x) dx)^beta, vectorized over y >= 0."""
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    inner = np.atleast_1d(inner_integral(y_arr, state))
    out = y_arr - inner**state.beta
    return out if out.size > 1 else float(out[0])


def level_set_measure(lam: float, state: GarsiaState,
                      y_max: float = 50.0, step: float = 0.01) -> float:
    """|{y >= 0 : F(y) <= lam}| on a uniform y grid with bisection-refined
    boundaries at the sign changes of F - lam."""
    ys = np.arange(0.0, y_max + step, step)
    fs = np.array([F_functional(y, state) for y in ys])
    below = fs <= lam
    total = 0.0
    for k in range(len(ys) - 1):
        a, b = below[k], below[k + 1]
        if a and b:
            total += step
        elif a != b:
            lo, hi = ys[k], ys[k + 1]
            below_lo = a
            for _ in range(30):
                midp = 0.5 * (lo + hi)
                if (F_functional(midp, state) <= lam) == below_lo:
                    lo = midp
                else:
                    hi = midp
            crossing = 0.5 * (lo + hi)
            total += (crossing - ys[k]) if a else (ys[k + 1] - crossing)
    return total


def garsia_integral(state: GarsiaState, y_max: float = 200.0,
                    step: float = 0.01) -> dict:
    """int_0^inf e^{-F(y)} dy with a layer-cake cross check.

    The grid extends until F(y) > 40 (past its last dip below);
    TailNotConverged if the window never reaches that threshold.
    """
    ys = np.arange(0.0, y_max + step, step)
    fs = np.atleast_1d(F_functional(ys, state))
    past = np.nonzero(fs > 40.0)[0]
    if past.size == 0:
        raise TailNotConverged("F never exceeded the tail threshold")
    last_low = np.nonzero(fs <= 40.0)[0][-1]
    cut = min(last_low + 2, len(ys) - 1)
    if fs[cut] <= 40.0:
        raise TailNotConverged("F did not stay above the tail threshold")
    ys = ys[: cut + 1]
    fs = fs[: cut + 1]
    direct = float(np.trapezoid(np.exp(-fs), ys))
    # layer cake: int_{-d*}^inf |E_lambda| e^{-lambda} d lambda
    lams = np.linspace(-state.d_star, 40.0, 400)
    measures = np.array([_measure_from_samples(ys, fs, lam) for lam in lams])
    layer = float(np.trapezoid(measures * np.exp(-lams), lams))
    return {"integral": direct, "layer_cake": layer,
            "f_min": float(np.min(fs)), "d_star": state.d_star,
            "y_grid": ys, "f_values": fs}


def dual_path_values(fstar: RearrangedProfile, profile: KernelProfile,
                     params: Params, t_nodes: int = 400) -> dict:
    """Evaluate int_0^1 exp[(sigma/A) M(t)^beta] dt two ways.

    Path A integrates directly in t with the majorant M(t) built from f*;
    path B applies the exponential change of variables and integrates
    e^{-F(y)}.  The two parameterize the same quantity when the kernel
    profile is an exact truncated power (no log correction), so agreement
    checks both code paths end to end.
    """
    beta = profile.beta
    sigma = params.sigma
    c0 = oneil_constant(profile)
    # path A: t-side quadrature on a log grid
    s = np.linspace(math.log(1e-6), 0.0, t_nodes)
    t = np.exp(s)
    expo = np.array([
        (sigma / profile.A) * oneil_rhs(fstar, profile, float(tt)) ** beta
        for tt in t])
    path_a = float(np.trapezoid(np.exp(expo) * t, s))
    # path A misses (0, 1e-6); bound the omitted piece by its endpoint value
    omitted = float(np.exp(expo[0]) * t[0])
    # path B: y-side level-set machinery
    state = garsia_transform(fstar, profile, params)
    res = garsia_integral(state)
    ys, fs = res["y_grid"], res["f_values"]
    mask = ys <= -math.log(1e-6)
    path_b = float(np.trapezoid(np.exp(-fs[mask]), ys[mask]))
    return {"path_a": path_a, "path_b": path_b, "omitted_head": omitted,
            "state": state, "integral_full": res["integral"]}


def _measure_from_samples(ys: np.ndarray, fs: np.ndarray, lam: float) -> float:
    below = fs <= lam
    if not np.any(below):
        return 0.0
    total = 0.0
    for k in range(len(ys) - 1):
        a, b = below[k], below[k + 1]
        if a and b:
            total += ys[k + 1] - ys[k]
        elif a != b:
            frac = (lam - fs[k]) / (fs[k + 1] - fs[k])
            frac = min(max(frac, 0.0), 1.0)
            total += (ys[k + 1] - ys[k]) * (frac if a else 1.0 - frac)
    return total
