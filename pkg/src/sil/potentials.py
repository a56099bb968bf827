"""Convolution against singular homogeneous kernels.

Radial reduction: for rotation-equivariant (kernel, source) pairs the
potential is radial and reduces to a 1-D integral against the angular
weight W(r, rho) = integral over S^{n-1} of g(r e1 - rho omega).  On a
uniform log grid W(r_j / r_i) depends only on j - i, so the convolution
is a log-space correlation plus a corrected band around the integrable
diagonal singularity.

Admissible pairs: scalar kernels with constant angular part acting on
radial profiles, and vector kernels acting on radial-vector fields
f(y) = (y/|y|) h(|y|).  Other angular parts produce non-radial potentials
and are rejected; use the Cartesian engine for those.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.signal import fftconvolve

from .constants import sphere_area
from .errors import (DomainError, GeometryViolated, NonIntegrableKernel,
                     ResolutionTooCoarse, SingularOnDiagonal, UnboundedResult)
from .grids import CartesianField, RadialFunction, trapezoid_weights_log
from .kernels import KernelSpec
from .norms import lp_norm

_GL16 = np.polynomial.legendre.leggauss(16)


# ---------------------------------------------------------------------------
# angular slices W-hat(u) = integral over S^{n-1} of the kernel at e1 - u w
# ---------------------------------------------------------------------------

def _angular_slice_n2(kernel: KernelSpec, u: np.ndarray, source: str) -> np.ndarray:
    """Trapezoid on [0, 2 pi) with node count adapted to the singularity scale."""
    a_n = kernel.params.alpha - kernel.params.n
    out = np.empty_like(u)
    delta = np.abs(np.log(np.clip(u, 1e-300, None)))
    # resolve the complex singularity at distance ~ delta from the real axis
    target = np.clip((64.0 / np.clip(delta, 1e-8, None)).astype(int), 1024, 1 << 19)
    levels = np.unique(np.ceil(np.log2(target)))
    for lv in levels:
        n_nodes = int(2**lv)
        mask = np.ceil(np.log2(target)) == lv
        uu = u[mask][:, None]
        theta = np.arange(n_nodes) * (2.0 * math.pi / n_nodes)
        ct, st = np.cos(theta)[None, :], np.sin(theta)[None, :]
        q2 = 1.0 - 2.0 * uu * ct + uu**2
        q2 = np.clip(q2, 1e-300, None)
        if kernel.is_constant_angular:
            vals = kernel.constant_angular_value * q2 ** (a_n / 2.0)
        else:
            norm = np.sqrt(q2)
            vx, vy = (1.0 - uu * ct) / norm, (-uu * st) / norm
            omegas = np.stack([vx.ravel(), vy.ravel()], axis=-1)
            ang = np.asarray(kernel.angular(omegas))
            if kernel.is_vector:
                if source != "radial_vector":
                    raise DomainError(
                        "vector kernels reduce radially only on radial-vector sources")
                ang = ang.reshape(vx.shape + (kernel.vector_arity,))
                proj = ang[..., 0] * ct + ang[..., 1] * st
                vals = proj * q2 ** (a_n / 2.0)
            else:
                vals = ang.reshape(vx.shape) * q2 ** (a_n / 2.0)
        out[mask] = vals.sum(axis=1) * (2.0 * math.pi / n_nodes)
    return out


def _componentwise_slice(kernel: KernelSpec, u: np.ndarray) -> np.ndarray:
    """Per-component angular weight of a vector kernel at unit radius:
    integral over the sphere of g_j(e1 - u w), shape (len(u), arity)."""
    if kernel.params.n != 2:
        raise DomainError("componentwise weights implemented in the plane")
    a_n = kernel.params.alpha - kernel.params.n
    n_nodes = 1 << 14
    theta = np.arange(n_nodes) * (2.0 * math.pi / n_nodes)
    ct, st = np.cos(theta)[None, :], np.sin(theta)[None, :]
    uu = u[:, None]
    q2 = np.clip(1.0 - 2.0 * uu * ct + uu**2, 1e-300, None)
    norm = np.sqrt(q2)
    omegas = np.stack([((1.0 - uu * ct) / norm).ravel(),
                       ((-uu * st) / norm).ravel()], axis=-1)
    ang = np.asarray(kernel.angular(omegas)).reshape(
        (len(u), n_nodes, kernel.vector_arity))
    vals = ang * (q2 ** (a_n / 2.0))[..., None]
    return vals.sum(axis=1) * (2.0 * math.pi / n_nodes)


def _angular_slice_n3(kernel: KernelSpec, u: np.ndarray, source: str) -> np.ndarray:
    """Colatitude reduction on S^2; closed form for constant angular parts."""
    alpha = kernel.params.alpha
    if kernel.is_constant_angular:
        a = kernel.constant_angular_value
        um = np.clip(np.abs(1.0 - u), 1e-300, None)
        if abs(alpha - 1.0) < 1e-14:
            val = (1.0 / u) * np.log((1.0 + u) / um)
        else:
            val = ((1.0 + u) ** (alpha - 1.0) - um ** (alpha - 1.0)) / (u * (alpha - 1.0))
        return 2.0 * math.pi * a * val
    # zonal vector case: integrand reduces to a single colatitude integral
    if not kernel.is_vector or source != "radial_vector":
        raise DomainError("n=3 radial reduction supports constant angular or "
                          "radial-vector gradient kernels")
    probe = np.asarray(kernel.angular(np.array([[1.0, 0.0, 0.0]])))
    scale = float(np.linalg.norm(probe[0]))
    return _zonal_gradient_slice(u, kernel.params.n, alpha, scale)


def _zonal_gradient_slice(u: np.ndarray, n: int, alpha: float, scale: float) -> np.ndarray:
    """integral over S^{n-1} of scale * ((e1 - u w)/|e1 - u w|) . w * |e1-u w|^{a-n},
    by dyadic-panel Gauss-Legendre refined toward theta = 0."""
    panels = []
    top = math.pi
    for _ in range(52):
        panels.append((top / 2.0, top))
        top /= 2.0
    panels.append((0.0, top))
    x16, w16 = _GL16
    uu = u[:, None]
    total = np.zeros_like(u)
    for lo, hi in panels:
        theta = 0.5 * (hi - lo) * x16 + 0.5 * (hi + lo)
        wt = 0.5 * (hi - lo) * w16
        ct, st = np.cos(theta)[None, :], np.sin(theta)[None, :]
        q2 = np.clip(1.0 - 2.0 * uu * ct + uu**2, 1e-300, None)
        integrand = scale * (ct - uu) * q2 ** ((alpha - n - 1) / 2.0)
        total += np.sum(integrand * st ** (n - 2) * wt[None, :], axis=1)
    return sphere_area(n - 1) * total


def angular_slice(kernel: KernelSpec, u, source: str = "scalar") -> np.ndarray:
    """W-hat(u): the angular weight at unit radius, W(r, rho) = r^{a-n} W-hat(rho/r)."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if np.any(u <= 0):
        raise DomainError("radius ratio must be positive")
    if np.any(u == 1.0):
        raise SingularOnDiagonal("angular weight is singular at r = rho")
    n = kernel.params.n
    if n == 2:
        out = _angular_slice_n2(kernel, u, source)
    elif n == 3:
        out = _angular_slice_n3(kernel, u, source)
    else:
        raise DomainError("radial reduction implemented for n in {2, 3}")
    return out if out.size > 1 else float(out[0])


def angular_weight(kernel: KernelSpec, r: float, rho: float,
                   source: str = "scalar"):
    """W(r, rho) = integral over S^{n-1} of g(r e1 - rho omega) d omega.

    Scalar kernels return a float; vector kernels return the componentwise
    vector by default, or the projected (scalar) weight against the
    outward radial direction with source='radial_vector'.  Exactly on the
    diagonal the weight is singular and SingularOnDiagonal is raised.
    """
    if kernel.kind != "homogeneous":
        raise DomainError("angular weights are defined for homogeneous kernels")
    if r <= 0 or rho <= 0:
        raise DomainError("radii must be positive")
    if r == rho:
        raise SingularOnDiagonal("use cell-averaged quadrature on the diagonal")
    a_n = kernel.params.alpha - kernel.params.n
    if kernel.is_vector and source == "scalar":
        return r**a_n * _componentwise_slice(kernel, np.array([rho / r]))[0]
    return r**a_n * angular_slice(kernel, rho / r, source=source)


# ---------------------------------------------------------------------------
# tabulated slices with a corrected singular band
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AngularWeightTable:
    """W-hat sampled on the relative log grid k*h, k = -(M-1) .. M-1.

    Entries within `band` cells of the diagonal hold cell averages (Gauss-
    Legendre in log-offset); the diagonal cell integrates a local singular
    model fitted from W-hat at offsets {h/4, h/2, h} on each side.
    """

    h: float
    m: int
    values: np.ndarray  # length 2*m - 1, index k + (m - 1)
    far_coefficient: float  # W-hat(u) ~ far_coefficient * u^{a-n} as u -> inf

    def offset(self, k: int) -> float:
        return self.values[k + self.m - 1]


_TABLE_CACHE: Dict[Tuple, AngularWeightTable] = {}


def _diag_cell_average(kernel: KernelSpec, h: float, source: str) -> float:
    """(1/h) * integral over |t| <= h/2 of W-hat(e^t) via the local model."""
    alpha = kernel.params.alpha
    c = h / 2.0
    if alpha < 1.0:
        # leading singular power plus three correction terms; fitted on
        # four offsets, since the h^alpha error scale of a short expansion
        # decays too slowly for the refinement contract when alpha < 1
        basis = [lambda t: t ** (alpha - 1.0), lambda t: np.ones_like(t),
                 lambda t: t**alpha, lambda t: t]
        ints = [c**alpha / alpha, c, c ** (alpha + 1.0) / (alpha + 1.0),
                c**2 / 2.0]
    elif abs(alpha - 1.0) <= 1e-12:
        basis = [lambda t: np.log(1.0 / t), lambda t: np.ones_like(t), lambda t: t]
        ints = [c * (1.0 + math.log(1.0 / c)), c, c**2 / 2.0]
    elif alpha < 2.0:
        basis = [lambda t: t ** (alpha - 1.0), lambda t: np.ones_like(t), lambda t: t]
        ints = [c**alpha / alpha, c, c**2 / 2.0]
    else:
        basis = [lambda t: np.ones_like(t), lambda t: t, lambda t: t**2]
        ints = [c, c**2 / 2.0, c**3 / 3.0]
    total = 0.0
    fit_t = np.array([h / 8.0, h / 4.0, h / 2.0, h])[-len(basis):]
    for side in (-1.0, 1.0):
        vals = angular_slice(kernel, np.exp(side * fit_t), source=source)
        design = np.stack([b(fit_t) for b in basis], axis=1)
        coef, *_ = np.linalg.lstsq(design, np.atleast_1d(vals), rcond=None)
        total += float(np.dot(coef, ints))
    return total / h


def _near_cell_average(kernel: KernelSpec, k: int, h: float, source: str) -> float:
    """Cell average of W-hat over t in [k h - h/2, k h + h/2] by 16-pt GL."""
    x16, w16 = _GL16
    t = k * h + 0.5 * h * x16
    vals = angular_slice(kernel, np.exp(t), source=source)
    return float(np.sum(w16 * np.atleast_1d(vals))) / 2.0


def angular_weight_table(kernel: KernelSpec, h: float, m: int,
                         source: str = "scalar", band: int = 4) -> AngularWeightTable:
    key = (kernel.cache_key(), round(h, 14), m, source, band)
    hit = _TABLE_CACHE.get(key)
    if hit is not None:
        return hit
    k = np.arange(-(m - 1), m)
    vals = np.empty(2 * m - 1)
    far = k != 0
    vals[far] = np.atleast_1d(angular_slice(kernel, np.exp(k[far] * h), source=source))
    for j in range(1, band + 1):
        vals[(m - 1) + j] = _near_cell_average(kernel, j, h, source)
        vals[(m - 1) - j] = _near_cell_average(kernel, -j, h, source)
    vals[m - 1] = _diag_cell_average(kernel, h, source)
    u_far = math.exp((m - 1) * h)
    far_coef = vals[-1] * u_far ** (kernel.params.n - kernel.params.alpha)
    table = AngularWeightTable(h=h, m=m, values=vals, far_coefficient=far_coef)
    _TABLE_CACHE[key] = table
    return table


# ---------------------------------------------------------------------------
# radial convolution
# ---------------------------------------------------------------------------

def _uniform_log_step(grid: np.ndarray) -> float:
    t = np.log(grid)
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-8, atol=1e-12):
        raise DomainError("radial convolution needs a uniform-in-log grid")
    return float(dt[0])


def radial_convolve(f: RadialFunction, kernel: KernelSpec,
                    source: str = "scalar", band: int = 4,
                    tail_exponent_out: Optional[float] = None) -> RadialFunction:
    """T_g f on the grid of f, for rotation-equivariant (kernel, source).

    source='scalar': scalar kernel with constant angular part on a radial
    profile.  source='radial_vector': vector kernel on f(y) = (y/|y|) h(|y|)
    with h stored as the (scalar) values of f.  Output carries the generic
    homogeneous tail exponent alpha - n.
    """
    p = kernel.params
    if kernel.kind != "homogeneous":
        raise DomainError("radial convolution expects a homogeneous kernel")
    if p.alpha <= 0:
        raise NonIntegrableKernel("kernel order must be positive")
    if f.is_vector:
        raise DomainError("store radial-vector fields as scalar profiles and "
                          "pass source='radial_vector'")
    if source == "scalar" and not kernel.is_constant_angular:
        raise DomainError("non-constant angular parts give non-radial potentials; "
                          "use the cartesian engine")
    if source == "radial_vector" and not kernel.is_vector:
        raise DomainError("radial-vector sources need a vector kernel")

    h = _uniform_log_step(f.grid)
    m = f.grid.size
    table = angular_weight_table(kernel, h, m, source=source, band=band)
    weights = trapezoid_weights_log(f.grid) * f.grid ** (p.n - 1) * f.values
    corr = fftconvolve(weights, table.values[::-1], mode="full")[m - 1: 2 * m - 1]
    # FFT roundoff is absolute on the global product scale, so rows whose
    # true answer sits near or below that floor come out as noise; recompute
    # them by direct summation, where roundoff stays relative to the row's
    # own terms.
    nz = np.nonzero(weights)[0]
    if nz.size:
        noise_floor = 64.0 * np.finfo(float).eps * float(np.sum(np.abs(weights))) \
            * float(np.max(np.abs(table.values)))
        suspect = np.nonzero(np.abs(corr) < 1e4 * noise_floor)[0]
        wnz = weights[nz]
        for start in range(0, suspect.size, 256):
            rows = suspect[start: start + 256]
            idx = nz[None, :] - rows[:, None] + (m - 1)
            corr[rows] = np.asarray(table.values)[idx] @ wnz
    vals = f.grid ** (p.alpha - p.n) * corr

    tail = 0.0
    if f.tail_exponent is not None and f.values[-1] != 0.0:
        pt = f.tail_exponent
        if pt + p.alpha >= 0:
            raise UnboundedResult(
                "source tail r^{:+.3g} makes the potential diverge".format(pt))
        tail = table.far_coefficient * float(f.values[-1]) \
            * float(f.grid[-1]) ** p.alpha / (-(pt + p.alpha))
    out_tail = (p.alpha - p.n) if tail_exponent_out is None else tail_exponent_out
    return RadialFunction(f.grid, vals + tail, p.n, tail_exponent=out_tail)


# ---------------------------------------------------------------------------
# cartesian convolution
# ---------------------------------------------------------------------------

def _origin_cell_integral(kernel: KernelSpec, h: float) -> float:
    """Exact-to-quadrature integral of g over the origin-centered cell."""
    n = kernel.params.n
    alpha = kernel.params.alpha
    x64, w64 = np.polynomial.legendre.leggauss(64)
    if n == 2:
        # polar: int a(theta) R(theta)^alpha / alpha, R = half-width / max|cos|,|sin|
        theta = 0.25 * math.pi * (x64 + 1.0) / 2.0  # [0, pi/4]
        wt = 0.25 * math.pi * w64 / 2.0
        r_out = (h / 2.0) / np.cos(theta)
        if kernel.is_constant_angular:
            base = 8.0 * kernel.constant_angular_value / alpha * np.sum(wt * r_out**alpha)
            return float(base)
        total = 0.0
        for k in range(8):  # octants
            phi = theta + k * math.pi / 4.0 if k % 2 == 0 else (k + 1) * math.pi / 4.0 - theta
            omegas = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
            avals = np.asarray(kernel.angular(omegas), dtype=float)
            total += np.sum(wt * avals * r_out**alpha) / alpha
        return float(total)
    # n = 3: tensor Gauss-Legendre on the positive octant of the cube
    g32 = np.polynomial.legendre.leggauss(48)
    x = (g32[0] + 1.0) * (h / 4.0)
    w = g32[1] * (h / 4.0)
    xx, yy, zz = np.meshgrid(x, x, x, indexing="ij")
    ww = w[:, None, None] * w[None, :, None] * w[None, None, :]
    rr = np.sqrt(xx**2 + yy**2 + zz**2)
    if not kernel.is_constant_angular:
        raise DomainError("cartesian origin-cell average in 3-D supports "
                          "constant angular parts")
    return float(8.0 * kernel.constant_angular_value
                 * np.sum(ww * rr ** (alpha - 3.0)))


def cartesian_convolve(f: CartesianField, kernel: KernelSpec) -> CartesianField:
    """Discrete convolution by FFT with 2x zero padding.

    The kernel sample at zero displacement is replaced by its exact cell
    average; with the source supported inside the box, displacements never
    exceed the padded range, so no additional far-field term enters values
    inside the box.
    """
    p = kernel.params
    if kernel.kind != "homogeneous" or kernel.is_vector:
        raise DomainError("cartesian engine supports scalar homogeneous kernels")
    if f.n != p.n:
        raise DomainError("field and kernel dimensions differ")
    h = f.h
    res = f.resolution
    offsets = (np.arange(2 * res - 1) - (res - 1)) * h
    grids = np.meshgrid(*([offsets] * f.n), indexing="ij")
    r = np.sqrt(sum(g**2 for g in grids))
    center = tuple([res - 1] * f.n)
    r[center] = 1.0
    if kernel.is_constant_angular:
        kv = kernel.constant_angular_value * r ** (p.alpha - p.n)
    else:
        stacked = np.stack([g / r for g in grids], axis=-1)
        avals = np.asarray(kernel.angular(stacked.reshape(-1, f.n))).reshape(r.shape)
        kv = avals * r ** (p.alpha - p.n)
    kv[center] = _origin_cell_integral(kernel, h) / h**f.n

    # coarseness check: cell-average correction at distance 3h must be small
    probe = np.zeros(f.n)
    probe[0] = 3.0 * h
    naive = (kernel.constant_angular_value if kernel.is_constant_angular else 1.0) \
        * (3.0 * h) ** (p.alpha - p.n)
    x8, w8 = np.polynomial.legendre.leggauss(8)
    pts = probe[0] + (h / 2.0) * x8
    if f.n == 2:
        xx, yy = np.meshgrid(pts, (h / 2.0) * x8, indexing="ij")
        ww = np.outer(w8, w8) * (h / 2.0) ** 2
        avg = np.sum(ww * np.sqrt(xx**2 + yy**2) ** (p.alpha - p.n)) / h**2
        avg *= kernel.constant_angular_value if kernel.is_constant_angular else 1.0
    else:
        avg = naive
    if abs(avg - naive) > 0.1 * abs(naive):
        raise ResolutionTooCoarse(
            f"kernel cell-average correction at 3h is {abs(avg - naive) / abs(naive):.2%}")

    conv = fftconvolve(f.values, kv, mode="full")
    sl = tuple([slice(res - 1, 2 * res - 1)] * f.n)
    return CartesianField(f.n, f.extent, conv[sl] * h**f.n)


# ---------------------------------------------------------------------------
# far field by even-moment expansion
# ---------------------------------------------------------------------------

def gegenbauer_sphere_means(n: int, alpha: float, jmax: int) -> np.ndarray:
    """S_{2j} = integral over S^{n-1} of C_{2j}^{lambda}(omega_1), lambda=(n-a)/2.

    These are the even coefficients of the expansion of the angular slice
    W-hat(u) = sum_j S_{2j} u^{2j} for u < 1 (constant angular part).
    """
    from scipy.special import eval_gegenbauer, roots_jacobi
    lam = (n - alpha) / 2.0
    deg = 2 * jmax + 8
    x, w = roots_jacobi(deg, (n - 3) / 2.0, (n - 3) / 2.0)
    out = np.empty(jmax + 1)
    for j in range(jmax + 1):
        out[j] = sphere_area(n - 1) * float(np.sum(w * eval_gegenbauer(2 * j, lam, x)))
    return out


def far_field_from_moments(kernel: KernelSpec, even_moments: np.ndarray,
                           r: np.ndarray, support_radius: float = 1.0) -> np.ndarray:
    """T(r) = a r^{a-n} sum_j S_{2j} r^{-2j} M_{2j} for r > support radius.

    even_moments[j] = integral of phi(rho) rho^{2j + n - 1} d rho.  This is
    the numerically clean way to evaluate potentials of moment-cancelled
    profiles far from their support, where direct quadrature is all noise.
    """
    if not kernel.is_constant_angular:
        raise DomainError("moment far field implemented for constant angular parts")
    p = kernel.params
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r <= support_radius):
        raise DomainError("far field valid outside the support radius only")
    jmax = len(even_moments) - 1
    s2j = gegenbauer_sphere_means(p.n, p.alpha, jmax)
    acc = np.zeros_like(r)
    for j in range(jmax + 1):
        acc += s2j[j] * even_moments[j] * r ** (-2 * j)
    out = kernel.constant_angular_value * r ** (p.alpha - p.n) * acc
    return out if out.size > 1 else float(out[0])


# ---------------------------------------------------------------------------
# regularity probes
# ---------------------------------------------------------------------------

def ball_average(tf: RadialFunction, center_radius: float, p: float,
                 ball_radius: float = 1.0, order: int = 48) -> float:
    """Mean of |Tf|^p over the ball of given radius centered at distance
    center_radius from the origin, for radial Tf."""
    n = tf.n
    x, w = np.polynomial.legendre.leggauss(order)
    s = 0.5 * ball_radius * (x + 1.0)
    ws = 0.5 * ball_radius * w
    theta = 0.5 * math.pi * (x + 1.0)
    wt = 0.5 * math.pi * w
    ss, tt = np.meshgrid(s, theta, indexing="ij")
    radii = np.sqrt(center_radius**2 + ss**2 + 2.0 * center_radius * ss * np.cos(tt))
    vals = np.abs(tf.interp(radii)) ** p
    if n == 2:
        inner = np.sum(vals * wt[None, :], axis=1) * 2.0  # symmetric in angle
        total = np.sum(ws * s * inner)
        return float(total / (math.pi * ball_radius**2))
    inner = np.sum(vals * np.sin(tt) * wt[None, :], axis=1) * 2.0 * math.pi
    total = np.sum(ws * s**2 * inner)
    return float(total / (4.0 / 3.0 * math.pi * ball_radius**3))


def lipschitz_probe(f: RadialFunction, kernel: KernelSpec, case: str,
                    R: float = 2.0, pairs: int = 200, rng=None) -> dict:
    """Empirical Lipschitz ratios of T_g f on a probe set.

    case 'separated': supp f of measure <= 1, probe set at distance >= R.
    case 'far_support': supp f outside B_{2R}, probes inside B_R.
    case 'bounded': |f| <= 1, probes anywhere; ratios measured against
      (1 + ||f||) min(|dx|^alpha, |dx|), and for alpha = 1 also against
      |dx| (1 + log+ 1/|dx|).
    Returns the maximal observed ratio as 'empirical_D'.
    """
    p = kernel.params
    rng = np.random.default_rng(rng)
    mag = f.magnitude()
    supp = f.grid[mag > 0]
    if supp.size == 0:
        return {"empirical_D": 0.0, "ratios": np.zeros(0)}
    supp_lo, supp_hi = float(supp[0]), float(supp[-1])
    norm = lp_norm(f, p.p_crit)
    tf = radial_convolve(f, kernel)

    if case == "separated":
        from .constants import ball_volume
        if ball_volume(p.n) * supp_hi**p.n > 1.0 + 1e-9:
            raise GeometryViolated("support measure exceeds 1")
        if R < 1.0:
            raise GeometryViolated("separation distance must be >= 1")
        lo, hi = supp_hi + R, supp_hi + R + 2.0
        denom_scale = norm / R
    elif case == "far_support":
        if supp_lo < 2.0 * R - 1e-9:
            raise GeometryViolated("support must avoid B_{2R}")
        lo, hi = f.grid[0], R
        denom_scale = norm / R
    elif case == "bounded":
        if np.max(mag) > 1.0 + 1e-9:
            raise GeometryViolated("bounded case needs |f| <= 1")
        lo, hi = f.grid[0], min(2.0 * supp_hi, f.grid[-1])
        denom_scale = 1.0 + norm
    else:
        raise DomainError(f"unknown probe case {case!r}")

    r1 = np.exp(rng.uniform(math.log(lo), math.log(hi), pairs))
    r2 = np.exp(rng.uniform(math.log(lo), math.log(hi), pairs))
    keep = np.abs(r1 - r2) > 1e-9
    r1, r2 = r1[keep], r2[keep]
    num = np.abs(tf.interp(r1) - tf.interp(r2))
    dx = np.abs(r1 - r2)
    if case == "bounded":
        denom = denom_scale * np.minimum(dx**p.alpha, dx)
    else:
        denom = denom_scale * dx
    ratios = num / denom
    result = {"empirical_D": float(np.max(ratios)), "ratios": ratios}
    if case == "bounded" and abs(p.alpha - 1.0) < 1e-12:
        log_denom = denom_scale * dx * (1.0 + np.log(np.maximum(1.0 / dx, 1.0)))
        result["empirical_D_log"] = float(np.max(num / log_denom))
    return result
