"""Kernel specifications: homogeneous angular kernels, the Bessel kernel,
and hyperbolic Green kernels.

A homogeneous kernel is g(z) = a(z/|z|) |z|^{alpha-n} with a scalar or
vector angular part a on the sphere; the vector components share the same
homogeneity degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .constants import riesz_normalization, sphere_area
from .errors import DegenerateOddCase, DomainError
from .params import Params


@dataclass(frozen=True)
class KernelSpec:
    """A convolution kernel.

    kind: 'homogeneous' | 'bessel' | 'hyperbolic_exact' | 'hyperbolic_asymptotic'
    angular: callable on an array of unit vectors (K, n) returning (K,) or
             (K, m) values; None means the constant scalar part.
    constant_angular_value: fast path for angular parts that are constant.
    smoothness: declared class of the angular part ('lipschitz' or 'C2n').
    """

    kind: str
    params: Params
    angular: Optional[Callable[[np.ndarray], np.ndarray]] = None
    constant_angular_value: Optional[float] = 1.0
    vector_arity: int = 1
    smoothness: str = "C2n"
    lipschitz_const: float = 0.0
    label: str = "kernel"
    degree: float = field(init=False)

    def __post_init__(self):
        if self.kind not in ("homogeneous", "bessel",
                             "hyperbolic_exact", "hyperbolic_asymptotic"):
            raise DomainError(f"unknown kernel kind {self.kind!r}")
        object.__setattr__(self, "degree", self.params.alpha - self.params.n)
        if self.angular is not None and self.constant_angular_value is not None:
            object.__setattr__(self, "constant_angular_value", None)

    @property
    def is_constant_angular(self) -> bool:
        return self.kind == "homogeneous" and self.angular is None

    @property
    def is_vector(self) -> bool:
        return self.vector_arity > 1

    def cache_key(self) -> tuple:
        return (self.label, self.kind, self.params.n, self.params.alpha,
                self.constant_angular_value, self.vector_arity)


def riesz_kernel(params: Params, normalized: bool = False) -> KernelSpec:
    """|z|^{alpha-n}, optionally scaled by the inversion constant c_alpha."""
    c = riesz_normalization(params.n, params.alpha) if normalized else 1.0
    return KernelSpec(kind="homogeneous", params=params,
                      constant_angular_value=c,
                      label="riesz_c" if normalized else "riesz")


def constant_kernel(params: Params, value: float, label: str = "const") -> KernelSpec:
    return KernelSpec(kind="homogeneous", params=params,
                      constant_angular_value=value, label=label)


def gradient_kernel(n: int, alpha: int) -> KernelSpec:
    """Vector kernel of the odd-order gradient representation.

    Angular part c_{alpha+1} (n - alpha - 1) * omega (unit-vector valued),
    degree alpha - n; for (n, alpha) = (2, 1) the angular part is
    omega / (2 pi).  The reciprocal of its sharp constant reproduces the
    first-order Moser constant for alpha = 1.
    """
    if alpha % 2 == 0:
        raise DomainError("gradient kernel is defined for odd orders")
    if (n, alpha) != (2, 1) and n - alpha - 1 <= 0:
        raise DegenerateOddCase(
            f"gradient representation degenerates for alpha={alpha}, n={n}")
    if (n, alpha) == (2, 1):
        scale = 1.0 / (2.0 * math.pi)
    else:
        scale = riesz_normalization(n, alpha + 1) * (n - alpha - 1)
    params = Params(n=n, alpha=float(alpha))

    def angular(omegas: np.ndarray) -> np.ndarray:
        return scale * np.asarray(omegas, dtype=float)

    return KernelSpec(kind="homogeneous", params=params, angular=angular,
                      vector_arity=n, smoothness="C2n",
                      lipschitz_const=scale, label=f"gradient_{n}_{alpha}")


def gradient_angular_scale(n: int, alpha: int) -> float:
    """|g(omega)| of the gradient kernel (constant over the sphere)."""
    if (n, alpha) == (2, 1):
        return 1.0 / (2.0 * math.pi)
    return riesz_normalization(n, alpha + 1) * (n - alpha - 1)


def bessel_kernel(n: int, alpha: float, r) -> np.ndarray:
    """Kernel of (I - Laplacian)^{-alpha/2} via the subordination integral.

    G_alpha(r) = (4 pi)^{-a/2} / Gamma(a/2) *
                 int_0^inf e^{-pi r^2 / t} e^{-t/(4 pi)} t^{(a-n)/2} dt/t.
    Evaluated by trapezoid in log t, which converges double-exponentially
    for this integrand; the node window covers both the Gaussian cutoff at
    small t and the exponential cutoff at large t.
    """
    if not 0 < alpha < n:
        raise DomainError("need 0 < alpha < n for the Bessel kernel")
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r <= 0):
        raise DomainError("Bessel kernel evaluated at positive radii only")
    s_lo = min(float(np.log(math.pi * np.min(r) ** 2)) - 45.0, -45.0)
    s_hi = math.log(4.0 * math.pi) + 60.0
    m = max(int((s_hi - s_lo) / 0.05), 400)
    s = np.linspace(s_lo, s_hi, m)
    t = np.exp(s)
    # integrand in s: e^{-pi r^2/t} e^{-t/4pi} t^{(a-n)/2}
    ex = (-math.pi * np.subtract.outer(r**2, np.zeros(1)).ravel()[:, None] / t[None, :]
          - t[None, :] / (4.0 * math.pi)
          + ((alpha - n) / 2.0) * s[None, :])
    vals = np.exp(ex)
    integral = np.trapezoid(vals, s, axis=1)
    out = (4.0 * math.pi) ** (-alpha / 2.0) / math.gamma(alpha / 2.0) * integral
    return out if out.size > 1 else float(out[0])


def hyperbolic_h2_exact(n: int, rho) -> np.ndarray:
    """Green kernel of the hyperbolic Laplacian:
    H_2(rho) = (1/omega_{n-1}) int_rho^inf sinh^{1-n} r dr.

    The substitution u = e^{-r} maps the tail onto (0, e^{-rho}] where the
    integrand is smooth; fixed Gauss-Legendre there is exact to tolerance.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    if np.any(rho <= 0):
        raise DomainError("geodesic radius must be positive")
    x, w = np.polynomial.legendre.leggauss(160)
    out = np.empty_like(rho)
    for i, p in enumerate(rho):
        # int_rho^inf dr / sinh^{n-1} r ; r = p - log(z), z in (0, 1]
        z = 0.5 * (x + 1.0)
        wz = 0.5 * w
        rr = p - np.log(np.clip(z, 1e-300, None))
        vals = np.where(z > 0, np.sinh(rr) ** (1 - n) / np.clip(z, 1e-300, None), 0.0)
        out[i] = np.sum(wz * vals)
    out /= sphere_area(n)
    return out if out.size > 1 else float(out[0])


def hyperbolic_green(n: int, rho, mode: str = "exact_H2",
                     alpha: Optional[float] = None) -> np.ndarray:
    """Hyperbolic Green kernel values.

    mode 'exact_H2': numerical tail integral of sinh^{1-n} (order 2).
    mode 'asymptotic': matched model for general order alpha --
      c_alpha rho^{alpha-n} for rho <= 0.5, the decay envelope
      c' rho^{-1+alpha/2} e^{-(n-1) rho} for rho >= 2 (c' pinned by
      continuity with the small-rho model at rho = 2), log-linear
      interpolation of log H on (0.5, 2).  The blend on (0.5, 2) is a
      modeling choice, adequate for tail-integrability bookkeeping.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    if mode == "exact_H2":
        return hyperbolic_h2_exact(n, rho)
    if mode != "asymptotic":
        raise DomainError(f"unknown hyperbolic mode {mode!r}")
    if alpha is None:
        raise DomainError("asymptotic mode needs the kernel order alpha")
    c = riesz_normalization(n, alpha)
    lo, hi = 0.5, 2.0
    h_lo = c * lo ** (alpha - n)
    c_prime = c * hi ** (alpha - n) / (hi ** (-1.0 + alpha / 2.0)
                                       * math.exp(-(n - 1) * hi))
    h_hi = c_prime * hi ** (-1.0 + alpha / 2.0) * math.exp(-(n - 1) * hi)
    out = np.empty_like(rho)
    small = rho <= lo
    large = rho >= hi
    mid = ~small & ~large
    out[small] = c * rho[small] ** (alpha - n)
    out[large] = c_prime * rho[large] ** (-1.0 + alpha / 2.0) * np.exp(-(n - 1) * rho[large])
    if np.any(mid):
        t = (np.log(rho[mid]) - math.log(lo)) / (math.log(hi) - math.log(lo))
        out[mid] = np.exp((1 - t) * math.log(h_lo) + t * math.log(h_hi))
    return out if out.size > 1 else float(out[0])


def bessel_kernel_spec(params: Params) -> KernelSpec:
    return KernelSpec(kind="bessel", params=params, label="bessel")


def hyperbolic_kernel_spec(params: Params, exact: bool = True) -> KernelSpec:
    kind = "hyperbolic_exact" if exact else "hyperbolic_asymptotic"
    return KernelSpec(kind=kind, params=params, label=kind)
