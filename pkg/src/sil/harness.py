"""Scenario runner: reproduces each boundedness/blow-up dichotomy at desk
scale, with JSON persistence and deterministic seeded ensembles.

Verdict rules (documented cutoffs; the underlying dichotomies are asymptotic):
  divergent      last-to-first functional ratio > 1e3 with positive slope
  bounded        ratio < 10 across the sweep
  rate_confirmed fitted rate matches its predicted exponent within the
                 scenario's stated tolerance
  violated       an inequality that must hold failed beyond tolerance
  inconclusive   the verdict flipped when recomputed at half resolution
Every verdict is recomputed at half resolution; a flip downgrades it.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from . import __version__
from .constants import riesz_normalization, sphere_area
from .errors import ConfigError, SilError
from .extremals import (adams_family, attach_potential, dilated_family,
                        gradient_norm_pth, hyperbolic_log_family,
                        moser_log_family, normalize_ruf)
from .functionals import Domain, FunctionalSpec, holder_split_inequality, \
    mt_functional, shifted_functional_bounds
from .grids import RadialFunction, log_grid
from .kernels import (bessel_kernel, bessel_kernel_spec,
                      hyperbolic_h2_exact, riesz_kernel)
from .measures import singular_measure
from .oneil import (garsia_integral, kernel_profile, oneil_rhs,
                    state_from_phi)
from .params import Params
from .potentials import radial_convolve
from .rearrange import decreasing_rearrangement, regularization_sandwich

SCHEMA_VERSION = 1

DEFAULT_SWEEPS = {
    # the blow-up driver needs the asymptotic regime: the families carry an
    # O(1) normalization deficit that masks the rate until log(1/eps) ~ 10
    "ruf_sharp": [1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4],
    "ruf_supercritical": [1e-1, 1e-2, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6],
    # theta low enough that log(1/eps) clears the family's O(1) deficit
    "adachi_rate": [0.92, 0.95, 0.97, 0.98, 0.99, 0.995],
    "trace_sharp": [1e-1, 1e-2, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6],
    "hyperbolic": [1e-1, 3e-2, 1e-2, 3e-3, 1e-3],
    "bessel": [],
    "oneil_garsia": [],
    "lemma_suite": [1e-1, 1e-2, 1e-3],
}

# eps window for rate fits: below this the driver has shed its preasymptotic
# drift (the deficit is constant, so the local slope converges like 1/L)
RATE_FIT_EPS_MAX = 1.1e-3


@dataclass
class Scenario:
    """One experiment: a named dichotomy, its parameters, and a sweep."""

    id: str
    params: Params
    sweep: List[float] = field(default_factory=list)
    seed: int = 0
    delta: float = 0.25
    q: float = 2.0
    resolution: int = 400  # radial nodes per decade
    kernel_scale: float = 1.0

    def __post_init__(self):
        if self.id not in DEFAULT_SWEEPS:
            raise ConfigError(f"unknown scenario id {self.id!r}")
        if not self.sweep:
            self.sweep = list(DEFAULT_SWEEPS[self.id])
        if self.sweep != sorted(self.sweep) and self.sweep != sorted(self.sweep, reverse=True):
            raise ConfigError("sweep must be monotone")


@dataclass
class ScenarioResult:
    scenario: str
    points: List[dict]
    fit: dict
    verdict: str
    provenance: dict

    def to_json(self) -> str:
        payload = {
            "schema": SCHEMA_VERSION,
            "scenario": self.scenario,
            "points": self.points,
            "fit": self.fit,
            "verdict": self.verdict,
            "provenance": self.provenance,
        }
        return json.dumps(payload, sort_keys=True, indent=1)


def _fit_slope(x: np.ndarray, y: np.ndarray) -> dict:
    if len(x) < 2:
        return {"slope": 0.0, "intercept": 0.0, "residual": 0.0}
    coef = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((np.polyval(coef, x) - y) ** 2)))
    return {"slope": float(coef[0]), "intercept": float(coef[1]), "residual": resid}


def _config_hash(payload: dict) -> str:
    clean = {k: v for k, v in payload.items() if k != "timestamp"}
    return hashlib.sha256(json.dumps(clean, sort_keys=True).encode()).hexdigest()[:16]


def _provenance(sc: Scenario) -> dict:
    cfg = {"id": sc.id, "n": sc.params.n, "alpha": sc.params.alpha,
           "q": None if math.isinf(sc.q) else sc.q, "sigma": sc.params.sigma,
           "sweep": sc.sweep, "seed": sc.seed, "delta": sc.delta,
           "resolution": sc.resolution, "version": __version__}
    cfg["config_hash"] = _config_hash(cfg)
    cfg["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return cfg


# ---------------------------------------------------------------------------
# family sweep shared by the Ruf/trace scenarios
# ---------------------------------------------------------------------------

def _psi_sweep(sc: Scenario, coefficient_scale: float,
               measure=None) -> List[dict]:
    """Normalized-family sweep: exponential functional over B_1 at
    coefficient_scale / A_g, plus the center blow-up driver diagnostics."""
    p = sc.params
    kernel = riesz_kernel(p)
    a_g = sphere_area(p.n) / p.n
    n_a_g = p.n * a_g
    gamma = coefficient_scale / a_g
    points = []
    for eps in sc.sweep:
        fam = attach_potential(adams_family(kernel, eps,
                                            per_decade=sc.resolution))
        psi = normalize_ruf(fam)
        spec = FunctionalSpec.sharp(p, gamma, Domain.ball(1.0), measure=measure)
        value = mt_functional(psi.potential, spec)
        ell = math.log(1.0 / psi.eps)
        j = int(np.argmin(np.abs(psi.potential.grid - psi.eps / 3.0)))
        center_pow = float(np.abs(psi.potential.values[j])) ** p.beta
        if measure is None:
            ball_mass = (sphere_area(p.n) / p.n) * (psi.eps / 3.0) ** p.n
        else:
            ball_mass = measure.ball_mass_origin(psi.eps / 3.0)
        center_driver = math.log(ball_mass) + gamma * center_pow
        points.append({
            "eps": psi.eps, "log_inv_eps": ell,
            "functional": value.value, "log_functional": value.log_value,
            "ruf_norm": (psi.norm_pth_power + psi.potential_norm_pth)
            ** (p.alpha / p.n),
            "profile_norm_pth": fam.norm_pth_power,
            "center_exponent": center_pow,
            "center_driver_log": center_driver,
            "n_a_g_log": n_a_g * ell,
        })
    return points


def _run_ruf_sharp(sc: Scenario) -> ScenarioResult:
    points = _psi_sweep(sc, 1.0)
    vals = np.array([pt["functional"] for pt in points])
    ratio = float(np.max(vals) / np.min(vals))
    fit = _fit_slope(np.array([pt["log_inv_eps"] for pt in points]),
                     np.log(vals))
    fit["ratio"] = ratio
    norms_ok = all(abs(pt["ruf_norm"] - 1.0) < 1e-6 for pt in points)
    verdict = "bounded" if (ratio < 10.0 and norms_ok) else "violated"
    return ScenarioResult(sc.id, points, fit, verdict, _provenance(sc))


def _run_ruf_supercritical(sc: Scenario) -> ScenarioResult:
    points = _psi_sweep(sc, 1.0 + sc.delta)
    p = sc.params
    ell = np.array([pt["log_inv_eps"] for pt in points])
    eps = np.array([pt["eps"] for pt in points])
    vals = np.array([pt["functional"] for pt in points])
    driver = np.array([pt["center_driver_log"] for pt in points])
    fit = _fit_slope(ell, np.log(vals))
    tail = eps <= RATE_FIT_EPS_MAX
    driver_fit = _fit_slope(ell[tail], driver[tail])
    target = sc.delta * p.n
    fit["ratio"] = float(np.max(vals) / np.min(vals))
    fit["driver_ratio"] = float(math.exp(np.max(driver[tail])
                                         - np.min(driver[tail])))
    fit["driver_slope"] = driver_fit["slope"]
    fit["driver_target"] = target
    monotone = bool(np.all(np.diff(vals[np.argsort(ell)]) > 0))
    rate_ok = abs(driver_fit["slope"] - target) <= 0.2 * target
    if fit["ratio"] > 1e3 and fit["slope"] > 0:
        verdict = "divergent"
    elif rate_ok and monotone:
        verdict = "rate_confirmed"
    else:
        verdict = "violated"
    return ScenarioResult(sc.id, points, fit, verdict, _provenance(sc))


def _run_trace_sharp(sc: Scenario) -> ScenarioResult:
    p = sc.params
    nu = singular_measure(p.n, p.sigma)
    sharp_points = _psi_sweep(sc, p.sigma, measure=nu)
    super_points = _psi_sweep(sc, p.sigma * (1.0 + sc.delta), measure=nu)
    ell = np.array([pt["log_inv_eps"] for pt in super_points])
    eps = np.array([pt["eps"] for pt in super_points])
    driver = np.array([pt["center_driver_log"] for pt in super_points])
    tail = eps <= RATE_FIT_EPS_MAX
    driver_fit = _fit_slope(ell[tail], driver[tail])
    target = p.sigma * sc.delta * p.n
    sharp_vals = np.array([pt["functional"] for pt in sharp_points])
    ratio_sharp = float(np.max(sharp_vals) / np.min(sharp_vals))
    vals = np.array([pt["functional"] for pt in super_points])
    fit = {"driver_slope": driver_fit["slope"], "driver_target": target,
           "sharp_ratio": ratio_sharp,
           "super_ratio": float(np.max(vals) / np.min(vals))}
    driver_monotone = bool(np.all(np.diff(driver[np.argsort(ell)][tail[np.argsort(ell)]]) > 0))
    ok = abs(driver_fit["slope"] - target) <= 0.2 * target \
        and ratio_sharp < 10.0 and driver_monotone
    verdict = "rate_confirmed" if ok else "violated"
    points = [{"kind": "sharp", **pt} for pt in sharp_points] \
        + [{"kind": "supercritical", **pt} for pt in super_points]
    return ScenarioResult(sc.id, points, fit, verdict, _provenance(sc))


def _run_adachi_rate(sc: Scenario) -> ScenarioResult:
    """Dilation-coupled families: the reverse-bound window integral grows
    like (1-theta)^{-1/q'}.

    The measured log-LHS carries an exactly-known preasymptotic term
    proportional to (1 - theta) from the O(1) normalization deficit, so the
    rate is extracted by regression on {x, 1, e^{-x}}, x = log 1/(1-theta);
    the plain two-parameter slope is reported alongside.

    At q = inf the coupling makes both paired norms scale like r^n, and for
    the unit kernel their constants nearly tie; a scaled kernel separates
    the branches so the profile norm dominates throughout the sweep (the
    rate statement holds for every admissible kernel).
    """
    p = sc.params
    from .kernels import constant_kernel
    kernel = constant_kernel(p, sc.kernel_scale)
    a_g = sphere_area(p.n) / p.n * sc.kernel_scale**p.beta
    points = []
    from .extremals import coupling_eps
    from .norms import pair_q_norm
    for theta in sc.sweep:
        eps = coupling_eps(p.n, sc.q, theta)
        base = attach_potential(adams_family(kernel, eps,
                                             per_decade=sc.resolution))
        fam = dilated_family(base, sc.q, theta)
        # reverse-bound window: the plateau ball of the dilated family
        window = fam.r_dilation * fam.eps / 3.0
        spec = FunctionalSpec(gamma_coeff=theta / a_g, power=p.beta,
                              domain=Domain.ball(window))
        value = mt_functional(fam.potential, spec)
        full = mt_functional(fam.potential,
                             FunctionalSpec(gamma_coeff=theta / a_g,
                                            power=p.beta,
                                            domain=Domain.ball(1.0)))
        qn = pair_q_norm(fam.norm_pth_power ** (1.0 / p.p_crit),
                         fam.potential_norm_pth ** (1.0 / p.p_crit), fam.params)
        points.append({
            "theta": theta, "eps": eps, "r": fam.r_dilation,
            "window": window,
            "log_functional": value.log_value,
            "full_functional": full.value,
            "q_norm": qn,
        })
    x = np.log(1.0 / (1.0 - np.array(sc.sweep)))
    y = np.array([pt["log_functional"] for pt in points])
    design = np.stack([x, np.ones_like(x), np.exp(-x)], axis=1)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    fit = _fit_slope(x, y)
    fit["plain_slope"] = fit["slope"]
    fit["slope"] = float(coef[0])
    fit["deficit_coeff"] = float(coef[2])
    q_conj = 1.0 if math.isinf(sc.q) else sc.q / (sc.q - 1.0)
    fit["target"] = 1.0 / q_conj
    verdict = "rate_confirmed" if abs(fit["slope"] - fit["target"]) <= 0.1 \
        else "violated"
    return ScenarioResult(sc.id, points, fit, verdict, _provenance(sc))


def _run_hyperbolic(sc: Scenario) -> ScenarioResult:
    n = sc.params.n
    per_decade = sc.resolution
    checks = {}
    # exact tail-integral kernel vs closed form (dimension 3)
    rho = np.array([0.3, 0.5, 1.0, 2.0, 4.0])
    numeric = hyperbolic_h2_exact(3, rho)
    closed = (1.0 / np.tanh(rho) - 1.0) / (4.0 * math.pi)
    checks["h2_max_rel_err"] = float(np.max(np.abs(numeric - closed) / closed))
    # local Riesz match at small geodesic radius
    c2 = riesz_normalization(3, 2.0)
    small = 1e-3
    checks["local_match"] = float(hyperbolic_h2_exact(3, small) * small
                                  / c2)
    # decay envelope on [2, 10]
    rho_far = np.linspace(2.0, 10.0, 25)
    h_far = hyperbolic_h2_exact(3, rho_far)
    envelope = h_far / (rho_far ** 0.0 * np.exp(-2.0 * rho_far))
    checks["envelope_ratio_max"] = float(np.max(envelope) / np.min(envelope))
    # log-family gradient coefficient: hyperbolic vs Euclidean
    slopes = {}
    for kind, builder in (("euclidean", moser_log_family),
                          ("hyperbolic", hyperbolic_log_family)):
        ells, norms = [], []
        for eps in sc.sweep:
            fam = builder(n, 1.0, eps, per_decade=per_decade)
            ells.append(math.log(1.0 / eps))
            norms.append(gradient_norm_pth(fam))
        slopes[kind] = _fit_slope(np.array(ells), np.array(norms))["slope"]
    checks["euclidean_slope"] = slopes["euclidean"]
    checks["hyperbolic_slope"] = slopes["hyperbolic"]
    checks["slope_gap"] = abs(slopes["hyperbolic"] - slopes["euclidean"]) \
        / slopes["euclidean"]
    ok = checks["h2_max_rel_err"] < 1e-6 \
        and abs(checks["local_match"] - 1.0) < 0.02 \
        and checks["slope_gap"] < 0.02
    verdict = "rate_confirmed" if ok else "violated"
    return ScenarioResult(sc.id, [checks], checks, verdict, _provenance(sc))


def _run_bessel(sc: Scenario) -> ScenarioResult:
    p = sc.params
    nodes = max(int(4096 * sc.resolution / 400), 512)
    checks = {}
    prof = kernel_profile(bessel_kernel_spec(p),
                          grid=log_grid(1e-5, 60.0, nodes))
    checks["A"] = prof.A
    checks["H"] = prof.H
    checks["J"] = prof.J
    # local agreement with the homogeneous profile
    t = np.array([1e-4, 1e-3, 1e-2])
    riesz_vals = prof.A ** (1 / prof.beta) * t ** (-1 / prof.beta)
    bessel_vals = np.asarray(prof.k1star(t))
    checks["local_profile_gap"] = float(np.max(np.abs(bessel_vals - riesz_vals)
                                               / riesz_vals))
    # normalization: the kernel integrates to 1
    g = log_grid(1e-5, 60.0, nodes)
    vals = bessel_kernel(p.n, p.alpha, g)
    kern = RadialFunction(g, vals, p.n)
    from .norms import lp_norm
    checks["mass"] = lp_norm(kern, 1.0)
    # exponential decay ratio
    checks["decay_ratio"] = float(bessel_kernel(p.n, p.alpha, 11.0)
                                  / bessel_kernel(p.n, p.alpha, 10.0))
    ok = checks["local_profile_gap"] < 0.03 and abs(checks["mass"] - 1.0) < 1e-3 \
        and checks["decay_ratio"] < math.exp(-0.5) and np.isfinite(checks["J"])
    verdict = "bounded" if ok else "violated"
    return ScenarioResult(sc.id, [checks], checks, verdict, _provenance(sc))


def _random_profile(rng, grid: np.ndarray, n: int, support: float = 1.0
                    ) -> RadialFunction:
    """Nonnegative compactly supported random radial profile, built from a
    few random log-normal bumps inside the support ball."""
    t = np.log(grid)
    vals = np.zeros_like(grid)
    for _ in range(rng.integers(2, 5)):
        center = rng.uniform(math.log(support * 1e-3), math.log(support))
        width = rng.uniform(0.2, 1.5)
        height = rng.uniform(0.2, 2.0)
        vals += height * np.exp(-((t - center) / width) ** 2)
    vals[grid > support] = 0.0
    return RadialFunction(grid, vals, n)


def _run_oneil_garsia(sc: Scenario) -> ScenarioResult:
    p = sc.params
    rng = np.random.default_rng(sc.seed)
    kernel = riesz_kernel(p)
    prof = kernel_profile(kernel, truncation_radius=1.0)
    grid = log_grid(1e-6, 1e3, max(int(3000 * sc.resolution / 400), 512))
    checks = {"domination_violations": 0, "f_bound_violations": 0}
    worst_slack = math.inf
    for _ in range(20):
        f = _random_profile(rng, grid, p.n)
        from .norms import lp_norm
        scale = lp_norm(f, p.p_crit)
        f = f.with_values(f.values / scale)
        tf = radial_convolve(f, kernel)
        fs = decreasing_rearrangement(f)
        tfs = decreasing_rearrangement(tf)
        for t in np.exp(rng.uniform(math.log(1e-3), math.log(10.0), 8)):
            lhs = tfs.fstarstar_at(t)
            rhs = oneil_rhs(fs, prof, float(t))
            slack = (rhs - lhs) / max(rhs, 1e-12)
            worst_slack = min(worst_slack, slack)
            if slack < -1e-3:
                checks["domination_violations"] += 1
    checks["worst_slack"] = worst_slack
    # random admissible transformed profiles: lower bound and layer cake
    x = np.linspace(-40.0, 40.0, 2001)
    f_min_margin = math.inf
    layer_gap = 0.0
    for _ in range(20):
        raw = np.abs(rng.normal(size=x.size))
        raw[np.abs(x) > rng.uniform(5.0, 30.0)] = 0.0
        bc = prof.beta / (prof.beta - 1.0)
        nrm = float(np.trapezoid(raw**bc, x)) ** (1.0 / bc)
        phi = raw / nrm * rng.uniform(0.3, 1.0)
        st = state_from_phi(phi, x, prof, p)
        res = garsia_integral(st)
        f_min_margin = min(f_min_margin, res["f_min"] + st.d_star)
        layer_gap = max(layer_gap, abs(res["layer_cake"] - res["integral"])
                        / res["integral"])
    checks["f_min_margin"] = f_min_margin
    checks["layer_cake_gap"] = layer_gap
    if f_min_margin < 0:
        checks["f_bound_violations"] += 1
    ok = checks["domination_violations"] == 0 \
        and checks["f_bound_violations"] == 0 and layer_gap < 0.01
    verdict = "bounded" if ok else "violated"
    return ScenarioResult(sc.id, [checks], checks, verdict, _provenance(sc))


def _run_lemma_suite(sc: Scenario) -> ScenarioResult:
    p = sc.params
    rng = np.random.default_rng(sc.seed)
    checks = {}
    # split inequality, Monte Carlo
    m = 10**6
    a = rng.uniform(0.0, 10.0, m)
    b = rng.uniform(0.0, 10.0, m)
    theta = rng.uniform(0.0, 1.0, m)
    beta = rng.uniform(1.01, 8.0, m)
    lhs, rhs = holder_split_inequality(a, b, theta, beta)
    checks["split_violations"] = int(np.sum(lhs > rhs * (1 + 1e-12) + 1e-12))
    # regularization sandwich on random profiles
    grid = log_grid(1e-6, 1e3, max(int(2000 * sc.resolution / 400), 512))
    sandwich_fail = 0
    for _ in range(50):
        u = _random_profile(rng, grid, p.n)
        from .norms import lp_norm
        u = u.with_values(u.values / max(lp_norm(u, p.p_crit), 1e-9)
                          * rng.uniform(0.2, 1.0))
        try:
            regularization_sandwich(u, rng.uniform(0.5, 2.0), p.p_crit)
        except AssertionError:
            sandwich_fail += 1
    checks["sandwich_violations"] = sandwich_fail
    # additive-shift bounds along the normalized family
    kernel = riesz_kernel(p)
    a_g = sphere_area(p.n) / p.n
    shift_fail = 0
    psis = []
    for eps in sc.sweep:
        fam = attach_potential(adams_family(kernel, eps, per_decade=sc.resolution))
        psis.append(normalize_ruf(fam))
    spec = FunctionalSpec(gamma_coeff=1.0 / a_g, power=p.beta,
                          domain=Domain.ball(1.0))
    c0 = max(mt_functional(ps.potential, spec).value for ps in psis)
    for ps in psis:
        p_f = ps.norm_pth_power ** (p.alpha / p.n)
        for kshift in (0.5, 1.0, 2.0):
            sb = shifted_functional_bounds(ps.potential, kshift, p_f, spec, c0)
            if sb.shifted_a > sb.bound_a * (1 + 1e-9) \
                    or sb.shifted_b > sb.bound_b * (1 + 1e-9):
                shift_fail += 1
    checks["shift_violations"] = shift_fail
    ok = checks["split_violations"] == 0 and sandwich_fail == 0 and shift_fail == 0
    verdict = "bounded" if ok else "violated"
    return ScenarioResult(sc.id, [checks], checks, verdict, _provenance(sc))


_RUNNERS: Dict[str, Callable[[Scenario], ScenarioResult]] = {
    "ruf_sharp": _run_ruf_sharp,
    "ruf_supercritical": _run_ruf_supercritical,
    "adachi_rate": _run_adachi_rate,
    "trace_sharp": _run_trace_sharp,
    "hyperbolic": _run_hyperbolic,
    "bessel": _run_bessel,
    "oneil_garsia": _run_oneil_garsia,
    "lemma_suite": _run_lemma_suite,
}


def run_scenario(sc: Scenario, check_resolution: bool = True) -> ScenarioResult:
    """Execute a scenario; verdicts that flip at half resolution downgrade
    to 'inconclusive'."""
    result = _RUNNERS[sc.id](sc)
    if check_resolution:
        half = Scenario(id=sc.id, params=sc.params, sweep=sc.sweep,
                        seed=sc.seed, delta=sc.delta, q=sc.q,
                        resolution=max(sc.resolution // 2, 50),
                        kernel_scale=sc.kernel_scale)
        redo = _RUNNERS[sc.id](half)
        if redo.verdict != result.verdict:
            result.verdict = "inconclusive"
            result.fit["half_resolution_verdict"] = redo.verdict
    return result


def default_scenarios(seed: int = 0) -> List[Scenario]:
    return [
        Scenario("ruf_sharp", Params(2, 1.0), seed=seed),
        Scenario("ruf_supercritical", Params(2, 1.0), seed=seed),
        Scenario("adachi_rate", Params(2, 1.0, q=2.0), seed=seed, q=2.0,
                 kernel_scale=0.5),
        Scenario("trace_sharp", Params(2, 1.0, sigma=0.5), seed=seed),
        Scenario("hyperbolic", Params(3, 2.0), seed=seed),
        Scenario("bessel", Params(3, 1.0), seed=seed),
        Scenario("oneil_garsia", Params(2, 1.0), seed=seed),
        Scenario("lemma_suite", Params(2, 1.0), seed=seed),
    ]


def parse_config(path: str) -> List[Scenario]:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    seed = int(cfg.get("seed", 0))
    out = []
    for i, entry in enumerate(cfg.get("scenarios", [])):
        try:
            params = Params(n=int(entry.get("n", 2)),
                            alpha=float(entry.get("alpha", 1.0)),
                            q=float(entry["q"]) if "q" in entry and entry["q"]
                            is not None else 1.0,
                            sigma=float(entry.get("sigma", 1.0)))
            scale_default = 0.5 if entry["id"] == "adachi_rate" else 1.0
            out.append(Scenario(
                id=entry["id"], params=params,
                sweep=[float(x) for x in entry.get("sweep", [])],
                seed=int(entry.get("seed", seed)),
                delta=float(entry.get("delta", 0.25)),
                q=float("inf") if entry.get("q") == "inf"
                else float(entry.get("q", 2.0)),
                resolution=int(entry.get("resolution", 400)),
                kernel_scale=float(entry.get("kernel_scale", scale_default))))
        except (KeyError, TypeError, ValueError, SilError) as exc:
            raise ConfigError(f"scenario #{i}: {exc}") from exc
    return out


def run_all(scenarios: List[Scenario], out_dir: Optional[str] = None) -> dict:
    """Run the scenario list; write per-scenario JSON plus an aggregate CSV.

    Returns verdict counts; exit handling belongs to the CLI.
    """
    results = []
    for sc in scenarios:
        results.append(run_scenario(sc))
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        for res in results:
            with open(os.path.join(out_dir, f"{res.scenario}.json"), "w") as fh:
                fh.write(res.to_json())
        with open(os.path.join(out_dir, "summary.csv"), "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["scenario", "verdict"])
            for res in results:
                writer.writerow([res.scenario, res.verdict])
    counts: Dict[str, int] = {}
    for res in results:
        counts[res.verdict] = counts.get(res.verdict, 0) + 1
    return {"counts": counts, "results": results,
            "violations": counts.get("violated", 0)}
