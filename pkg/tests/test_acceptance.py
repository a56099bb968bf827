"""Acceptance suite: one test per criterion, executed at its stated
tolerance, printing one PASS/FAIL line each.

Three sub-checks (6a norm-slope window, 7 supercritical growth/slope, 9
supercritical rate) assert rates over the eps window [1e-4, 1e-1] where the
saturating families still carry their O(1) normalization deficit; the
asymptotic rates are confirmed in the scenario harness on deeper sweeps,
and the analysis lives in the reviewer notes.  Those asserts are expected
to fail and are left red deliberately.
"""

import math

import numpy as np

from sil.constants import (ball_volume, kernel_sharp_constant,
                           riesz_normalization, sharp_gamma)
from sil.extremals import (adams_family, attach_potential, dilated_family,
                           coupling_eps, gradient_norm_pth,
                           hyperbolic_log_family, moser_log_family,
                           normalize_ruf)
from sil.functionals import (Domain, FunctionalSpec, holder_split_inequality,
                             mt_functional, shifted_functional_bounds)
from sil.grids import (CartesianField, RadialFunction, anchored_log_grid,
                       indicator_values, log_grid)
from sil.kernels import (constant_kernel, hyperbolic_h2_exact, riesz_kernel)
from sil.measures import singular_measure
from sil.norms import lp_norm
from sil.oneil import (dual_path_values, garsia_integral, kernel_profile,
                       oneil_rhs, state_from_phi)
from sil.params import Params
from sil.potentials import cartesian_convolve, radial_convolve
from sil.rearrange import (decreasing_rearrangement, rearrangement_value,
                           regularization_sandwich)

P2 = Params(2, 1.0)
K2 = riesz_kernel(P2)
EPS_SWEEP = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4]

_FAMILY_CACHE = {}


def psi_family(eps):
    if eps not in _FAMILY_CACHE:
        _FAMILY_CACHE[eps] = normalize_ruf(attach_potential(
            adams_family(K2, eps)))
    return _FAMILY_CACHE[eps]


def report(num, label, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"criterion {num:>3}: {status}  {label}  {detail}")
    return ok


def random_source(rng, grid, n=2, support=1.0):
    t = np.log(grid)
    vals = np.zeros_like(grid)
    for _ in range(rng.integers(2, 5)):
        c = rng.uniform(math.log(support * 1e-3), math.log(support))
        vals += rng.uniform(0.2, 2.0) * np.exp(
            -((t - c) / rng.uniform(0.2, 1.5)) ** 2)
    vals[grid > support] = 0.0
    f = RadialFunction(grid, vals, n)
    return f.with_values(f.values / lp_norm(f, 2.0))


def test_criterion_1_constants():
    ok = True
    ok &= abs(sharp_gamma(2, 1) - 4 * math.pi) <= 1e-10 * 4 * math.pi
    ok &= abs(sharp_gamma(4, 2) - 32 * math.pi**2) <= 1e-10 * 32 * math.pi**2
    a_g = kernel_sharp_constant(constant_kernel(P2, 1.0))
    ok &= abs(a_g - ball_volume(2)) <= 1e-10 * ball_volume(2)
    cross = abs(sharp_gamma(3, 1) - 6 * math.sqrt(math.pi))
    ok &= cross <= 1e-12 * 6 * math.sqrt(math.pi)
    assert report(1, "sharp constants", ok,
                  f"gamma(3,1) residual {cross:.2e}")


def test_criterion_2_potential_accuracy():
    bump = lambda r: np.exp(-1.0 / np.clip(1 - r**2, 1e-12, None)) * (r < 1)
    f2 = CartesianField.from_callable(
        lambda x, y: bump(np.hypot(x, y)), 2, 2.0, 512)
    tf2 = cartesian_convolve(f2, K2)
    g = log_grid(1e-6, 1e3, 4096)
    tfr = radial_convolve(RadialFunction(g, bump(g), 2), K2)
    rad = f2.radii()
    mask = (rad > 0.05) & (rad < 1.9)
    gap = float(np.max(np.abs(tf2.values[mask] - tfr.interp(rad[mask]))
                       / np.max(np.abs(tfr.interp(rad[mask])))))
    ga = anchored_log_grid(1.0, 1e-6, 1e3)
    k3 = riesz_kernel(Params(3, 2.0))
    tf3 = radial_convolve(RadialFunction(ga, indicator_values(ga, 1.0), 3), k3)
    sel = ga >= 1.0
    shell_gap = float(np.max(np.abs(
        tf3.values[sel] - (4 * math.pi / 3) / ga[sel])
        / ((4 * math.pi / 3) / ga[sel])))
    ok = gap <= 1e-2 and shell_gap <= 1e-3
    assert report(2, "engine agreement / shell oracle", ok,
                  f"cartesian gap {gap:.2e}, shell gap {shell_gap:.2e}")


def test_criterion_3_dilation_identities():
    rng = np.random.default_rng(17)
    g = log_grid(1e-6, 1e3, 4096)
    worst = 0.0
    for _ in range(10):
        lam = float(np.exp(rng.uniform(-1.2, 1.2)))
        c = rng.uniform(-1.0, 0.5)
        w = rng.uniform(0.3, 1.0)
        f = RadialFunction(g, np.exp(-((np.log(g) - c) / w) ** 2) * (g < 3), 2)
        f_lam = RadialFunction(g / lam, lam * f.values, 2)
        gap1 = abs(lp_norm(f_lam, 2.0) - lp_norm(f, 2.0)) / lp_norm(f, 2.0)
        tf = radial_convolve(f, K2)
        tf_lam = radial_convolve(f_lam, K2)
        sample = np.exp(np.linspace(math.log(1e-2), math.log(10.0), 20))
        gap2 = float(np.max(np.abs(tf_lam.interp(sample / lam)
                                   - tf.interp(sample))
                            / np.max(np.abs(tf.interp(sample)))))
        R = 100.0
        cut = RadialFunction(tf_lam.grid,
                             np.where(tf_lam.grid <= R, tf_lam.values, 0.0), 2)
        ref = RadialFunction(tf.grid,
                             np.where(tf.grid <= lam * R, tf.values, 0.0), 2)
        gap3 = abs(lp_norm(cut, 2.0) ** 2
                   - lam**-2 * lp_norm(ref, 2.0) ** 2) \
            / (lam**-2 * lp_norm(ref, 2.0) ** 2)
        worst = max(worst, gap1, gap2, gap3)
    ok = worst <= 1e-3
    assert report(3, "dilation identities", ok, f"worst gap {worst:.2e}")


def test_criterion_4_rearrangement():
    rng = np.random.default_rng(23)
    g = log_grid(1e-6, 1e3, 4096)
    worst_eq = 0.0
    for _ in range(8):
        f = random_source(rng, g)
        prof = decreasing_rearrangement(f)
        for p in (1.0, 2.0, 4.0):
            lhs = prof.p_norm_pth_power(p)
            rhs = lp_norm(f, p) ** p
            worst_eq = max(worst_eq, abs(lhs - rhs) / rhs)
    kern = RadialFunction(g, indicator_values(g, 1.0) / g, 2)
    worst_k = max(
        abs(rearrangement_value(kern, t) - math.sqrt(math.pi / t))
        / math.sqrt(math.pi / t)
        for t in (1e-3, 1e-2, 0.1, 1.0, 3.0))
    ok = worst_eq <= 1e-6 and worst_k <= 1e-3
    assert report(4, "rearrangement", ok,
                  f"equimeasurability {worst_eq:.2e}, inversion {worst_k:.2e}")


def test_criterion_5_oneil_domination():
    rng = np.random.default_rng(31)
    prof = kernel_profile(K2, truncation_radius=1.0)
    g = log_grid(1e-6, 1e3, 3000)
    violations = 0
    worst = math.inf
    for _ in range(50):
        f = random_source(rng, g)
        tf = radial_convolve(f, K2)
        fs = decreasing_rearrangement(f)
        tfs = decreasing_rearrangement(tf)
        ts = np.exp(rng.uniform(math.log(1e-3), math.log(10.0), 20))
        rhs = np.array([oneil_rhs(fs, prof, float(t)) for t in ts])
        lhs = np.array([tfs.fstarstar_at(float(t)) for t in ts])
        slack = (rhs - lhs) / np.maximum(rhs, 1e-12)
        worst = min(worst, float(np.min(slack)))
        violations += int(np.sum(slack < -1e-3))
    ok = violations == 0
    assert report(5, "convolution majorant domination", ok,
                  f"violations {violations}, worst slack {worst:+.2e}")


def test_criterion_6_extremal_asymptotics():
    # 6b first: far-field shell max uniform in eps (factor <= 3)
    r = np.exp(np.linspace(math.log(3.0), math.log(30.0), 50))
    sups = []
    for eps in (1e-1, 1e-2, 1e-3, 1e-4):
        fam = psi_family(eps)
        sups.append(float(np.max(np.abs(fam.far_field(r)) * r**4)))
    far_ok = max(sups) <= 3.0 * min(sups)
    report("6b", "far-field uniformity", far_ok,
           f"variation {max(sups) / min(sups):.2f}x")
    assert far_ok

    # 6a: norm slope over the full stated window; the O(1) drift of the
    # projection keeps the window fit ~12% below n A_g (reviewer notes),
    # while the small-eps local slope does converge to n A_g within 1%
    ells, norms = [], []
    for eps in EPS_SWEEP:
        fam = psi_family(eps)
        ells.append(math.log(1.0 / fam.eps))
        norms.append(fam.norm_pth_power * fam.normalization**2)
    slope = float(np.polyfit(ells, norms, 1)[0])
    target = 2 * math.pi
    local = (norms[-1] - norms[-2]) / (ells[-1] - ells[-2])
    ok = abs(slope - target) <= 0.01 * target
    report("6a", "norm slope over [1e-4, 1e-1]", ok,
           f"fit {slope:.4f} vs {target:.4f} "
           f"({(slope - target) / target:+.1%}); "
           f"local slope at the small end {local:.4f} "
           f"({(local - target) / target:+.1%})")
    assert ok


def _supercritical_sweep():
    delta = 0.25
    gamma = (1.0 + delta) / math.pi
    vals, ells = [], []
    for eps in EPS_SWEEP:
        fam = psi_family(eps)
        spec = FunctionalSpec.sharp(P2, gamma, Domain.ball(1.0))
        vals.append(mt_functional(fam.potential, spec).value)
        ells.append(math.log(1.0 / fam.eps))
    return np.array(ells), np.array(vals)


def test_criterion_7_sharp_dichotomy_bounded_side():
    vals = []
    for eps in EPS_SWEEP:
        fam = psi_family(eps)
        spec = FunctionalSpec.sharp(P2, 1.0 / math.pi, Domain.ball(1.0))
        vals.append(mt_functional(fam.potential, spec).value)
    ratio = max(vals) / min(vals)
    ok = ratio < 10.0
    assert report("7s", "sharp-coefficient stability", ok,
                  f"variation {ratio:.3f}x")


def test_criterion_7_sharp_dichotomy_supercritical():
    # growth >= 1e3 with slope delta*n +- 20% over eps in [1e-4, 1e-1]:
    # the bulk plateau masks the center driver until eps ~ 1e-12, so the
    # criterion as stated fails; the asymptotic rate is confirmed by the
    # scenario harness on the deeper sweep (see reviewer notes)
    ells, vals = _supercritical_sweep()
    growth = float(vals[-1] / vals[0])
    slope = float(np.polyfit(ells, np.log(vals), 1)[0])
    monotone = bool(np.all(np.diff(vals) > 0))
    target = 0.25 * 2
    ok = growth >= 1e3 and abs(slope - target) <= 0.2 * target and monotone
    assert report(7, "supercritical growth/rate over [1e-4, 1e-1]", ok,
                  f"growth {growth:.2f}x (need 1e3), slope {slope:.3f} "
                  f"vs {target} +-20%, monotone={monotone}")


def test_criterion_8_adachi_rate():
    thetas = [0.92, 0.95, 0.97, 0.98, 0.99, 0.995]
    results = {}
    for q in (2.0, math.inf):
        kernel = constant_kernel(Params(2, 1.0, q=q), 0.5)
        a_g = kernel_sharp_constant(kernel)
        logs = []
        for theta in thetas:
            eps = coupling_eps(2, q, theta)
            base = attach_potential(adams_family(kernel, eps))
            fam = dilated_family(base, q, theta)
            window = fam.r_dilation * fam.eps / 3.0
            spec = FunctionalSpec(gamma_coeff=theta / a_g, power=2.0,
                                  domain=Domain.ball(window))
            logs.append(mt_functional(fam.potential, spec).log_value)
        x = np.log(1.0 / (1.0 - np.array(thetas)))
        design = np.stack([x, np.ones_like(x), np.exp(-x)], axis=1)
        coef, *_ = np.linalg.lstsq(design, np.array(logs), rcond=None)
        q_conj = 1.0 if math.isinf(q) else q / (q - 1.0)
        results[q] = (float(coef[0]), 1.0 / q_conj)
    ok = all(abs(meas - tgt) <= 0.1 for meas, tgt in results.values())
    detail = ", ".join(f"q={q:g}: {m:.3f} vs {t}" for q, (m, t) in results.items())
    assert report(8, "dilation-coupled rate", ok, detail)


def test_criterion_9_trace_dichotomy():
    sigma = 0.5
    delta = 0.25
    nu = singular_measure(2, sigma)
    sharp_vals, super_vals, ells = [], [], []
    for eps in EPS_SWEEP:
        fam = psi_family(eps)
        for coeff, acc in ((sigma, sharp_vals),
                           ((1 + delta) * sigma, super_vals)):
            spec = FunctionalSpec.sharp(P2, coeff / math.pi, Domain.ball(1.0),
                                        measure=nu)
            acc.append(mt_functional(fam.potential, spec).value)
        ells.append(math.log(1.0 / fam.eps))
    sharp_ratio = max(sharp_vals) / min(sharp_vals)
    ok_sharp = sharp_ratio < 10.0
    report("9s", "trace sharp-coefficient stability", ok_sharp,
           f"variation {sharp_ratio:.3f}x")
    assert ok_sharp
    growth = super_vals[-1] / super_vals[0]
    slope = float(np.polyfit(ells, np.log(super_vals), 1)[0])
    target = sigma * delta * 2
    ok = growth >= 1e3 and abs(slope - target) <= 0.2 * target
    assert report(9, "trace supercritical rate over [1e-4, 1e-1]", ok,
                  f"growth {growth:.2f}x, slope {slope:.3f} vs {target} +-20%")


def test_criterion_10_hyperbolic():
    rho = np.array([0.3, 0.5, 1.0, 2.0, 4.0])
    closed = (1.0 / np.tanh(rho) - 1.0) / (4 * math.pi)
    h2_gap = float(np.max(np.abs(hyperbolic_h2_exact(3, rho) - closed)
                          / closed))
    local = hyperbolic_h2_exact(3, 1e-3) * 1e-3 / riesz_normalization(3, 2.0)
    rho_far = np.linspace(2.0, 10.0, 30)
    envelope = hyperbolic_h2_exact(3, rho_far) * np.exp(2.0 * rho_far) \
        * rho_far**0.0
    env_ok = bool(np.max(envelope) <= 1.05 * np.min(envelope))
    slopes = {}
    for name, builder in (("euclidean", moser_log_family),
                          ("hyperbolic", hyperbolic_log_family)):
        vals = [gradient_norm_pth(builder(3, 1.0, eps))
                for eps in (1e-3, 1e-4)]
        slopes[name] = (vals[1] - vals[0]) / math.log(10.0)
    slope_gap = abs(slopes["hyperbolic"] - slopes["euclidean"]) \
        / slopes["euclidean"]
    ok = h2_gap <= 1e-6 and abs(local - 1.0) <= 0.02 and env_ok \
        and slope_gap <= 0.02
    assert report(10, "hyperbolic kernel and log family", ok,
                  f"closed-form gap {h2_gap:.1e}, local {local:.4f}, "
                  f"envelope ok {env_ok}, slope gap {slope_gap:.2e}")


def test_criterion_11_level_set_chain():
    prof = kernel_profile(K2, truncation_radius=1.0)
    rng = np.random.default_rng(47)
    x = np.linspace(-40.0, 40.0, 2001)
    f_viol = 0
    layer_gap = 0.0
    for _ in range(100):
        raw = np.abs(rng.normal(size=x.size))
        raw[np.abs(x) > rng.uniform(5.0, 30.0)] = 0.0
        nrm = float(np.trapezoid(raw**2, x)) ** 0.5
        phi = raw / nrm * rng.uniform(0.3, 1.0)
        state = state_from_phi(phi, x, prof, P2)
        res = garsia_integral(state)
        if res["f_min"] < -state.d_star - 1e-9:
            f_viol += 1
        layer_gap = max(layer_gap, abs(res["layer_cake"] - res["integral"])
                        / res["integral"])
    g = log_grid(1e-6, 1e3, 3000)
    dual_gap = 0.0
    for _ in range(5):
        f = random_source(rng, g)
        fs = decreasing_rearrangement(f)
        res = dual_path_values(fs, prof, P2)
        dual_gap = max(dual_gap, abs(res["path_a"] - res["path_b"])
                       / res["path_b"])
    ok = f_viol == 0 and layer_gap <= 0.01 and dual_gap <= 0.02
    assert report(11, "level-set chain", ok,
                  f"lower-bound violations {f_viol}, layer-cake {layer_gap:.2%}, "
                  f"dual-path {dual_gap:.2%}")


def test_criterion_12_lemma_suite():
    rng = np.random.default_rng(53)
    m = 10**6
    a = rng.uniform(0.0, 10.0, m)
    b = rng.uniform(0.0, 10.0, m)
    theta = rng.uniform(0.0, 1.0, m)
    beta = rng.uniform(1.01, 8.0, m)
    lhs, rhs = holder_split_inequality(a, b, theta, beta)
    split_viol = int(np.sum(lhs > rhs * (1 + 1e-12) + 1e-12))

    g = log_grid(1e-6, 1e3, 2000)
    sandwich_viol = 0
    for _ in range(50):
        u = random_source(rng, g)
        u = u.with_values(np.minimum(u.values, 8.0) * rng.uniform(0.2, 1.0))
        try:
            regularization_sandwich(u, rng.uniform(0.3, 2.0), 2.0)
        except AssertionError:
            sandwich_viol += 1

    spec = FunctionalSpec(gamma_coeff=1.0 / math.pi, power=2.0,
                          domain=Domain.ball(1.0))
    psis = [psi_family(eps) for eps in (1e-1, 1e-2, 1e-3)]
    c0 = max(mt_functional(ps.potential, spec).value for ps in psis)
    shift_viol = 0
    for ps in psis:
        p_f = ps.norm_pth_power**0.5
        for K in (0.5, 1.0, 2.0):
            sb = shifted_functional_bounds(ps.potential, K, p_f, spec, c0)
            if sb.shifted_a > sb.bound_a * (1 + 1e-9) \
                    or sb.shifted_b > sb.bound_b * (1 + 1e-9):
                shift_viol += 1
    ok = split_viol == 0 and sandwich_viol == 0 and shift_viol == 0
    assert report(12, "inequality lemma suite", ok,
                  f"split {split_viol}, sandwich {sandwich_viol}, "
                  f"shift {shift_viol}")
