"""Deep family sweeps: the blow-up rates of the whole-ball functionals
emerge once log(1/eps) clears the families' O(1) normalization deficit.

These runs are the green counterpart to the red acceptance sub-checks 7
and 9, which pin the same assertions to eps in [1e-4, 1e-1] where the
flat bulk still masks the center driver.
"""

import math

import numpy as np
import pytest

from sil.extremals import adams_family, attach_potential, normalize_ruf
from sil.functionals import Domain, FunctionalSpec, mt_functional
from sil.kernels import riesz_kernel
from sil.measures import singular_measure
from sil.params import Params

P2 = Params(2, 1.0)
K2 = riesz_kernel(P2)


def _sweep_values(eps_list, coeff_over_a, measure=None):
    ells, vals = [], []
    for eps in eps_list:
        psi = normalize_ruf(attach_potential(adams_family(K2, eps)))
        spec = FunctionalSpec.sharp(P2, coeff_over_a / math.pi,
                                    Domain.ball(1.0), measure=measure)
        vals.append(mt_functional(psi.potential, spec).value)
        ells.append(math.log(1.0 / psi.eps))
    return np.array(ells), np.array(vals)


def test_supercritical_functional_rate_deep():
    # coefficient (1+delta)/A_g, delta = 0.25: the functional grows like
    # eps^{-delta n} once the suppressed center driver clears the bulk
    ells, vals = _sweep_values([1e-8, 1e-10, 1e-12, 1e-14], 1.25)
    slope = float(np.polyfit(ells, np.log(vals), 1)[0])
    target = 0.25 * 2
    assert abs(slope - target) <= 0.2 * target
    # ten-fold-per-two-decades growth: ~1e3 across these six decades
    assert vals[-1] / vals[0] >= 1e2
    assert bool(np.all(np.diff(vals) > 0))


def test_supercritical_sharp_side_still_flat_deep():
    ells, vals = _sweep_values([1e-8, 1e-10, 1e-12, 1e-14], 1.0)
    assert float(np.max(vals) / np.min(vals)) < 10.0


def test_trace_supercritical_rate_deep():
    # sigma = 1/2 singular measure: rate sigma * delta * n = 0.25
    nu = singular_measure(2, 0.5)
    ells, vals = _sweep_values([1e-12, 1e-14, 1e-16, 1e-18],
                               0.5 * 1.25, measure=nu)
    slope = float(np.polyfit(ells, np.log(vals), 1)[0])
    target = 0.5 * 0.25 * 2
    assert abs(slope - target) <= 0.2 * target
    assert bool(np.all(np.diff(vals) > 0))
    sharp_ells, sharp_vals = _sweep_values([1e-12, 1e-16], 0.5, measure=nu)
    assert float(np.max(sharp_vals) / np.min(sharp_vals)) < 10.0
