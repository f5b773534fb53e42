import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import zeta

from dunkl_harmonics.quadrature import (needs_correction, origin_stencil, singular_weights,
                                        stencil_range, trapezoid_error)


def test_needs_correction():
    assert not needs_correction(0.0)
    assert not needs_correction(2.0)
    assert needs_correction(1.0)
    assert needs_correction(5.0 / 3)


@pytest.mark.parametrize("beta", [1.0, 3.0, 0.6])
def test_trapezoid_error_matches_direct_sum(beta):
    # trapezoid of e^{-a x^2}|x|^beta at unit spacing minus the exact integral;
    # the O(a) term of the expansion is removed before comparing
    a = 1e-4
    m = np.arange(-4000, 4001)
    trap = np.sum(np.exp(-a * m ** 2) * np.abs(m) ** beta)
    exact = math.gamma((beta + 1) / 2) / a ** ((beta + 1) / 2)
    first = 2 * zeta(-beta - 2) * (-a)
    assert trap - exact - first == pytest.approx(trapezoid_error(0.0, beta), abs=1e-8)


def test_trapezoid_error_branches_agree():
    for beta in (1.0, 2.6):
        lo, hi = trapezoid_error([0.5 - 1e-7, 0.5 + 1e-7], beta)
        assert abs(lo - hi) < 1e-6


def test_stencil_fit_residual_small():
    _, resid = origin_stencil(1.0, math.pi / 2)
    assert resid < 1e-8


def test_stencil_range_clipped():
    assert stencil_range(1e-3, 1.0) == 1.0
    assert stencil_range(1.0, 100.0) == pytest.approx(math.pi / 2)


@pytest.mark.parametrize("beta", [1.0, 3.0, 5.0, 1.4])
def test_singular_weights_integrate_gaussian_moments(beta):
    x = np.linspace(-12, 12, 241)
    w = singular_weights(x, beta)
    g = np.exp(-x ** 2 / 2) * (1 + 0.3 * x + x ** 2)
    exact = 2 ** ((beta + 1) / 2) * math.gamma((beta + 1) / 2) \
        + 2 ** ((beta + 3) / 2) * math.gamma((beta + 3) / 2)
    assert np.sum(w * g) == pytest.approx(exact, rel=1e-10)


def test_plain_trapezoid_is_enough_for_odd_power_free_case():
    x = np.linspace(-10, 10, 201)
    w = singular_weights(x, 2.0)
    assert np.allclose(w[1:-1], 0.1 * x[1:-1] ** 2)
    assert np.sum(w * np.exp(-x ** 2)) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-13)


def test_corrected_weights_beat_plain_rule():
    x = np.linspace(-8, 8, 81)
    dx = x[1] - x[0]
    f = np.cos(2.0 * x) * np.exp(-x ** 2 / 2)
    exact, _ = integrate.quad(lambda t: 2 * np.cos(2 * t) * np.exp(-t * t / 2) * t, 0, 12,
                              epsabs=1e-14, limit=200)
    plain = np.sum(dx * np.abs(x) * f)
    corrected = np.sum(singular_weights(x, 1.0) * f)
    assert abs(corrected - exact) < 1e-9 < abs(plain - exact)
