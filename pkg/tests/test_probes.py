import numpy as np
import pytest

from dunkl_harmonics.core import Grid, TransformPlan
from dunkl_harmonics.geometry import ReflectionSetup, ball_volume
from dunkl_harmonics.operators import ParaproductSpec
from dunkl_harmonics.probes import (MAX_KERNEL_NODES, almost_orthogonality_check, bump_spectrum,
                                    classical_support_check, default_L, heat_maximal,
                                    kernel_size_ratio, maximal_domination_check,
                                    paraproduct_kernel_probe, support_check_convolution,
                                    support_plan, translation_decay_check, window_decay_slope)
from dunkl_harmonics.windows import DecompositionWindows, SpectralWindow, lp_partition, window_transfer

from conftest import gaussian


def test_default_L():
    assert default_L(ReflectionSetup(1, 1.0)) == 10
    assert default_L(ReflectionSetup(2, (1.0, 0.5))) == 16


def test_support_lemma_leakage():
    setup = ReflectionSetup(1, 1.0)
    plan = support_plan(setup, 0)
    psi = lp_partition()
    phi = DecompositionWindows.standard().phi2
    rep = support_check_convolution(plan, psi, phi)
    assert rep.passed and rep.constant < 1e-6


def test_support_lemma_rejects_wide_windows():
    plan = support_plan(ReflectionSetup(1, 1.0), 0, n=201)
    with pytest.raises(ValueError):
        support_check_convolution(plan, lp_partition(), SpectralWindow(1.0))
    with pytest.raises(ValueError):
        support_check_convolution(plan, SpectralWindow(4.0, 1.0), SpectralWindow(1 / 32))


def test_classical_support_inside_minkowski_sum():
    out = classical_support_check(0)
    assert out["inner"] >= out["predicted_inner"] - out["spacing"]
    assert out["outer"] <= out["predicted_outer"] + out["spacing"]


def test_translation_decay_finite(small_plan):
    rep = translation_decay_check(small_plan, bump_spectrum(small_plan), samples=40)
    assert rep.passed
    assert np.isfinite(rep.constant) and rep.constant > 0
    assert rep.details["origin_ratio"] == pytest.approx(
        abs(rep.samples[0]["value"]) * ball_volume(small_plan.setup, 0.0, 1.0))


def test_translation_decay_needs_band_limit(small_plan):
    f = small_plan.grid.sample(gaussian(1.0))
    with pytest.raises(ValueError, match="band-limited"):
        translation_decay_check(small_plan, f, samples=5)
    with pytest.raises(ValueError):
        translation_decay_check(small_plan, bump_spectrum(small_plan), L=1.0, samples=5)


def test_almost_orthogonality_ratio_bounded():
    setup = ReflectionSetup(1, 1.0)
    ratios = []
    for x, y1, y2, j in ((0.3, 1.0, -2.0, 0), (1.0, 4.0, -4.0, 1), (2.0, 2.1, 1.9, -1)):
        lhs, rhs = almost_orthogonality_check(setup, x, y1, y2, j, epsrel=1e-9)
        assert lhs > 0 and rhs > 0
        ratios.append(lhs / rhs)
    assert max(ratios) < 1e3


def test_almost_orthogonality_k0_closed_form():
    # x = y1 = y2 = 0, k = 0: 2 int_0^inf (1+u)^(-9L) du / sqrt(2 pi) = 2 / ((9L-1) sqrt(2 pi))
    setup = ReflectionSetup(1, 0.0)
    L = default_L(setup)
    lhs, rhs = almost_orthogonality_check(setup, 0.0, 0.0, 0.0, 0, epsrel=1e-11)
    # the integral is truncated 12 units past the points
    exact = 2 * (1 - 13.0 ** (1 - 9 * L)) / ((9 * L - 1) * np.sqrt(2 * np.pi))
    assert lhs == pytest.approx(exact, rel=1e-9)
    assert rhs == pytest.approx(ball_volume(setup, 0.0, 1.0))


def test_kernel_probe_guards(small_plan):
    spec = ParaproductSpec(*DecompositionWindows.standard().triple(1), -2, 2)
    with pytest.raises(ValueError, match="singular"):
        paraproduct_kernel_probe(small_plan, spec, [0.5], [0.5], [-0.5])
    big = TransformPlan(Grid(ReflectionSetup(2, 1.0), 33, 4.0), self_test=False)
    assert 33 ** 2 > MAX_KERNEL_NODES
    with pytest.raises(ValueError, match="limited"):
        paraproduct_kernel_probe(big, spec, [[0, 0]], [[1, 0]], [[0, 1]])


def test_kernel_probe_size_ratio_finite(small_plan):
    spec = ParaproductSpec(*DecompositionWindows.standard().triple(2), -3, 3)
    x, y1, y2 = np.array([[0.2], [1.0]]), np.array([[1.5], [-2.0]]), np.array([[-0.7], [3.0]])
    K = paraproduct_kernel_probe(small_plan, spec, x, y1, y2)
    ratio = kernel_size_ratio(small_plan.setup, x, y1, y2, K)
    assert np.all(np.isfinite(ratio)) and np.all(ratio >= 0)


def test_heat_maximal_dominates_input(small_plan):
    h = small_plan.grid.sample(gaussian(1.0, 0.5))
    m = heat_maximal(small_plan, h, t_exponents=range(-10, 3))
    inner = small_plan.grid.radius < 4
    # e^{t Delta}|h| -> |h| as t -> 0; the smallest t here is 2^-10
    assert np.all(m[inner] >= np.abs(h.values[inner]) * (1 - 1e-2))


def test_window_decay_slope():
    setup = ReflectionSetup(1, 1.0)
    theta = window_transfer(0.5, DecompositionWindows.standard()).theta1
    assert window_decay_slope(setup, theta) == pytest.approx(-(setup.d_k + 1), rel=0.15)
    with pytest.raises(ValueError):
        window_decay_slope(ReflectionSetup(2, 1.0), theta)


def test_maximal_domination(small_plan):
    theta = window_transfer(0.5, DecompositionWindows.standard()).theta1
    rep = maximal_domination_check(small_plan, theta, small_plan.grid.sample(gaussian(1.0)),
                                   js=range(-3, 4))
    assert rep.passed
    assert 0 < rep.constant < 1e4
