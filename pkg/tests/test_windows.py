import numpy as np
import pytest
from hypothesis import given, strategies as st

from dunkl_harmonics.windows import (DecompositionWindows, SpectralWindow, eta, lp_partition,
                                     partition_defect, partition_sum, transfer_identity_defect,
                                     window_transfer)


def test_eta_profile():
    assert np.all(eta([0.0, 0.5, 1.0, -1.0]) == 1.0)
    assert np.all(eta([2.0, 3.0, -7.0]) == 0.0)
    r = np.linspace(1, 2, 201)
    assert np.all(np.diff(eta(r)) <= 0)


@given(st.floats(0.01, 20), st.just(0.0) | st.floats(0.01, 0.49), st.integers(-6, 6), st.floats(0, 1e3))
def test_window_support(upper, frac, j, r):
    lower = frac * upper
    w = SpectralWindow(upper, lower, j)
    v = w(r)
    if r >= w.support_hi or (lower and r <= w.support_lo):
        assert v == 0.0
    if w.plateau_lo <= r <= w.plateau_hi:
        assert v == pytest.approx(1.0)
    assert -1e-15 <= v <= 1 + 1e-15


def test_window_validation():
    for args in ((0.0,), (1.0, -0.1), (1.0, 0.6)):
        with pytest.raises(ValueError):
            SpectralWindow(*args)


def test_window_scaling():
    w = lp_partition()
    r = np.linspace(0, 10, 101)
    assert np.allclose(w.scaled(2)(r), w(r / 4))


def test_partition_of_unity():
    assert partition_defect(lp_partition(), 10) < 1e-14
    r = np.geomspace(1e-2, 1e2, 50)
    assert np.allclose(partition_sum(lp_partition(), r, 12), 1.0)


@given(st.floats(-3, 3), st.floats(0.0, 20), st.integers(-4, 4))
def test_multiplier_algebra(p, r, j):
    # powers compose; a window with power p is r^p times the plain one
    w = SpectralWindow(2.0, 0.25, j)
    wp = w.times_power(p)
    assert wp.times_power(-p)(r) == pytest.approx(w(r), rel=1e-12, abs=1e-300)
    if w(r) != 0:
        assert wp(r) == pytest.approx(w(r) * (r / 2.0 ** j) ** p, rel=1e-12)


def test_smoothness_flag():
    assert SpectralWindow(1.0).smooth
    assert SpectralWindow(1.0).times_power(2).smooth
    assert not SpectralWindow(1.0).times_power(1.0).smooth
    assert SpectralWindow(1.0, 0.25).times_power(0.5).smooth


def test_window_json_roundtrip():
    w = SpectralWindow(4.0, 0.125, 3, 1.5, "band")
    back = SpectralWindow.from_json(w.to_json())
    assert back == w
    with pytest.raises(ValueError):
        SpectralWindow.from_dict({**w.to_dict(), "mollifier": "bump"})


def test_standard_windows_telescoping():
    w = DecompositionWindows.standard()
    psi = lp_partition()
    r = np.geomspace(1e-4, 1e3, 400)
    near = sum(psi.scaled(i)(r) for i in range(-4, 5))
    low = sum(psi.scaled(i)(r) for i in range(-40, -4))
    assert np.allclose(w.phi1(r), near, atol=1e-14)
    assert np.allclose(w.phi2(r)[r > 2 ** -35], low[r > 2 ** -35], atol=1e-14)


def test_standard_windows_hypotheses():
    w = DecompositionWindows.standard()
    for i in (1, 2, 3):
        theta, psi, phi = w.triple(i)
        assert sum(not x.contains_origin() for x in (theta, psi, phi)) >= 2
    # piece 1: theta1 covers the sum of two near-diagonal blocks
    assert w.theta1.plateau_hi >= w.psi1.support_hi + w.phi1.support_hi


def test_window_transfer_identity():
    xi = np.geomspace(1e-3, 1e3, 301)
    zeta = np.geomspace(1e-3, 1e3, 301)[::-1]
    w = DecompositionWindows.standard()
    for s in (0.25, 0.5, 1.3):
        assert transfer_identity_defect(s, w, xi, zeta) < 1e-12
    assert window_transfer(0.5, w).theta1.power == 1.0
    with pytest.raises(ValueError):
        window_transfer(0.0, w)
