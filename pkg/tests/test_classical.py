import math

import numpy as np
import pytest

from dunkl_harmonics import classical
from dunkl_harmonics.core import Grid, TransformPlan, dunkl_transform, lp_norm
from dunkl_harmonics.geometry import ReflectionSetup
from dunkl_harmonics.operators import fractional_laplacian
from dunkl_harmonics.windows import DecompositionWindows

from conftest import gaussian


@pytest.fixture(scope="module")
def conj():
    grid = classical.conjugate_grid(1, 513)
    return TransformPlan(grid), classical.FFTPlan(grid)


def test_conjugate_grid():
    g = classical.conjugate_grid(1, 257)
    assert g.n * g.dx ** 2 == pytest.approx(2 * math.pi)
    with pytest.raises(ValueError):
        classical.FFTPlan(Grid(ReflectionSetup(1, 0.0), 257, 10.0))
    with pytest.raises(ValueError):
        classical.FFTPlan(Grid(ReflectionSetup(1, 1.0), 257, classical.conjugate_extent(257)))


def test_fft_matches_dense_transform(conj):
    plan, fft = conj
    f = plan.grid.sample(gaussian(1.0, 0.5))
    assert np.max(np.abs(fft.forward(f.values) - dunkl_transform(plan, f).values)) < 1e-12
    assert np.max(np.abs(fft.inverse(fft.forward(f.values)) - f.values)) < 1e-12


def test_fft_2d_matches_dense():
    grid = classical.conjugate_grid(2, 65)
    plan = TransformPlan(grid)
    f = grid.sample(gaussian(1.0, 0.3))
    assert np.max(np.abs(classical.FFTPlan(grid).forward(f.values)
                         - dunkl_transform(plan, f).values)) < 1e-12


def test_fractional_laplacian_routes_agree(conj):
    plan, fft = conj
    f = plan.grid.sample(gaussian(0.5))
    for s in (0.25, 0.5, 0.75):
        a = classical.fractional_laplacian(fft, f.values, s)
        b = fractional_laplacian(plan, f, s).values
        assert np.max(np.abs(a - b)) < 1e-10


def test_singular_integral_oracle():
    # (-Delta)^{1/2} e^{-x^2/2} at 0 equals sqrt(2/pi)
    f = lambda x: math.exp(-x * x / 2)
    assert classical.fractional_laplacian_integral(f, 0.0, 0.5) == pytest.approx(
        math.sqrt(2 / math.pi), rel=1e-9)
    with pytest.raises(ValueError):
        classical.fractional_laplacian_integral(f, 0.0, 1.0)


def test_decomposition_residual_small():
    # the residual is a grid effect: it halves when n doubles
    grid = classical.conjugate_grid(1, 1025)
    fft = classical.FFTPlan(grid)
    f = grid.sample(gaussian(1.0)).values
    g = grid.sample(gaussian(1.0, 0.5)).values
    rest = classical.decomposition_residual(fft, f, g, J=12)
    assert np.max(np.abs(rest)) / np.max(np.abs(f * g)) < 1e-3


def test_lp_norm_agrees(conj):
    plan, _ = conj
    f = plan.grid.sample(gaussian(1.0))
    assert classical.lp_norm(plan.grid, f.values, 3) == pytest.approx(lp_norm(f, 3), rel=1e-14)


def test_kernel_on_nodes_1d_only():
    grid = classical.conjugate_grid(2, 33)
    w = DecompositionWindows.standard()
    with pytest.raises(ValueError):
        classical.kernel_on_nodes(classical.FFTPlan(grid), *w.triple(1), [0], [1], [2], range(1))
