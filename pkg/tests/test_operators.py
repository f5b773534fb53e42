import numpy as np
import pytest

from dunkl_harmonics import classical
from dunkl_harmonics.core import (Grid, TransformPlan, dunkl_transform, inverse_at)
from dunkl_harmonics.geometry import ReflectionSetup
from dunkl_harmonics.harness import plans
from dunkl_harmonics.operators import (ParaproductSpec, SubordinationGrid, decay_slope,
                                       decompose_product, fit_slope, fractional_laplacian,
                                       fractional_laplacian_subordination, heat_apply,
                                       heat_kernel, heat_kernel_bivariate, heat_kernel_closed_form,
                                       paraproduct, subordination_multiplier)
from dunkl_harmonics.windows import DecompositionWindows

from conftest import gaussian

# Frozen with mpmath (40 digits): heat kernel by direct spectral integration and
# (-Delta_k)^s e^{-x^2/2} through the radial Hankel integral.
HEAT_TXY = [(0.3, 0.5, -1.2), (1.0, 2.0, 1.5), (0.05, 1.0, 1.1)]
HEAT = {1.0: [0.42480379056923544, 0.15128916870547538, 2.6102926750207085],
        2.5: [1.0287357142578449, 0.03899784748986951, 11.326343175574482]}
FRAC_X = np.array([0.0, 0.7, 3.0, 9.0])
FRACLAP = {
    0.0: {0.25: [0.82217895866245852, 0.55957330347611764, -0.11797665890837115,
                 -0.018969731581902147],
          0.5: [0.79788456080286541, 0.46493570076432945, -0.1432207873160088,
                -0.010239975350794895],
          0.75: [0.86003998732451949, 0.42050648938573473, -0.12843296914189044,
                 -0.003267324374049057]},
    1.0: {0.25: [1.2332684379936878, 0.92435903812798048, -0.016712741615695023,
                 -0.00036303604156099546],
          0.5: [1.5957691216057308, 1.1444231702307295, -0.038653526413911666,
                -0.00026312922544106431],
          0.75: [2.1500999683112987, 1.4741372386052138, -0.055665676014465598,
                 -0.00010570244373203083]},
    2.5: {0.25: [1.5157972613959649, 1.1616258973736053, 0.0051378926924391076,
                 -4.1119036546945863e-6],
          0.5: [2.3499640074665631, 1.7630426484743622, -0.0034970022528535696,
                -3.6101167903379768e-6],
          0.75: [3.7192750990647495, 2.7313953517959722, -0.015888777564393155,
                 -1.7227170731337953e-6]},
}


@pytest.mark.parametrize("k", sorted(HEAT))
def test_heat_closed_form_frozen(k):
    s = ReflectionSetup(1, k)
    t, x, y = np.array(HEAT_TXY).T
    got = np.array([heat_kernel_closed_form(s, *v) for v in HEAT_TXY])
    assert np.allclose(got, HEAT[k], rtol=1e-12)


def test_heat_kernel_at_origin():
    s = ReflectionSetup(2, (1.0, 0.5))
    x = np.array([[0.3, -1.0], [2.0, 0.1]])
    assert np.allclose(heat_kernel(s, 0.7, x), heat_kernel_closed_form(s, 0.7, x, np.zeros(2)),
                       rtol=1e-13)


def test_heat_bivariate_matches_closed_form(plan_k1):
    s = plan_k1.setup
    rng = np.random.default_rng(4)
    x, y = rng.uniform(-3, 3, (2, 30))
    for t in (0.1, 1.0):
        assert np.allclose(heat_kernel_bivariate(plan_k1, t, x, y),
                           heat_kernel_closed_form(s, t, x, y), atol=1e-9)


def test_heat_mass_and_positivity():
    s = ReflectionSetup(1, 1.5)
    g = Grid(s, 801, 25.0)
    for t in (0.2, 1.0, 3.0):
        h = heat_kernel_closed_form(s, t, 0.9, g.nodes)
        assert np.all(h >= 0)
        assert np.sum(g.weights * h) == pytest.approx(1.0, abs=1e-10)


def test_heat_semigroup(small_plan):
    f = small_plan.grid.sample(gaussian(1.0, 0.4))
    a = heat_apply(small_plan, heat_apply(small_plan, f, 0.3), 0.5)
    b = heat_apply(small_plan, f, 0.8)
    assert np.max(np.abs(a.values - b.values)) < 1e-12
    with pytest.raises(ValueError):
        heat_apply(small_plan, f, 0.0)


@pytest.mark.parametrize("k", sorted(FRACLAP))
def test_fractional_laplacian_frozen(k):
    plan = plans.get_plan(ReflectionSetup(1, k), 1025, 20.0)
    F = dunkl_transform(plan, plan.grid.sample(gaussian(0.5)))
    for s, ref in FRACLAP[k].items():
        got = inverse_at(plan, F, FRAC_X, homogeneous_power=2 * s).real
        assert np.allclose(got, ref, atol=1e-7, rtol=1e-6)


def test_fractional_laplacian_at_s1_is_laplacian(small_plan):
    f = small_plan.grid.sample(gaussian(0.5))
    r = small_plan.grid.radius
    ref = (3 - r ** 2) * np.exp(-r ** 2 / 2)
    assert np.max(np.abs(fractional_laplacian(small_plan, f, 1.0).values - ref)) < 1e-9
    with pytest.raises(ValueError):
        fractional_laplacian(small_plan, f, -0.5)


def test_fractional_powers_compose(plan_k1):
    # the intermediate decays only like |x|^-3.5, so the box edge costs accuracy
    f = plan_k1.grid.sample(gaussian(0.5))
    half = fractional_laplacian(plan_k1, fractional_laplacian(plan_k1, f, 0.25), 0.25)
    full = fractional_laplacian(plan_k1, f, 0.5)
    inner = plan_k1.grid.radius < 5
    assert np.max(np.abs(half.values - full.values)[inner]) / full.sup() < 1e-4


def test_subordination_multiplier_is_power():
    lam = np.geomspace(1e-3, 1e3, 50)
    for s in (0.25, 0.5, 0.75):
        got = subordination_multiplier(lam, s, SubordinationGrid(points=400))
        assert np.allclose(got, lam ** s, rtol=1e-7)


@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
def test_subordination_matches_spectral(plan_k1, s):
    f = plan_k1.grid.sample(gaussian(0.5))
    a = fractional_laplacian_subordination(plan_k1, f, s)
    b = fractional_laplacian(plan_k1, f, s)
    assert np.max(np.abs(a.values - b.values)) / b.sup() < 1e-4


def test_subordination_range():
    plan = TransformPlan(Grid(ReflectionSetup(1, 1.0), 65, 8.0), self_test=False)
    with pytest.raises(ValueError):
        fractional_laplacian_subordination(plan, plan.grid.sample(gaussian()), 1.0)


def test_subordination_grid_adapts():
    g = Grid(ReflectionSetup(1, 1.0), 1025, 20.0)
    assert SubordinationGrid.for_grid(g).t_max == pytest.approx((8 * g.dx) ** -2)


def test_decay_slope_of_fractional_laplacian(plan_k1):
    f = plan_k1.grid.sample(gaussian(0.5))
    for s in (0.25, 0.5, 0.75):
        expected = -(plan_k1.setup.d_k + 2 * s)
        assert decay_slope(plan_k1, f, s, fit_range=(5.0, 16.0)) == pytest.approx(expected, rel=0.1)


def test_fit_slope_guards():
    r = np.linspace(1, 10, 50)
    assert fit_slope(r, r ** -3.0, (2, 8)) == pytest.approx(-3.0)
    with pytest.raises(ValueError):
        fit_slope(r, r ** -3.0, (2, 2.1))
    with pytest.raises(ValueError):
        fit_slope(r, np.zeros_like(r), (2, 8))


def test_paraproduct_spec():
    w = DecompositionWindows.standard()
    assert ParaproductSpec(*w.triple(1)).hypothesis_met
    assert not ParaproductSpec(w.theta1, w.phi2, w.phi2).hypothesis_met
    assert list(ParaproductSpec(*w.triple(2), -1, 1).scales()) == [-1, 0, 1]
    with pytest.raises(ValueError):
        ParaproductSpec(*w.triple(1), 2, 1)


def test_paraproduct_k0_matches_fft():
    grid = classical.conjugate_grid(1, 513)
    plan = TransformPlan(grid)
    fft = classical.FFTPlan(grid)
    f = grid.sample(gaussian(1.0))
    g = grid.sample(gaussian(1.0, 0.5))
    for i in (1, 2, 3):
        spec = ParaproductSpec(*DecompositionWindows.standard().triple(i), -8, 8)
        dense = paraproduct(plan, spec, f, g).values
        ref = classical.paraproduct(fft, spec.theta, spec.psi, spec.phi, f.values, g.values,
                                    spec.scales())
        assert np.max(np.abs(dense - ref)) < 1e-10


def test_decomposition_reassembles_product(plan_k1):
    f = plan_k1.grid.sample(gaussian(1.0))
    g = plan_k1.grid.sample(gaussian(1.0, 0.5))
    dec = decompose_product(plan_k1, f, g, J=12)
    assert dec.relative_residual < 1e-3
    assert len(dec.pieces) == 3
    assert 0 <= dec.low_mass < 1e-3
