"""The fixed Schwartz-class test family used by every suite (version 1)."""
from __future__ import annotations

import numpy as np

from ..core import FREQUENCY, SampledFunction, TransformPlan, dunkl_inverse, dunkl_transform
from ..windows import SpectralWindow

FAMILY_VERSION = 1
TAIL_TOLERANCE = 1e-5


def _gauss(a):
    return lambda plan: plan.grid.sample(lambda x: np.exp(-a * np.sum(x * x, axis=-1)))


def _xgauss(plan):
    return plan.grid.sample(lambda x: x[..., 0] * np.exp(-np.sum(x * x, axis=-1)))


def _poly_gauss(plan):
    return plan.grid.sample(lambda x: (1 + np.sum(x * x, axis=-1)) * np.exp(-np.sum(x * x, axis=-1)))


def _shifted(plan):
    return plan.grid.sample(lambda x: np.exp(-np.sum((x - 0.5) ** 2, axis=-1)))


def _bump(window):
    def build(plan):
        F = SampledFunction(plan.dual, window(plan.dual.radius), FREQUENCY)
        return dunkl_inverse(plan, F)
    return build


FAMILY = {
    "gauss-0.5": _gauss(0.5),
    "gauss-1": _gauss(1.0),
    "gauss-2": _gauss(2.0),
    "xgauss": _xgauss,
    "poly-gauss": _poly_gauss,
    "shift-gauss": _shifted,
    "bump-ball": _bump(SpectralWindow(4.0, name="bump-ball")),
    "bump-annulus": _bump(SpectralWindow(4.0, 1.0, name="bump-annulus")),
}


def build(name: str, plan: TransformPlan) -> SampledFunction:
    return FAMILY[name](plan)


def _share(values, weights, mask) -> float:
    """sqrt of the share of weighted L^2 mass carried by the masked nodes."""
    mass = weights * np.abs(values) ** 2
    return float(np.sqrt(np.sum(mass[mask]) / np.sum(mass)))


def tails(plan: TransformPlan, f: SampledFunction) -> tuple:
    """L^2(mu_k) share of f near the box edge and of its spectrum near the top frequency.

    Measured against mu_k rather than pointwise, because the weight
    |x|^2k magnifies whatever the box cuts off.
    """
    F = dunkl_transform(plan, f)
    space = plan.grid.radius > 0.9 * plan.grid.x_max
    freq = plan.dual.radius > 0.9 * plan.dual.x_max
    return (_share(f.values, plan.grid.weights, space),
            _share(F.values, plan.dual.weights, freq))


def admissible(plan: TransformPlan, f: SampledFunction, tol: float = TAIL_TOLERANCE) -> bool:
    """Whether f is resolved by the grid: negligible mass at the box edge and at top frequency."""
    return max(tails(plan, f)) < tol


def members(plan: TransformPlan, names=None, tol: float = TAIL_TOLERANCE):
    """[(name, f)] for the admissible members, and the names left out."""
    kept, dropped = [], []
    for name in names or FAMILY:
        f = build(name, plan)
        (kept if admissible(plan, f, tol) else dropped).append((name, f))
    return kept, [n for n, _ in dropped]
