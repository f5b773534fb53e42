"""Spectral operators: heat semigroup, fractional Dunkl Laplacian, paraproducts."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.special import gammainc, gammaincc

from .core import SampledFunction, TransformPlan, dunkl_inverse, dunkl_transform, lp_norm
from .geometry import ReflectionSetup, as_points
from .special import dunkl_kernel_1d, dunkl_kernel_1d_real_scaled, gamma
from .windows import DecompositionWindows, SpectralWindow


def heat_multiplier(grid, t: float) -> np.ndarray:
    return np.exp(-t * grid.radius ** 2)


def heat_apply(plan: TransformPlan, f: SampledFunction, t: float) -> SampledFunction:
    """e^{t Delta_k} f."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    return dunkl_inverse(plan, dunkl_transform(plan, f), heat_multiplier(plan.dual, t))


def heat_kernel(setup: ReflectionSetup, t: float, x) -> np.ndarray:
    """h_t(x) = (2t)^(-d_k/2) exp(-|x|^2 / 4t)."""
    pts = as_points(x, setup.d)
    return (2 * t) ** (-setup.d_k / 2) * np.exp(-np.sum(pts * pts, axis=-1) / (4 * t))


def heat_kernel_closed_form(setup: ReflectionSetup, t: float, x, y) -> np.ndarray:
    """h_t(x, y) = (2t)^(-d_k/2) e^{-(|x|^2+|y|^2)/4t} E_k(x/sqrt(2t), y/sqrt(2t)).

    Evaluated with exponentially scaled Bessel functions so that the large
    exponentials cancel analytically.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    xs = as_points(x, setup.d)
    ys = as_points(y, setup.d)
    out = (2 * t) ** (-setup.d_k / 2)
    for i, ki in enumerate(setup.k):
        a, b = xs[..., i], ys[..., i]
        gap = (np.abs(a) - np.abs(b)) ** 2 / (4 * t)
        out = out * np.exp(-gap) * dunkl_kernel_1d_real_scaled(ki, a / np.sqrt(2 * t),
                                                               b / np.sqrt(2 * t))
    return out


def heat_kernel_bivariate(plan: TransformPlan, t: float, x, y) -> np.ndarray:
    """tau_x h_t(-y) = int e^{-t|xi|^2} E_k(ix, xi) E_k(-iy, xi) dmu_k(xi), spectrally.

    x and y are arrays of points with matching leading shape (any points, not
    only nodes).
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    grid = plan.dual
    xs = as_points(x, grid.d)
    ys = as_points(y, grid.d)
    lead = np.broadcast_shapes(xs.shape[:-1], ys.shape[:-1])
    xs = np.broadcast_to(xs, lead + (grid.d,)).reshape(-1, grid.d)
    ys = np.broadcast_to(ys, lead + (grid.d,)).reshape(-1, grid.d)
    xi = grid.nodes
    total = np.ones(xs.shape[0], dtype=complex)
    # the integrand factorizes over axes
    for i, ki in enumerate(grid.setup.k):
        w = grid.axis_weights(i) * np.exp(-t * xi ** 2)
        ex = dunkl_kernel_1d(ki, xs[:, i:i + 1], xi[None, :])
        ey = dunkl_kernel_1d(ki, -ys[:, i:i + 1], xi[None, :])
        total = total * np.sum(ex * ey * w[None, :], axis=1)
    return total.real.reshape(lead)


def fractional_laplacian(plan: TransformPlan, f: SampledFunction, s: float) -> SampledFunction:
    """(-Delta_k)^s f through the multiplier |xi|^2s."""
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    return dunkl_inverse(plan, dunkl_transform(plan, f), homogeneous_power=2 * s)


def dunkl_laplacian_spectral(plan: TransformPlan, f: SampledFunction) -> SampledFunction:
    return fractional_laplacian(plan, f, 1.0) * -1.0


@dataclass(frozen=True)
class SubordinationGrid:
    """Log-spaced t nodes for the subordination integral."""

    t_min: float = 1e-6
    t_max: float = 1e4
    points: int = 200

    def nodes(self) -> np.ndarray:
        return np.geomspace(self.t_min, self.t_max, self.points)

    @classmethod
    def for_grid(cls, grid, points: int = 200) -> "SubordinationGrid":
        """Stop the quadrature where e^{-t |xi|^2} still varies slowly across frequency nodes.

        Beyond t_max the integral is carried by the closed-form tail, whose
        crossover scale |xi| ~ t_max^(-1/2) must sit well above the spacing.
        """
        return cls(t_max=float((8 * grid.dx) ** -2), points=points)


@dataclass
class SubordinationParts:
    """Multiplier pieces of the subordination integral at lambda = |xi|^2."""

    smooth_over_lambda: np.ndarray   # (middle + lower tail) / lambda, smooth in xi
    upper_over_power: np.ndarray     # upper tail / lambda^s, smooth in xi
    tail_fraction: float             # max share of the analytic tails


def subordination_parts(lam: np.ndarray, s: float, t_grid: SubordinationGrid) -> SubordinationParts:
    """Pieces of (1/Gamma(1-s)) int_0^inf t^-s lambda e^{-t lambda} dt.

    The middle range uses composite Simpson in u = log t; both tails are added
    in closed form through incomplete gamma functions.
    """
    lam = np.asarray(lam, dtype=float)
    a = 1.0 - s
    g = gamma(a)
    t = t_grid.nodes()
    u = np.log(t)
    flat = lam.reshape(-1)
    # int t^{1-s} e^{-t lambda} du, one column per node
    integrand = t[None, :] ** a * np.exp(-np.multiply.outer(flat, t))
    middle = integrate.simpson(integrand, x=u, axis=1) / g
    x_lo = flat * t_grid.t_min
    with np.errstate(divide="ignore", invalid="ignore"):
        lower = np.where(x_lo > 0, gammainc(a, x_lo) * flat ** (s - 1), 0.0)
    small = x_lo < 1e-12
    lower[small] = t_grid.t_min ** a / a / g
    upper = gammaincc(a, flat * t_grid.t_max)
    total = flat * (middle + lower) + flat ** s * upper
    with np.errstate(divide="ignore", invalid="ignore"):
        share = np.where(total > 0, (flat * lower + flat ** s * upper) / total, 0.0)
    return SubordinationParts((middle + lower).reshape(lam.shape), upper.reshape(lam.shape),
                              float(np.max(share)))


def subordination_multiplier(lam, s: float, t_grid: SubordinationGrid | None = None) -> np.ndarray:
    parts = subordination_parts(lam, s, t_grid or SubordinationGrid())
    lam = np.asarray(lam, dtype=float)
    return lam * parts.smooth_over_lambda + lam ** s * parts.upper_over_power


def fractional_laplacian_subordination(plan: TransformPlan, f: SampledFunction, s: float,
                                       t_grid: SubordinationGrid | None = None) -> SampledFunction:
    """(-Delta_k)^s f = -(1/Gamma(1-s)) int_0^inf t^-s Delta_k e^{t Delta_k} f dt."""
    if not 0 < s < 1:
        raise ValueError(f"subordination needs 0 < s < 1, got {s}")
    parts = subordination_parts(plan.dual.radius ** 2, s, t_grid or SubordinationGrid.for_grid(plan.dual))
    F = dunkl_transform(plan, f)
    # Delta_k e^{t Delta_k} has multiplier -lambda e^{-t lambda}; the lambda and
    # lambda^s factors go to the quadrature as homogeneous powers
    body = dunkl_inverse(plan, F, parts.smooth_over_lambda, homogeneous_power=2.0)
    tail = dunkl_inverse(plan, F, parts.upper_over_power, homogeneous_power=2 * s)
    return body + tail


def ray_profile(f: SampledFunction, axis: int = 0):
    """Values of f along the positive half of one coordinate axis."""
    grid = f.grid
    c = grid.center
    idx = [c] * grid.d
    idx[axis] = slice(c, None)
    return grid.nodes[c:], f.values[tuple(idx)]


NOISE_FLOOR = 1e-13


def fit_slope(r: np.ndarray, values: np.ndarray, fit_range) -> float:
    lo, hi = fit_range
    mask = (r >= lo) & (r <= hi)
    if mask.sum() < 3:
        raise ValueError(f"fit range {fit_range} holds fewer than 3 nodes")
    mag = np.abs(values[mask])
    if np.any(mag < NOISE_FLOOR):
        raise ValueError("values fall below the noise floor inside the fit range")
    slope, _ = np.polyfit(np.log(r[mask]), np.log(mag), 1)
    return float(slope)


def decay_slope(plan: TransformPlan, f: SampledFunction, s: float, fit_range=None,
                axis: int = 0) -> float:
    """Fitted exponent of |(-Delta_k)^s f(x)| along a coordinate ray."""
    if fit_range is None:
        fit_range = (5.0, 0.8 * plan.grid.x_max)
    g = fractional_laplacian(plan, f, s)
    r, vals = ray_profile(g, axis)
    return fit_slope(r, vals, fit_range)


@dataclass(frozen=True)
class ParaproductSpec:
    """Window triple and dyadic range of Pi[theta, psi, phi]."""

    theta: SpectralWindow
    psi: SpectralWindow
    phi: SpectralWindow
    j_min: int = -12
    j_max: int = 12

    def __post_init__(self):
        if self.j_min > self.j_max:
            raise ValueError(f"empty scale range {self.j_min}..{self.j_max}")

    @property
    def hypothesis_met(self) -> bool:
        """At least two of the three window supports avoid the origin."""
        return sum(not w.contains_origin() for w in (self.theta, self.psi, self.phi)) >= 2

    def scales(self):
        return range(self.j_min, self.j_max + 1)


def paraproduct(plan: TransformPlan, spec: ParaproductSpec, f: SampledFunction,
                g: SampledFunction, F=None, G=None) -> SampledFunction:
    """sum_j Theta_j *_k ((Psi_j *_k f)(Phi_j *_k g)) with a fixed summation order."""
    grid = plan.grid
    F = dunkl_transform(plan, f) if F is None else F
    G = dunkl_transform(plan, g) if G is None else G
    r = plan.dual.radius
    total = np.zeros(grid.shape, dtype=complex)
    for j in spec.scales():
        pw = spec.psi.scaled(j)(r)
        fw = spec.phi.scaled(j)(r)
        if not np.any(pw) or not np.any(fw):
            continue
        a = plan.inverse_values(pw * F.values)
        b = plan.inverse_values(fw * G.values)
        tw = spec.theta.scaled(j)(r)
        if not np.any(tw):
            continue
        total += plan.inverse_values(tw * plan.forward_values(a * b))
    return SampledFunction(grid, total)


@dataclass
class Decomposition:
    pieces: tuple
    residual: SampledFunction
    relative_residual: float
    low_mass: float
    J: int
    extras: dict = field(default_factory=dict)


def decompose_product(plan: TransformPlan, f: SampledFunction, g: SampledFunction,
                      J: int = 12, windows: DecompositionWindows | None = None) -> Decomposition:
    """Split f g into the three paraproducts over scales -J..J and report the rest."""
    windows = windows or DecompositionWindows.standard()
    F = dunkl_transform(plan, f)
    G = dunkl_transform(plan, g)
    pieces = []
    for i in (1, 2, 3):
        theta, psi, phi = windows.triple(i)
        spec = ParaproductSpec(theta, psi, phi, -J, J)
        pieces.append(paraproduct(plan, spec, f, g, F, G))
    prod = f * g
    residual = prod - pieces[0] - pieces[1] - pieces[2]
    rel = residual.sup() / prod.sup()
    # spectral mass of fg below the smallest resolved scale 2^(-J+2)
    H = dunkl_transform(plan, prod)
    low = plan.dual.radius < 2.0 ** (-J + 2)
    w = plan.dual.weights
    low_mass = float(np.sqrt(np.sum(w[low] * np.abs(H.values[low]) ** 2)) / max(lp_norm(H, 2), 1e-300))
    return Decomposition(tuple(pieces), residual, float(rel), low_mass, J)
