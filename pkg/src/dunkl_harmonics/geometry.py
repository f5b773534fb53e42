"""Z_2^d reflection geometry: roots, reflections, orbit distance, weight and volumes.

The root system is {+-sqrt(2) e_i}.  Each coordinate carries its own
multiplicity k_i, and both roots of a pair contribute, so the weight on axis i
is |sqrt(2) x_i|^(2 k_i).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy import integrate

from .special import gamma


def _normalization(k):
    # c_k^{-1} = prod_i 2^{k_i} * 2^{k_i + 1/2} * Gamma(k_i + 1/2); the first
    # factor comes from the sqrt(2) inside the weight.
    inv = 1.0
    for ki in k:
        inv *= 2.0 ** ki * 2.0 ** (ki + 0.5) * gamma(ki + 0.5)
    return 1.0 / inv


@dataclass(frozen=True)
class ReflectionSetup:
    """Dimension and per-axis multiplicity of a Z_2^d Dunkl setting."""

    d: int
    k: tuple = field(default=())

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.d}")
        k = self.k
        if np.isscalar(k):
            k = (float(k),) * self.d
        k = tuple(float(v) for v in k)
        if len(k) == 0:
            k = (0.0,) * self.d
        if len(k) != self.d:
            raise ValueError(f"need {self.d} multiplicities, got {len(k)}")
        if any(v < 0 or not np.isfinite(v) for v in k):
            raise ValueError(f"multiplicities must be finite and nonnegative, got {k}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "k", k)

    @property
    def gamma_k(self) -> float:
        return 2.0 * sum(self.k)

    @property
    def d_k(self) -> float:
        return self.d + self.gamma_k

    @property
    def c_k(self) -> float:
        return _normalization(self.k)

    @property
    def order(self) -> int:
        """Size of the reflection group."""
        return 2 ** self.d

    def axis(self, i: int) -> "ReflectionSetup":
        """One-dimensional setup for coordinate i (0-based)."""
        return ReflectionSetup(1, (self.k[i],))

    def to_dict(self) -> dict:
        return {"d": self.d, "k": list(self.k)}


def product_setup(setup: ReflectionSetup) -> ReflectionSetup:
    """Setup on R^d x R^d with duplicated multiplicities.

    The product measure mu_k x mu_k and the product orbit distance are exactly
    those of the Z_2^{2d} setting with multiplicity (k, k).
    """
    return ReflectionSetup(2 * setup.d, setup.k + setup.k)


def as_points(x, d: int) -> np.ndarray:
    """Coerce input to a float array whose last axis has length d."""
    arr = np.asarray(x, dtype=float)
    if d == 1 and (arr.ndim == 0 or arr.shape[-1] != 1):
        arr = arr[..., None]
    if arr.shape[-1] != d:
        raise ValueError(f"points must have last axis of length {d}, got shape {arr.shape}")
    return arr


def reflect(x, i: int) -> np.ndarray:
    """Reflect through the hyperplane orthogonal to e_i (1-based index)."""
    arr = np.array(x, dtype=float, ndmin=1)
    d = arr.shape[-1]
    if not 1 <= i <= d:
        raise IndexError(f"reflection index {i} outside 1..{d}")
    arr[..., i - 1] = -arr[..., i - 1]
    return arr


def group_elements(d: int) -> np.ndarray:
    """All 2^d sign vectors, one row per group element."""
    return np.array(list(product((1.0, -1.0), repeat=d)))


def orbit_distance(x, y) -> np.ndarray:
    """min over sign flips sigma of |sigma(x) - y|."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim == 0:
        x = x[None]
    if y.ndim == 0:
        y = y[None]
    gap = np.minimum(np.abs(x - y), np.abs(x + y))
    return np.sqrt(np.sum(gap * gap, axis=-1))


def weight(setup: ReflectionSetup, x) -> np.ndarray:
    """h_k(x) = prod_i |sqrt(2) x_i|^(2 k_i)."""
    pts = as_points(x, setup.d)
    out = np.ones(pts.shape[:-1])
    for i, ki in enumerate(setup.k):
        if ki > 0:
            out = out * np.abs(np.sqrt(2.0) * pts[..., i]) ** (2 * ki)
    return out


def _interval_mass(k: float, a: float, b: float) -> float:
    """int_a^b |sqrt(2) t|^(2k) dt for a <= b."""
    p = 2 * k + 1
    return 2.0 ** k * (np.sign(b) * abs(b) ** p - np.sign(a) * abs(a) ** p) / p


def _merge(intervals):
    merged = []
    for a, b in sorted(intervals):
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return merged


def _union_mass(balls, k, rtol):
    """Unnormalized weighted volume of a union of balls [(center, radius)]."""
    balls = [(np.asarray(c, float), float(r)) for c, r in balls if r > 0]
    if not balls:
        return 0.0
    if len(k) == 1:
        spans = _merge([(c[0] - r, c[0] + r) for c, r in balls])
        return sum(_interval_mass(k[0], a, b) for a, b in spans)
    lo = min(c[0] - r for c, r in balls)
    hi = max(c[0] + r for c, r in balls)

    def section(t):
        sub = []
        for c, r in balls:
            h2 = r * r - (t - c[0]) ** 2
            if h2 > 0:
                sub.append((c[1:], np.sqrt(h2)))
        w = abs(np.sqrt(2.0) * t) ** (2 * k[0]) if k[0] > 0 else 1.0
        return w * _union_mass(sub, k[1:], rtol)

    breaks = sorted({c[0] + s * r for c, r in balls for s in (-1.0, 0.0, 1.0)} | {0.0})
    breaks = [b for b in breaks if lo < b < hi]
    val, _ = integrate.quad(section, lo, hi, points=breaks or None, epsrel=rtol,
                            epsabs=0.0, limit=200)
    return val


def ball_volume(setup: ReflectionSetup, x, r: float, mode: str = "exact",
                rtol: float = 1e-10) -> float:
    """mu_k(B(x, r)), exactly (quadrature) or via the comparable surrogate."""
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    pts = as_points(x, setup.d).reshape(-1)
    if mode == "comparable":
        out = r ** setup.d
        for i, ki in enumerate(setup.k):
            out *= (np.sqrt(2.0) * abs(pts[i]) + r) ** (2 * ki)
        return float(out)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    return setup.c_k * _union_mass([(pts, r)], setup.k, rtol)


def orbit_ball_volume(setup: ReflectionSetup, x, r: float, rtol: float = 1e-10) -> float:
    """mu_k of the union of all reflected copies of B(x, r)."""
    if r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    pts = as_points(x, setup.d).reshape(-1)
    centers = {tuple(s * pts) for s in group_elements(setup.d)}
    return setup.c_k * _union_mass([(np.array(c), r) for c in centers], setup.k, rtol)


def doubling_ratio(setup: ReflectionSetup, x, r1: float, r2: float) -> float:
    if not 0 < r1 <= r2:
        raise ValueError(f"need 0 < r1 <= r2, got {r1}, {r2}")
    return ball_volume(setup, x, r1) / ball_volume(setup, x, r2)


def doubling_check(setup: ReflectionSetup, x, r1: float, r2: float,
                   lower: float = 1.0, upper: float = 1.0) -> bool:
    """Whether lower*(r1/r2)^d_k <= V(r1)/V(r2) <= upper*(r1/r2)^d."""
    ratio = doubling_ratio(setup, x, r1, r2)
    q = r1 / r2
    tol = 1e-9
    return bool(lower * q ** setup.d_k * (1 - tol) <= ratio <= upper * q ** setup.d * (1 + tol))


def vg_ratio(setup: ReflectionSetup, x, y) -> float:
    """max(V(x, rho), V(y, rho)) / V(x, rho) at rho = d_G(x, y)."""
    rho = float(orbit_distance(x, y))
    if rho == 0:
        return 1.0
    vx = ball_volume(setup, x, rho)
    vy = ball_volume(setup, y, rho)
    return max(vx, vy) / vx
