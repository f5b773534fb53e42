"""Gamma function, normalized Bessel functions and the rank-one Dunkl kernel.

The normalized Bessel function is j_a(u) = Gamma(a+1) (2/u)^a J_a(u), an entire
even function with j_a(0) = 1.  For the Z_2 root system the Dunkl kernel on
imaginary arguments is

    E_k(ix, y) = j_{k-1/2}(xy) + i xy/(2k+1) j_{k+1/2}(xy),

and for several coordinates it is the product of the one-dimensional kernels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])

# Below this |u| the power series is summed directly; above it the oscillatory
# (or exponentially growing) regime is handed to the cylinder functions.
SERIES_CUTOFF = 6.0
MODIFIED_SERIES_CUTOFF = 20.0


def _lanczos(x):
    z = x - 1.0
    acc = np.full_like(z, _LANCZOS[0])
    for i in range(1, len(_LANCZOS)):
        acc = acc + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power so large arguments do not overflow early
    half = t ** ((z + 0.5) / 2)
    return np.sqrt(2 * np.pi) * half * np.exp(-t) * half * acc


def gamma(x):
    """Gamma function for positive real arguments (Lanczos approximation)."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("gamma is only defined here for positive arguments")
    small = arr < 0.5
    out = np.empty_like(arr)
    big = ~small
    out[big] = _lanczos(arr[big])
    if np.any(small):
        xs = arr[small]
        out[small] = np.pi / (np.sin(np.pi * xs) * _lanczos(1.0 - xs))
    return out.item() if out.ndim == 0 else out


@dataclass(frozen=True)
class BesselOrder:
    alpha: float

    def __post_init__(self):
        if not self.alpha > -1:
            raise ValueError(f"Bessel order must exceed -1, got {self.alpha}")


def _order(alpha) -> float:
    if isinstance(alpha, BesselOrder):
        return alpha.alpha
    return BesselOrder(float(alpha)).alpha


def _series(alpha, z2, sign):
    """sum_n sign^n (z2/4)^n / (n! (a+1)_n), summed until terms are negligible."""
    term = np.ones_like(z2)
    total = np.ones_like(z2)
    q = sign * z2 / 4.0
    n = 0
    while True:
        term = term * q / ((n + 1) * (n + alpha + 1))
        total = total + term
        n += 1
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)) or n > 400:
            return total


def normalized_bessel(alpha, u):
    """j_alpha(u) = Gamma(alpha+1) (2/u)^alpha J_alpha(u), with j_alpha(0) = 1."""
    a = _order(alpha)
    u = np.abs(np.asarray(u, dtype=float))
    out = np.empty_like(u)
    small = u <= SERIES_CUTOFF
    if np.any(small):
        out[small] = _series(a, u[small] ** 2, -1.0)
    if np.any(~small):
        ub = u[~small]
        out[~small] = gamma(a + 1) * (2.0 / ub) ** a * sp.jv(a, ub)
    return out.item() if out.ndim == 0 else out


def normalized_bessel_modified_scaled(alpha, u):
    """exp(-|u|) j_alpha(iu), the exponentially scaled modified counterpart."""
    a = _order(alpha)
    u = np.abs(np.asarray(u, dtype=float))
    out = np.empty_like(u)
    small = u <= MODIFIED_SERIES_CUTOFF
    if np.any(small):
        us = u[small]
        out[small] = _series(a, us ** 2, 1.0) * np.exp(-us)
    if np.any(~small):
        ub = u[~small]
        # log form keeps (2/u)^a Gamma(a+1) finite for large orders
        scale = np.exp(sp.gammaln(a + 1) + a * np.log(2.0 / ub))
        out[~small] = scale * sp.ive(a, ub)
    return out.item() if out.ndim == 0 else out


def _check_k(k):
    if not k >= 0:
        raise ValueError(f"multiplicity must be nonnegative, got {k}")


def dunkl_kernel_1d(k: float, x, y):
    """E_k(ix, y) for the rank-one root system (broadcasting over x and y)."""
    _check_k(k)
    u = np.multiply(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return normalized_bessel(k - 0.5, u) + 1j * u / (2 * k + 1) * normalized_bessel(k + 0.5, u)


def dunkl_kernel_1d_real_scaled(k: float, a, b):
    """exp(-|ab|) E_k(a, b) for real arguments."""
    _check_k(k)
    u = np.multiply(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    return (normalized_bessel_modified_scaled(k - 0.5, u)
            + u / (2 * k + 1) * normalized_bessel_modified_scaled(k + 0.5, u))


def dunkl_kernel(setup, x, y):
    """E_k(ix, y) on R^d as the product of the coordinate kernels."""
    from .geometry import as_points

    xs = as_points(x, setup.d)
    ys = as_points(y, setup.d)
    out = 1.0 + 0j
    for i, ki in enumerate(setup.k):
        out = out * dunkl_kernel_1d(ki, xs[..., i], ys[..., i])
    return out
