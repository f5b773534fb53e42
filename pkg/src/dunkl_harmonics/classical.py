"""Classical (k = 0) reference implementations used as oracles.

The FFT routes run on Fourier-conjugate grids, n dx^2 = 2 pi, where the
frequency nodes of the DFT coincide with the space nodes.  They share the
quadrature weights with the dense transform but nothing else: no Bessel
kernels, no dense matrices.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy import integrate

from .core import Grid
from .geometry import ReflectionSetup
from .special import gamma
from .windows import DecompositionWindows


def conjugate_extent(n: int) -> float:
    """x_max of the odd n-point grid whose DFT frequencies are its own nodes."""
    dx = math.sqrt(2 * math.pi / n)
    return dx * (n - 1) / 2


def conjugate_grid(d: int, n: int) -> Grid:
    return Grid(ReflectionSetup(d, 0.0), n, conjugate_extent(n))


class FFTPlan:
    """Classical Fourier transform on a conjugate grid through numpy.fft."""

    def __init__(self, grid: Grid):
        if any(k != 0 for k in grid.setup.k):
            raise ValueError("the classical oracle needs k = 0")
        if abs(grid.n * grid.dx ** 2 - 2 * math.pi) > 1e-9:
            raise ValueError("grid is not Fourier-conjugate (n dx^2 != 2 pi)")
        self.grid = grid
        self.d = grid.d

    def _weights(self, power=0.0):
        g = self.grid
        if power == 0.0:
            return g.weights
        if self.d == 1:
            return g.axis_weights(0, power)
        return g.weights * g.radius ** power

    def forward(self, values, power=0.0):
        """F(xi) = sum_x f(x) e^{-i x xi} w(x); the weights carry (2 pi)^(-d/2)."""
        v = np.fft.ifftshift(np.asarray(values, dtype=complex) * self._weights(power))
        return np.fft.fftshift(np.fft.fftn(v))

    def inverse(self, values, power=0.0):
        """f(x) = sum_xi F(xi) e^{i x xi} w(xi), with |xi|^power kept in w."""
        v = np.fft.ifftshift(np.asarray(values, dtype=complex) * self._weights(power))
        return self.grid.n ** self.d * np.fft.fftshift(np.fft.ifftn(v))


def fractional_laplacian(plan: FFTPlan, values, s: float) -> np.ndarray:
    return plan.inverse(plan.forward(values), power=2 * s)


def paraproduct(plan: FFTPlan, theta, psi, phi, f, g, js) -> np.ndarray:
    r = plan.grid.radius
    F = plan.forward(f)
    G = plan.forward(g)
    total = np.zeros(plan.grid.shape, dtype=complex)
    for j in js:
        pw, fw, tw = psi.scaled(j)(r), phi.scaled(j)(r), theta.scaled(j)(r)
        if not (np.any(pw) and np.any(fw) and np.any(tw)):
            continue
        total += plan.inverse(tw * plan.forward(plan.inverse(pw * F) * plan.inverse(fw * G)))
    return total


def decomposition_residual(plan: FFTPlan, f, g, J: int = 12,
                           windows: DecompositionWindows | None = None) -> np.ndarray:
    windows = windows or DecompositionWindows.standard()
    rest = np.asarray(f, dtype=complex) * g
    for i in (1, 2, 3):
        rest = rest - paraproduct(plan, *windows.triple(i), f, g, range(-J, J + 1))
    return rest


def kernel_on_nodes(plan: FFTPlan, theta, psi, phi, ix, i1, i2, js) -> np.ndarray:
    """k = 0 paraproduct kernel at node index triples (one dimension).

    Each translate tau_{-u} Theta_j(x) is Theta_j(x - u), read from a single
    periodic FFT inversion of the window.
    """
    if plan.d != 1:
        raise ValueError("node kernel oracle is one-dimensional")
    n = plan.grid.n
    c = plan.grid.center
    r = plan.grid.radius
    w = plan.grid.weights
    u = np.arange(n)
    total = np.zeros(len(ix), dtype=complex)
    for j in js:
        tw, pw, fw = theta.scaled(j)(r), psi.scaled(j)(r), phi.scaled(j)(r)
        if not (np.any(tw) and np.any(pw) and np.any(fw)):
            continue
        kernels = [plan.inverse(m) for m in (tw, pw, fw)]

        def at(kernel, a, b):
            # kernel evaluated at node_a - node_b, wrapped with period n dx
            return kernel[(np.asarray(a)[:, None] - b[None, :] + c) % n]

        A = at(kernels[0], ix, u)
        B = at(kernels[1], u, np.asarray(i1)).T
        C = at(kernels[2], u, np.asarray(i2)).T
        total += np.sum(A * B * C * w[None, :], axis=1)
    return total


def fractional_laplacian_integral(f, x: float, s: float, cut: float = 1.0,
                                  epsrel: float = 1e-12) -> float:
    """(-Delta)^s f(x) on R from the singular integral, by adaptive quadrature.

    C_s int_0^inf (2 f(x) - f(x+y) - f(x-y)) y^(-1-2s) dy with
    C_s = 4^s Gamma(1/2 + s) / (sqrt(pi) |Gamma(-s)|), for 0 < s < 1.
    """
    if not 0 < s < 1:
        raise ValueError(f"singular integral needs 0 < s < 1, got {s}")
    # |Gamma(-s)| = Gamma(1-s) / s
    c = 4 ** s * gamma(0.5 + s) * s / (math.sqrt(math.pi) * gamma(1 - s))
    fx = f(x)
    # y^(-1-2s) times a second difference: roundoff near y = 0 is harmless
    # but trips the extrapolation heuristics of the integrator

    def body(y):
        return (2 * fx - f(x + y) - f(x - y)) * y ** (-1 - 2 * s)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        near, _ = integrate.quad(body, 0.0, cut, epsabs=0.0, epsrel=epsrel, limit=400)
        far, _ = integrate.quad(body, cut, np.inf, epsabs=0.0, epsrel=epsrel, limit=400)
    return c * (near + far)


def lp_norm(grid: Grid, values, p: float) -> float:
    w = grid.weights
    return float(np.sum(w * np.abs(values) ** p) ** (1 / p))
