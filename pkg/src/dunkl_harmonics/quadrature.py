"""Trapezoid weights for integrands of the form |x|^beta * smooth on a uniform grid.

The plain trapezoid rule loses its spectral accuracy when beta is not an even
integer: the generalized Euler-Maclaurin expansion leaves an error
sum_i 2 zeta(-beta-2i) g^(2i)(0) dx^(beta+2i+1) / (2i)! coming from the origin.
We cancel it with a symmetric stencil a_0..a_M added to the weights around the
origin.  The stencil is fitted so that it reproduces the exact trapezoid
error of e^{i omega x}|x|^beta for all frequencies with omega*dx <= theta_max,
which is what matters for transform kernels.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gamma as _sgamma, zeta

STENCIL_HALF_WIDTH = 8
_SERIES_SWITCH = 0.5


def needs_correction(beta: float) -> bool:
    return beta > 0 and abs(beta - 2 * round(beta / 2)) > 1e-12


def trapezoid_error(theta, beta: float) -> np.ndarray:
    """Trapezoid minus exact integral of cos(theta x)|x|^beta over R, at dx = 1."""
    th = np.abs(np.asarray(theta, dtype=float))
    out = np.empty_like(th)
    near = th < _SERIES_SWITCH
    t = th[near]
    acc = np.zeros_like(t)
    for i in range(16):
        acc += 2 * zeta(-beta - 2 * i) * (-1) ** i * t ** (2 * i) / math.factorial(2 * i)
    out[near] = acc
    t = th[~near]
    if t.size:
        # polylog Li_{-beta}(e^{it}) through the Hurwitz zeta, minus its singular part
        q = t / (2 * np.pi)
        li = (_sgamma(1 + beta) / (2 * np.pi) ** (1 + beta)
              * (1j ** (1 + beta) * zeta(1 + beta, q) + 1j ** (-1 - beta) * zeta(1 + beta, 1 - q)))
        sing = _sgamma(1 + beta) * (-1j * t) ** (-1 - beta)
        out[~near] = 2 * np.real(li - sing)
    return out


@lru_cache(maxsize=256)
def origin_stencil(beta: float, theta_max: float, half_width: int = STENCIL_HALF_WIDTH):
    """Coefficients a_0..a_M (unit spacing) cancelling the origin error.

    Returns the coefficients and the worst fit residual on [0, theta_max].
    """
    th = np.linspace(0.0, theta_max, 600)
    cols = [np.ones_like(th)] + [2 * np.cos(m * th) for m in range(1, half_width + 1)]
    A = np.column_stack(cols)
    target = -trapezoid_error(th, beta)
    coef, *_ = np.linalg.lstsq(A, target, rcond=None)
    return coef, float(np.max(np.abs(A @ coef - target)))


def stencil_range(dx: float, x_max: float) -> float:
    """Frequency span (in units of 1/dx) the origin stencil has to cover."""
    return float(np.clip(1.3 * dx * x_max, 1.0, np.pi / 2))


def singular_weights(nodes: np.ndarray, beta: float, theta_max: float | None = None) -> np.ndarray:
    """Weights approximating int g(x)|x|^beta dx on a symmetric uniform grid.

    ``nodes`` must have odd length with 0 in the middle.  The end nodes are
    halved as in the trapezoid rule.
    """
    nodes = np.asarray(nodes, dtype=float)
    n = nodes.size
    dx = nodes[1] - nodes[0]
    w = dx * np.abs(nodes) ** beta if beta != 0 else np.full(n, dx)
    w[0] *= 0.5
    w[-1] *= 0.5
    if needs_correction(beta):
        c = n // 2
        if n % 2 == 0 or abs(nodes[c]) > 1e-12 * dx:
            raise ValueError("singular weights need an odd symmetric grid through 0")
        if theta_max is None:
            theta_max = stencil_range(dx, nodes[-1])
        coef, _ = origin_stencil(round(float(beta), 14), round(float(theta_max), 12))
        m = min(len(coef) - 1, c)
        scale = dx ** (beta + 1)
        w[c] += coef[0] * scale
        for j in range(1, m + 1):
            w[c + j] += coef[j] * scale
            w[c - j] += coef[j] * scale
    return w
