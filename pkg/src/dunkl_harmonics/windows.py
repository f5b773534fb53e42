"""Smooth radial frequency windows and the dyadic decomposition window set.

Every window here has the form

    w(xi) = |xi|^power * (eta(|xi|/upper) - eta(|xi|/lower)),

where eta is the smooth cutoff (1 on [0, 1], 0 beyond 2) built from the
exp(-1/t) mollifier, and lower = 0 drops the second term.  Scaling by 2^j is
w_j(xi) = w(xi / 2^j).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np


def _smooth_step(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def eta(r):
    """Smooth radial cutoff: 1 for r <= 1, 0 for r >= 2."""
    r = np.abs(np.asarray(r, dtype=float))
    a = _smooth_step(2.0 - r)
    b = _smooth_step(r - 1.0)
    return a / (a + b)


@dataclass(frozen=True)
class SpectralWindow:
    """Radial window eta(r/upper) - eta(r/lower), times r^power, at scale 2^j."""

    upper: float
    lower: float = 0.0
    j: int = 0
    power: float = 0.0
    name: str = "window"

    def __post_init__(self):
        if not self.upper > 0 or self.lower < 0 or (self.lower and 2 * self.lower > self.upper):
            raise ValueError(f"invalid window scales lower={self.lower}, upper={self.upper}")

    @property
    def support_lo(self) -> float:
        return self.lower * 2.0 ** self.j

    @property
    def support_hi(self) -> float:
        return 2 * self.upper * 2.0 ** self.j

    @property
    def plateau_lo(self) -> float:
        return 2 * self.lower * 2.0 ** self.j

    @property
    def plateau_hi(self) -> float:
        return self.upper * 2.0 ** self.j

    @property
    def smooth(self) -> bool:
        """False when a non-polynomial power meets the origin."""
        even = abs(self.power / 2 - round(self.power / 2)) < 1e-12 and self.power >= 0
        return self.lower > 0 or even

    def profile(self, r):
        """Unscaled profile (j = 0) at radius r."""
        r = np.abs(np.asarray(r, dtype=float))
        val = eta(r / self.upper)
        if self.lower > 0:
            val = val - eta(r / self.lower)
        if self.power:
            with np.errstate(divide="ignore", invalid="ignore"):
                val = np.where(val != 0, val * r ** self.power, 0.0)
        return val

    def __call__(self, r):
        return self.profile(np.asarray(r, dtype=float) / 2.0 ** self.j)

    def scaled(self, j: int) -> "SpectralWindow":
        return replace(self, j=int(j))

    def times_power(self, p: float, name: str | None = None) -> "SpectralWindow":
        return replace(self, power=self.power + p, name=name or self.name)

    def on_grid(self, grid) -> np.ndarray:
        return self(grid.radius)

    def contains_origin(self) -> bool:
        return self.lower == 0

    def to_dict(self) -> dict:
        return {
            "type": "ball" if self.lower == 0 else "annulus",
            "name": self.name,
            "support_lo": self.support_lo,
            "support_hi": self.support_hi,
            "plateau_lo": self.plateau_lo,
            "plateau_hi": self.plateau_hi,
            "mollifier": "exp-inverse",
            "j": self.j,
            "power": self.power,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "SpectralWindow":
        if obj.get("mollifier", "exp-inverse") != "exp-inverse":
            raise ValueError(f"unsupported mollifier {obj['mollifier']!r}")
        j = int(obj.get("j", 0))
        scale = 2.0 ** j
        upper = obj["support_hi"] / (2 * scale)
        lower = obj["support_lo"] / scale
        return cls(upper, lower, j, float(obj.get("power", 0.0)), obj.get("name", "window"))

    @classmethod
    def from_json(cls, text: str) -> "SpectralWindow":
        return cls.from_dict(json.loads(text))


def lp_partition() -> SpectralWindow:
    """psi(xi) = eta(xi) - eta(2 xi), supported in 1/2 <= |xi| <= 2."""
    return SpectralWindow(1.0, 0.5, name="psi")


def partition_sum(window: SpectralWindow, r, J: int) -> np.ndarray:
    """sum_{|j| <= J} window(r / 2^j)."""
    return sum(window.scaled(j)(r) for j in range(-J, J + 1))


def partition_defect(window: SpectralWindow, J: int, samples: int = 4001) -> float:
    """Max deviation of the truncated partition from 1 on 2^(1-J) <= r <= 2^(J-1)."""
    r = np.geomspace(2.0 ** (1 - J), 2.0 ** (J - 1), samples)
    return float(np.max(np.abs(partition_sum(window, r, J) - 1.0)))


@dataclass(frozen=True)
class DecompositionWindows:
    """Window triples (theta, psi, phi) for the three paraproducts of f g."""

    psi1: SpectralWindow
    phi1: SpectralWindow
    theta1: SpectralWindow
    psi2: SpectralWindow
    phi2: SpectralWindow
    theta2: SpectralWindow
    psi3: SpectralWindow
    phi3: SpectralWindow
    theta3: SpectralWindow

    @classmethod
    def standard(cls) -> "DecompositionWindows":
        psi = lp_partition()
        # sum_{|i| <= 4} psi_i telescopes to eta(xi/2^4) - eta(2^5 xi)
        near = SpectralWindow(16.0, 1.0 / 32, name="phi1")
        # sum_{i < -4} psi_i telescopes to eta(2^5 xi)
        low = SpectralWindow(1.0 / 32, name="phi2")
        theta1 = SpectralWindow(64.0, name="theta1")
        band = SpectralWindow(4.0, 1.0 / 8, name="theta2")
        return cls(
            psi1=replace(psi, name="psi1"), phi1=near, theta1=theta1,
            psi2=replace(psi, name="psi2"), phi2=low, theta2=band,
            psi3=replace(low, name="psi3"), phi3=replace(psi, name="phi3"),
            theta3=replace(band, name="theta3"),
        )

    def triple(self, i: int):
        """(theta, psi, phi) of the i-th paraproduct, i in {1, 2, 3}."""
        return (getattr(self, f"theta{i}"), getattr(self, f"psi{i}"), getattr(self, f"phi{i}"))

    def to_dict(self) -> dict:
        return {name: getattr(self, name).to_dict() for name in self.__dataclass_fields__}


def window_transfer(s: float, windows: DecompositionWindows) -> DecompositionWindows:
    """Windows that move (-Delta_k)^s from the product onto f (pieces 1, 2) or g (3)."""
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    w = windows
    return DecompositionWindows(
        psi1=w.psi1.times_power(-2 * s, "psi1~"), phi1=replace(w.phi1, name="phi1~"),
        theta1=w.theta1.times_power(2 * s, "theta1~"),
        psi2=w.psi2.times_power(-2 * s, "psi2~"), phi2=replace(w.phi2, name="phi2~"),
        theta2=w.theta2.times_power(2 * s, "theta2~"),
        psi3=replace(w.psi3, name="psi3~"), phi3=w.phi3.times_power(-2 * s, "phi3~"),
        theta3=w.theta3.times_power(2 * s, "theta3~"),
    )


def transfer_identity_defect(s: float, windows: DecompositionWindows, xi, zeta,
                             js=range(-6, 7)) -> float:
    """Max pointwise gap in |xi|^2s theta_j(xi) a_j(zeta) = theta~_j(xi) a~_j(zeta) |zeta|^2s.

    a is the window carrying the differentiated function (psi for pieces 1 and
    2, phi for piece 3).  The gap is measured relative to the size of the
    left-hand side.
    """
    tilde = window_transfer(s, windows)
    xi = np.abs(np.asarray(xi, dtype=float))
    zeta = np.abs(np.asarray(zeta, dtype=float))
    worst = 0.0
    for i, slot in ((1, "psi"), (2, "psi"), (3, "phi")):
        th, a = getattr(windows, f"theta{i}"), getattr(windows, f"{slot}{i}")
        tht, at = getattr(tilde, f"theta{i}"), getattr(tilde, f"{slot}{i}")
        for j in js:
            lhs = xi ** (2 * s) * th.scaled(j)(xi) * a.scaled(j)(zeta)
            rhs = tht.scaled(j)(xi) * at.scaled(j)(zeta) * zeta ** (2 * s)
            scale = max(1.0, float(np.max(np.abs(lhs))))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))) / scale)
    return worst
