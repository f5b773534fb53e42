"""Grids, discrete Dunkl transform, translation, convolution and Dunkl operators.

By default one symmetric uniform grid serves as both the space and the
frequency grid.  The transform is a dense separable matrix apply: along axis i,

    F[m] = sum_l E_{k_i}(-i xi_m, x_l) w_l f[l],

and the inverse uses the complex conjugate kernel with the frequency weights.
"""
from __future__ import annotations

import json
import struct
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .geometry import ReflectionSetup, _normalization
from .quadrature import needs_correction, singular_weights, stencil_range
from .special import dunkl_kernel_1d

SPACE = "space"
FREQUENCY = "frequency"

DEFAULT_GRIDS = {1: (1025, 20.0), 2: (129, 10.0)}


@dataclass(frozen=True, eq=False)
class Grid:
    """Symmetric tensor grid carrying the quadrature weights of mu_k."""

    setup: ReflectionSetup
    n: int
    x_max: float
    # largest conjugate variable the weights must integrate against; defaults
    # to x_max because the grid normally doubles as its own frequency grid
    bandwidth: float | None = None

    def __post_init__(self):
        if self.n < 5 or self.n % 2 == 0:
            raise ValueError(f"grid needs an odd number of points >= 5, got {self.n}")
        if not self.x_max > 0:
            raise ValueError(f"x_max must be positive, got {self.x_max}")
        object.__setattr__(self, "x_max", float(self.x_max))
        if self.bandwidth is None:
            object.__setattr__(self, "bandwidth", self.x_max)
        reach = self.dx * self.bandwidth
        if any(needs_correction(2 * k) for k in self.setup.k) and reach > np.pi / 2:
            warnings.warn(
                f"grid n={self.n}, x_max={self.x_max} under-resolves the kernel oscillation "
                f"at the grid extremes (dx * bandwidth = {reach:.2f} > pi/2)",
                RuntimeWarning, stacklevel=3)

    @classmethod
    def default(cls, setup: ReflectionSetup) -> "Grid":
        n, x_max = DEFAULT_GRIDS.get(setup.d, (65, 8.0))
        return cls(setup, n, x_max)

    @property
    def d(self) -> int:
        return self.setup.d

    @property
    def dx(self) -> float:
        return 2 * self.x_max / (self.n - 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        nodes = np.linspace(-self.x_max, self.x_max, self.n)
        nodes[self.n // 2] = 0.0
        # enforce exact symmetry so reflection maps nodes to nodes
        nodes[self.n // 2 + 1:] = -nodes[: self.n // 2][::-1]
        return nodes

    @property
    def center(self) -> int:
        return self.n // 2

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.d

    def axis_weights(self, axis: int, extra_power: float = 0.0) -> np.ndarray:
        """Per-axis weights for c_{k_i} |sqrt(2) x|^(2k_i) |x|^extra_power dx."""
        return self._axis_weights(axis, float(extra_power))

    def _axis_weights(self, axis, extra_power):
        cache = self.__dict__.setdefault("_weight_cache", {})
        key = (axis, extra_power)
        if key not in cache:
            k = self.setup.k[axis]
            beta = 2 * k + extra_power
            theta = stencil_range(self.dx, self.bandwidth)
            w = _normalization((k,)) * 2.0 ** k * singular_weights(self.nodes, beta, theta)
            w.setflags(write=False)
            cache[key] = w
        return cache[key]

    @cached_property
    def weights(self) -> np.ndarray:
        w = np.ones(())
        for i in range(self.d):
            w = np.multiply.outer(w, self.axis_weights(i))
        w.setflags(write=False)
        return w

    def coordinate(self, axis: int) -> np.ndarray:
        """Coordinate array of ``axis`` broadcast to the full grid shape."""
        shape = [1] * self.d
        shape[axis] = self.n
        return np.broadcast_to(self.nodes.reshape(shape), self.shape)

    @cached_property
    def radius(self) -> np.ndarray:
        r2 = sum(self.coordinate(i) ** 2 for i in range(self.d))
        return np.sqrt(r2)

    @cached_property
    def points(self) -> np.ndarray:
        return np.stack([self.coordinate(i) for i in range(self.d)], axis=-1)

    def same_as(self, other: "Grid") -> bool:
        return (self is other or (self.n == other.n and self.x_max == other.x_max
                                  and self.setup == other.setup
                                  and self.bandwidth == other.bandwidth))

    def sample(self, fn, domain: str = SPACE) -> "SampledFunction":
        """Evaluate fn(points) with points of shape grid.shape + (d,)."""
        return SampledFunction(self, np.asarray(fn(self.points), dtype=complex), domain)

    def header(self) -> dict:
        return {"d": self.d, "n": self.n, "x_max": self.x_max, "k": list(self.setup.k)}


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples on a grid, tagged as living in space or frequency."""

    grid: Grid
    values: np.ndarray
    domain: str = SPACE

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != self.grid.shape:
            if vals.size != self.grid.n ** self.grid.d:
                raise ValueError(f"values of shape {vals.shape} do not fit grid {self.grid.shape}")
            vals = vals.reshape(self.grid.shape)
        if self.domain not in (SPACE, FREQUENCY):
            raise ValueError(f"unknown domain tag {self.domain!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def with_values(self, values, domain: str | None = None) -> "SampledFunction":
        return SampledFunction(self.grid, values, self.domain if domain is None else domain)

    def __add__(self, other):
        _check_same(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other):
        _check_same(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, c):
        if isinstance(c, SampledFunction):
            _check_same(self, c)
            return self.with_values(self.values * c.values)
        return self.with_values(self.values * c)

    __rmul__ = __mul__

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    # serialization: header {d, n, x_max, k, domain_tag} + interleaved re/im, row-major
    def header(self) -> dict:
        return {**self.grid.header(), "domain_tag": self.domain}

    def _interleaved(self) -> np.ndarray:
        flat = self.values.reshape(-1)
        return np.column_stack([flat.real, flat.imag]).reshape(-1)

    def to_json(self) -> str:
        return json.dumps({"header": self.header(), "values": self._interleaved().tolist()})

    def to_bytes(self) -> bytes:
        head = json.dumps(self.header(), sort_keys=True).encode()
        return struct.pack("<I", len(head)) + head + self._interleaved().astype("<f8").tobytes()

    @classmethod
    def _from_parts(cls, header: dict, flat: np.ndarray) -> "SampledFunction":
        setup = ReflectionSetup(int(header["d"]), tuple(header["k"]))
        grid = Grid(setup, int(header["n"]), float(header["x_max"]))
        flat = np.asarray(flat, dtype=float)
        vals = flat[0::2] + 1j * flat[1::2]
        return cls(grid, vals.reshape(grid.shape), header.get("domain_tag", SPACE))

    @classmethod
    def from_json(cls, text: str) -> "SampledFunction":
        obj = json.loads(text)
        return cls._from_parts(obj["header"], obj["values"])

    @classmethod
    def from_bytes(cls, blob: bytes) -> "SampledFunction":
        (size,) = struct.unpack("<I", blob[:4])
        header = json.loads(blob[4:4 + size].decode())
        flat = np.frombuffer(blob[4 + size:], dtype="<f8")
        return cls._from_parts(header, flat)

    def save(self, path) -> None:
        path = str(path)
        if path.endswith(".json"):
            with open(path, "w") as fh:
                fh.write(self.to_json())
        else:
            with open(path, "wb") as fh:
                fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "SampledFunction":
        path = str(path)
        if path.endswith(".json"):
            with open(path) as fh:
                return cls.from_json(fh.read())
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


def _check_same(a: SampledFunction, b: SampledFunction):
    if not a.grid.same_as(b.grid):
        raise ValueError("functions live on different grids")


def _apply_axis(mat: np.ndarray, values: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(mat, values, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _scale_axis(values, vec, axis):
    shape = [1] * values.ndim
    shape[axis] = vec.size
    return values * vec.reshape(shape)


@dataclass(eq=False)
class TransformPlan:
    """Kernel matrices E_{k_i}(-i xi_m, x_l) for each axis.

    The frequency grid is the space grid itself unless ``dual`` is given.
    """

    grid: Grid
    dual: Grid | None = None
    self_test: bool = True
    tolerance: float = 1e-6
    self_test_error: float = field(default=float("nan"), init=False)

    def __post_init__(self):
        if self.dual is None:
            self.dual = self.grid
        elif self.dual.setup != self.grid.setup:
            raise ValueError("space and frequency grids carry different multiplicities")
        cache = {}
        mats = []
        x = self.grid.nodes
        xi = self.dual.nodes
        for ki in self.grid.setup.k:
            if ki not in cache:
                cache[ki] = dunkl_kernel_1d(ki, -xi[:, None], x[None, :])
            mats.append(cache[ki])
        self._kernels = tuple(mats)
        if self.self_test:
            g = self.grid.sample(lambda p: np.exp(-0.5 * np.sum(p * p, axis=-1)))
            back = dunkl_inverse(self, dunkl_transform(self, g))
            self.self_test_error = float(np.max(np.abs(back.values - g.values)))
            if self.self_test_error > self.tolerance:
                warnings.warn(f"transform round trip error {self.self_test_error:.2e} "
                              f"exceeds {self.tolerance:.0e}", RuntimeWarning, stacklevel=2)

    @classmethod
    def for_setup(cls, setup: ReflectionSetup, n: int | None = None,
                  x_max: float | None = None, **kw) -> "TransformPlan":
        grid = Grid.default(setup) if n is None else Grid(setup, n, x_max)
        return cls(grid, **kw)

    @property
    def setup(self) -> ReflectionSetup:
        return self.grid.setup

    @property
    def freq_grid(self) -> Grid:
        return self.dual

    def unweighted_kernel(self, axis: int) -> np.ndarray:
        return self._kernels[axis]

    def kernel_matrix(self, axis: int) -> np.ndarray:
        """K[m, l] = E_k(-i xi_m, x_l) w_l for one axis."""
        return self._kernels[axis] * self.grid.axis_weights(axis)[None, :]

    def inverse_matrix(self, axis: int) -> np.ndarray:
        """K_inv[l, m] = E_k(i xi_m, x_l) w_m for one axis."""
        return self._kernels[axis].conj().T * self.dual.axis_weights(axis)[None, :]

    def forward_values(self, values: np.ndarray) -> np.ndarray:
        vals = np.asarray(values, dtype=complex)
        for i in range(self.grid.d):
            vals = _apply_axis(self._kernels[i], _scale_axis(vals, self.grid.axis_weights(i), i), i)
        return vals

    def inverse_values(self, values: np.ndarray, homogeneous_power: float = 0.0) -> np.ndarray:
        vals = np.asarray(values, dtype=complex)
        d = self.grid.d
        if homogeneous_power and d > 1:
            vals = vals * self.dual.radius ** homogeneous_power
        for i in range(d):
            extra = homogeneous_power if d == 1 else 0.0
            w = self.dual.axis_weights(i, extra)
            vals = _apply_axis(self._kernels[i].conj().T, _scale_axis(vals, w, i), i)
        return vals


def _check_plan(plan: TransformPlan, f: SampledFunction, grid: Grid | None = None):
    if not (grid or plan.grid).same_as(f.grid):
        raise ValueError("function does not live on the plan's grid")
    if not np.all(np.isfinite(f.values)):
        raise ValueError("input contains NaN or infinite values")


def dunkl_transform(plan: TransformPlan, f: SampledFunction) -> SampledFunction:
    """Discrete Dunkl transform of a space-domain function."""
    _check_plan(plan, f)
    return SampledFunction(plan.dual, plan.forward_values(f.values), FREQUENCY)


def dunkl_inverse(plan: TransformPlan, F: SampledFunction, multiplier=None,
                  homogeneous_power: float = 0.0) -> SampledFunction:
    """Inverse transform of ``multiplier * |xi|^homogeneous_power * F``.

    ``multiplier`` must be smooth; a homogeneous factor |xi|^p is passed
    separately so that in one dimension the quadrature can absorb it into the
    singular weight |xi|^(2k+p) instead of sampling a kink at the origin.
    """
    _check_plan(plan, F, plan.dual)
    vals = F.values if multiplier is None else F.values * multiplier
    return SampledFunction(plan.grid, plan.inverse_values(vals, homogeneous_power), SPACE)


def lp_norm(f: SampledFunction, p: float) -> float:
    """Quadrature L^p(mu_k) norm; p = inf gives the max over nodes."""
    if p == np.inf:
        return f.sup()
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    total = float(np.sum(f.grid.weights * np.abs(f.values) ** p))
    return max(total, 0.0) ** (1.0 / p)


def plancherel_defect(plan: TransformPlan, f: SampledFunction) -> float:
    """| ||F_k f||_2 - ||f||_2 | / ||f||_2."""
    nf = lp_norm(f, 2)
    if nf == 0:
        raise ValueError("Plancherel defect of the zero function is undefined")
    return abs(lp_norm(dunkl_transform(plan, f), 2) - nf) / nf


def inversion_defect(plan: TransformPlan, f: SampledFunction) -> float:
    """sup |F^-1 F f - f| / sup |f|."""
    back = dunkl_inverse(plan, dunkl_transform(plan, f))
    return float(np.max(np.abs(back.values - f.values)) / f.sup())


def kernel_multiplier(grid: Grid, x0) -> np.ndarray:
    """xi -> E_k(i x0, xi) sampled on the (frequency) grid."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    out = np.ones(grid.shape, dtype=complex)
    for i, ki in enumerate(grid.setup.k):
        out = out * dunkl_kernel_1d(ki, x0[i], grid.coordinate(i))
    return out


def translate(plan: TransformPlan, x0, f: SampledFunction) -> SampledFunction:
    """tau_{x0} f, so that for k = 0 the result is y -> f(y + x0)."""
    F = dunkl_transform(plan, f)
    return dunkl_inverse(plan, F, kernel_multiplier(plan.dual, x0))


def convolve(plan: TransformPlan, f: SampledFunction, g: SampledFunction) -> SampledFunction:
    F = dunkl_transform(plan, f)
    G = dunkl_transform(plan, g)
    return dunkl_inverse(plan, F * G)


def _spectral_sum(grid: Grid, values, x, y=None, homogeneous_power: float = 0.0,
                  chunk: int = 256) -> np.ndarray:
    """sum_m F(xi_m) |xi_m|^p E_k(ix, xi_m) [E_k(-iy, xi_m)] w_m at arbitrary points.

    Only nodes where F is nonzero enter the sum, so compactly supported
    spectra are cheap.
    """
    from .geometry import as_points

    vals = np.asarray(values, dtype=complex).reshape(grid.shape)
    d = grid.d
    if d == 1:
        w = grid.axis_weights(0, homogeneous_power)
    else:
        w = grid.weights * grid.radius ** homogeneous_power if homogeneous_power else grid.weights
    mask = vals != 0
    coef = (vals * w)[mask]
    xi = grid.points[mask]
    xs = as_points(x, d)
    lead = xs.shape[:-1]
    xs = xs.reshape(-1, d)
    ys = None
    if y is not None:
        ys = np.broadcast_to(as_points(y, d), lead + (d,)).reshape(-1, d)
    out = np.empty(xs.shape[0], dtype=complex)
    for start in range(0, xs.shape[0], chunk):
        sl = slice(start, start + chunk)
        ker = np.ones((xs[sl].shape[0], xi.shape[0]), dtype=complex)
        for i, ki in enumerate(grid.setup.k):
            ker *= dunkl_kernel_1d(ki, xs[sl, i:i + 1], xi[None, :, i])
            if ys is not None:
                ker *= dunkl_kernel_1d(ki, -ys[sl, i:i + 1], xi[None, :, i])
        out[sl] = ker @ coef
    return out.reshape(lead)


def inverse_at(plan: TransformPlan, F, x, homogeneous_power: float = 0.0) -> np.ndarray:
    """Inverse transform of F evaluated at arbitrary points x."""
    values = F.values if isinstance(F, SampledFunction) else F
    return _spectral_sum(plan.dual, values, x, None, homogeneous_power)


def translated_at(plan: TransformPlan, F, x, y) -> np.ndarray:
    """tau_x f(-y) for f with transform F, at arbitrary point pairs (x, y)."""
    values = F.values if isinstance(F, SampledFunction) else F
    return _spectral_sum(plan.dual, values, x, y)


def _central_derivative(v: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Fourth-order central difference, second order at the two edge layers."""
    v = np.moveaxis(v, axis, 0)
    out = np.empty_like(v)
    out[2:-2] = (-v[4:] + 8 * v[3:-1] - 8 * v[1:-3] + v[:-4]) / (12 * h)
    out[1] = (v[2] - v[0]) / (2 * h)
    out[-2] = (v[-1] - v[-3]) / (2 * h)
    out[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h)
    out[-1] = (3 * v[-1] - 4 * v[-2] + v[-3]) / (2 * h)
    return np.moveaxis(out, 0, axis)


def dunkl_derivative(f: SampledFunction, axis: int) -> SampledFunction:
    """T_j f = d_j f + k_j (f(x) - f(sigma_j x)) / x_j (0-based axis)."""
    grid = f.grid
    if not 0 <= axis < grid.d:
        raise IndexError(f"axis {axis} outside 0..{grid.d - 1}")
    h = grid.dx
    v = f.values
    out = _central_derivative(v, h, axis)
    k = grid.setup.k[axis]
    if k > 0:
        diff = v - np.flip(v, axis=axis)
        x = grid.nodes.copy()
        c = grid.center
        x[c] = 1.0
        term = _scale_axis(diff, 1.0 / x, axis)
        # removable singularity on the hyperplane: the quotient tends to d_j diff
        limit = np.take(_central_derivative(diff, h, axis), [c], axis=axis)
        idx = [slice(None)] * grid.d
        idx[axis] = slice(c, c + 1)
        term[tuple(idx)] = limit
        out = out + k * term
    return f.with_values(out)


def dunkl_laplacian(f: SampledFunction) -> SampledFunction:
    """Delta_k f = sum_j T_j^2 f by repeated finite-difference Dunkl operators."""
    total = f.with_values(np.zeros(f.grid.shape))
    for j in range(f.grid.d):
        total = total + dunkl_derivative(dunkl_derivative(f, j), j)
    return total
