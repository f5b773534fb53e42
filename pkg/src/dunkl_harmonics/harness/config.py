"""Suite configuration: setup, grid, suite list and sweep parameters."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from ..core import DEFAULT_GRIDS
from ..geometry import ReflectionSetup


class ConfigError(ValueError):
    """Invalid configuration (CLI exit code 2)."""


def _frac(v) -> Fraction:
    try:
        out = Fraction(str(v))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot read exponent {v!r}") from exc
    if out <= 0:
        raise ConfigError(f"exponents must be positive, got {v!r}")
    return out


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _pair_sum(a: Fraction, b: Fraction) -> Fraction:
    return 1 / a + 1 / b


@dataclass(frozen=True)
class ExponentTuple:
    """(p, p1, p2) plus optional second and third Hoelder pairs, kept as rationals."""

    p: Fraction
    p1: Fraction
    p2: Fraction
    pt1: Fraction | None = None
    pt2: Fraction | None = None
    pb1: Fraction | None = None
    pb2: Fraction | None = None

    @classmethod
    def parse(cls, obj) -> "ExponentTuple":
        if isinstance(obj, dict):
            vals = {k: (None if v is None else _frac(v)) for k, v in obj.items()}
            unknown = set(vals) - {"p", "p1", "p2", "pt1", "pt2", "pb1", "pb2"}
            if unknown:
                raise ConfigError(f"unknown exponent fields {sorted(unknown)}")
            if not {"p1", "p2"} <= set(vals):
                raise ConfigError("exponent tuple needs p1 and p2")
            if vals.get("p") is None:
                vals["p"] = 1 / _pair_sum(vals["p1"], vals["p2"])
            out = cls(**vals)
        else:
            items = [_frac(v) for v in obj]
            if len(items) not in (3, 5, 7):
                raise ConfigError(f"exponent tuple needs 3, 5 or 7 entries, got {len(items)}")
            out = cls(*items)
        out.check_hoelder()
        return out

    def pairs(self):
        out = [(self.p1, self.p2)]
        for a, b in ((self.pt1, self.pt2), (self.pb1, self.pb2)):
            if (a is None) != (b is None):
                raise ConfigError("Hoelder pairs must be given in full")
            if a is not None:
                out.append((a, b))
        return out

    def check_hoelder(self):
        for a, b in self.pairs():
            if _pair_sum(a, b) != 1 / self.p:
                raise ConfigError(f"1/{_fmt(self.p)} != 1/{_fmt(a)} + 1/{_fmt(b)}")

    def leibniz_ready(self, pairs_needed: int):
        """Theorems on fractional Leibniz rules need every exponent strictly in (1, inf)."""
        pairs = self.pairs()
        if len(pairs) < pairs_needed:
            raise ConfigError(f"exponent tuple {self.to_list()} needs {pairs_needed} Hoelder pairs")
        for q in [self.p] + [x for pr in pairs[:pairs_needed] for x in pr]:
            if not q > 1:
                raise ConfigError(f"Leibniz sweeps need exponents in (1, inf), got {_fmt(q)}")

    def paraproduct_ready(self):
        if not (self.p1 > 1 and self.p2 > 1):
            raise ConfigError("paraproduct sweeps need 1 < p1, p2 < inf")

    def to_list(self):
        return [_fmt(q) for q in (self.p, self.p1, self.p2, self.pt1, self.pt2, self.pb1, self.pb2)
                if q is not None]

    def floats(self) -> dict:
        names = ("p", "p1", "p2", "pt1", "pt2", "pb1", "pb2")
        return {n: float(getattr(self, n)) for n in names if getattr(self, n) is not None}


DEFAULT_FAMILIES = ("gauss-1", "gauss-0.5", "xgauss", "poly-gauss")
DEFAULT_LEIBNIZ = (("2", "4", "4", "4", "4"), ("2", "3", "6", "6", "3"), ("3/2", "2", "6", "3", "3"))
DEFAULT_SPLIT = (("2", "4", "4", "4", "4", "4", "4"), ("3/2", "3", "3", "2", "6", "6", "2"))
DEFAULT_PARAPRODUCT = (("2", "4", "4"), ("1", "2", "2"), ("2/3", "4/3", "4/3"))


@dataclass
class SweepConfig:
    s_values: list = field(default_factory=lambda: [0.25, 0.5, 0.75])
    split_s: list = field(default_factory=lambda: [[0.25, 0.25], [0.125, 0.375]])
    leibniz: list = field(default_factory=lambda: [list(t) for t in DEFAULT_LEIBNIZ])
    split: list = field(default_factory=lambda: [list(t) for t in DEFAULT_SPLIT])
    paraproduct: list = field(default_factory=lambda: [list(t) for t in DEFAULT_PARAPRODUCT])
    families: list = field(default_factory=lambda: list(DEFAULT_FAMILIES))
    J: int = 12
    L: float | None = None


@dataclass
class SuiteConfig:
    d: int = 1
    k: list = field(default_factory=lambda: [1.0])
    n: int | None = None
    x_max: float | None = None
    suites: list = field(default_factory=list)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    output: str | None = None
    csv: str | None = None
    seed: int = 0
    refine: bool = True

    def __post_init__(self):
        if isinstance(self.sweep, dict):
            known = set(SweepConfig.__dataclass_fields__)
            extra = set(self.sweep) - known
            if extra:
                raise ConfigError(f"unknown sweep fields {sorted(extra)}")
            self.sweep = SweepConfig(**self.sweep)
        if isinstance(self.k, (int, float)):
            self.k = [float(self.k)]
        try:
            self.setup = ReflectionSetup(int(self.d), tuple(float(v) for v in self.k))
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        self.k = list(self.setup.k)
        n, x_max = DEFAULT_GRIDS.get(self.setup.d, (65, 8.0))
        self.n = int(self.n or n)
        self.x_max = float(self.x_max or x_max)
        if self.n < 5 or self.n % 2 == 0:
            raise ConfigError(f"grid size must be odd and >= 5, got {self.n}")
        if not self.x_max > 0:
            raise ConfigError(f"x_max must be positive, got {self.x_max}")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")
        from .suites import SUITES

        for name in self.suites:
            if name not in SUITES:
                raise ConfigError(f"unknown suite {name!r}")
        sw = self.sweep
        self.leibniz_tuples = [ExponentTuple.parse(t) for t in sw.leibniz]
        self.split_tuples = [ExponentTuple.parse(t) for t in sw.split]
        self.paraproduct_tuples = [ExponentTuple.parse(t) for t in sw.paraproduct]
        for t in self.leibniz_tuples:
            t.leibniz_ready(2)
        for t in self.split_tuples:
            t.leibniz_ready(3)
        for t in self.paraproduct_tuples:
            t.paraproduct_ready()
        for s in sw.s_values:
            if not s > 0:
                raise ConfigError(f"s must be positive, got {s}")
        for pair in sw.split_s:
            if len(pair) != 2 or min(pair) <= 0:
                raise ConfigError(f"split orders must be two positive numbers, got {pair}")
        from .families import FAMILY

        for fam in sw.families:
            if fam not in FAMILY:
                raise ConfigError(f"unknown test function {fam!r}")
        if sw.J < 1:
            raise ConfigError("J must be at least 1")
        if sw.L is not None and not sw.L > 3 * self.setup.d_k:
            raise ConfigError(f"L must exceed 3 d_k = {3 * self.setup.d_k}")

    def refined(self) -> "SuiteConfig":
        """Same configuration on a grid with half the spacing."""
        return SuiteConfig(**{**self.to_dict(), "n": 2 * self.n - 1, "refine": False})

    def with_grid(self, n: int, x_max: float | None = None) -> "SuiteConfig":
        return SuiteConfig(**{**self.to_dict(), "n": n, "x_max": x_max or self.x_max})

    def to_dict(self) -> dict:
        return {
            "d": self.d, "k": list(self.k), "n": self.n, "x_max": self.x_max,
            "suites": list(self.suites), "sweep": asdict(self.sweep), "output": self.output,
            "csv": self.csv, "seed": self.seed, "refine": self.refine,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "SuiteConfig":
        if not isinstance(obj, dict):
            raise ConfigError("configuration must be a JSON object")
        obj = dict(obj)
        setup = obj.pop("setup", None)
        if setup is not None:
            obj.setdefault("d", setup.get("d", 1))
            obj.setdefault("k", setup.get("k", [0.0]))
        grid = obj.pop("grid", None)
        if grid is not None:
            obj.setdefault("n", grid.get("n"))
            obj.setdefault("x_max", grid.get("x_max"))
        extra = set(obj) - set(cls.__dataclass_fields__)
        if extra:
            raise ConfigError(f"unknown configuration fields {sorted(extra)}")
        try:
            return cls(**obj)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "SuiteConfig":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"configuration is not valid JSON: {exc}") from exc
