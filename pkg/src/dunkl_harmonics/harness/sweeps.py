"""Empirical-constant sweeps for the fractional Leibniz rules and paraproduct bounds."""
from __future__ import annotations

import itertools
import math
import time

import numpy as np

from .. import classical
from ..core import SampledFunction, TransformPlan
from ..operators import ParaproductSpec, paraproduct
from ..windows import DecompositionWindows
from .config import ExponentTuple, SuiteConfig
from .families import members
from .plans import get_plan
from .report import HYPOTHESIS_NOT_MET, SuiteReport

RHS_FLOOR = 1e-280


class DenseBackend:
    """Sweep primitives through the dense Dunkl transform."""

    def __init__(self, plan: TransformPlan):
        self.plan = plan
        self.grid = plan.grid
        self._cache = {}

    def fraclap(self, key, values, s):
        ck = (key, s)
        if ck not in self._cache:
            F = self.plan.forward_values(values)
            self._cache[ck] = self.plan.inverse_values(F, homogeneous_power=2 * s)
        return self._cache[ck]

    def paraproduct(self, spec, f, g):
        fs = SampledFunction(self.grid, f)
        gs = SampledFunction(self.grid, g)
        return paraproduct(self.plan, spec, fs, gs).values

    def norm(self, values, p):
        w = self.grid.weights
        return float(np.sum(w * np.abs(values) ** p) ** (1 / p))


class ClassicalBackend(DenseBackend):
    """The same primitives through numpy.fft on a conjugate grid (k = 0 only)."""

    def __init__(self, fft: classical.FFTPlan):
        self.fft = fft
        self.grid = fft.grid
        self._cache = {}

    def fraclap(self, key, values, s):
        ck = (key, s)
        if ck not in self._cache:
            self._cache[ck] = classical.fractional_laplacian(self.fft, values, s)
        return self._cache[ck]

    def paraproduct(self, spec, f, g):
        return classical.paraproduct(self.fft, spec.theta, spec.psi, spec.phi, f, g, spec.scales())


def _pairs(names):
    return list(itertools.combinations_with_replacement(names, 2))


def _ratio(lhs, rhs):
    if lhs == 0.0:
        return 0.0
    if rhs < RHS_FLOOR:
        return float("nan")
    return lhs / rhs


def leibniz_samples(backend, funcs: dict, s_values, tuples) -> list:
    """LHS / RHS of the two-term fractional Leibniz rule over all pairs, s and exponents."""
    out = []
    for (a, b), s, ex in itertools.product(_pairs(list(funcs)), s_values, tuples):
        f, g = funcs[a], funcs[b]
        q = ex.floats()
        lhs = backend.norm(backend.fraclap(f"{a}*{b}", f * g, s), q["p"])
        rhs = (backend.norm(backend.fraclap(a, f, s), q["p1"]) * backend.norm(g, q["p2"])
               + backend.norm(f, q["pt1"]) * backend.norm(backend.fraclap(b, g, s), q["pt2"]))
        out.append({"id": len(out), "f": a, "g": b, "s": s, **q, "lhs": lhs, "rhs": rhs,
                    "ratio": _ratio(lhs, rhs)})
    return out


def split_samples(backend, funcs: dict, split_s, tuples) -> list:
    """LHS / RHS of the three-term rule with s = s1 + s2."""
    out = []
    for (a, b), (s1, s2), ex in itertools.product(_pairs(list(funcs)), split_s, tuples):
        f, g = funcs[a], funcs[b]
        s = s1 + s2
        q = ex.floats()
        lhs = backend.norm(backend.fraclap(f"{a}*{b}", f * g, s), q["p"])
        rhs = (backend.norm(backend.fraclap(a, f, s1), q["p1"])
               * backend.norm(backend.fraclap(b, g, s2), q["p2"])
               + backend.norm(backend.fraclap(a, f, s), q["pt1"]) * backend.norm(g, q["pt2"])
               + backend.norm(f, q["pb1"]) * backend.norm(backend.fraclap(b, g, s), q["pb2"]))
        out.append({"id": len(out), "f": a, "g": b, "s": s, "s1": s1, "s2": s2, **q,
                    "lhs": lhs, "rhs": rhs, "ratio": _ratio(lhs, rhs)})
    return out


def window_triples(J: int):
    """The three decomposition triples and one all-lowpass triple (hypothesis fails)."""
    w = DecompositionWindows.standard()
    out = {f"pi{i}": ParaproductSpec(*w.triple(i), -J, J) for i in (1, 2, 3)}
    out["lowpass"] = ParaproductSpec(w.theta1, w.phi2, w.phi2, -J, J)
    return out


def paraproduct_samples(backend, funcs: dict, tuples, J: int):
    """||Pi(f,g)||_p / (||f||_p1 ||g||_p2); triples violating the support hypothesis are skipped."""
    out, skipped = [], []
    for name, spec in window_triples(J).items():
        if not spec.hypothesis_met:
            skipped.append(name)
            continue
        for a, b in _pairs(list(funcs)):
            f, g = funcs[a], funcs[b]
            pi = backend.paraproduct(spec, f, g)
            for ex in tuples:
                q = ex.floats()
                lhs = backend.norm(pi, q["p"])
                rhs = backend.norm(f, q["p1"]) * backend.norm(g, q["p2"])
                out.append({"id": len(out), "windows": name, "f": a, "g": b, "s": "", **q,
                            "lhs": lhs, "rhs": rhs, "ratio": _ratio(lhs, rhs)})
    return out, skipped


def _funcs(plan, names):
    kept, dropped = members(plan, names)
    return {n: f.values for n, f in kept}, dropped


def _measure(config: SuiteConfig, n: int, kind: str):
    plan = get_plan(config.setup, n, config.x_max)
    funcs, dropped = _funcs(plan, config.sweep.families)
    backend = DenseBackend(plan)
    sw = config.sweep
    skipped = []
    if kind == "kato-ponce":
        samples = leibniz_samples(backend, funcs, sw.s_values, config.leibniz_tuples)
    elif kind == "kato-ponce-split":
        samples = split_samples(backend, funcs, sw.split_s, config.split_tuples)
    else:
        samples, skipped = paraproduct_samples(backend, funcs, config.paraproduct_tuples, sw.J)
    return samples, dropped, skipped


def classical_comparison(config: SuiteConfig, kind: str, n: int = 513) -> float:
    """Largest relative gap between dense and FFT-oracle ratios on a conjugate grid (k = 0)."""
    grid = classical.conjugate_grid(config.setup.d, n)
    plan = get_plan(grid.setup, n, grid.x_max)
    funcs, _ = _funcs(plan, config.sweep.families)
    fft = ClassicalBackend(classical.FFTPlan(plan.grid))
    dense = DenseBackend(plan)
    sw = config.sweep
    if kind == "kato-ponce":
        a = leibniz_samples(dense, funcs, sw.s_values, config.leibniz_tuples)
        b = leibniz_samples(fft, funcs, sw.s_values, config.leibniz_tuples)
    elif kind == "kato-ponce-split":
        a = split_samples(dense, funcs, sw.split_s, config.split_tuples)
        b = split_samples(fft, funcs, sw.split_s, config.split_tuples)
    else:
        a, _ = paraproduct_samples(dense, funcs, config.paraproduct_tuples, sw.J)
        b, _ = paraproduct_samples(fft, funcs, config.paraproduct_tuples, sw.J)
    gaps = [abs(x["ratio"] - y["ratio"]) / max(abs(y["ratio"]), 1e-300) for x, y in zip(a, b)]
    return max(gaps)


def _max_ratio(samples):
    vals = [s["ratio"] for s in samples]
    return max(vals) if vals else 0.0, all(math.isfinite(v) for v in vals)


def refinement_pair(config: SuiteConfig):
    """(coarse, fine) grid sizes of the stability comparison.

    One dimension halves the configured grid; in higher dimensions the default
    grid is already the coarsest usable one, so it is doubled instead.
    """
    if config.setup.d == 1:
        return (config.n + 1) // 2, config.n
    return config.n, 2 * config.n - 1


def sweep_report(config: SuiteConfig, kind: str) -> SuiteReport:
    """Run one sweep on the two grids of the refinement pair."""
    start = time.perf_counter()
    report = SuiteReport(kind, config=config.to_dict())
    coarse_n, fine_n = refinement_pair(config) if config.refine else (None, config.n)
    samples, dropped, skipped = _measure(config, fine_n, kind)
    if dropped:
        report.notes.append(f"test functions not resolved on the grid: {', '.join(dropped)}")
    if skipped:
        report.notes.append(f"support hypothesis not met, skipped: {', '.join(skipped)}")
        report.metrics["skipped_triples"] = skipped
    if not samples:
        report.status = HYPOTHESIS_NOT_MET
        report.runtime_s = time.perf_counter() - start
        return report
    top, finite = _max_ratio(samples)
    report.check("ratios finite", finite)
    report.constants["max_ratio"] = top
    report.samples = samples
    if kind == "paraproduct-bound":
        for name in sorted({s["windows"] for s in samples}):
            report.constants[f"max_ratio_{name}"] = max(s["ratio"] for s in samples
                                                        if s["windows"] == name)
    if config.refine:
        coarse, _, _ = _measure(config, coarse_n, kind)
        ctop, _ = _max_ratio(coarse)
        factor = max(top / ctop, ctop / top) if ctop > 0 and top > 0 else float("inf")
        report.stability = {"factor": factor, "coarse_n": coarse_n, "fine_n": fine_n,
                            "coarse_max_ratio": ctop}
    if all(k == 0 for k in config.setup.k):
        gap = classical_comparison(config, kind)
        report.metrics["classical_gap"] = gap
        report.check("k=0 matches FFT oracle", gap < 1e-6, gap)
    report.runtime_s = time.perf_counter() - start
    return report.finalize()


def kato_ponce_sweep(config: SuiteConfig) -> SuiteReport:
    return sweep_report(config, "kato-ponce")


def kato_ponce_split_sweep(config: SuiteConfig) -> SuiteReport:
    report = sweep_report(config, "kato-ponce-split")
    # compare with the two-term rule as s2 -> 0: the first term degenerates toward it
    plan = get_plan(config.setup, refinement_pair(config)[1] if config.refine else config.n,
                    config.x_max)
    funcs, _ = _funcs(plan, config.sweep.families)
    backend = DenseBackend(plan)
    s = 0.5
    two = leibniz_samples(backend, funcs, [s], config.leibniz_tuples)
    # (p1, p2) for the split term and the second term, (pt1, pt2) for the third
    three_tuples = [ExponentTuple(t.p, t.p1, t.p2, t.p1, t.p2, t.pt1, t.pt2)
                    for t in config.leibniz_tuples]
    three = split_samples(backend, funcs, [(s - 1e-3, 1e-3)], three_tuples)
    a, _ = _max_ratio(two)
    b, _ = _max_ratio(three)
    factor = max(a / b, b / a)
    report.metrics["limit_comparison"] = {"two_term": a, "three_term_s2_small": b, "factor": factor}
    report.check("s2 -> 0 constant within factor 4 of the two-term sweep", factor <= 4, factor)
    return report.finalize()


def paraproduct_bound_sweep(config: SuiteConfig) -> SuiteReport:
    return sweep_report(config, "paraproduct-bound")

