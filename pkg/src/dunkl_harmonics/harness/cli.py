"""Command line entry point: suites, configured runs and one-off operator application."""
from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from ..core import FREQUENCY, SPACE, SampledFunction, TransformPlan, dunkl_inverse, dunkl_transform
from ..operators import ParaproductSpec, fractional_laplacian, heat_apply, paraproduct
from ..windows import DecompositionWindows
from .config import ConfigError, SuiteConfig
from .report import write_csv, write_json
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def thread_count() -> int:
    raw = os.environ.get("DUNKL_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"DUNKL_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"DUNKL_THREADS must be a positive integer, got {raw!r}")
    return n


def _blas_limit(n: int):
    """Cap BLAS threads too when threadpoolctl is around; otherwise a no-op."""
    if "DUNKL_THREADS" not in os.environ:
        return contextlib.nullcontext()
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return contextlib.nullcontext()
    return threadpool_limits(limits=n)


def run_suites(config: SuiteConfig, names, threads: int = 1):
    """Run suites, concurrently when threads > 1; reports come back in request order."""
    names = list(names)
    with _blas_limit(threads):
        if threads == 1 or len(names) < 2:
            return [run_suite(config, n) for n in names]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda n: run_suite(config, n), names))


def _emit(reports, out, csv_path):
    # the only writer: all output happens here, after the workers are done
    for r in reports:
        print(r.summary())
    if out:
        write_json(reports, out)
    if csv_path:
        write_csv(reports, csv_path)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _exponents(args) -> dict:
    """Sweep overrides from --p1/--p2: p follows from the Hoelder relation."""
    if args.p1 is None and args.p2 is None:
        return {}
    if args.p1 is None or args.p2 is None:
        raise ConfigError("--p1 and --p2 go together")
    p1, p2 = Fraction(args.p1), Fraction(args.p2)
    p = 1 / (1 / p1 + 1 / p2)
    pair = [str(p), str(p1), str(p2)]
    return {"leibniz": [pair + [str(p1), str(p2)]],
            "split": [pair + [str(p1), str(p2), str(p1), str(p2)]],
            "paraproduct": [pair]}


def _suite_config(args) -> SuiteConfig:
    sweep = _exponents(args)
    if args.s:
        sweep["s_values"] = args.s
        sweep["split_s"] = [[s / 2, s / 2] for s in args.s]
    return SuiteConfig(d=args.d, k=args.k or [1.0], n=args.n, x_max=args.xmax, suites=[args.name],
                       sweep=sweep, output=args.out, csv=args.csv, seed=args.seed,
                       refine=not args.no_refine)


def cmd_suite(args) -> int:
    config = _suite_config(args)
    return _emit(run_suites(config, [args.name]), config.output, config.csv)


def cmd_run(args) -> int:
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration: {exc}") from exc
    config = SuiteConfig.from_json(text)
    names = config.suites or list(SUITES)
    out = args.out or config.output
    csv_path = args.csv or config.csv
    return _emit(run_suites(config, names, thread_count()), out, csv_path)


def cmd_list(args) -> int:
    for name in SUITES:
        print(name)
    return EXIT_OK


def _load(path) -> SampledFunction:
    try:
        return SampledFunction.load(path)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read function {path}: {exc}") from exc


def _space(plan, f):
    return f if f.domain == SPACE else dunkl_inverse(plan, f)


def cmd_transform(args) -> int:
    f = _load(args.input)
    plan = TransformPlan(f.grid)
    out = dunkl_transform(plan, f) if f.domain == SPACE else dunkl_inverse(plan, f)
    out.save(args.out)
    return EXIT_OK


def cmd_fraclap(args) -> int:
    f = _load(args.input)
    plan = TransformPlan(f.grid)
    fractional_laplacian(plan, _space(plan, f), args.s).save(args.out)
    return EXIT_OK


def cmd_heat(args) -> int:
    f = _load(args.input)
    plan = TransformPlan(f.grid)
    heat_apply(plan, _space(plan, f), args.t).save(args.out)
    return EXIT_OK


def cmd_paraproduct(args) -> int:
    f, g = _load(args.input), _load(args.other)
    if not f.grid.same_as(g.grid):
        raise ConfigError("the two inputs live on different grids")
    plan = TransformPlan(f.grid)
    triple = DecompositionWindows.standard().triple(args.piece)
    spec = ParaproductSpec(*triple, -args.J, args.J)
    paraproduct(plan, spec, _space(plan, f), _space(plan, g)).save(args.out)
    return EXIT_OK


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dunkl-harmonics",
                                     description="Numerical checks for Dunkl harmonic analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the suites listed in a JSON configuration")
    run.add_argument("--config", required=True)
    run.add_argument("--out", help="JSON report path (overrides the configuration)")
    run.add_argument("--csv", help="CSV of per-sample ratios")
    run.set_defaults(func=cmd_run)

    suite = sub.add_parser("suite", help="run one suite")
    suite.add_argument("name", choices=list(SUITES))
    suite.add_argument("--d", type=int, default=1)
    suite.add_argument("--k", type=_float_list, help="multiplicities, comma separated")
    suite.add_argument("--n", type=int)
    suite.add_argument("--xmax", type=float)
    suite.add_argument("--s", type=_float_list, help="orders s, comma separated")
    suite.add_argument("--p1", help="exponent p1 (a fraction like 4/3 is fine)")
    suite.add_argument("--p2", help="exponent p2")
    suite.add_argument("--out")
    suite.add_argument("--csv")
    suite.add_argument("--seed", type=int, default=0)
    suite.add_argument("--no-refine", action="store_true", help="skip the refinement rerun")
    suite.set_defaults(func=cmd_suite)

    sub.add_parser("list-suites", help="print the suite names").set_defaults(func=cmd_list)

    for name, func, helptext in (("transform", cmd_transform, "Dunkl transform (or its inverse "
                                  "for frequency-tagged input)"),
                                 ("fraclap", cmd_fraclap, "apply (-Delta_k)^s"),
                                 ("heat", cmd_heat, "apply e^{t Delta_k}"),
                                 ("paraproduct", cmd_paraproduct, "one piece of the product "
                                  "decomposition")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--out", required=True)
        if name == "fraclap":
            p.add_argument("--s", type=float, required=True)
        if name == "heat":
            p.add_argument("--t", type=float, required=True)
        if name == "paraproduct":
            p.add_argument("--in2", dest="other", required=True)
            p.add_argument("--piece", type=int, choices=(1, 2, 3), default=1)
            p.add_argument("--J", type=int, default=12)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        # bad numerical input (wrong grid, non-finite values, invalid s or t)
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
