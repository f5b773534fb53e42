#!/usr/bin/env python3
"""Run every suite on a list of setups and write one JSON report per setup.

    python3 scripts/run_all_suites.py --setup 1:1 --setup 1:0 --setup 2:1,0.5 --out results/
"""
import argparse
import json
import sys
import time
from pathlib import Path

from dunkl_harmonics.harness import SUITES, SuiteConfig
from dunkl_harmonics.harness.cli import run_suites
from dunkl_harmonics.harness.config import ConfigError

DEFAULT_SETUPS = ("1:0", "1:0.5", "1:1", "1:2.5", "2:1,0.5")


def parse_setup(text):
    d, _, k = text.partition(":")
    return int(d), [float(v) for v in k.split(",")] if k else [0.0]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--setup", action="append", help="d:k1,k2,... (repeatable)")
    ap.add_argument("--suites", default=",".join(SUITES), help="comma separated suite names")
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    names = [s for s in args.suites.split(",") if s]
    failed = False
    for text in args.setup or DEFAULT_SETUPS:
        d, k = parse_setup(text)
        reports = []
        for name in names:
            t0 = time.perf_counter()
            try:
                config = SuiteConfig(d=d, k=k, suites=[name], seed=args.seed)
                (rep,) = run_suites(config, [name])
            except ConfigError as exc:
                print(f"[d={d} k={k}] {name}: skipped ({exc})")
                continue
            print(f"[d={d} k={k}] {rep.summary()}  ({time.perf_counter() - t0:.1f} s)", flush=True)
            failed |= not rep.passed
            reports.append(rep.to_dict())
        tag = f"d{d}_k" + "_".join(f"{v:g}" for v in k)
        (out / f"{tag}.json").write_text(json.dumps(reports, indent=2, sort_keys=True) + "\n")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
