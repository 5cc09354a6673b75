#!/usr/bin/env python3
"""
Approximation-quality sweep: run both schemes against the brute-force
oracle on seeded random instances and tabulate the observed ratios.

The interesting output is the min ratio per (algorithm, accuracy) cell;
the schemes promise weight >= (1 - eps) * opt, so min ratio above that
line on thousands of seeds is cheap evidence the accounting is right.

Writes one CSV row per solver run and prints an aggregate table.

Usage:
  python3 scripts/ratio_sweep.py --seeds 60 --out results/ratios.csv
  python3 scripts/ratio_sweep.py --eps 1/4 --eps 1/6 --bags 4
"""

import argparse
import csv
import statistics
import sys
from fractions import Fraction
from pathlib import Path

from ufpkit.bag_eptas import solve_bagufp
from ufpkit.generators import GenSpec, gen_random
from ufpkit.oracle import exact_bagufp, exact_ufp
from ufpkit.ufp_eptas import solve_ufp


def parse_args(argv):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument("--seeds", type=int, default=40, help="instances per cell")
    ap.add_argument("--ufp-eps", action="append", default=None, metavar="EPS",
                    help="path-scheme accuracy in (0, 1/10); default 1/12, 1/20")
    ap.add_argument("--bag-eps", action="append", default=None, metavar="EPS",
                    help="bag-scheme accuracy in (0, 1/2]; default 1/4, 1/8")
    ap.add_argument("--bags", type=int, default=3, help="bags per bagged instance")
    ap.add_argument("--regime", default="tight",
                    choices=("uniform", "staircase", "tight"))
    ap.add_argument("--out", type=Path, default=None, help="CSV destination")
    return ap.parse_args(argv)


def sweep(args):
    grids = {
        "ufp": [Fraction(e) for e in (args.ufp_eps or ["1/12", "1/20"])],
        "bag": [Fraction(e) for e in (args.bag_eps or ["1/4", "1/8"])],
    }
    rows = []
    for variant in ("ufp", "bag"):
        eps_grid = grids[variant]
        for seed in range(args.seeds):
            spec = GenSpec(
                n=6 + seed % 7,
                m=1 + seed % 3,
                seed=seed,
                regime=args.regime,
                bags=args.bags if variant == "bag" else 0,
            )
            inst = gen_random(spec)
            opt = (exact_bagufp if variant == "bag" else exact_ufp)(inst).value
            for eps in eps_grid:
                res = (solve_bagufp if variant == "bag" else solve_ufp)(inst, eps)
                ratio = res.weight / opt if opt else Fraction(1)
                rows.append({
                    "alg": variant,
                    "eps": str(eps),
                    "seed": seed,
                    "n": inst.n,
                    "m": inst.m,
                    "opt": str(opt),
                    "weight": str(res.weight),
                    "ratio": float(ratio),
                })
    return rows


def report(rows):
    cells = {}
    for row in rows:
        cells.setdefault((row["alg"], row["eps"]), []).append(row["ratio"])
    print(f"{'alg':4} {'eps':>6} {'runs':>5} {'min':>8} {'mean':>8} {'floor':>8}")
    for (alg, eps), ratios in sorted(cells.items()):
        floor = 1 - Fraction(eps)
        print(f"{alg:4} {eps:>6} {len(ratios):5d} {min(ratios):8.4f} "
              f"{statistics.fmean(ratios):8.4f} {float(floor):8.4f}")
        if min(ratios) < floor:
            print(f"  !! guarantee violated for {alg} at eps={eps}", file=sys.stderr)


def main(argv=None):
    args = parse_args(argv)
    rows = sweep(args)
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        with args.out.open("w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
        print(f"wrote {len(rows)} rows to {args.out}")
    report(rows)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
