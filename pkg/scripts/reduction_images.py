#!/usr/bin/env python3
"""Emit the full family of flow images for one multiple-choice subset-sum
instance: one instance file per profit index x, plus a manifest recording
the decision threshold at each x.

The instance comes from an input file in the ssm text format, or from a
small built-in demo when no input is given. Each image lands in --dest as
image_x<k>.ufp; manifest.json maps x to threshold and to whether the
exact optimum actually meets it (the yes certificate).

Usage:
  python3 scripts/reduction_images.py --dest results/images
  python3 scripts/reduction_images.py --input my.ssm --dest out --no-solve
"""

import argparse
import json
from fractions import Fraction
from pathlib import Path

from ufpkit.model import serialize_instance
from ufpkit.oracle import exact_ufp
from ufpkit.reduction import (
    build_ufp_instance,
    normalize_ssm,
    parse_ssm,
    profit_threshold,
    reduction_params,
)

# two sets of three values each; target hits exactly one aligned choice
DEMO_SETS = ((Fraction(2), Fraction(5), Fraction(7)), (Fraction(1), Fraction(4), Fraction(6)))
DEMO_TARGET = Fraction(9)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--input", type=Path, default=None, help="ssm text file")
    ap.add_argument("--dest", type=Path, default=Path("results/images"))
    ap.add_argument("--no-solve", action="store_true",
                    help="skip the exact optima (images and thresholds only)")
    args = ap.parse_args(argv)

    if args.input:
        sets, target = parse_ssm(args.input.read_text())
    else:
        sets, target = DEMO_SETS, DEMO_TARGET
    ssm = normalize_ssm(sets, target)
    params = reduction_params(ssm)

    args.dest.mkdir(parents=True, exist_ok=True)
    manifest = {
        "k": ssm.k,
        "n": ssm.n,
        "edges": params.m,
        "images": [],
    }
    hits = []
    for x in range(ssm.k, ssm.k * ssm.n + 1):
        inst = build_ufp_instance(ssm, x)
        path = args.dest / f"image_x{x}.ufp"
        path.write_text(serialize_instance(inst))
        entry = {
            "x": x,
            "file": path.name,
            "tasks": inst.n,
            "threshold": str(profit_threshold(ssm, x)),
        }
        if not args.no_solve:
            opt = exact_ufp(inst).value
            entry["opt"] = str(opt)
            entry["meets_threshold"] = opt >= profit_threshold(ssm, x)
            if entry["meets_threshold"]:
                hits.append(x)
        manifest["images"].append(entry)

    (args.dest / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(manifest['images'])} images to {args.dest}")
    if not args.no_solve:
        verdict = f"yes at x={hits}" if hits else "no at every x"
        print(f"subset-sum decision: {verdict}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
