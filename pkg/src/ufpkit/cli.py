"""Command-line front end.

Subcommands:
  solve            run a solver on an instance file
  gen random       emit a seeded random instance
  gen reduction    emit the UFP images of a subset-sum instance
  verify repset    check the representative-set guarantee on one instance
  verify reduction check both deciders agree on a subset-sum instance
  lp-solve         solve a small LP file exactly
  compare          approximation ratios over a directory of instances
  bench            generate, solve, and time a small suite

Exit codes: 0 success, 1 failed verification or refused computation,
2 malformed input or bad usage.
"""

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .bag_eptas import heavy_tasks, rep_set, solve_bagufp, _scale_weights
from .generators import REGIMES, GenSpec, gen_random
from .lp import LpInfeasible, LpProblem, LpUnbounded, count_fractional, solve_lp_basic
from .model import (
    BagInstance, InstanceError, check_feasible, edge_loads, instance_digest,
    parse_instance, rat, serialize_instance, total_weight,
)
from .oracle import OracleLimitError, enumerate_feasible, exact_bagufp, exact_ufp
from .reduction import (
    SsmInstance, build_ufp_instance, decide_ssm_bruteforce, decide_ssm_via_ufp,
    normalize_ssm, parse_ssm, profit_threshold, task_role,
)
from .ufp_eptas import solve_ufp

SCHEMA_VERSION = 1


def _read(path: str) -> str:
    return Path(path).read_text()


def _write_out(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _solution_json(instance, ids) -> dict:
    loads = edge_loads(instance, ids)
    return {
        "ids": list(ids),
        "weight": str(total_weight(instance, ids)),
        "feasible": check_feasible(instance, ids).feasible,
        "loads": [str(v) for v in loads],
    }


def _print_solution(instance, ids) -> None:
    sol = _solution_json(instance, ids)
    print(f"weight {sol['weight']}")
    print("ids " + (" ".join(str(i) for i in sol["ids"]) if sol["ids"] else "-"))
    print(f"feasible {'true' if sol['feasible'] else 'false'}")
    print("loads " + " ".join(sol["loads"]))


def cmd_solve(args) -> int:
    instance = parse_instance(_read(args.input))
    bagged = isinstance(instance, BagInstance)
    stats = None
    t0 = time.perf_counter()
    if args.alg == "exact":
        result = exact_bagufp(instance) if bagged else exact_ufp(instance)
        ids, weight = result.witness, result.value
        stats = {"explored": result.explored}
    elif args.alg == "ufp-eptas":
        if args.eps is None:
            print("ufp-eptas needs --eps", file=sys.stderr)
            return 2
        if bagged:
            print("instance has bags; ufp-eptas would ignore them, use bag-eptas or exact", file=sys.stderr)
            return 2
        out = solve_ufp(instance, rat(args.eps))
        ids, weight, stats = out.ids, out.weight, vars(out.stats)
    elif args.alg == "bag-eptas":
        if args.eps is None:
            print("bag-eptas needs --eps", file=sys.stderr)
            return 2
        if not bagged:
            print("instance has no bags; use ufp-eptas or exact", file=sys.stderr)
            return 2
        out = solve_bagufp(instance, rat(args.eps))
        ids, weight, stats = out.ids, out.weight, vars(out.stats)
    else:  # unreachable, argparse limits choices
        return 2
    elapsed_ms = (time.perf_counter() - t0) * 1000

    if args.json:
        print(json.dumps(_solution_json(instance, ids)))
    else:
        _print_solution(instance, ids)
        if args.stats and stats:
            for key, value in stats.items():
                print(f"stat {key} {value}")
            print(f"stat elapsed_ms {elapsed_ms:.1f}")
    if args.oracle:
        oracle = exact_bagufp(instance) if bagged else exact_ufp(instance)
        ratio = weight / oracle.value if oracle.value else Fraction(1)
        print(f"oracle {oracle.value}")
        print(f"ratio {ratio} ({float(ratio):.6f})")
    return 0


def _parse_range(text: str):
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def cmd_gen_random(args) -> int:
    spec = GenSpec(
        n=args.n, m=args.m, seed=args.seed,
        demand_range=_parse_range(args.demand_range),
        weight_range=_parse_range(args.weight_range),
        regime=args.regime, bags=args.bags,
    )
    instance = gen_random(spec)
    header = (
        f"# seed {spec.seed} regime {spec.regime} n {spec.n} m {spec.m}"
        f" demands {spec.demand_range[0]}:{spec.demand_range[1]}"
        f" weights {spec.weight_range[0]}:{spec.weight_range[1]} bags {spec.bags}\n"
    )
    _write_out(header + serialize_instance(instance), args.out)
    return 0


def cmd_gen_reduction(args) -> int:
    sets, target = parse_ssm(_read(args.ssm))
    ssm = normalize_ssm(sets, target)
    xs = range(ssm.k, ssm.k * ssm.n + 1) if args.x is None else [args.x]
    stem = Path(args.ssm).stem
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for x in xs:
        image = build_ufp_instance(ssm, x)
        lines = [f"# image of {stem} at index sum {x}",
                 f"# profit threshold {profit_threshold(ssm, x)}"]
        for t in image.tasks:
            lines.append(f"# task {t.id} is {task_role(ssm, t.id)}")
        path = out_dir / f"{stem}_x{x}.ufp"
        path.write_text("\n".join(lines) + "\n" + serialize_instance(image))
        print(f"wrote {path} (threshold {profit_threshold(ssm, x)})")
    return 0


def cmd_verify_repset(args) -> int:
    instance = parse_instance(_read(args.input))
    if not isinstance(instance, BagInstance):
        print("repset verification needs a bagged instance", file=sys.stderr)
        return 2
    eps = rat(args.eps)
    scaled, scale = _scale_weights(instance)
    opt = exact_bagufp(scaled).value
    if opt == 0:
        print("repset: ok (optimum is zero, nothing to represent)")
        return 0
    opt_tilde = Fraction(2 ** (int(opt).bit_length() - 1))
    reps = rep_set(scaled, eps, opt_tilde)
    heavy = heavy_tasks(scaled, eps, opt)
    need = (1 - 3 * eps) * opt
    witness = None
    for sel in enumerate_feasible(scaled):
        if total_weight(scaled, sel) >= need and all(t in reps.rep_ids for t in sel if t in heavy):
            witness = sel
            break
    print(f"opt {opt / scale}  guess {opt_tilde}  |R| {len(reps.rep_ids)}  classes {len(reps.per_class)}")
    if witness is None:
        print("repset: FAIL (no near-optimal solution keeps its heavy tasks inside R)")
        return 1
    ids = " ".join(str(i) for i in witness) if len(witness) else "-"
    print(f"repset: ok (witness {ids}, weight {total_weight(instance, witness)})")
    return 0


def cmd_verify_reduction(args) -> int:
    sets, target = parse_ssm(_read(args.ssm))
    ssm = normalize_ssm(sets, target)
    via = decide_ssm_via_ufp(ssm)
    brute, _ = decide_ssm_bruteforce(ssm)
    wording = {True: "yes", False: "no"}
    print(f"via-ufp {wording[via]}")
    print(f"bruteforce {wording[brute]}")
    print(f"equivalent: {wording[via]}/{wording[brute]}")
    return 0 if via == brute else 1


# LP file format: "vars <n>", "max <c1> .. <cn>", then "le <a1> .. <an> <rhs>"
# rows; '#' comments. Variables are x1..xn, implicitly nonnegative.

def parse_lp(text: str) -> LpProblem:
    nvars = None
    objective = None
    rows = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind, args = fields[0], fields[1:]
        if kind == "vars":
            nvars = int(args[0])
        elif kind == "max":
            if nvars is None or len(args) != nvars:
                raise InstanceError(f"line {ln}: max needs {nvars} coefficients")
            objective = tuple(rat(a) for a in args)
        elif kind == "le":
            if nvars is None or len(args) != nvars + 1:
                raise InstanceError(f"line {ln}: le needs {nvars} coefficients and a bound")
            rows.append((tuple(rat(a) for a in args[:-1]), rat(args[-1])))
        else:
            raise InstanceError(f"line {ln}: unknown directive {kind!r}")
    if nvars is None or objective is None:
        raise InstanceError("missing vars or max line")
    return LpProblem(objective=objective, rows=tuple(rows))


def cmd_lp_solve(args) -> int:
    problem = parse_lp(_read(args.input))
    try:
        solution = solve_lp_basic(problem)
    except (LpInfeasible, LpUnbounded) as exc:
        status = "infeasible" if isinstance(exc, LpInfeasible) else "unbounded"
        if args.json:
            print(json.dumps({"schema": SCHEMA_VERSION, "status": status}))
        else:
            print(f"status {status}")
        return 1
    if args.json:
        print(json.dumps({
            "schema": SCHEMA_VERSION,
            "status": "optimal",
            "objective": str(solution.objective),
            "values": [str(v) for v in solution.values],
            "basis": list(solution.basis),
            "fractional": count_fractional(solution),
        }))
    else:
        print(f"objective {solution.objective}")
        for j, v in enumerate(solution.values, start=1):
            print(f"x{j} = {v}")
        print("basis " + " ".join(str(b) for b in solution.basis))
        print(f"fractional {count_fractional(solution)}")
    return 0


def cmd_compare(args) -> int:
    eps = rat(args.eps)
    files = sorted(Path(args.dir).glob("*.ufp"))
    if not files:
        print(f"no *.ufp files under {args.dir}", file=sys.stderr)
        return 2
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["file", "algorithm", "eps", "n", "m", "opt", "weight", "ratio"])
    for path in files:
        instance = parse_instance(path.read_text())
        bagged = isinstance(instance, BagInstance)
        oracle = exact_bagufp(instance) if bagged else exact_ufp(instance)
        if bagged:
            approx = solve_bagufp(instance, eps)
            alg = "bag-eptas"
        else:
            approx = solve_ufp(instance, eps)
            alg = "ufp-eptas"
        ratio = approx.weight / oracle.value if oracle.value else Fraction(1)
        writer.writerow([
            path.name, alg, str(eps), instance.n, instance.m,
            str(oracle.value), str(approx.weight), str(ratio),
        ])
    _write_out(buf.getvalue(), args.out)
    return 0


def cmd_bench(args) -> int:
    eps = rat(args.eps)
    rows = []
    for i in range(args.count):
        bags = 0 if args.suite == "ufp" else 2 + i % 4
        spec = GenSpec(
            n=8 + i % 5, m=2 + i % 3, seed=args.seed + i,
            regime=REGIMES[i % len(REGIMES)], bags=bags,
        )
        instance = gen_random(spec)
        t0 = time.perf_counter()
        if args.suite == "ufp":
            result = solve_ufp(instance, eps)
        else:
            result = solve_bagufp(instance, eps)
        elapsed_ms = (time.perf_counter() - t0) * 1000
        oracle = exact_bagufp(instance) if bags else exact_ufp(instance)
        ratio = result.weight / oracle.value if oracle.value else Fraction(1)
        rows.append({
            "suite": args.suite, "seed": spec.seed, "n": spec.n, "m": spec.m,
            "regime": spec.regime, "eps": str(eps), "weight": str(result.weight),
            "opt": str(oracle.value), "ratio": str(ratio),
            "elapsed_ms": round(elapsed_ms, 2),
        })
    if args.json:
        _write_out(json.dumps({"schema": SCHEMA_VERSION, "rows": rows}, indent=2) + "\n", args.out)
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
        _write_out(buf.getvalue(), args.out)
    worst = min(Fraction(r["ratio"]) for r in rows)
    print(f"{len(rows)} runs, worst ratio {worst} ({float(worst):.4f})", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ufpkit", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("--input", required=True)
    p.add_argument("--alg", choices=["exact", "ufp-eptas", "bag-eptas"], default="exact")
    p.add_argument("--eps")
    p.add_argument("--json", action="store_true", help="print the solution as JSON")
    p.add_argument("--stats", action="store_true", help="print solver statistics")
    p.add_argument("--oracle", action="store_true", help="also brute force and report the ratio")
    p.set_defaults(func=cmd_solve)

    gen = sub.add_parser("gen", help="generate instances").add_subparsers(dest="what", required=True)
    p = gen.add_parser("random", help="seeded random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bags", type=int, default=0)
    p.add_argument("--regime", choices=list(REGIMES), default="tight")
    p.add_argument("--demand-range", default="1:20")
    p.add_argument("--weight-range", default="1:50")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gen_random)
    p = gen.add_parser("reduction", help="UFP images of a subset-sum file")
    p.add_argument("--ssm", required=True)
    p.add_argument("--x", type=int, help="single index sum (default: all)")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_gen_reduction)

    ver = sub.add_parser("verify", help="check guarantees").add_subparsers(dest="what", required=True)
    p = ver.add_parser("repset", help="representative-set guarantee on one instance")
    p.add_argument("--input", required=True)
    p.add_argument("--eps", required=True)
    p.set_defaults(func=cmd_verify_repset)
    p = ver.add_parser("reduction", help="deciders agree on a subset-sum file")
    p.add_argument("--ssm", required=True)
    p.set_defaults(func=cmd_verify_reduction)

    p = sub.add_parser("lp-solve", help="solve a small LP file exactly")
    p.add_argument("--input", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lp_solve)

    p = sub.add_parser("compare", help="ratios over a directory of *.ufp files")
    p.add_argument("--dir", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="generate, solve, and time a suite")
    p.add_argument("--suite", choices=["ufp", "bag"], default="ufp")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--eps", default="1/12")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except OracleLimitError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except (InstanceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())
