"""Approximation scheme for the bagged variant (at most one task per bag).

For a guessed optimum the candidate heavy tasks are trimmed to a small
representative set: tasks are classed by (subpath, weight level) where the
level-r class holds weights in (2*guess*(1-eps)^r, 2*guess*(1-eps)^(r-1)],
levels run 1..eta with eta = ceil(log_{1-eps}(eps/2m)); within a class each
bag keeps only its cheapest-demand member, and only the q cheapest bags
survive, q = ceil(4m * eps^(-ceil(1/eps))). Every subset F of the
representative set (up to m/eps tasks) is tried as the heavy part of the
solution; the remaining capacity is filled by an exact LP over light tasks
from untouched bags, and the integral ones of an optimal vertex join F.
The best candidate over all guesses (powers of two up to the total weight)
is returned; with core accuracy eps/7 the result is (1-eps)-approximate.

Guesses are processed in descending order with the same canonical merge
rule as the path scheme, F subsets in cardinality-then-lexicographic
order; LP vertices are memoized on (variable set, residual capacities),
and F subsets whose best imaginable completion cannot beat or canonically
precede the incumbent skip their LP. None of this changes the returned
selection; it only skips work that provably cannot matter.

Weights are scaled to integers (by the least common multiple of their
denominators) before guessing, so "powers of two up to the total weight"
is well defined for rational inputs.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .lp import build_bag_lp, count_fractional, solve_lp_basic
from .model import (
    BagInstance, Subpath, Task, TaskSet, check_feasible, preprocess, rat,
    residual_capacities, total_weight,
)


@dataclass(frozen=True, order=True)
class ClassKey:
    """One weight class: exact subpath plus weight level (1 = heaviest)."""

    path: Subpath
    level: int


@dataclass(frozen=True)
class ClassPartition:
    """Classed task ids grouped by ClassKey, in key order; eta is the
    deepest level kept. Tasks above twice the guess or below the lightness
    horizon are absent."""

    eta: int
    classes: tuple  # ((ClassKey, ids), ...) sorted by key


@dataclass(frozen=True)
class RepSetResult:
    """Representative candidates: the surviving ids, the per-class picks
    as (bag_id, task_id) pairs in selection order, and the per-class cap."""

    rep_ids: TaskSet
    per_class: tuple
    cap: int


@dataclass(frozen=True)
class BagStats:
    eps_requested: Fraction
    eps_core: Fraction
    weight_scale: int
    opt_values: int
    blocks_skipped: int
    subsets_enumerated: int
    subsets_bound_pruned: int
    subsets_infeasible: int
    lp_solves: int
    lp_memo_hits: int
    max_fractional: int
    max_repset: int
    max_classes: int
    dropped_tasks: int


@dataclass(frozen=True)
class BagResult:
    ids: TaskSet
    weight: Fraction
    stats: BagStats


def heavy_tasks(instance: BagInstance, eps, opt_value) -> TaskSet:
    """Tasks with weight strictly above eps * opt_value / m."""
    eps = rat(eps)
    threshold = eps * rat(opt_value) / instance.m
    return TaskSet.of(t.id for t in instance.tasks if t.weight > threshold)


def _smallest_power_below(base: Fraction, target: Fraction, guess: int) -> int:
    """Smallest r >= 1 with base**r < target, for 0 < base < 1, 0 < target.

    Floats only steer the first guess; the answer is certified with integer
    power comparisons, so extreme magnitudes stay exact.
    """
    p, q = base.numerator, base.denominator
    x, y = target.numerator, target.denominator

    def below(r: int) -> bool:
        return p ** r * y < x * q ** r

    r = max(1, guess)
    if below(r):
        while r > 1 and below(r - 1):
            r -= 1
        return r
    while not below(r):
        r += 1
    return r


def _log_guess(base: Fraction, target: Fraction) -> int:
    lb = math.log1p(-float(1 - base))  # log(base) without reaching 1.0 for tiny eps
    if lb == 0:
        return 1
    lt = math.log(target.numerator) - math.log(target.denominator)
    try:
        return int(lt / lb) + 1
    except (ValueError, OverflowError):
        return 1


def class_depth(eps, m: int) -> int:
    """eta: number of weight levels, smallest h with (1-eps)^h <= eps/(2m)."""
    eps = rat(eps)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    base = 1 - eps
    target = eps / (2 * m)
    p, q = base.numerator, base.denominator
    x, y = target.numerator, target.denominator
    h = max(1, _log_guess(base, target))
    while p ** h * y > x * q ** h:
        h += 1
    while h > 1 and p ** (h - 1) * y <= x * q ** (h - 1):
        h -= 1
    return h


def build_classes(instance: BagInstance, eps, opt_tilde) -> ClassPartition:
    """Group tasks by subpath and weight level relative to the guess.

    A task with w/(2*opt_tilde) in ((1-eps)^r, (1-eps)^(r-1)] lands in
    level r; ratios above 1 (too heavy for this guess) and levels beyond
    eta (light enough for the LP) stay out of every class.
    """
    eps = rat(eps)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    opt_tilde = rat(opt_tilde)
    if opt_tilde <= 0:
        raise ValueError("opt_tilde must be positive")
    eta = class_depth(eps, instance.m)
    base = 1 - eps
    horizon = base ** eta
    groups = {}
    for t in instance.tasks:
        ratio = t.weight / (2 * opt_tilde)
        if ratio > 1 or ratio <= horizon:
            continue
        level = _smallest_power_below(base, ratio, _log_guess(base, ratio))
        groups.setdefault(ClassKey(path=t.path, level=level), []).append(t.id)
    classes = tuple((key, tuple(sorted(ids))) for key, ids in sorted(groups.items()))
    return ClassPartition(eta=eta, classes=classes)


def rep_cap(eps, m: int) -> int:
    """Per-class bag budget q = ceil(4m * eps^(-ceil(1/eps)))."""
    eps = rat(eps)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    exponent = -(-eps.denominator // eps.numerator)  # ceil(1/eps)
    value = 4 * m * (1 / eps) ** exponent
    return -(-value.numerator // value.denominator)


def rep_set(instance: BagInstance, eps, opt_tilde) -> RepSetResult:
    """Representative candidate set for one guess value.

    Within each class every bag is represented by its smallest-demand
    member (ties to the smaller task id), bags are ranked by
    (demand, task id, bag id), and the q cheapest bags survive.
    """
    partition = build_classes(instance, eps, opt_tilde)
    q = rep_cap(eps, instance.m)
    per_class = []
    rep_ids = []
    for key, ids in partition.classes:
        by_bag = {}
        for tid in ids:
            t = instance.task(tid)
            bag = instance.bag_of(tid)
            cur = by_bag.get(bag)
            if cur is None or (t.demand, tid) < (cur[0], cur[1]):
                by_bag[bag] = (t.demand, tid)
        ranked = sorted((d, tid, bag) for bag, (d, tid) in by_bag.items())
        picks = tuple((bag, tid) for _, tid, bag in ranked[:q])
        per_class.append((key, picks))
        rep_ids.extend(tid for _, tid in picks)
    return RepSetResult(rep_ids=TaskSet.of(rep_ids), per_class=tuple(per_class), cap=q)


def _scale_weights(instance: BagInstance):
    """Rescale weights to integers; returns (scaled instance, multiplier)."""
    scale = math.lcm(*(t.weight.denominator for t in instance.tasks)) if instance.n else 1
    tasks = tuple(
        Task(id=t.id, path=t.path, demand=t.demand, weight=t.weight * scale)
        for t in instance.tasks
    )
    scaled = BagInstance(m=instance.m, capacities=instance.capacities, tasks=tasks, bags=instance.bags)
    return scaled, scale


def solve_bagufp(instance: BagInstance, eps) -> BagResult:
    """(1-eps)-approximate solution of the bagged problem, 0 < eps < 1/2."""
    eps = rat(eps)
    if not 0 < eps <= Fraction(1, 2):
        raise ValueError(f"eps must lie in (0, 1/2], got {eps}")
    if not isinstance(instance, BagInstance):
        raise TypeError("solve_bagufp needs a BagInstance")
    eps_core = eps / 7

    work, drops = preprocess(instance)
    counters = {
        "blocks_skipped": 0, "subsets_enumerated": 0, "subsets_bound_pruned": 0,
        "subsets_infeasible": 0, "lp_solves": 0, "lp_memo_hits": 0,
        "max_fractional": 0, "max_repset": 0, "max_classes": 0,
    }
    if work.n == 0:
        stats = BagStats(
            eps_requested=eps, eps_core=eps_core, weight_scale=1, opt_values=0,
            dropped_tasks=len(drops.dropped), **counters,
        )
        return BagResult(ids=TaskSet.of(()), weight=Fraction(0), stats=stats)

    scaled, scale = _scale_weights(work)
    weight_of = {t.id: int(t.weight) for t in scaled.tasks}
    total = sum(weight_of.values())
    guesses = [Fraction(2 ** j) for j in range(total.bit_length())]  # 1, 2, .. <= total
    f_limit = int(Fraction(scaled.m) / eps_core)

    best_weight = -1
    best_ids = None
    lp_memo = {}

    for j in range(len(guesses) - 1, -1, -1):
        opt_tilde = guesses[j]
        # nothing heavier than twice the guess can enter a candidate
        block_cap = sum(w for w in weight_of.values() if w <= 2 * opt_tilde)
        if block_cap < best_weight:
            counters["blocks_skipped"] += 1
            continue
        reps = rep_set(scaled, eps_core, opt_tilde)
        counters["max_repset"] = max(counters["max_repset"], len(reps.rep_ids))
        counters["max_classes"] = max(counters["max_classes"], len(reps.per_class))
        cutoff = 2 * eps_core * opt_tilde / scaled.m
        light = [t.id for t in scaled.tasks if t.weight <= cutoff]
        light_bags = {}
        for tid in light:
            light_bags.setdefault(scaled.bag_of(tid), []).append(tid)

        block_best = -1
        block_ids = None
        rep_sorted = sorted(reps.rep_ids)
        for size in range(0, min(f_limit, len(rep_sorted)) + 1):
            for chosen in combinations(rep_sorted, size):
                counters["subsets_enumerated"] += 1
                f_weight = sum(weight_of[tid] for tid in chosen)
                blocked = {scaled.bag_of(tid) for tid in chosen}
                reachable = f_weight + sum(
                    weight_of[tid]
                    for bag, tids in light_bags.items() if bag not in blocked
                    for tid in tids
                )
                if reachable < max(best_weight, block_best + 1):
                    counters["subsets_bound_pruned"] += 1
                    continue
                if len(blocked) < len(chosen) or not check_feasible(scaled, chosen).feasible:
                    counters["subsets_infeasible"] += 1
                    continue
                problem, var_ids = build_bag_lp(scaled, chosen, opt_tilde, eps_core)
                key = (var_ids, tuple(residual_capacities(scaled, chosen)))
                hit = lp_memo.get(key)
                if hit is None:
                    solution = solve_lp_basic(problem)
                    ones = tuple(tid for tid, v in zip(var_ids, solution.values) if v == 1)
                    hit = (ones, count_fractional(solution))
                    lp_memo[key] = hit
                    counters["lp_solves"] += 1
                    counters["max_fractional"] = max(counters["max_fractional"], hit[1])
                else:
                    counters["lp_memo_hits"] += 1
                ones = hit[0]
                candidate = chosen + ones
                cand_weight = f_weight + sum(weight_of[tid] for tid in ones)
                report = check_feasible(scaled, candidate)
                if not report.feasible:
                    raise AssertionError(f"scheme produced an infeasible candidate: {report}")
                if cand_weight > block_best:
                    block_best = cand_weight
                    block_ids = candidate
        if block_best >= best_weight:
            best_weight = block_best
            best_ids = block_ids

    ids = TaskSet.of(best_ids if best_ids else ())
    stats = BagStats(
        eps_requested=eps, eps_core=eps_core, weight_scale=scale,
        opt_values=len(guesses), dropped_tasks=len(drops.dropped), **counters,
    )
    return BagResult(ids=ids, weight=total_weight(instance, ids), stats=stats)
