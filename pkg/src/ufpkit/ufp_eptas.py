"""Approximation scheme for UFP, parameterized by the distinct-subpath count.

Pipeline: task weights are rounded to integer profits on a grid of n/eps
steps; for every distinct subpath a covering-knapsack table caches minimum
demand subsets per profit target; a guess value for the rounded optimum
sweeps powers of (1+eps); for each guess, budgeted threshold vectors select
one cached subset per subpath and the best feasible union is kept. With
eps < 1/10 the returned weight is at least (1-2*eps) times the optimum;
the public entry point first regularizes eps to 1/ceil(1/eps) and runs the
core at half of that, giving the clean (1-eps) guarantee.

The canonical answer is defined by literal enumeration: guess values in
increasing order, threshold vectors in lexicographic order, first strict
improvement kept. Enumerating is hopeless at real sizes (the vector count
is astronomically large), so solve_ufp_core searches the same space with
exact dominance pruning, documented inline, that provably returns the same
selection: vectors that map to the same table rows collapse to their
lexicographically first representative, rows whose cached demand cannot fit
are dropped, and branches that cannot beat or canonically precede the
incumbent are cut. ``guesses_tried`` reports the size of the nominal guess
space that the search covers; ``nodes_explored`` counts work actually done.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .knapsack import build_profit_tables, entry_segments
from .model import Instance, TaskSet, check_feasible, min_capacity_on, preprocess, rat, total_weight


@dataclass(frozen=True)
class UfpStats:
    """Search-size accounting for one scheme run."""

    eps_requested: Fraction
    eps_core: Fraction
    path_count: int
    budget: int              # Y, the shared threshold-vector budget
    opt_values: int          # number of guess values swept
    guesses_per_opt: int     # nominal vectors per guess value
    guesses_tried: int       # opt_values * guesses_per_opt (nominal space covered)
    nodes_explored: int      # search-tree nodes actually expanded
    blocks_skipped: int      # guess values pruned or memo-reused wholesale
    dropped_tasks: int


@dataclass(frozen=True)
class UfpResult:
    ids: TaskSet
    weight: Fraction
    stats: UfpStats


def round_profits(instance: Instance, eps) -> dict:
    """Integer profit p(i) = floor(n * w(i) / (eps * w_max)) per task id.

    Requires at least one task and a positive maximum weight. Profits land
    in 0..n/eps and preserve enough resolution that an integer-optimal set
    is weight-near-optimal.
    """
    eps = rat(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if instance.n == 0:
        raise ValueError("cannot round profits of an empty instance")
    w_max = max(t.weight for t in instance.tasks)
    if w_max <= 0:
        raise ValueError("all weights are zero")
    n = instance.n
    return {t.id: int(n * t.weight / (eps * w_max)) for t in instance.tasks}


def enumerate_compositions(k: int, budget: int):
    """Yield every length-k vector of nonnegative ints with sum <= budget,
    in lexicographic order, each exactly once."""
    if k < 0 or budget < 0:
        raise ValueError("k and budget must be nonnegative")
    if k == 0:
        yield ()
        return
    x = [0] * k
    total = 0
    while True:
        yield tuple(x)
        if total < budget:
            x[-1] += 1
            total += 1
        else:
            j = k - 1
            while j >= 0 and x[j] == 0:
                j -= 1
            if j <= 0:
                return
            total -= x[j]
            x[j] = 0
            x[j - 1] += 1
            total += 1


def count_compositions(k: int, budget: int) -> int:
    """Number of vectors enumerate_compositions(k, budget) yields."""
    if k < 0 or budget < 0:
        raise ValueError("k and budget must be nonnegative")
    return math.comb(budget + k, k)


def regularize_eps(eps) -> Fraction:
    """Largest reciprocal of an integer that is <= eps."""
    eps = rat(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    p, q = eps.numerator, eps.denominator
    return Fraction(1, (q + p - 1) // p)


def opt_guess_values(n: int, eps) -> tuple:
    """Guess grid for the rounded optimum: powers of (1+eps) from 1 up to
    n^2/eps, plus the first power exceeding that bound."""
    eps = rat(eps)
    bound = Fraction(n * n) / eps
    vals = []
    v = Fraction(1)
    while v <= bound:
        vals.append(v)
        v *= 1 + eps
    vals.append(v)
    return tuple(vals)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def solve_ufp(instance: Instance, eps) -> UfpResult:
    """(1-eps)-approximate UFP solution, exact arithmetic throughout.

    Requires 0 < eps < 1/10. Zero-weight tasks and tasks that cannot fit
    alone are dropped up front (they never help and never hurt).
    """
    eps = rat(eps)
    if not 0 < eps < Fraction(1, 10):
        raise ValueError(f"eps must lie in (0, 1/10), got {eps}")
    eps_core = regularize_eps(eps) / 2
    return _solve_core(instance, eps_core, eps_requested=eps)


def solve_ufp_core(instance: Instance, eps) -> UfpResult:
    """The underlying (1-2*eps) scheme, exposed for direct testing."""
    eps = rat(eps)
    if not 0 < eps < Fraction(1, 10):
        raise ValueError(f"eps must lie in (0, 1/10), got {eps}")
    return _solve_core(instance, eps, eps_requested=eps)


def _empty_result(eps_requested, eps_core, dropped) -> UfpResult:
    stats = UfpStats(
        eps_requested=eps_requested, eps_core=eps_core, path_count=0, budget=0,
        opt_values=0, guesses_per_opt=0, guesses_tried=0, nodes_explored=0,
        blocks_skipped=0, dropped_tasks=dropped,
    )
    return UfpResult(ids=TaskSet.of(()), weight=Fraction(0), stats=stats)


def _solve_core(instance: Instance, eps: Fraction, eps_requested: Fraction) -> UfpResult:
    work, drops = preprocess(instance)
    if work.n == 0:
        return _empty_result(eps_requested, eps, len(drops.dropped))

    profits = round_profits(work, eps)
    tables = build_profit_tables(work, profits)
    phis = tables.paths
    k = len(phis)
    n = work.n
    budget = int((1 + eps) / eps * k)  # Y: total threshold budget, floor
    opts = opt_guess_values(n, eps)
    per_opt = count_compositions(k, budget)

    # Static per-path data. Segments are maximal threshold ranges that share
    # one table entry; a vector coordinate only matters through the segment
    # its threshold lands in. Entries whose demand exceeds the smallest
    # capacity on their own path can never sit inside a feasible union and
    # are dropped here (the empty entry at threshold 0 always survives).
    segs = []
    caps = work.capacities
    for path in phis:
        mincap = min_capacity_on(work, path)
        kept = []
        for t_start, t_end, entry in entry_segments(tables.table(path)):
            if entry.demand <= mincap:
                kept.append((t_start, t_end, entry))
        segs.append(kept)
    p_totals = [tables.table(path).total_profit for path in phis]
    edge_lists = [tuple(path.edges()) for path in phis]

    best_profit = -1
    best_choice = None
    nodes = 0
    blocks_skipped = 0
    block_memo = {}

    # Guess values are processed in descending order so that rich blocks
    # prune poor ones; the merge rule (take a block's winner whenever it
    # ties or beats the incumbent, later-processed blocks being smaller
    # guesses) reproduces the canonical ascending-order first-best answer.
    for j in range(len(opts) - 1, -1, -1):
        step = eps * opts[j] / k  # threshold per budget unit
        a, b = step.numerator, step.denominator

        # Minimal vector coordinate landing in each segment: the threshold
        # for coordinate x is min(p_total, ceil(x * step)), so the smallest
        # x reaching t_start is floor((t_start - 1)/step) + 1. Coordinates
        # that land beyond the segment (or past the budget) contribute no
        # new entry; each reachable segment keeps exactly its first vector
        # coordinate, which is the lexicographically first representative.
        reachable = []
        for f in range(k):
            reps = []
            for t_start, t_end, entry in segs[f]:
                if t_start == 0:
                    xmin = 0
                else:
                    xmin = (t_start - 1) * b // a + 1
                    if xmin > budget:
                        break
                reached = min(p_totals[f], _ceil_div(xmin * a, b))
                if not t_start <= reached <= t_end:
                    continue
                reps.append((xmin, entry))
            reachable.append(reps)

        sig = tuple(tuple((xmin, e.ids) for xmin, e in reps) for reps in reachable)
        if sig in block_memo:
            blocks_skipped += 1
            cached_profit, cached_choice = block_memo[sig]
            if cached_profit >= best_profit:
                best_profit, best_choice = cached_profit, cached_choice
            continue

        suffix_max = [0] * (k + 1)
        for f in range(k - 1, -1, -1):
            suffix_max[f] = suffix_max[f + 1] + max(e.profit for _, e in reachable[f])
        if suffix_max[0] < best_profit:
            blocks_skipped += 1
            block_memo[sig] = (-1, None)
            continue

        block_best = -1
        block_choice = None
        loads = [Fraction(0)] * work.m
        chosen = []

        def dfs(f: int, budget_left: int, acc: int) -> None:
            nonlocal block_best, block_choice, nodes
            nodes += 1
            # a candidate must strictly beat the block incumbent (earlier
            # in-block finds are lexicographically first) and at least tie
            # the global one (this block is a smaller guess, so ties win)
            if acc + suffix_max[f] < max(best_profit, block_best + 1):
                return
            if f == k:
                if acc > block_best:
                    block_best = acc
                    block_choice = tuple(chosen)
                return
            edges = edge_lists[f]
            for xmin, entry in reachable[f]:
                if xmin > budget_left:
                    break  # reps are sorted by xmin
                d = entry.demand
                if any(loads[e - 1] + d > caps[e - 1] for e in edges):
                    break  # segment demands only grow with the threshold
                for e in edges:
                    loads[e - 1] += d
                chosen.append(entry)
                dfs(f + 1, budget_left - xmin, acc + entry.profit)
                chosen.pop()
                for e in edges:
                    loads[e - 1] -= d
        dfs(0, budget, 0)

        block_memo[sig] = (block_best, block_choice)
        if block_best >= best_profit:
            best_profit, best_choice = block_best, block_choice

    ids = TaskSet.of(tid for entry in best_choice for tid in entry.ids)
    report = check_feasible(work, ids)
    if not report.feasible:
        raise AssertionError(f"scheme produced an infeasible selection: {report}")
    stats = UfpStats(
        eps_requested=eps_requested,
        eps_core=eps,
        path_count=k,
        budget=budget,
        opt_values=len(opts),
        guesses_per_opt=per_opt,
        guesses_tried=len(opts) * per_opt,
        nodes_explored=nodes,
        blocks_skipped=blocks_skipped,
        dropped_tasks=len(drops.dropped),
    )
    return UfpResult(ids=ids, weight=total_weight(work, ids), stats=stats)
