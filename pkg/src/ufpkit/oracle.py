"""Exact brute-force solvers, used as ground truth by tests and the CLI.

The enumeration walks subsets in extension order: a subset is visited, then
extended by every task id larger than its maximum. That order is exactly
lexicographic order on the sorted id tuples, so keeping the first maximum
encountered yields the lexicographically smallest optimal witness without
any extra bookkeeping. Branches are cut only when the partial selection
already violates a constraint (such prefixes cannot be completed, because
demands are nonnegative); no weight-based pruning is done, so the reported
``explored`` count has a stable meaning: the number of subsets examined,
i.e. the visited feasible subsets plus every rejected one-task extension.

Intended for small instances; calls refuse to run above a task-count limit
(default 25, overridable via the UFP_ORACLE_LIMIT environment variable).
"""

import os
from dataclasses import dataclass
from fractions import Fraction

from .model import BagInstance, Instance, TaskSet, rat

DEFAULT_LIMIT = 25
LIMIT_ENV_VAR = "UFP_ORACLE_LIMIT"


class OracleLimitError(RuntimeError):
    """Instance too large for brute force; raise rather than hang."""


@dataclass(frozen=True)
class OptResult:
    """Exact optimum: value, lexicographically smallest witness, subsets examined."""

    value: Fraction
    witness: TaskSet
    explored: int


def _limit(limit) -> int:
    if limit is not None:
        return limit
    env = os.environ.get(LIMIT_ENV_VAR)
    return int(env) if env else DEFAULT_LIMIT


def _check_size(instance: Instance, limit) -> None:
    cap = _limit(limit)
    if instance.n > cap:
        raise OracleLimitError(
            f"instance has {instance.n} tasks, brute-force limit is {cap} "
            f"(set {LIMIT_ENV_VAR} to override)"
        )


def _search(instance: Instance, on_visit):
    """Extension-order DFS over feasible subsets. Calls on_visit(ids, weight)
    for every feasible subset, in lexicographic order of sorted id tuples.
    Returns the number of subsets examined."""
    tasks = instance.tasks
    caps = instance.capacities
    bagged = isinstance(instance, BagInstance)
    loads = [Fraction(0)] * instance.m
    chosen = []
    used_bags = set()
    explored = 1  # the empty set
    on_visit((), Fraction(0))

    def extend(start: int, weight: Fraction) -> None:
        nonlocal explored
        for i in range(start, len(tasks)):
            t = tasks[i]
            explored += 1
            if bagged:
                bag = instance.bag_of(t.id)
                if bag in used_bags:
                    continue
            edges = t.path.edges()
            if any(loads[e - 1] + t.demand > caps[e - 1] for e in edges):
                continue
            for e in edges:
                loads[e - 1] += t.demand
            chosen.append(t.id)
            if bagged:
                used_bags.add(bag)
            on_visit(tuple(chosen), weight + t.weight)
            extend(i + 1, weight + t.weight)
            if bagged:
                used_bags.discard(bag)
            chosen.pop()
            for e in t.path.edges():
                loads[e - 1] -= t.demand

    extend(0, Fraction(0))
    return explored


def exact_ufp(instance: Instance, limit=None) -> OptResult:
    """Exact UFP optimum by exhaustive search.

    Bags on the instance are ignored here; use exact_bagufp to enforce them.
    """
    _check_size(instance, limit)
    if isinstance(instance, BagInstance):
        instance = Instance(m=instance.m, capacities=instance.capacities, tasks=instance.tasks)
    return _run(instance)


def exact_bagufp(instance: BagInstance, limit=None) -> OptResult:
    """Exact BagUFP optimum (capacities and at most one task per bag)."""
    if not isinstance(instance, BagInstance):
        raise TypeError("exact_bagufp needs a BagInstance")
    _check_size(instance, limit)
    return _run(instance)


def _run(instance: Instance) -> OptResult:
    best = {"w": Fraction(0), "ids": ()}

    def on_visit(ids, weight):
        # strict improvement only: the first maximum seen is lex-smallest
        if weight > best["w"]:
            best["w"] = weight
            best["ids"] = ids

    explored = _search(instance, on_visit)
    return OptResult(value=best["w"], witness=TaskSet.of(best["ids"]), explored=explored)


def enumerate_feasible(instance: Instance, limit=None):
    """Yield every feasible selection as a TaskSet, in lexicographic order."""
    _check_size(instance, limit)
    out = []
    _search(instance, lambda ids, w: out.append(ids))
    for ids in out:
        yield TaskSet.of(ids)


def exact_min_demand_subset(tasks, threshold, profits) -> TaskSet:
    """Minimum-demand subset of ``tasks`` whose total profit reaches ``threshold``.

    ``profits`` maps task id to its (integer) profit; demands come from the
    tasks themselves. Ties break to the lexicographically smallest id tuple.
    Raises ValueError when the threshold exceeds the total available profit.
    """
    tasks = sorted(tasks, key=lambda t: t.id)
    total = sum(profits[t.id] for t in tasks)
    if threshold > total:
        raise ValueError(f"threshold {threshold} exceeds total profit {total}")
    best = {"d": None, "ids": ()}

    def consider(ids, demand, profit):
        if profit >= threshold and (best["d"] is None or demand < best["d"]):
            best["d"] = demand
            best["ids"] = ids

    chosen = []

    def extend(start, demand, profit):
        consider(tuple(chosen), demand, profit)
        for i in range(start, len(tasks)):
            t = tasks[i]
            chosen.append(t.id)
            extend(i + 1, demand + t.demand, profit + profits[t.id])
            chosen.pop()

    extend(0, rat(0), 0)
    return TaskSet.of(best["ids"])
