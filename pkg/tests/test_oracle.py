"""Exhaustive reference solvers: frozen small cases plus search invariants.

The frozen numbers (optimum, witness, node counts) were derived by hand on
the two reference instances and pinned here so any behavioural drift in the
oracle shows up as a hard failure.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import make_instance
from test_model import instances
from ufpkit.model import Subpath, Task, check_feasible, total_weight
from ufpkit.oracle import (
    DEFAULT_LIMIT,
    LIMIT_ENV_VAR,
    OracleLimitError,
    enumerate_feasible,
    exact_bagufp,
    exact_min_demand_subset,
    exact_ufp,
)


def test_exact_ufp_reference(e1):
    res = exact_ufp(e1)
    assert res.value == 17
    assert tuple(res.witness) == (1, 3)
    assert res.explored == 8


def test_exact_bagufp_reference(e2):
    res = exact_bagufp(e2)
    assert res.value == 16
    assert tuple(res.witness) == (1, 2)
    assert res.explored == 8


def test_enumerate_feasible_plain(e1):
    fam = [tuple(s) for s in enumerate_feasible(e1)]
    assert fam == [(), (1,), (1, 2), (1, 3), (2,), (3,)]


def test_enumerate_feasible_bags(e2):
    fam = [tuple(s) for s in enumerate_feasible(e2)]
    assert fam == [(), (1,), (1, 2), (2,), (3,)]


def test_bag_oracle_ignores_nothing(e2):
    # stripping the bags can only help
    assert exact_ufp(e2).value >= exact_bagufp(e2).value


def test_empty_instance():
    inst = make_instance(1, (0,), ())
    res = exact_ufp(inst)
    assert res.value == 0 and tuple(res.witness) == () and res.explored == 1


# ---------------------------------------------------------------- size limit

def test_limit_trips():
    n = DEFAULT_LIMIT + 1
    inst = make_instance(1, (0,), tuple((i, 1, 1, 1, 1) for i in range(1, n + 1)))
    with pytest.raises(OracleLimitError):
        exact_ufp(inst)


def test_limit_env_override(monkeypatch):
    n = DEFAULT_LIMIT + 1
    inst = make_instance(1, (0,), tuple((i, 1, 1, 1, 1) for i in range(1, n + 1)))
    monkeypatch.setenv(LIMIT_ENV_VAR, str(n))
    res = exact_ufp(inst)
    # zero capacity: only the empty set is feasible, every extension rejected
    assert res.value == 0
    assert res.explored == 1 + n


# ------------------------------------------------------- min-demand coverage

def _ab_tasks():
    return (
        Task(1, Subpath(1, 1), Fraction(2), Fraction(0)),
        Task(2, Subpath(1, 1), Fraction(3), Fraction(0)),
    )


def test_min_demand_examples():
    tasks = _ab_tasks()
    profits = {1: 3, 2: 4}
    assert exact_min_demand_subset(tasks, 0, profits).ids == ()
    assert exact_min_demand_subset(tasks, 3, profits).ids == (1,)
    assert exact_min_demand_subset(tasks, 4, profits).ids == (2,)
    assert exact_min_demand_subset(tasks, 7, profits).ids == (1, 2)


def test_min_demand_unreachable_raises():
    with pytest.raises(ValueError):
        exact_min_demand_subset(_ab_tasks(), 8, {1: 3, 2: 4})


def test_min_demand_order_insensitive():
    tasks = _ab_tasks()
    profits = {1: 3, 2: 4}
    for thr in range(0, 8):
        assert exact_min_demand_subset(tasks, thr, profits) == exact_min_demand_subset(
            tuple(reversed(tasks)), thr, profits
        )


# ---------------------------------------------------------------- properties

@settings(max_examples=60, deadline=None)
@given(instances(max_n=6, max_m=3))
def test_witness_is_optimal_over_family(inst):
    res = exact_ufp(inst)
    assert check_feasible(inst, res.witness).feasible
    assert total_weight(inst, res.witness) == res.value
    best = max(total_weight(inst, s.ids) for s in enumerate_feasible(inst))
    assert res.value == best


@settings(max_examples=40, deadline=None)
@given(instances(max_n=6, max_m=3, with_bags=True))
def test_bag_witness_respects_bags(inst):
    res = exact_bagufp(inst)
    rep = check_feasible(inst, res.witness)
    assert rep.feasible
    assert res.value == max(total_weight(inst, s.ids) for s in enumerate_feasible(inst))


@settings(max_examples=40, deadline=None)
@given(instances(max_n=6, max_m=3))
def test_family_is_lexicographic(inst):
    fam = [tuple(s) for s in enumerate_feasible(inst)]
    assert fam == sorted(fam)
    assert len(fam) == len(set(fam))
    assert fam[0] == ()
