"""Shared fixtures and the acceptance line reporter.

The two reference instances live here: a three-task path instance whose
optimum is 17 via tasks {1, 3}, and its bagged variant where bag 1 holds
tasks 1 and 3 (optimum 16 via {1, 2}).

Acceptance tests register one line per criterion via record_acceptance;
the terminal-summary hook prints them after the run, so the pass/fail
lines stay visible even with output capture on.
"""

import pytest

from ufpkit.model import BagInstance, Instance, Subpath, Task


def make_instance(m, caps, tasks, bags=None):
    """Terse builder: tasks as (id, first, last, demand, weight) tuples."""
    built = tuple(Task(tid, Subpath(first, last), d, w) for tid, first, last, d, w in tasks)
    if bags is None:
        return Instance(m=m, capacities=tuple(caps), tasks=built)
    return BagInstance(m=m, capacities=tuple(caps), tasks=built, bags=tuple(bags))


E1_TASKS = ((1, 1, 1, 3, 10), (2, 2, 2, 4, 6), (3, 1, 2, 2, 7))


@pytest.fixture
def e1() -> Instance:
    return make_instance(2, (5, 4), E1_TASKS)


@pytest.fixture
def e2() -> BagInstance:
    return make_instance(2, (5, 4), E1_TASKS, bags=((1, (1, 3)), (2, (2,))))


_ACCEPTANCE_LINES = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
