"""Data model for unsplittable flow on a path (UFP) and its bagged variant.

An instance is a path of m edges, numbered 1..m, each with a rational
capacity. A task occupies a contiguous run of edges (a subpath), has a
rational demand and a rational weight. A selection of tasks is feasible
when every edge carries total demand at most its capacity; in the bagged
variant the tasks are additionally partitioned into bags and a feasible
selection may use at most one task per bag.

Every numeric quantity is an exact rational (fractions.Fraction). Solver
code in this package never touches floating point: the approximation
guarantees and the LP vertex structure are only checkable exactly, and
floats are rejected at this boundary.
"""

import hashlib
import logging
from dataclasses import dataclass
from fractions import Fraction

log = logging.getLogger(__name__)

# Exact rational scalar used throughout the package. Fraction keeps values
# in lowest terms with a positive denominator, at arbitrary precision.
Rational = Fraction


class InstanceError(ValueError):
    """Raised for malformed instances, selections, or instance text."""


def rat(value) -> Fraction:
    """Coerce an int, string ("3", "5/4"), or Fraction to a Fraction.

    Floats are rejected outright rather than converted: a binary float that
    survived into an instance would silently break every exactness claim
    downstream.
    """
    if isinstance(value, float):
        raise InstanceError(f"floating point value {value!r} is not allowed; use a Fraction or 'a/b' string")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InstanceError(f"not a rational: {value!r}") from exc


@dataclass(frozen=True, order=True)
class Subpath:
    """Contiguous edge range [first, last], 1-indexed, both ends inclusive."""

    first: int
    last: int

    def __post_init__(self):
        if not (isinstance(self.first, int) and isinstance(self.last, int)):
            raise InstanceError("subpath endpoints must be integers")
        if not 1 <= self.first <= self.last:
            raise InstanceError(f"bad subpath [{self.first}, {self.last}]")

    def covers(self, edge: int) -> bool:
        return self.first <= edge <= self.last

    def edges(self) -> range:
        return range(self.first, self.last + 1)


@dataclass(frozen=True)
class Task:
    """One task: identifier, subpath, demand >= 0, weight >= 0."""

    id: int
    path: Subpath
    demand: Fraction
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "demand", rat(self.demand))
        object.__setattr__(self, "weight", rat(self.weight))
        if self.id < 0:
            raise InstanceError(f"task id must be nonnegative, got {self.id}")
        if self.demand < 0:
            raise InstanceError(f"task {self.id}: negative demand")
        if self.weight < 0:
            raise InstanceError(f"task {self.id}: negative weight")


@dataclass(frozen=True)
class Instance:
    """A UFP instance: m edges with capacities, and a tuple of tasks.

    Instances are immutable after construction; tasks are stored sorted by
    id so that structurally equal instances compare equal regardless of the
    order they were assembled in.
    """

    m: int
    capacities: tuple
    tasks: tuple

    def __post_init__(self):
        if self.m < 1:
            raise InstanceError(f"need at least one edge, got m={self.m}")
        caps = tuple(rat(c) for c in self.capacities)
        if len(caps) != self.m:
            raise InstanceError(f"expected {self.m} capacities, got {len(caps)}")
        for e, c in enumerate(caps, start=1):
            if c < 0:
                raise InstanceError(f"edge {e}: negative capacity")
        tasks = tuple(sorted(self.tasks, key=lambda t: t.id))
        seen = set()
        for t in tasks:
            if t.id in seen:
                raise InstanceError(f"duplicate task id {t.id}")
            seen.add(t.id)
            if t.path.last > self.m:
                raise InstanceError(f"task {t.id}: path {t.path} leaves the 1..{self.m} edge range")
        object.__setattr__(self, "capacities", caps)
        object.__setattr__(self, "tasks", tasks)
        object.__setattr__(self, "_by_id", {t.id: t for t in tasks})

    @property
    def n(self) -> int:
        return len(self.tasks)

    def task(self, task_id: int) -> Task:
        try:
            return self._by_id[task_id]
        except KeyError:
            raise InstanceError(f"unknown task id {task_id}") from None

    def capacity(self, edge: int) -> Fraction:
        if not 1 <= edge <= self.m:
            raise InstanceError(f"edge {edge} outside 1..{self.m}")
        return self.capacities[edge - 1]


@dataclass(frozen=True)
class BagInstance(Instance):
    """UFP instance whose tasks are partitioned into bags.

    ``bags`` is a tuple of (bag_id, member_ids) pairs; every task id appears
    in exactly one bag. A feasible selection takes at most one task per bag.
    """

    bags: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        norm = []
        seen_bags = set()
        assigned = {}
        for bag_id, members in self.bags:
            if bag_id in seen_bags:
                raise InstanceError(f"duplicate bag id {bag_id}")
            seen_bags.add(bag_id)
            members = tuple(sorted(members))
            if not members:
                raise InstanceError(f"bag {bag_id} is empty")
            for tid in members:
                if tid not in self._by_id:
                    raise InstanceError(f"bag {bag_id} references unknown task {tid}")
                if tid in assigned:
                    raise InstanceError(f"task {tid} appears in bags {assigned[tid]} and {bag_id}")
                assigned[tid] = bag_id
            norm.append((bag_id, members))
        missing = [t.id for t in self.tasks if t.id not in assigned]
        if missing:
            raise InstanceError(f"tasks {missing} belong to no bag (bags must partition the tasks)")
        norm.sort(key=lambda pair: pair[0])
        object.__setattr__(self, "bags", tuple(norm))
        object.__setattr__(self, "_bag_of", assigned)

    def bag_of(self, task_id: int) -> int:
        try:
            return self._bag_of[task_id]
        except KeyError:
            raise InstanceError(f"unknown task id {task_id}") from None

    def bag_members(self, bag_id: int) -> tuple:
        for bid, members in self.bags:
            if bid == bag_id:
                return members
        raise InstanceError(f"unknown bag id {bag_id}")


@dataclass(frozen=True)
class TaskSet:
    """Immutable set of task ids, stored as a sorted tuple."""

    ids: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ids", tuple(sorted(set(self.ids))))

    @classmethod
    def of(cls, ids) -> "TaskSet":
        return cls(tuple(ids))

    def __contains__(self, task_id) -> bool:
        return task_id in set(self.ids)

    def __iter__(self):
        return iter(self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    def union(self, other) -> "TaskSet":
        return TaskSet.of(set(self.ids) | set(other))

    def minus(self, other) -> "TaskSet":
        return TaskSet.of(set(self.ids) - set(other))


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of a feasibility check.

    violated_edges lists (edge, load, capacity) for every overloaded edge;
    violated_bags lists bag ids holding two or more selected tasks.
    """

    feasible: bool
    violated_edges: tuple = ()
    violated_bags: tuple = ()


@dataclass(frozen=True)
class DropReport:
    """What preprocessing removed: (task_id, reason) pairs plus the kept count."""

    dropped: tuple
    kept: int


def _as_taskset(selection) -> TaskSet:
    if isinstance(selection, TaskSet):
        return selection
    return TaskSet.of(selection)


def edge_loads(instance: Instance, selection) -> tuple:
    """Per-edge total demand of the selection, as a tuple of length m."""
    sel = _as_taskset(selection)
    loads = [Fraction(0)] * instance.m
    for tid in sel:
        t = instance.task(tid)
        for e in t.path.edges():
            loads[e - 1] += t.demand
    return tuple(loads)


def edge_load(instance: Instance, selection, edge: int) -> Fraction:
    """Total demand the selection places on one edge."""
    if not 1 <= edge <= instance.m:
        raise InstanceError(f"edge {edge} outside 1..{instance.m}")
    return edge_loads(instance, selection)[edge - 1]


def check_feasible(instance: Instance, selection) -> FeasibilityReport:
    """Check capacity constraints, and bag constraints when the instance has bags.

    Unknown task ids raise InstanceError; an empty selection is feasible.
    """
    sel = _as_taskset(selection)
    loads = edge_loads(instance, sel)
    bad_edges = tuple(
        (e, loads[e - 1], instance.capacities[e - 1])
        for e in range(1, instance.m + 1)
        if loads[e - 1] > instance.capacities[e - 1]
    )
    bad_bags = ()
    if isinstance(instance, BagInstance):
        used = {}
        for tid in sel:
            b = instance.bag_of(tid)
            used.setdefault(b, []).append(tid)
        bad_bags = tuple(sorted(b for b, tids in used.items() if len(tids) > 1))
    return FeasibilityReport(
        feasible=not bad_edges and not bad_bags,
        violated_edges=bad_edges,
        violated_bags=bad_bags,
    )


def total_weight(instance: Instance, selection) -> Fraction:
    sel = _as_taskset(selection)
    return sum((instance.task(tid).weight for tid in sel), Fraction(0))


def unique_paths(instance: Instance) -> tuple:
    """Distinct task subpaths, sorted lexicographically by (first, last)."""
    return tuple(sorted({t.path for t in instance.tasks}))


def tasks_on_path(instance: Instance, path: Subpath) -> tuple:
    """Tasks whose subpath is exactly ``path``, in id order."""
    return tuple(t for t in instance.tasks if t.path == path)


def min_capacity_on(instance: Instance, path: Subpath) -> Fraction:
    """Smallest edge capacity along a subpath."""
    if path.last > instance.m:
        raise InstanceError(f"path {path} leaves the 1..{instance.m} edge range")
    return min(instance.capacities[e - 1] for e in path.edges())


def residual_capacities(instance: Instance, selection) -> tuple:
    """Capacities left after routing the selection. The selection must fit:
    a negative residual on any edge is a precondition violation and raises."""
    sel = _as_taskset(selection)
    loads = edge_loads(instance, sel)
    residual = []
    for e in range(1, instance.m + 1):
        r = instance.capacities[e - 1] - loads[e - 1]
        if r < 0:
            raise InstanceError(f"selection overloads edge {e} ({loads[e - 1]} > {instance.capacities[e - 1]})")
        residual.append(r)
    return tuple(residual)


def preprocess(instance: Instance):
    """Drop tasks that can never be selected, returning (instance', DropReport).

    Removed are zero-weight tasks (they cannot improve any solution and only
    widen tie-breaking) and tasks whose demand alone exceeds the smallest
    capacity on their own subpath. Bags that lose all members disappear.
    Every drop is logged.
    """
    dropped = []
    keep = []
    for t in instance.tasks:
        if t.weight == 0:
            dropped.append((t.id, "zero weight"))
            log.info("preprocess: dropping task %d (zero weight)", t.id)
        elif t.demand > min_capacity_on(instance, t.path):
            dropped.append((t.id, "demand exceeds own-path capacity"))
            log.info("preprocess: dropping task %d (demand %s exceeds capacity on %s)", t.id, t.demand, t.path)
        else:
            keep.append(t)
    report = DropReport(dropped=tuple(dropped), kept=len(keep))
    kept_ids = {t.id for t in keep}
    if isinstance(instance, BagInstance):
        bags = []
        for bag_id, members in instance.bags:
            left = tuple(tid for tid in members if tid in kept_ids)
            if left:
                bags.append((bag_id, left))
        out = BagInstance(m=instance.m, capacities=instance.capacities, tasks=tuple(keep), bags=tuple(bags))
    else:
        out = Instance(m=instance.m, capacities=instance.capacities, tasks=tuple(keep))
    return out, report


# --- instance text format ---------------------------------------------------
#
#   m 2
#   cap 5 4
#   task 1 1 1 3 10        # task <id> <first> <last> <demand> <weight>
#   bag 1 1 3              # bag <bag_id> <task_id>...
#
# '#' starts a comment; rationals are written as "a/b" or plain integers.
# Any bag line makes the instance bagged, and then the bags must partition
# the task ids. Serialization is canonical: tasks sorted by id, bags sorted
# by bag id, members sorted by id.


def parse_instance(text: str) -> Instance:
    """Parse the instance text format. Returns BagInstance iff bag lines appear."""
    m = None
    caps = None
    tasks = []
    bags = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind, args = fields[0], fields[1:]
        if kind == "m":
            if m is not None:
                raise InstanceError(f"line {ln}: duplicate m directive")
            if len(args) != 1:
                raise InstanceError(f"line {ln}: m takes exactly one value")
            m = _parse_int(args[0], ln)
        elif kind == "cap":
            if m is None:
                raise InstanceError(f"line {ln}: cap before m")
            if caps is not None:
                raise InstanceError(f"line {ln}: duplicate cap directive")
            if len(args) != m:
                raise InstanceError(f"line {ln}: expected {m} capacities, got {len(args)}")
            caps = tuple(_parse_rat(a, ln) for a in args)
        elif kind == "task":
            if m is None:
                raise InstanceError(f"line {ln}: task before m")
            if len(args) != 5:
                raise InstanceError(f"line {ln}: task takes <id> <first> <last> <demand> <weight>")
            tid = _parse_int(args[0], ln)
            first = _parse_int(args[1], ln)
            last = _parse_int(args[2], ln)
            try:
                path = Subpath(first, last)
                tasks.append(Task(tid, path, _parse_rat(args[3], ln), _parse_rat(args[4], ln)))
            except InstanceError as exc:
                raise InstanceError(f"line {ln}: {exc}") from None
        elif kind == "bag":
            if len(args) < 2:
                raise InstanceError(f"line {ln}: bag takes <bag_id> and at least one task id")
            bags.append((_parse_int(args[0], ln), tuple(_parse_int(a, ln) for a in args[1:])))
        else:
            raise InstanceError(f"line {ln}: unknown directive {kind!r}")
    if m is None:
        raise InstanceError("missing m directive")
    if caps is None:
        raise InstanceError("missing cap directive")
    if bags:
        return BagInstance(m=m, capacities=caps, tasks=tuple(tasks), bags=tuple(bags))
    return Instance(m=m, capacities=caps, tasks=tuple(tasks))


def _parse_int(token: str, ln: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceError(f"line {ln}: expected integer, got {token!r}") from None


def _parse_rat(token: str, ln: int) -> Fraction:
    try:
        return rat(token)
    except InstanceError:
        raise InstanceError(f"line {ln}: expected rational, got {token!r}") from None


def serialize_instance(instance: Instance) -> str:
    """Canonical text for an instance; parse(serialize(x)) == x."""
    lines = [f"m {instance.m}", "cap " + " ".join(str(c) for c in instance.capacities)]
    for t in instance.tasks:
        lines.append(f"task {t.id} {t.path.first} {t.path.last} {t.demand} {t.weight}")
    if isinstance(instance, BagInstance):
        for bag_id, members in instance.bags:
            lines.append(f"bag {bag_id} " + " ".join(str(tid) for tid in members))
    return "\n".join(lines) + "\n"


def instance_digest(instance: Instance) -> str:
    """Short stable fingerprint of the canonical serialization."""
    return hashlib.sha256(serialize_instance(instance).encode()).hexdigest()[:12]
