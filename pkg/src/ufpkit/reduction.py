"""Reduction from multiple-choice subset sum to UFP decision instances.

The source problem (SSM): given k sets of n positive rationals each and a
target B, pick exactly one value per set so the picks sum to B. For every
candidate index sum x in k..k*n the reduction emits a UFP instance on
2k+1 edges whose optimum reaches a profit threshold iff some selection
with index sum x hits the target; sweeping x decides the SSM instance.

Layout: odd edges 1, 3, .., 2k+1 are checkpoints e_0..e_k, even edges
2, 4, .., 2k are private lanes f_1..f_k. Per set i and index j there is a
left task z[i,j] on edges [1, 2i-1], a right task q[i,j] on [2i+1, 2k+1],
and per set a lane task d[i] on its private edge. Demands embed the values
in units of W shifted by a large base Q; weights stack three resolution
tiers (H per task, L per index-position term, units for the index sum) so
that any selection reaching the threshold must take exactly one z, q, and
lane task per set, align the z and q indices, and land the index sum
exactly on x. The threshold is 3kH + k(k+1)L + (k+1)x: 3k tasks, the
aligned L terms, and one index sum per checkpoint edge.

Instances must satisfy r = 2B + sum of all values < 1 and every value
< 2B/k; normalize_ssm turns an arbitrary rational SSM into an equivalent
instance of that shape (shift to positive, then a global rescale).
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .model import Instance, InstanceError, Subpath, Task, rat
from .oracle import exact_ufp


@dataclass(frozen=True)
class SsmInstance:
    """k sets of n positive rationals and a target, shaped for the reduction."""

    sets: tuple   # k tuples of n values each
    target: Fraction

    def __post_init__(self):
        sets = tuple(tuple(rat(a) for a in row) for row in self.sets)
        target = rat(self.target)
        if not sets or not sets[0]:
            raise InstanceError("need at least one set with at least one value")
        n = len(sets[0])
        if any(len(row) != n for row in sets):
            raise InstanceError("all sets must have the same size")
        if target <= 0:
            raise InstanceError("target must be positive")
        k = len(sets)
        bound = 2 * target / k
        for i, row in enumerate(sets, start=1):
            for j, a in enumerate(row, start=1):
                if a <= 0:
                    raise InstanceError(f"value a[{i},{j}] = {a} must be positive")
                if a >= bound:
                    raise InstanceError(f"value a[{i},{j}] = {a} must be below 2B/k = {bound}")
        slack = 2 * target + sum(a for row in sets for a in row)
        if slack >= 1:
            raise InstanceError(f"2B + sum of values is {slack}, must be below 1 (normalize first)")
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "target", target)

    @property
    def k(self) -> int:
        return len(self.sets)

    @property
    def n(self) -> int:
        return len(self.sets[0])


@dataclass(frozen=True)
class ReductionParams:
    """Derived constants: scale tiers and the edge count of the UFP image."""

    r: Fraction   # 2B + sum of values, the slack unit
    W: Fraction   # demand step per index: 1 + r
    Q: Fraction   # demand base, dwarfs all index contributions
    L: int        # weight tier separating index-position terms
    H: int        # weight tier forcing the task-count structure
    m: int        # edges in the image: 2k+1


def normalize_ssm(sets, target) -> SsmInstance:
    """Shape an arbitrary rational SSM into reduction form, same answer.

    Picking one value per set is invariant under shifting every value by t
    (the target shifts by k*t) and under positive rescaling. The shift
    makes everything positive with room below 2B/k; the rescale pins
    2B + sum of values to 1/2.
    """
    rows = tuple(tuple(rat(a) for a in row) for row in sets)
    if not rows or not rows[0]:
        raise InstanceError("need at least one set with at least one value")
    n = len(rows[0])
    if any(len(row) != n for row in rows):
        raise InstanceError("all sets must have the same size")
    target = rat(target)
    k = len(rows)
    biggest = max(abs(a) for row in rows for a in row)
    shift = 1 + biggest + 2 * abs(target) / k
    rows = tuple(tuple(a + shift for a in row) for row in rows)
    target = target + k * shift
    slack = 2 * target + sum(a for row in rows for a in row)
    scale = Fraction(1, 2) / slack
    rows = tuple(tuple(a * scale for a in row) for row in rows)
    return SsmInstance(sets=rows, target=target * scale)


def reduction_params(ssm: SsmInstance) -> ReductionParams:
    k, n = ssm.k, ssm.n
    r = 2 * ssm.target + sum(a for row in ssm.sets for a in row)
    W = 1 + r
    Q = 1 + (k * n + 1) * W
    L = 2 * (k * n) ** 2 + 1
    H = 2 * k * k * L + 2 * k * k * n + 1
    return ReductionParams(r=r, W=W, Q=Q, L=L, H=H, m=2 * k + 1)


def task_role(ssm: SsmInstance, task_id: int) -> str:
    """Human-readable role of a task id in the image instance."""
    k, n = ssm.k, ssm.n
    if 1 <= task_id <= k * n:
        i, j = divmod(task_id - 1, n)
        return f"z[set={i + 1},index={j + 1}]"
    if k * n < task_id <= 2 * k * n:
        i, j = divmod(task_id - k * n - 1, n)
        return f"q[set={i + 1},index={j + 1}]"
    if 2 * k * n < task_id <= 2 * k * n + k:
        return f"lane[set={task_id - 2 * k * n}]"
    raise InstanceError(f"task id {task_id} outside the image range")


def build_ufp_instance(ssm: SsmInstance, x: int) -> Instance:
    """The UFP image for index-sum guess x (k <= x <= k*n).

    Task ids are sequential: z tasks first (set-major, index-minor), then
    q tasks in the same order, then the k lane tasks.
    """
    k, n = ssm.k, ssm.n
    if not k <= x <= k * n:
        raise InstanceError(f"index sum {x} outside {k}..{k * n}")
    p = reduction_params(ssm)
    B = ssm.target
    base = k * p.Q + x * p.W
    caps = []
    for edge in range(1, p.m + 1):
        if edge == 1 or edge == p.m:
            caps.append(base + B)
        else:
            caps.append(base + p.r)
    tasks = []
    for i in range(1, k + 1):
        for j in range(1, n + 1):
            a = ssm.sets[i - 1][j - 1]
            tasks.append(Task(
                id=(i - 1) * n + j,
                path=Subpath(1, 2 * i - 1),
                demand=p.Q + j * p.W + a,
                weight=Fraction(p.H + i * p.L + j * i),
            ))
    for i in range(1, k + 1):
        for j in range(1, n + 1):
            a = ssm.sets[i - 1][j - 1]
            tasks.append(Task(
                id=k * n + (i - 1) * n + j,
                path=Subpath(2 * i + 1, 2 * k + 1),
                demand=p.Q + j * p.W + 2 * B / k - a,
                weight=Fraction(p.H + (k + 1 - i) * p.L + (k + 1 - i) * j),
            ))
    for i in range(1, k + 1):
        tasks.append(Task(
            id=2 * k * n + i,
            path=Subpath(2 * i, 2 * i),
            demand=p.Q,
            weight=Fraction(p.H),
        ))
    return Instance(m=p.m, capacities=tuple(caps), tasks=tuple(tasks))


def profit_threshold(ssm: SsmInstance, x: int) -> int:
    """Profit reachable in the image iff some selection has index sum x
    and hits the target: 3k tasks of tier H, aligned tier-L terms, and the
    index sum once per checkpoint edge."""
    k = ssm.k
    p = reduction_params(ssm)
    return 3 * k * p.H + k * (k + 1) * p.L + (k + 1) * x


def decide_ssm_bruteforce(ssm: SsmInstance, limit: int = 10 ** 6):
    """Exhaustive decision: (answer, witness) with witness the
    lexicographically first index choice (1-based, one per set) or None."""
    k, n = ssm.k, ssm.n
    if n ** k > limit:
        raise ValueError(f"{n}^{k} selections exceed the limit {limit}")
    for choice in product(range(1, n + 1), repeat=k):
        total = sum(ssm.sets[i][choice[i] - 1] for i in range(k))
        if total == ssm.target:
            return True, choice
    return False, None


def decide_ssm_via_ufp(ssm: SsmInstance, oracle_limit=None) -> bool:
    """Decide by solving every image instance exactly and comparing the
    optimum against the profit threshold."""
    k, n = ssm.k, ssm.n
    for x in range(k, k * n + 1):
        image = build_ufp_instance(ssm, x)
        result = exact_ufp(image, limit=oracle_limit)
        if result.value >= profit_threshold(ssm, x):
            return True
    return False


# --- SSM text format ---------------------------------------------------------
#
#   k 2
#   n 2
#   set 1 1/8 1/16
#   set 2 1/8 1/16
#   target 3/16
#
# '#' comments as in the instance format. Values may be any rationals when
# the file is meant for normalize_ssm; parse_ssm itself does not normalize.


def parse_ssm(text: str):
    """Parse the SSM text format into (sets, target), unvalidated rationals."""
    k = n = None
    rows = {}
    target = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind, args = fields[0], fields[1:]
        if kind == "k":
            k = int(args[0])
        elif kind == "n":
            n = int(args[0])
        elif kind == "set":
            if k is None or n is None:
                raise InstanceError(f"line {ln}: set before k and n")
            if len(args) != n + 1:
                raise InstanceError(f"line {ln}: set takes an index and {n} values")
            idx = int(args[0])
            if not 1 <= idx <= k:
                raise InstanceError(f"line {ln}: set index {idx} outside 1..{k}")
            if idx in rows:
                raise InstanceError(f"line {ln}: duplicate set {idx}")
            rows[idx] = tuple(rat(a) for a in args[1:])
        elif kind == "target":
            target = rat(args[0])
        else:
            raise InstanceError(f"line {ln}: unknown directive {kind!r}")
    if k is None or n is None or target is None:
        raise InstanceError("missing k, n, or target")
    missing = [i for i in range(1, k + 1) if i not in rows]
    if missing:
        raise InstanceError(f"missing set lines for {missing}")
    return tuple(rows[i] for i in range(1, k + 1)), target


def serialize_ssm(sets, target) -> str:
    rows = tuple(tuple(rat(a) for a in row) for row in sets)
    lines = [f"k {len(rows)}", f"n {len(rows[0])}"]
    for i, row in enumerate(rows, start=1):
        lines.append(f"set {i} " + " ".join(str(a) for a in row))
    lines.append(f"target {rat(target)}")
    return "\n".join(lines) + "\n"
