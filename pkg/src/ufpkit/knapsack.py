"""Minimum-demand covering knapsack tables, one per distinct subpath.

For every distinct subpath phi let T_phi be the tasks sitting exactly on
phi and p_phi the sum of their integer profits. The table for phi stores,
for every target p' in 0..p_phi, a subset of T_phi of minimum total demand
whose profit is at least p' (profit may exceed p'; demand may exceed the
edge capacities, callers filter that). Entry 0 is always the empty set.

The dynamic program fills cells in one pass per task, comparing candidate
subsets by (demand, sorted id tuple), so results are deterministic. Stored
demands are exact rationals; stored profits are the true subset profits.
"""

from dataclasses import dataclass
from fractions import Fraction

from .model import Instance, Subpath, tasks_on_path, unique_paths


@dataclass(frozen=True)
class SolEntry:
    """One table cell: task ids, their total demand, their total profit."""

    ids: tuple
    demand: Fraction
    profit: int


@dataclass(frozen=True)
class PathTable:
    """All cells for one subpath: entries[p'] covers profit target p'."""

    path: Subpath
    total_profit: int
    entries: tuple

    def entry(self, target: int) -> SolEntry:
        if not 0 <= target <= self.total_profit:
            raise ValueError(f"profit target {target} outside 0..{self.total_profit} for path {self.path}")
        return self.entries[target]


@dataclass(frozen=True)
class SolTables:
    """Tables for every distinct subpath of an instance, in path order."""

    tables: tuple

    def __post_init__(self):
        object.__setattr__(self, "_by_path", {t.path: t for t in self.tables})

    @property
    def paths(self) -> tuple:
        return tuple(t.path for t in self.tables)

    def table(self, path: Subpath) -> PathTable:
        try:
            return self._by_path[path]
        except KeyError:
            raise ValueError(f"no table for path {path}") from None


def _better(a, b):
    """Smaller (demand, ids) wins; None means unreachable."""
    if a is None:
        return b
    if b is None:
        return a
    return a if (a[0], a[2]) <= (b[0], b[2]) else b


def build_profit_tables(instance: Instance, profits) -> SolTables:
    """Build the covering-knapsack table for every distinct subpath.

    ``profits`` maps task id to a nonnegative integer profit. Total table
    size is sum over paths of (p_phi + 1) cells.
    """
    tables = []
    for path in unique_paths(instance):
        members = tasks_on_path(instance, path)
        for t in members:
            if profits[t.id] < 0:
                raise ValueError(f"task {t.id}: negative profit")
        p_total = sum(profits[t.id] for t in members)
        # cells[p'] = (demand, profit, ids) or None while unreachable
        cells = [None] * (p_total + 1)
        cells[0] = (Fraction(0), 0, ())
        for t in members:
            pt = profits[t.id]
            prev = cells
            cells = list(prev)
            for target in range(p_total + 1):
                base = prev[max(0, target - pt)]
                if base is None:
                    continue
                cand = (base[0] + t.demand, base[1] + pt, base[2] + (t.id,))
                cells[target] = _better(prev[target], cand)
        entries = tuple(SolEntry(ids=c[2], demand=c[0], profit=c[1]) for c in cells)
        tables.append(PathTable(path=path, total_profit=p_total, entries=entries))
    return SolTables(tables=tuple(tables))


def lookup(tables: SolTables, path: Subpath, target: int) -> SolEntry:
    """Cached minimum-demand subset of T_path with profit >= target."""
    return tables.table(path).entry(target)


def entry_segments(table: PathTable) -> tuple:
    """Maximal runs of profit targets sharing one table entry.

    Returns (t_start, t_end, entry) triples covering 0..p_phi in order.
    Every distinct subset the table can ever return appears exactly once,
    at the run holding the smallest targets that produce it.
    """
    segs = []
    start = 0
    for target in range(1, table.total_profit + 1):
        if table.entries[target].ids != table.entries[start].ids:
            segs.append((start, target - 1, table.entries[start]))
            start = target
    segs.append((start, table.total_profit, table.entries[start]))
    return tuple(segs)
