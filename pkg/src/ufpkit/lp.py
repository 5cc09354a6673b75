"""Exact-arithmetic linear programming, small and deterministic.

solve_lp_basic maximizes c.x over Ax <= b, x >= 0 with a dense two-phase
primal simplex on Fractions. Pivoting follows Bland's rule (lowest-index
entering column, lowest-index basic variable on ratio ties), which cannot
cycle, so termination needs no perturbation and the returned vertex is a
deterministic function of the input. This is deliberately not a
high-performance solver: the LPs here have a handful of variables and
rows, and what matters is the exact vertex structure (how many coordinates
are fractional), which floating-point solvers cannot certify.

build_bag_lp assembles the residual LP used by the bagged scheme: given a
feasible heavy prefix F, the variables are the cheap-enough tasks from
untouched bags, constrained by leftover edge capacity and by one-per-bag
rows.
"""

from dataclasses import dataclass
from fractions import Fraction

from .model import BagInstance, TaskSet, rat, residual_capacities


class LpInfeasible(ValueError):
    """The constraint set has no nonnegative solution."""


class LpUnbounded(ValueError):
    """The objective is unbounded above on the feasible region."""


@dataclass(frozen=True)
class LpProblem:
    """maximize objective . x  subject to  rows, x >= 0.

    objective: tuple of Fractions, one per structural variable.
    rows: tuple of (coefficients, rhs) pairs, meaning coeffs . x <= rhs.
    """

    objective: tuple
    rows: tuple

    def __post_init__(self):
        obj = tuple(rat(c) for c in self.objective)
        rows = []
        for coeffs, rhs in self.rows:
            coeffs = tuple(rat(c) for c in coeffs)
            if len(coeffs) != len(obj):
                raise ValueError(f"row has {len(coeffs)} coefficients, expected {len(obj)}")
            rows.append((coeffs, rat(rhs)))
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "rows", tuple(rows))

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class BasicSolution:
    """An optimal vertex: variable values, objective, and the basis.

    Basis entries are column indices: 0..n-1 are the structural variables,
    n..n+m-1 the slack of each row, in row order.
    """

    values: tuple
    objective: Fraction
    basis: tuple


def _pivot(tableau, basis, row: int, col: int) -> None:
    piv = tableau[row][col]
    tableau[row] = [v / piv for v in tableau[row]]
    for i, r in enumerate(tableau):
        if i != row and r[col] != 0:
            factor = r[col]
            tableau[i] = [v - factor * p for v, p in zip(r, tableau[row])]
    basis[row] = col


def _run_simplex(tableau, basis, costs) -> None:
    """Maximize costs over the tableau in place. Bland's rule throughout."""
    ncols = len(tableau[0]) - 1  # last column is the rhs
    while True:
        # reduced costs r_j = c_j - c_B . column_j
        reduced = []
        for j in range(ncols):
            r = costs[j]
            for i, b in enumerate(basis):
                if costs[b] != 0:
                    r -= costs[b] * tableau[i][j]
            reduced.append(r)
        enter = next((j for j in range(ncols) if j not in set(basis) and reduced[j] > 0), None)
        if enter is None:
            return
        leave = None
        best_ratio = None
        for i, r in enumerate(tableau):
            if r[enter] > 0:
                ratio = r[-1] / r[enter]
                if best_ratio is None or ratio < best_ratio or (
                    ratio == best_ratio and basis[i] < basis[leave]
                ):
                    best_ratio = ratio
                    leave = i
        if leave is None:
            raise LpUnbounded("improving direction with no binding row")
        _pivot(tableau, basis, leave, enter)


def solve_lp_basic(problem: LpProblem) -> BasicSolution:
    """Optimal basic solution of the LP, or LpInfeasible / LpUnbounded."""
    n = problem.num_vars
    m = len(problem.rows)
    if m == 0:
        if any(c > 0 for c in problem.objective):
            raise LpUnbounded("positive objective with no constraints")
        return BasicSolution(values=(Fraction(0),) * n, objective=Fraction(0), basis=())

    # equality form: A x + I s = b, with rows negated when b < 0
    width = n + m
    tableau = []
    negated = []
    for i, (coeffs, rhs) in enumerate(problem.rows):
        row = list(coeffs) + [Fraction(0)] * m + [rhs]
        row[n + i] = Fraction(1)
        if rhs < 0:
            row = [-v for v in row]
            negated.append(i)
        tableau.append(row)

    if negated:
        # phase one: artificial column per negated row, drive their sum to 0
        art_of = {}
        for i in negated:
            for r in tableau:
                r.insert(-1, Fraction(0))
            tableau[i][-2] = Fraction(1)
            art_of[i] = width
            width += 1
        basis = [art_of[i] if i in art_of else n + i for i in range(m)]
        costs = [Fraction(0)] * width
        for c in art_of.values():
            costs[c] = Fraction(-1)
        _run_simplex(tableau, basis, costs)
        residual = sum(tableau[i][-1] for i in range(m) if basis[i] in art_of.values())
        if residual != 0:
            raise LpInfeasible("phase one ended with positive artificial mass")
        # pivot any zero-level artificial out of the basis
        arts = set(art_of.values())
        for i in range(len(tableau)):
            if basis[i] in arts:
                col = next((j for j in range(n + m) if tableau[i][j] != 0), None)
                if col is not None:
                    _pivot(tableau, basis, i, col)
        # rows still carrying an artificial are 0 = 0 identities; drop them,
        # then drop the artificial columns
        keep_rows = [i for i in range(len(tableau)) if basis[i] not in arts]
        tableau = [tableau[i] for i in keep_rows]
        basis = [basis[i] for i in keep_rows]
        keep = n + m
        tableau = [r[:keep] + [r[-1]] for r in tableau]
        width = keep
    else:
        basis = [n + i for i in range(m)]

    costs = list(problem.objective) + [Fraction(0)] * (width - n)
    _run_simplex(tableau, basis, costs)

    values = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            values[b] = tableau[i][-1]
    objective = sum((c * v for c, v in zip(problem.objective, values)), Fraction(0))
    return BasicSolution(values=tuple(values), objective=objective, basis=tuple(sorted(basis)))


def count_fractional(solution: BasicSolution) -> int:
    """How many variable values are strictly between 0 and 1."""
    return sum(1 for v in solution.values if 0 < v < 1)


def build_bag_lp(instance: BagInstance, selected, opt_tilde, eps):
    """Residual LP over cheap tasks from bags untouched by ``selected``.

    Variables are the tasks with weight <= (2*eps/m) * opt_tilde whose bag
    contains nothing from ``selected``; the objective is their weight. Rows
    are every edge's residual capacity (after routing ``selected``) and a
    one-per-bag row for each bag contributing a variable. Returns
    (LpProblem, var_ids) with var_ids sorted ascending; column j of the LP
    is the task var_ids[j].

    ``selected`` must be feasible on the instance (negative residuals raise).
    """
    if not isinstance(instance, BagInstance):
        raise TypeError("build_bag_lp needs a BagInstance")
    eps = rat(eps)
    opt_tilde = rat(opt_tilde)
    sel = selected if isinstance(selected, TaskSet) else TaskSet.of(selected)
    residual = residual_capacities(instance, sel)
    cutoff = 2 * eps * opt_tilde / instance.m
    blocked = {instance.bag_of(tid) for tid in sel}
    var_ids = tuple(
        t.id for t in instance.tasks
        if t.weight <= cutoff and instance.bag_of(t.id) not in blocked
    )
    index = {tid: j for j, tid in enumerate(var_ids)}
    objective = tuple(instance.task(tid).weight for tid in var_ids)

    rows = []
    for e in range(1, instance.m + 1):
        coeffs = [Fraction(0)] * len(var_ids)
        for tid in var_ids:
            t = instance.task(tid)
            if t.path.covers(e):
                coeffs[index[tid]] = t.demand
        rows.append((tuple(coeffs), residual[e - 1]))
    covered = set()
    for bag_id, members in instance.bags:
        hit = [tid for tid in members if tid in index]
        if not hit:
            continue
        coeffs = [Fraction(0)] * len(var_ids)
        for tid in hit:
            coeffs[index[tid]] = Fraction(1)
            covered.add(tid)
        rows.append((tuple(coeffs), Fraction(1)))
    for tid in var_ids:
        if tid not in covered:  # unreachable when bags partition tasks; keep x <= 1 anyway
            coeffs = [Fraction(0)] * len(var_ids)
            coeffs[index[tid]] = Fraction(1)
            rows.append((tuple(coeffs), Fraction(1)))
    return LpProblem(objective=objective, rows=tuple(rows)), var_ids
