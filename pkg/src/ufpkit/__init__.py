"""ufpkit: exact and approximate solvers for unsplittable flow on a path.

Instances live in ufpkit.model; brute-force ground truth in ufpkit.oracle;
the approximation schemes in ufpkit.ufp_eptas and ufpkit.bag_eptas (backed
by ufpkit.knapsack and ufpkit.lp); the subset-sum reduction in
ufpkit.reduction; seeded instance generation in ufpkit.generators; the
command line in ufpkit.cli.
"""

__version__ = "0.1.0"

from .bag_eptas import BagResult, build_classes, heavy_tasks, rep_set, solve_bagufp
from .generators import GenSpec, SplitMix64, gen_random
from .knapsack import SolTables, build_profit_tables, lookup
from .lp import BasicSolution, LpProblem, build_bag_lp, count_fractional, solve_lp_basic
from .model import (
    BagInstance, FeasibilityReport, Instance, InstanceError, Rational, Subpath,
    Task, TaskSet, check_feasible, edge_load, parse_instance, preprocess,
    residual_capacities, serialize_instance, total_weight, unique_paths,
)
from .oracle import OptResult, enumerate_feasible, exact_bagufp, exact_min_demand_subset, exact_ufp
from .reduction import (
    SsmInstance, build_ufp_instance, decide_ssm_bruteforce, decide_ssm_via_ufp,
    normalize_ssm, profit_threshold,
)
from .ufp_eptas import UfpResult, count_compositions, enumerate_compositions, round_profits, solve_ufp

__all__ = [name for name in dir() if not name.startswith("_")]
