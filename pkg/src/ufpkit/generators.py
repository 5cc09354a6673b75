"""Seeded random instance generation with a pinned PRNG.

The generator is SplitMix64, implemented here in full so that a (seed,
spec) pair produces the identical instance on any platform or language;
Python's own random module does not promise a stable sequence. Bounded
draws map the raw 64-bit stream through lo + (u % span); the tiny modulo
bias is irrelevant for test corpora and the mapping is part of the format.

Draw order is fixed: capacities first, then per task (first, last, demand,
weight), then one bag index per task when bags are requested.
"""

from dataclasses import dataclass

from .model import BagInstance, Instance, Subpath, Task

MASK64 = (1 << 64) - 1


class SplitMix64:
    """The standard SplitMix64 stream: gamma 0x9E3779B97F4A7C15."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi], both inclusive."""
        if lo > hi:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)


REGIMES = ("uniform", "staircase", "tight")


@dataclass(frozen=True)
class GenSpec:
    """What to generate. Capacities come from the regime:

    uniform   - one draw in [demand_hi, 3*demand_hi] shared by all edges
    staircase - no draws: demand_hi on the first ceil(m/2) edges, twice
                that on the rest
    tight     - per-edge draw in [demand_hi, 2*demand_hi]

    bags > 0 assigns each task a bag index drawn from [0, bags-1]; indices
    that end up empty simply do not appear.
    """

    n: int
    m: int
    seed: int
    demand_range: tuple = (1, 20)
    weight_range: tuple = (1, 50)
    regime: str = "tight"
    bags: int = 0


def gen_random(spec: GenSpec) -> Instance:
    if spec.regime not in REGIMES:
        raise ValueError(f"unknown regime {spec.regime!r}, pick one of {REGIMES}")
    if spec.n < 1:
        raise ValueError("need at least one task")
    if spec.m < 1:
        raise ValueError("need at least one edge")
    d_lo, d_hi = spec.demand_range
    w_lo, w_hi = spec.weight_range
    if not 0 <= d_lo <= d_hi or not 0 <= w_lo <= w_hi:
        raise ValueError("demand and weight ranges must be nonempty and nonnegative")
    rng = SplitMix64(spec.seed)

    if spec.regime == "uniform":
        c = rng.randint(d_hi, 3 * d_hi)
        caps = (c,) * spec.m
    elif spec.regime == "staircase":
        split = (spec.m + 1) // 2
        caps = tuple(d_hi if e <= split else 2 * d_hi for e in range(1, spec.m + 1))
    else:
        caps = tuple(rng.randint(d_hi, 2 * d_hi) for _ in range(spec.m))

    tasks = []
    for tid in range(1, spec.n + 1):
        first = rng.randint(1, spec.m)
        last = rng.randint(first, spec.m)
        demand = rng.randint(d_lo, d_hi)
        weight = rng.randint(w_lo, w_hi)
        tasks.append(Task(id=tid, path=Subpath(first, last), demand=demand, weight=weight))

    if spec.bags <= 0:
        return Instance(m=spec.m, capacities=caps, tasks=tuple(tasks))
    groups = {}
    for t in tasks:
        groups.setdefault(rng.randint(0, spec.bags - 1), []).append(t.id)
    bags = tuple((bag_id, tuple(ids)) for bag_id, ids in sorted(groups.items()))
    return BagInstance(m=spec.m, capacities=caps, tasks=tuple(tasks), bags=bags)
