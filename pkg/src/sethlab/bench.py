"""Empirical growth exponents.

Each benchmark builds one seeded instance per sweep point and times only the
solver call (best of ``repeats`` runs with ``time.perf_counter``). A least
squares line through ``log2(seconds)`` against the sweep variable gives the
slope, which is reported as measured and nothing more.
"""

from __future__ import annotations

import random
import time
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .instances import SetSystem, SubsetSumInstance, mask_of, random_cnf
from .oracles import count_satisfying, min_set_cover_dp, subset_sum_decide

CNF_CLAUSES = 20
CNF_WIDTH = 3
SETCOVER_WIDTH = 3
SUBSETSUM_ITEMS = 40


def _setcover_instance(n: int, seed: int):
    """2n sets of size <= 3, every element in exactly five of them.

    Windows {i, i+1, i+2} and {i, i+1} (indices mod n) under a seeded
    relabeling. Equal element degrees keep the per-mask work constant, so
    the timing tracks the 2^n table and not the luck of the draw.
    """
    if n < 4:
        raise ParameterError("setcover-dp needs n >= 4")
    perm = list(range(n))
    random.Random(seed).shuffle(perm)
    sets = [mask_of(perm[(i + d) % n] for d in range(w)) for w in (SETCOVER_WIDTH, 2) for i in range(n)]
    return SetSystem(n, tuple(sets))


def _cnf_instance(n: int, seed: int):
    return random_cnf(n, CNF_CLAUSES, CNF_WIDTH, seed, exact_width=True)


def _subsetsum_instance(log_t: int, seed: int):
    # target 2^log_t, items below it; the sweep doubles the table length
    rng = random.Random(seed)
    t = 1 << log_t
    return SubsetSumInstance(tuple(rng.randint(1, t) for _ in range(SUBSETSUM_ITEMS)), t)


@dataclass(frozen=True)
class Benchmark:
    name: str
    variable: str
    build: Callable[[int, int], object]
    solve: Callable[[object], object]
    default_sizes: tuple[int, ...]


BENCHMARKS = {
    b.name: b
    for b in (
        Benchmark("setcover-dp", "n", _setcover_instance, min_set_cover_dp, tuple(range(10, 21))),
        Benchmark("cnf-brute", "n", _cnf_instance, count_satisfying, tuple(range(10, 23))),
        Benchmark("subsetsum-dp", "log2 t", _subsetsum_instance, subset_sum_decide, tuple(range(14, 25))),
    )
}


@dataclass
class BenchReport:
    name: str
    variable: str
    seed: int
    repeats: int
    sizes: list[int]
    seconds: list[float]
    slope: float
    intercept: float

    def to_dict(self) -> dict:
        return {
            "bench": self.name,
            "variable": self.variable,
            "seed": self.seed,
            "repeats": self.repeats,
            "points": [{"size": s, "seconds": t} for s, t in zip(self.sizes, self.seconds)],
            "slope": self.slope,
            "intercept": self.intercept,
        }


def fit_exponent(sizes, seconds) -> tuple[float, float]:
    """Least-squares line through (size, log2 seconds)."""
    if len(sizes) < 2:
        raise ParameterError("need at least two sweep points to fit a slope")
    slope, intercept = np.polyfit(np.asarray(sizes, float), np.log2(np.asarray(seconds, float)), 1)
    return float(slope), float(intercept)


def time_call(fn: Callable[[], object], repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return max(best, 1e-9)


def run_bench(name: str, sizes=None, seed: int = 0, repeats: int = 3) -> BenchReport:
    if name not in BENCHMARKS:
        raise ParameterError(f"unknown benchmark {name!r}; choose from {', '.join(BENCHMARKS)}")
    if repeats < 1:
        raise ParameterError("repeats must be >= 1")
    bench = BENCHMARKS[name]
    sizes = list(sizes or bench.default_sizes)
    seconds = []
    for size in sizes:
        instance = bench.build(size, seed)
        seconds.append(time_call(lambda: bench.solve(instance), repeats))
    slope, intercept = fit_exponent(sizes, seconds)
    return BenchReport(name, bench.variable, seed, repeats, sizes, seconds, slope, intercept)
