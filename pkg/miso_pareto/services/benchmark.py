"""
Wall-clock benchmark of the fast boundary methods against the grid-search oracles.

Times every method over a ladder of grid sizes, fits the growth exponent of
time versus M on a log-log scale, and reports speedups at a common size.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from ..config import SOLVER_CONFIG
from .boundary_dd import boundary_dd
from .boundary_dn import boundary_dn, boundary_nd
from .boundary_nn import boundary_nn_closed_form, boundary_nn_numerical
from .channel import ChannelConstants
from .oracle import OracleConfig, brute_force_boundary
from .rates import DecodingScenario

logger = logging.getLogger(__name__)

FAST_EXPONENT_LIMIT = 1.3
ORACLE_EXPONENT_FLOOR = 1.7
SPEEDUP_2D = 10.0
SPEEDUP_3D = 100.0

# fast method -> (oracle, number of oracle parameters)
COUNTERPARTS = {
    "nn": ("oracle:nn", 2),
    "nn-closed": ("oracle:nn", 2),
    "dn": ("oracle:dn", 3),
    "nd": ("oracle:nd", 3),
    "dd": ("oracle:dd", 2),
}


@dataclass
class BenchmarkReport:
    timings: pd.DataFrame
    exponents: Dict[str, float]
    speedups: Dict[str, float]
    reference_sizes: Dict[str, int] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def fit_growth_exponent(sizes: Sequence[int], seconds: Sequence[float]) -> float:
    """Slope of log(time) against log(M)."""
    if len(sizes) < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(np.asarray(sizes, float)),
                          np.log(np.maximum(np.asarray(seconds, float), 1e-9)), 1)
    return float(slope)


def best_time(fn: Callable[[], object], repeats: int) -> float:
    best = float("inf")
    for _ in range(max(1, repeats)):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _runners(c: ChannelConstants, epsilon: Optional[float]) -> Dict[str, Callable[[int], object]]:
    def oracle(scenario: DecodingScenario):
        return lambda M: brute_force_boundary(OracleConfig(scenario, M, c))

    return {
        "nn": lambda M: boundary_nn_numerical(c, M, epsilon),
        "nn-closed": lambda M: boundary_nn_closed_form(c, M),
        "dn": lambda M: boundary_dn(c, M),
        "nd": lambda M: boundary_nd(c, M),
        "dd": lambda M: boundary_dd(c, M, epsilon),
        "oracle:nn": oracle(DecodingScenario.NN),
        "oracle:dn": oracle(DecodingScenario.DN),
        "oracle:nd": oracle(DecodingScenario.ND),
        "oracle:dd": oracle(DecodingScenario.DD),
    }


def run_benchmark(c: ChannelConstants,
                  sizes: Optional[Sequence[int]] = None,
                  epsilon: Optional[float] = None,
                  methods: Optional[Sequence[str]] = None,
                  repeats: int = 3,
                  oracle_3d_max: Optional[int] = None,
                  reference_size: int = 500) -> BenchmarkReport:
    """
    Time fast methods and oracles.

    Args:
        c: channel constants
        sizes: grid sizes M, defaults to the configured ladder
        methods: fast method keys to include, all by default
        repeats: repetitions per fast-method measurement (best time kept)
        oracle_3d_max: largest M for the three-parameter oracles; reference_size
            is always timed
        reference_size: M at which speedups are reported and checked

    Returns:
        BenchmarkReport with one row per (method, M)
    """
    sizes = sorted(sizes or SOLVER_CONFIG.benchmark_sizes)
    cap_3d = oracle_3d_max or SOLVER_CONFIG.oracle_3d_max_points
    methods = list(methods or COUNTERPARTS)
    runners = _runners(c, epsilon)

    rows = []
    for method in methods:
        for M in sizes:
            rows.append({"method": method, "M": M, "kind": "fast",
                         "seconds": best_time(lambda: runners[method](M), repeats)})
            logger.info(f"Benchmark {method} M={M}: {rows[-1]['seconds']:.4f}s")

    oracle_keys = sorted({COUNTERPARTS[m][0] for m in methods})
    for key in oracle_keys:
        dims = 3 if key in ("oracle:dn", "oracle:nd") else 2
        for M in sizes:
            if dims == 3 and M > cap_3d and M != reference_size:
                continue
            rows.append({"method": key, "M": M, "kind": "oracle",
                         "seconds": best_time(lambda: runners[key](M), 1)})
            logger.info(f"Benchmark {key} M={M}: {rows[-1]['seconds']:.4f}s")

    timings = pd.DataFrame(rows, columns=["method", "M", "kind", "seconds"])
    exponents = {
        name: fit_growth_exponent(group["M"].tolist(), group["seconds"].tolist())
        for name, group in timings.groupby("method")
    }

    speedups: Dict[str, float] = {}
    reference_sizes: Dict[str, int] = {}
    checks: Dict[str, bool] = {}
    for method in methods:
        oracle_key, dims = COUNTERPARTS[method]
        common = set(timings.loc[timings["method"] == oracle_key, "M"])
        if not common:
            continue
        M_ref = reference_size if reference_size in common else max(common)
        fast_t = timings.loc[(timings["method"] == method) & (timings["M"] == M_ref), "seconds"]
        oracle_t = timings.loc[(timings["method"] == oracle_key) & (timings["M"] == M_ref), "seconds"]
        if fast_t.empty or oracle_t.empty:
            continue
        speedups[method] = float(oracle_t.iloc[0] / max(fast_t.iloc[0], 1e-9))
        reference_sizes[method] = int(M_ref)
        # a speedup measured away from the reference size does not count
        checks[f"{method}_speedup"] = (M_ref == reference_size and
                                       speedups[method] >= (SPEEDUP_3D if dims == 3 else SPEEDUP_2D))
        checks[f"{method}_linear"] = exponents[method] < FAST_EXPONENT_LIMIT
    for key in oracle_keys:
        if key in exponents and not np.isnan(exponents[key]):
            checks[f"{key}_superlinear"] = exponents[key] > ORACLE_EXPONENT_FLOOR

    for name, ok in checks.items():
        if not ok:
            logger.warning(f"Benchmark check failed: {name}")
    return BenchmarkReport(timings, exponents, speedups, reference_sizes, checks)
