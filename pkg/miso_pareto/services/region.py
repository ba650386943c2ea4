"""
Rate Region Service

Orchestrates the boundary methods behind string keys (as used on the command
line), builds the boundary of the full SIC region, and answers single-point
queries: the best rate of link 2 at a given rate of link 1, feasibility of a
rate pair, and the beamformers that realize a boundary point.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..config import SOLVER_CONFIG
from ..errors import DomainError, InfeasibleTarget
from .boundary_dd import gamma1bar_dd, boundary_dd, param_beamformer_dd, solve_dd
from .boundary_dn import boundary_dn, boundary_nd, param_beamformers_dn, solve_dn
from .boundary_nn import (
    boundary_nn_closed_form,
    boundary_nn_numerical,
    endpoints_nn,
    full_boundary_nn,
    max_r2_given_r1_nn,
    param_beamformer_nn,
)
from .channel import ChannelConstants, ChannelRealization
from .oracle import OracleConfig, brute_force_boundary
from .pareto import UNION, Boundary, union_boundary
from .rates import Beamformer, DecodingScenario, RateParams, RatePoint, combine, direction_basis

logger = logging.getLogger(__name__)

FAST_METHODS = ("nn", "nn-closed", "dn", "nd", "dd")
ORACLE_METHODS = ("oracle:nn", "oracle:dn", "oracle:nd", "oracle:dd")
ALL_METHODS = FAST_METHODS + ("union",) + ORACLE_METHODS
ALIASES = {"nn-numerical": "nn", "nn_numerical": "nn", "nn_closed": "nn-closed"}

FEASIBILITY_TOLERANCE = 1e-12
BISECTION_STEPS = 200


def normalize_method(key: str) -> str:
    key = key.strip().lower()
    key = ALIASES.get(key, key)
    if key not in ALL_METHODS:
        raise DomainError(f"Unknown scenario {key!r}; choose from {', '.join(ALL_METHODS)}")
    return key


def file_stem(key: str) -> str:
    return {"nn": "nn_numerical", "nn-closed": "nn_closed"}.get(key, key.replace(":", "_"))


class RegionAnalysisService:
    """Computes rate region boundaries for one set of channel constants."""

    def __init__(self, oracle_points: Optional[int] = None):
        self.oracle_points = oracle_points

    def compute(self, key: str, constants: ChannelConstants, M: int,
                epsilon: Optional[float] = None, parallel: bool = False,
                threads: Optional[int] = None) -> Boundary:
        """
        Compute one boundary.

        Args:
            key: method key, e.g. 'nn', 'nn-closed', 'dn', 'oracle:dd' or 'union'
            constants: channel constants
            M: grid size
            epsilon: gradient ascent tolerance
            parallel: stateless parallel sweeps where applicable

        Returns:
            The requested Boundary
        """
        key = normalize_method(key)
        logger.info(f"Computing boundary '{key}' with M={M}")
        if key == "nn":
            return boundary_nn_numerical(constants, M, epsilon, parallel, threads)
        if key == "nn-closed":
            return boundary_nn_closed_form(constants, M)
        if key == "dn":
            return boundary_dn(constants, M)
        if key == "nd":
            return boundary_nd(constants, M)
        if key == "dd":
            return boundary_dd(constants, M, epsilon, parallel, threads)
        if key == "union":
            return self.sic_region_boundary(constants, M, epsilon)
        scenario = DecodingScenario(key.split(":", 1)[1])
        return brute_force_boundary(OracleConfig(scenario, self.oracle_points or M, constants))

    def compute_many(self, keys: Sequence[str], constants: ChannelConstants, M: int,
                     epsilon: Optional[float] = None, parallel: bool = False,
                     threads: Optional[int] = None) -> Dict[str, Boundary]:
        keys = [normalize_method(k) for k in keys]
        if parallel and len(keys) > 1:
            with ThreadPoolExecutor(max_workers=threads or SOLVER_CONFIG.threads) as pool:
                results = list(pool.map(
                    lambda k: self.compute(k, constants, M, epsilon, True, threads), keys))
            return dict(zip(keys, results))
        return {k: self.compute(k, constants, M, epsilon) for k in keys}

    def scenario_boundaries(self, constants: ChannelConstants, M: int,
                            epsilon: Optional[float] = None) -> Dict[DecodingScenario, Boundary]:
        """Boundaries of the four decoding scenarios, NN including its weak part."""
        return {
            DecodingScenario.NN: full_boundary_nn(constants, M),
            DecodingScenario.DN: boundary_dn(constants, M),
            DecodingScenario.ND: boundary_nd(constants, M),
            DecodingScenario.DD: boundary_dd(constants, M, epsilon),
        }

    def sic_region_boundary(self, constants: ChannelConstants, M: int,
                            epsilon: Optional[float] = None) -> Boundary:
        start = time.perf_counter()
        union = union_boundary(list(self.scenario_boundaries(constants, M, epsilon).values()), M)
        return Boundary(union.points, UNION,
                        {**union.meta, "wall_time_s": time.perf_counter() - start})


def _query_point(scenario: DecodingScenario, r1: float, gamma2: float, **params) -> RatePoint:
    return RatePoint(r1, math.log2(1.0 + max(gamma2, 0.0)), scenario, RateParams(**params))


def _max_r2_nd(r1: float, c: ChannelConstants) -> RatePoint:
    """ND query by bisection on the DN problem of the interchanged channel."""
    swapped = c.swapped()
    target = 2.0 ** r1 - 1.0
    gamma_max = swapped.g11 ** 2 / swapped.sigma1_sq
    if solve_dn(0.0, swapped).gamma2_star < target * (1.0 - FEASIBILITY_TOLERANCE):
        raise InfeasibleTarget(f"R1={r1:.6g} exceeds the ND region")
    lo, hi = 0.0, gamma_max
    if solve_dn(hi, swapped).gamma2_star >= target:
        lo = hi
    else:
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            if solve_dn(mid, swapped).gamma2_star >= target:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * max(1.0, hi):
                break
    res = solve_dn(lo, swapped)
    return _query_point(DecodingScenario.ND, r1, lo,
                        x1=res.x2_star, x2=res.x1_star, y2=res.y1_star, case=res.case_tag.value)


def max_r2_given_r1(scenario: Optional[DecodingScenario], r1: float, c: ChannelConstants,
                    epsilon: Optional[float] = None) -> RatePoint:
    """
    Largest rate of link 2 when link 1 must get at least ``r1``.

    With ``scenario=None`` the answer covers the whole SIC region, i.e. the best
    of the four decoding scenarios.
    """
    if r1 < 0:
        raise InfeasibleTarget(f"R1 must be nonnegative, got {r1}")
    if scenario is None:
        best = None
        for s in DecodingScenario:
            try:
                point = max_r2_given_r1(s, r1, c, epsilon)
            except InfeasibleTarget:
                continue
            if best is None or point.r2 > best.r2:
                best = point
        if best is None:
            raise InfeasibleTarget(f"R1={r1:.6g} is not achievable in any scenario")
        return best

    scenario = DecodingScenario(scenario)
    gamma1 = 2.0 ** r1 - 1.0
    if scenario == DecodingScenario.NN:
        if gamma1 == 0.0:
            (_, r2_max), _ = endpoints_nn(c)
            return RatePoint(0.0, r2_max, scenario, RateParams(x1=0.0, y1=0.0, x2=c.kappa2))
        sol = max_r2_given_r1_nn(gamma1, c, epsilon)
        return _query_point(scenario, r1, sol.gamma2_star, x1=sol.x1_star, x2=sol.x2_star)
    if scenario == DecodingScenario.DN:
        res = solve_dn(gamma1, c)
        return _query_point(scenario, r1, res.gamma2_star,
                            x1=res.x1_star, y1=res.y1_star, x2=res.x2_star, case=res.case_tag.value)
    if scenario == DecodingScenario.ND:
        return _max_r2_nd(r1, c)

    if gamma1 > gamma1bar_dd(c) * (1.0 + FEASIBILITY_TOLERANCE):
        raise InfeasibleTarget(f"R1={r1:.6g} exceeds the DD region")
    res = solve_dd(gamma1, c, epsilon)
    return _query_point(scenario, r1, res.gamma2_star,
                        x1=res.x1_star, x2=res.x2_star, case=res.winner.value)


def is_feasible(r1: float, r2: float, c: ChannelConstants,
                scenario: Optional[DecodingScenario] = None,
                epsilon: Optional[float] = None) -> bool:
    """Whether the rate pair lies in the region of ``scenario`` (whole SIC region if None)."""
    if r1 < 0 or r2 < 0:
        return False
    try:
        best = max_r2_given_r1(scenario, r1, c, epsilon)
    except InfeasibleTarget:
        return False
    return r2 <= best.r2 + FEASIBILITY_TOLERANCE


def beamformers_for_point(point: RatePoint, ch: ChannelRealization) -> Tuple[Beamformer, Beamformer]:
    """Beamforming vectors that realize a boundary point, rebuilt from its parameters."""
    p = point.params
    try:
        if point.scenario == DecodingScenario.NN:
            # Weak-segment points carry the reduced power of the ZF transmitter in y_i
            w1 = param_beamformer_nn(p.x1, 1, ch) if p.y1 is None else \
                combine(direction_basis(ch.crosstalk(1), ch.direct(1)), p.x1, p.y1)
            w2 = param_beamformer_nn(p.x2, 2, ch) if p.y2 is None else \
                combine(direction_basis(ch.crosstalk(2), ch.direct(2)), p.x2, p.y2)
            return w1, w2
        if point.scenario == DecodingScenario.DD:
            return param_beamformer_dd(p.x1, 1, ch), param_beamformer_dd(p.x2, 2, ch)
        if point.scenario == DecodingScenario.DN:
            return param_beamformers_dn(p.x1, p.y1, p.x2, ch)
        # ND points carry mirrored DN parameters
        w2, w1 = param_beamformers_dn(p.x2, p.y2, p.x1, ch.swapped())
        return w1, w2
    except TypeError as e:
        raise DomainError(f"Rate point lacks the parameters of its scenario: {p}") from e


def dominant_scenario(boundaries: Dict[DecodingScenario, Boundary], M: int = 200) -> pd.Series:
    """Share of a uniform R1 grid on which each scenario attains the union boundary."""
    r1_max = max(float(b.r1[-1]) for b in boundaries.values())
    grid = np.linspace(0.0, r1_max, M)
    tags = list(boundaries)
    envelopes = np.vstack([boundaries[t].envelope(grid) for t in tags])
    winners = np.argmax(envelopes, axis=0)
    counts = pd.Series([tags[w].value for w in winners]).value_counts(normalize=True)
    return counts.reindex([t.value for t in tags], fill_value=0.0)


# Global service instance
region_service = RegionAnalysisService()
