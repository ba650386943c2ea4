"""
Brute-force reference boundaries.

Enumerates a dense grid over each scenario's beamformer parameters, evaluates
the rate pairs and keeps the Pareto frontier. Grid rows are filtered block by
block, which gives the same frontier as filtering the whole cloud at once.
"""

import logging
import time
from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from ..errors import DomainError
from .boundary_dd import param_beamformer_dd, powers_dd
from .boundary_dn import param_beamformers_dn, powers_dn
from .boundary_nn import param_beamformer_nn, powers_nn
from .channel import ChannelConstants, ChannelRealization, derive_constants
from .pareto import Boundary, mirror, pareto_mask
from .rates import DecodingScenario, RateParams, RatePoint, rates_from_powers, received_powers

logger = logging.getLogger(__name__)

BLOCK_SIZE = 250_000
DISC_TOLERANCE = 1e-12

# Columns of the parameter arrays carried along with each candidate
_PARAM_NAMES = ("x1", "y1", "x2")


@dataclass(frozen=True)
class OracleConfig:
    """Grid search settings; ``channels`` is required for explicit-vector evaluation."""
    scenario: DecodingScenario
    M: int
    constants: ChannelConstants
    channels: Optional[ChannelRealization] = None
    explicit_vectors: bool = False

    def __post_init__(self):
        object.__setattr__(self, "scenario", DecodingScenario(self.scenario))
        if self.M < 10:
            raise DomainError(f"Oracle grid needs M >= 10, got {self.M}")
        if self.explicit_vectors and self.channels is None:
            raise DomainError("Explicit-vector mode needs a channel realization")


def _blocks_2d(grid: np.ndarray) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    rows = max(1, BLOCK_SIZE // len(grid))
    for start in range(0, len(grid), rows):
        x1, x2 = np.meshgrid(grid[start:start + rows], grid, indexing="ij")
        yield x1.ravel(), x2.ravel()


def _blocks_disc(grid: np.ndarray) -> Iterator[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """(x1, y1) on the quarter-disc part of the square grid, times every x2."""
    for x1 in grid:
        y1 = grid[x1 * x1 + grid * grid <= 1.0 + DISC_TOLERANCE]
        yy, x2 = np.meshgrid(y1, grid, indexing="ij")
        yield np.full(yy.size, x1), yy.ravel(), x2.ravel()


def _frontier(blocks, evaluate) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    kept_r1, kept_r2, kept_params = [], [], []
    for params in blocks:
        r1, r2 = evaluate(*params)
        idx = pareto_mask(r1, r2)
        kept_r1.append(r1[idx])
        kept_r2.append(r2[idx])
        kept_params.append(np.vstack([p[idx] for p in params]))
    r1 = np.concatenate(kept_r1)
    r2 = np.concatenate(kept_r2)
    params = np.hstack(kept_params)
    idx = pareto_mask(r1, r2)
    return r1[idx], r2[idx], params[:, idx]


def _explicit_evaluator(cfg: OracleConfig):
    ch = cfg.channels
    scenario = cfg.scenario

    def beams(*p):
        if scenario == DecodingScenario.NN:
            return param_beamformer_nn(p[0], 1, ch), param_beamformer_nn(p[1], 2, ch)
        if scenario == DecodingScenario.DD:
            return param_beamformer_dd(p[0], 1, ch), param_beamformer_dd(p[1], 2, ch)
        return param_beamformers_dn(p[0], p[1], p[2], ch)

    def evaluate(*params):
        powers = np.array([received_powers(*beams(*(float(v) for v in vals)), ch)
                           for vals in zip(*params)]).T
        return rates_from_powers(scenario, *powers, ch.sigma1_sq, ch.sigma2_sq)

    return evaluate


def _constants_evaluator(cfg: OracleConfig):
    c = cfg.constants
    scenario = cfg.scenario
    if scenario == DecodingScenario.NN:
        power_fn = lambda x1, x2: powers_nn(x1, x2, c)
    elif scenario == DecodingScenario.DD:
        power_fn = lambda x1, x2: powers_dd(x1, x2, c)
    else:
        power_fn = lambda x1, y1, x2: powers_dn(x1, y1, x2, c)

    def evaluate(*params):
        return rates_from_powers(scenario, *power_fn(*params), c.sigma1_sq, c.sigma2_sq)

    return evaluate


def brute_force_boundary(cfg: OracleConfig) -> Boundary:
    """
    Reference boundary by exhaustive grid search.

    NN and DD use an M x M grid over (x1, x2); DN uses the quarter disc of an
    M x M grid over (x1, y1) times M values of x2; ND is the mirrored DN search
    on the link-interchanged channel.
    """
    start = time.perf_counter()
    if cfg.scenario == DecodingScenario.ND:
        swapped = OracleConfig(
            DecodingScenario.DN, cfg.M, cfg.constants.swapped(),
            cfg.channels.swapped() if cfg.channels is not None else None,
            cfg.explicit_vectors,
        )
        result = brute_force_boundary(swapped)
        return mirror(result, meta={**result.meta, "method": "oracle_nd",
                                    "wall_time_s": time.perf_counter() - start})

    grid = np.linspace(0.0, 1.0, cfg.M)
    evaluate = _explicit_evaluator(cfg) if cfg.explicit_vectors else _constants_evaluator(cfg)
    if cfg.scenario == DecodingScenario.DN:
        r1, r2, params = _frontier(_blocks_disc(grid), evaluate)
        names = _PARAM_NAMES
        dimension = 3
    else:
        r1, r2, params = _frontier(_blocks_2d(grid), evaluate)
        names = ("x1", "x2")
        dimension = 2

    order = np.argsort(r1)
    points = tuple(
        RatePoint(float(r1[k]), float(r2[k]), cfg.scenario,
                  RateParams(**{n: float(params[j, k]) for j, n in enumerate(names)}))
        for k in order
    )
    elapsed = time.perf_counter() - start
    logger.info(f"Oracle {cfg.scenario.value} (M={cfg.M}, {dimension} parameters): "
                f"{len(points)} frontier points in {elapsed:.2f}s")
    return Boundary(points, cfg.scenario,
                    {"method": f"oracle_{cfg.scenario.value}", "M": cfg.M,
                     "parameters": dimension, "explicit_vectors": cfg.explicit_vectors,
                     "wall_time_s": elapsed})


def oracle_for_channels(ch: ChannelRealization, scenario: DecodingScenario, M: int,
                        explicit_vectors: bool = False) -> Boundary:
    return brute_force_boundary(OracleConfig(scenario, M, derive_constants(ch), ch, explicit_vectors))
