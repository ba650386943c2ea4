"""
Projected gradient ascent with backtracking line search on an interval.

Used for the quasi-concave scalar problems of the NN and DD boundaries. The
first trial move of every iteration spans a fixed fraction of the interval and
is halved until the sufficient-increase condition holds.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

from ..config import SOLVER_CONFIG, SolverConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AscentSettings:
    epsilon: float = 5e-5
    initial_step_fraction: float = 0.1
    backtrack_shrink: float = 0.5
    sufficient_increase: float = 0.3
    max_iterations: int = 10_000
    max_backtracks: int = 60
    nudge: float = 1e-12

    @classmethod
    def from_config(cls, cfg: SolverConfig = SOLVER_CONFIG,
                    epsilon: Optional[float] = None) -> "AscentSettings":
        return cls(
            epsilon=cfg.epsilon if epsilon is None else epsilon,
            initial_step_fraction=cfg.initial_step_fraction,
            backtrack_shrink=cfg.backtrack_shrink,
            sufficient_increase=cfg.sufficient_increase,
            max_iterations=cfg.max_iterations,
            max_backtracks=cfg.max_backtracks,
            nudge=cfg.radicand_nudge,
        )


@dataclass(frozen=True)
class AscentResult:
    x: float
    value: float
    iterations: int


def maximize_on_interval(objective: Callable[[float], float],
                         derivative: Callable[[float], float],
                         lower: float, upper: float, x0: float,
                         settings: AscentSettings) -> AscentResult:
    """
    Maximize a quasi-concave function on [lower, upper].

    Stops once successive objective values differ by less than
    ``settings.epsilon`` or when no trial step is accepted.
    """
    x = min(upper, max(lower, x0))
    fx = objective(x)
    width = upper - lower
    if width <= 0.0:
        return AscentResult(x, fx, 0)

    iterations = 0
    for iterations in range(1, settings.max_iterations + 1):
        g = derivative(x)
        if not math.isfinite(g):
            # Infinite slope at a radicand zero
            inner = x + settings.nudge if x < upper else x - settings.nudge
            g = derivative(inner)
            if not math.isfinite(g):
                g = math.copysign(1.0 / settings.nudge, g) if not math.isnan(g) else 0.0
        if g == 0.0:
            break

        t = settings.initial_step_fraction * width / abs(g)
        accepted = False
        for _ in range(settings.max_backtracks):
            candidate = min(upper, max(lower, x + t * g))
            f_candidate = objective(candidate)
            if f_candidate >= fx + settings.sufficient_increase * g * (candidate - x):
                accepted = True
                break
            t *= settings.backtrack_shrink
        if not accepted:
            break

        change = abs(f_candidate - fx)
        x, fx = candidate, f_candidate
        if change < settings.epsilon:
            break
    else:
        logger.warning(f"Gradient ascent hit the iteration cap ({settings.max_iterations})")

    return AscentResult(x, fx, iterations)
