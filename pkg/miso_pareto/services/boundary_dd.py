"""
Pareto boundary when both receivers decode and cancel the interference.

Both transmitters use full power on the plane spanned by their direct and
crosstalk channels (parameter x_i along the direct channel). For a target SINR
of link 1 two subproblems are solved and the better one kept:

* SUB1: the own-signal constraint of link 1 is tight; TX2 then solves the same
  line-versus-curve max-min as in the DN case, capped so that RX2 can still
  decode link 1;
* SUB2: the decodability of link 1 at RX2 is tight; a quasi-concave scalar
  problem in x1 solved by projected gradient ascent.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np

from ..config import SOLVER_CONFIG
from ..errors import DomainError
from .boundary_dn import max_min_line_curve
from .channel import ChannelConstants, ChannelRealization
from .gains import angle_bound, mixed_gain, mixed_gain_prime, noisy_norm
from .pareto import Boundary, pareto_filter
from .rates import Beamformer, DecodingScenario, RateParams, RatePoint, combine, direction_basis
from .scalar_search import AscentSettings, maximize_on_interval

logger = logging.getLogger(__name__)

SCENARIO = DecodingScenario.DD
FEASIBILITY_TOLERANCE = 1e-12


class DdWinner(str, Enum):
    SUB1 = "SUB1"
    SUB2 = "SUB2"
    NONE = "NONE"


@dataclass(frozen=True)
class DdSubSolution:
    x1: float
    x2: float
    gamma2: float
    capped: bool = False


@dataclass(frozen=True)
class DdSolveResult:
    gamma2_star: float
    x1_star: float
    x2_star: float
    winner: DdWinner
    sub1: Optional[DdSubSolution] = None
    sub2: Optional[DdSubSolution] = None


def powers_dd(x1, x2, c: ChannelConstants):
    """Received powers (p1, q2, p2, q1) of the DD parameterization."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    p1 = c.g11 ** 2 * x1 ** 2
    q2 = mixed_gain(x1, c.beta1, c.beta1_tilde) ** 2
    p2 = c.g22 ** 2 * x2 ** 2
    q1 = mixed_gain(x2, c.beta2, c.beta2_tilde) ** 2
    return p1, q2, p2, q1


def param_beamformer_dd(x: float, i: int, ch: ChannelRealization) -> Beamformer:
    """Full-power beamformer of TX_i with component x along its direct channel."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    basis = direction_basis(ch.direct(i), ch.crosstalk(i))
    return combine(basis, x, math.sqrt(max(0.0, 1.0 - x * x)))


def gamma1bar_dd(c: ChannelConstants) -> float:
    """Highest SINR of link 1 in the DD region: link 1 must be decodable at both receivers."""
    sigma1, sigma2 = math.sqrt(c.sigma1_sq), math.sqrt(c.sigma2_sq)
    _, value, _ = max_min_line_curve(c.g11 / sigma1, c.beta1 / sigma2, c.beta1_tilde / sigma2)
    return float(value)


def gamma2bar_dd(c: ChannelConstants) -> float:
    return gamma1bar_dd(c.swapped())


def solve_dd_sub1(gamma1_star: float, c: ChannelConstants) -> Optional[DdSubSolution]:
    """SUB1 solution, or None when SUB1 cannot meet the target."""
    gamma_bar = gamma1bar_dd(c)
    if gamma1_star < 0 or gamma1_star > gamma_bar * (1.0 + FEASIBILITY_TOLERANCE):
        return None
    gamma = min(gamma1_star, gamma_bar)

    x1 = min(1.0, math.sqrt(gamma * c.sigma1_sq) / c.g11)
    den = math.sqrt(c.sigma1_sq * (gamma + 1.0))
    a = c.g22 / math.sqrt(c.sigma2_sq)
    b, cc = c.beta2 / den, c.beta2_tilde / den
    x2_free, _, _ = max_min_line_curve(a, b, cc)
    x2 = float(x2_free)

    capped = False
    if gamma > 0:
        u1 = float(mixed_gain(x1, c.beta1, c.beta1_tilde))
        if u1 * u1 < gamma * c.sigma2_sq * (1.0 - FEASIBILITY_TOLERANCE):
            # RX2 cannot decode link 1 even with TX2 off its direct channel
            return None
        cap = math.sqrt(max(0.0, u1 * u1 - gamma * c.sigma2_sq)) / (c.g22 * math.sqrt(gamma))
        if cap < x2:
            x2, capped = cap, True

    value = min(a * x2, b * x2 + cc * math.sqrt(max(0.0, 1.0 - x2 * x2)))
    return DdSubSolution(x1, x2, value * value, capped)


@dataclass(frozen=True)
class DdScalarProblem:
    """Maximize min{s1(x1), s2(x1)} with RX2's decoding of link 1 tight."""
    gamma1_star: float
    constants: ChannelConstants
    x_lower: float
    x_upper: float

    def u1(self, x1):
        c = self.constants
        return mixed_gain(x1, c.beta1, c.beta1_tilde)

    def w(self, x1):
        c = self.constants
        radicand = np.clip(self.u1(x1) ** 2 - self.gamma1_star * c.sigma2_sq, 0.0, None)
        return np.clip(np.sqrt(radicand) / (c.g22 * math.sqrt(self.gamma1_star)), 0.0, 1.0)

    def w_prime(self, x1):
        c = self.constants
        with np.errstate(divide="ignore", invalid="ignore"):
            return (self.u1(x1) * mixed_gain_prime(x1, c.beta1, c.beta1_tilde)
                    / (c.g22 ** 2 * self.gamma1_star * self.w(x1)))

    def v1(self, x1):
        c = self.constants
        return noisy_norm(x1, c.g11, c.sigma1_sq)

    def s1(self, x1):
        c = self.constants
        return c.g22 * self.w(x1) / math.sqrt(c.sigma2_sq)

    def s1_prime(self, x1):
        c = self.constants
        return c.g22 * self.w_prime(x1) / math.sqrt(c.sigma2_sq)

    def s2(self, x1):
        c = self.constants
        return mixed_gain(self.w(x1), c.beta2, c.beta2_tilde) / self.v1(x1)

    def s2_prime(self, x1):
        c = self.constants
        w = self.w(x1)
        v1 = self.v1(x1)
        v1_prime = c.g11 ** 2 * np.asarray(x1, dtype=float) / v1
        with np.errstate(invalid="ignore"):
            return (self.w_prime(x1) * mixed_gain_prime(w, c.beta2, c.beta2_tilde) * v1
                    - mixed_gain(w, c.beta2, c.beta2_tilde) * v1_prime) / v1 ** 2

    def objective(self, x1):
        return np.minimum(self.s1(x1), self.s2(x1))

    def derivative(self, x1: float) -> float:
        # Follow the active branch; s1 on ties
        if self.s1(x1) <= self.s2(x1):
            return float(self.s1_prime(x1))
        return float(self.s2_prime(x1))


def sub2_problem(gamma1_star: float, c: ChannelConstants) -> Optional[DdScalarProblem]:
    """The SUB2 scalar problem, or None when SUB2 is infeasible for this target."""
    lower_gamma = c.beta1_tilde ** 2 / (c.g22 ** 2 + c.sigma2_sq)
    upper_gamma = c.alpha1 ** 2 / c.sigma1_sq
    if gamma1_star <= 0 or gamma1_star < lower_gamma or gamma1_star > upper_gamma:
        return None
    crosstalk_ratio = gamma1_star * c.sigma2_sq / c.g12 ** 2
    if crosstalk_ratio > 1.0:
        return None

    gamma_mr = c.g12 ** 2 / (c.g22 ** 2 + c.sigma2_sq)
    if gamma1_star > gamma_mr:
        x_upper = c.kappa1
    else:
        x_upper = min(c.kappa1, angle_bound(c.kappa1, gamma1_star / gamma_mr))
    x_lower = max(math.sqrt(gamma1_star * c.sigma1_sq) / c.g11,
                  angle_bound(c.kappa1, crosstalk_ratio))
    if x_lower > x_upper + 1e-15:
        return None
    return DdScalarProblem(gamma1_star, c, min(x_lower, x_upper), x_upper)


def solve_dd_sub2(gamma1_star: float, c: ChannelConstants,
                  epsilon: Optional[float] = None,
                  x0: Optional[float] = None,
                  settings: Optional[AscentSettings] = None) -> Optional[DdSubSolution]:
    """SUB2 solution, or None when SUB2 is infeasible."""
    problem = sub2_problem(gamma1_star, c)
    if problem is None:
        return None
    settings = settings or AscentSettings.from_config(SOLVER_CONFIG, epsilon)
    start = 0.5 * (problem.x_lower + problem.x_upper) if x0 is None else x0
    result = maximize_on_interval(lambda x: float(problem.objective(x)), problem.derivative,
                                  problem.x_lower, problem.x_upper, start, settings)
    return DdSubSolution(result.x, float(problem.w(result.x)), result.value ** 2)


def solve_dd(gamma1_star: float, c: ChannelConstants,
             epsilon: Optional[float] = None,
             x0: Optional[float] = None,
             settings: Optional[AscentSettings] = None) -> DdSolveResult:
    """Best of both subproblems; SUB1 wins ties."""
    sub1 = solve_dd_sub1(gamma1_star, c)
    sub2 = solve_dd_sub2(gamma1_star, c, epsilon, x0, settings)
    g1 = sub1.gamma2 if sub1 is not None else -1.0
    g2 = sub2.gamma2 if sub2 is not None else -1.0
    if sub1 is None and sub2 is None:
        x1 = min(1.0, math.sqrt(max(gamma1_star, 0.0) * c.sigma1_sq) / c.g11)
        return DdSolveResult(0.0, x1, 0.0, DdWinner.NONE)
    best = sub1 if g1 >= g2 else sub2
    winner = DdWinner.SUB1 if g1 >= g2 else DdWinner.SUB2
    return DdSolveResult(best.gamma2, best.x1, best.x2, winner, sub1, sub2)


def boundary_dd(c: ChannelConstants, M: int = 500,
                epsilon: Optional[float] = None,
                parallel: bool = False,
                threads: Optional[int] = None) -> Boundary:
    """DD boundary on a uniform R1 grid from 0 to the DD single-user rate of link 1."""
    if M < 2:
        raise DomainError(f"M must be >= 2, got {M}")
    start = time.perf_counter()
    settings = AscentSettings.from_config(SOLVER_CONFIG, epsilon)
    gamma_bar = gamma1bar_dd(c)
    r1 = np.linspace(0.0, math.log2(1.0 + gamma_bar), M)
    gammas = np.minimum(2.0 ** r1 - 1.0, gamma_bar)

    if parallel:
        with ThreadPoolExecutor(max_workers=threads or SOLVER_CONFIG.threads) as pool:
            results: List[DdSolveResult] = list(
                pool.map(lambda g: solve_dd(float(g), c, settings=settings), gammas))
    else:
        results, x_prev = [], None
        for g in gammas:
            res = solve_dd(float(g), c, x0=x_prev, settings=settings)
            results.append(res)
            if res.winner != DdWinner.NONE:
                x_prev = res.x1_star

    points = []
    for k, res in enumerate(results):
        r2 = math.log2(1.0 + gamma2bar_dd(c)) if k == 0 else math.log2(1.0 + res.gamma2_star)
        points.append(RatePoint(float(r1[k]), r2, SCENARIO,
                                RateParams(x1=res.x1_star, x2=res.x2_star, case=res.winner.value)))
    skipped = sum(res.winner == DdWinner.NONE for res in results)
    if skipped:
        logger.warning(f"{skipped} DD samples had no feasible subproblem")

    boundary = pareto_filter(points, scenario=SCENARIO)
    return Boundary(boundary.points, SCENARIO,
                    {"method": "dd", "M": M, "epsilon": settings.epsilon, "parallel": parallel,
                     "wall_time_s": time.perf_counter() - start})
