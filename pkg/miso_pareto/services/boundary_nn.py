"""
Pareto Boundary When Both Receivers Treat Interference As Noise

Two independent ways to trace the strongly Pareto-optimal part of the boundary:

* numerical: for each SINR target of link 1, maximize the quasi-concave scalar
  objective s(x1) by projected gradient ascent (warm-started along the sweep);
* closed form: sweep the MR/ZF mixing weight of TX1 and solve the stationarity
  condition for the weight of TX2, a cubic equation.

Plus the horizontal and vertical weak segments obtained by power reduction.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..config import SOLVER_CONFIG
from ..errors import (
    DivisionByZero,
    DomainError,
    InfeasibleRadicand,
    InfeasibleTarget,
    NoFeasibleRoot,
    SingularAtZero,
)
from .channel import ChannelConstants, ChannelRealization
from .cubic import CubicCoefficients, roots_in_unit_interval
from .gains import angle_bound, mixed_gain, mixed_gain_prime, noisy_norm
from .pareto import Boundary, pareto_filter
from .rates import (
    Beamformer,
    DecodingScenario,
    RateParams,
    RatePoint,
    combine,
    direction_basis,
    mr_beamformer,
    rates_from_powers,
    zf_beamformer,
)
from .scalar_search import AscentSettings, maximize_on_interval

logger = logging.getLogger(__name__)

SCENARIO = DecodingScenario.NN
FEASIBILITY_TOLERANCE = 1e-12
RADICAND_TOLERANCE = 1e-12
SINGULAR_THRESHOLD = 1e-12


class NnSolution(NamedTuple):
    gamma2_star: float
    x1_star: float
    x2_star: float


# --- Powers and endpoints --------------------------------------------------

def powers_nn(x1, x2, c: ChannelConstants):
    """Received powers (p1, q2, p2, q1) of the full-power parameterization."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    p1 = mixed_gain(x1, c.alpha1, c.alpha1_tilde) ** 2
    q2 = c.g12 ** 2 * x1 ** 2
    p2 = mixed_gain(x2, c.alpha2, c.alpha2_tilde) ** 2
    q1 = c.g21 ** 2 * x2 ** 2
    return p1, q2, p2, q1


def gamma1_max_nn(c: ChannelConstants) -> float:
    """Single-user SINR of link 1 (TX1 MR, TX2 silent)."""
    return c.g11 ** 2 / c.sigma1_sq


def gamma1_min_nn(c: ChannelConstants) -> float:
    """SINR of link 1 when TX1 uses ZF and TX2 uses MR."""
    return c.alpha1_tilde ** 2 / (c.beta2 ** 2 + c.sigma1_sq)


def gamma1_mr_nn(c: ChannelConstants) -> float:
    """SINR of link 1 when both transmitters use MR."""
    return c.g11 ** 2 / (c.g21 ** 2 * c.kappa2 ** 2 + c.sigma1_sq)


def endpoints_nn(c: ChannelConstants) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """The two extreme strongly PO rate pairs, (R1_min, R2_max) and (R1_max, R2_min)."""
    swapped = c.swapped()
    r1_max = math.log2(1.0 + gamma1_max_nn(c))
    r2_min = math.log2(1.0 + gamma1_min_nn(swapped))
    r1_min = math.log2(1.0 + gamma1_min_nn(c))
    r2_max = math.log2(1.0 + gamma1_max_nn(swapped))
    return (r1_min, r2_max), (r1_max, r2_min)


# --- Beamformers -----------------------------------------------------------

def param_beamformer_nn(x: float, i: int, ch: ChannelRealization) -> Beamformer:
    """Full-power beamformer of TX_i between ZF (x = 0) and MR (x = kappa_i)."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    basis = direction_basis(ch.crosstalk(i), ch.direct(i))
    return combine(basis, x, math.sqrt(max(0.0, 1.0 - x * x)))


def mixed_beamformer(lam: float, i: int, ch: ChannelRealization) -> Beamformer:
    """Normalized combination lam*MR + (1 - lam)*ZF of TX_i."""
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    v = lam * mr_beamformer(i, ch).w + (1.0 - lam) * zf_beamformer(i, ch).w
    return Beamformer(v / np.linalg.norm(v))


# --- Numerical method ------------------------------------------------------

def x2_given_x1(x1: float, gamma1_star: float, c: ChannelConstants) -> float:
    """TX2 parameter that makes link 1 meet its SINR target with equality."""
    if gamma1_star <= 0:
        raise DivisionByZero("x2_given_x1 needs a positive SINR target")
    u1 = float(mixed_gain(x1, c.alpha1, c.alpha1_tilde))
    radicand = u1 * u1 - gamma1_star * c.sigma1_sq
    if radicand < -RADICAND_TOLERANCE * max(1.0, u1 * u1):
        raise InfeasibleRadicand(
            f"x1={x1:.6g} cannot reach gamma1={gamma1_star:.6g} (radicand {radicand:.3g})")
    return math.sqrt(max(0.0, radicand) / (c.g21 ** 2 * gamma1_star))


def x1_bounds(gamma1_star: float, c: ChannelConstants) -> Tuple[float, float]:
    """
    Interval of TX1 parameters compatible with the SINR target of link 1.

    Below the lower end link 1 cannot reach the target even with TX2 at ZF;
    above the upper end TX2 would have to move past its MR vector.
    """
    gamma_bar = gamma1_max_nn(c)
    if gamma1_star > gamma_bar * (1.0 + FEASIBILITY_TOLERANCE):
        raise InfeasibleTarget(
            f"gamma1={gamma1_star:.6g} exceeds the single-user SINR {gamma_bar:.6g}")
    gamma = min(max(gamma1_star, 0.0), gamma_bar)

    x_lower = max(0.0, angle_bound(c.kappa1, gamma / gamma_bar))
    gamma_mr = gamma1_mr_nn(c)
    if gamma > gamma_mr:
        x_upper = c.kappa1
    else:
        x_upper = max(0.0, angle_bound(c.kappa1, gamma / gamma_mr))
    x_upper = min(x_upper, c.kappa1)
    return min(x_lower, x_upper), x_upper


@dataclass(frozen=True)
class NnScalarProblem:
    """Maximize s(x1) = u2(w(x1)) / v2(x1) on [x_lower, x_upper] for a fixed gamma1."""
    gamma1_star: float
    constants: ChannelConstants
    x_lower: float
    x_upper: float

    @classmethod
    def build(cls, gamma1_star: float, constants: ChannelConstants) -> "NnScalarProblem":
        if gamma1_star <= 0:
            raise DivisionByZero("The scalar problem needs a positive SINR target")
        lower, upper = x1_bounds(gamma1_star, constants)
        return cls(gamma1_star, constants, lower, upper)

    def u1(self, x1):
        c = self.constants
        return mixed_gain(x1, c.alpha1, c.alpha1_tilde)

    def u1_prime(self, x1):
        c = self.constants
        return mixed_gain_prime(x1, c.alpha1, c.alpha1_tilde)

    def u2(self, x2):
        c = self.constants
        return mixed_gain(x2, c.alpha2, c.alpha2_tilde)

    def u2_prime(self, x2):
        c = self.constants
        return mixed_gain_prime(x2, c.alpha2, c.alpha2_tilde)

    def v2(self, x1):
        c = self.constants
        return noisy_norm(x1, c.g12, c.sigma2_sq)

    def v2_prime(self, x1):
        c = self.constants
        return c.g12 ** 2 * np.asarray(x1, dtype=float) / self.v2(x1)

    def w(self, x1):
        c = self.constants
        radicand = np.clip(self.u1(x1) ** 2 - self.gamma1_star * c.sigma1_sq, 0.0, None)
        return np.clip(np.sqrt(radicand / (c.g21 ** 2 * self.gamma1_star)), 0.0, 1.0)

    def w_prime(self, x1):
        c = self.constants
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.u1(x1) * self.u1_prime(x1) / (c.g21 ** 2 * self.gamma1_star * self.w(x1))

    def s(self, x1):
        return self.u2(self.w(x1)) / self.v2(x1)

    def s_prime(self, x1):
        w = self.w(x1)
        v2 = self.v2(x1)
        with np.errstate(invalid="ignore"):
            return (self.w_prime(x1) * self.u2_prime(w) * v2 - self.u2(w) * self.v2_prime(x1)) / v2 ** 2

    def solve(self, settings: AscentSettings, x0: Optional[float] = None) -> NnSolution:
        start = 0.5 * (self.x_lower + self.x_upper) if x0 is None else x0
        result = maximize_on_interval(
            lambda x: float(self.s(x)), lambda x: float(self.s_prime(x)),
            self.x_lower, self.x_upper, start, settings,
        )
        x2 = float(self.w(result.x))
        return NnSolution(result.value ** 2, result.x, x2)


def max_r2_given_r1_nn(gamma1_star: float, c: ChannelConstants,
                       epsilon: Optional[float] = None,
                       x0: Optional[float] = None,
                       settings: Optional[AscentSettings] = None) -> NnSolution:
    """
    Largest SINR of link 2 given the SINR target of link 1.

    Args:
        gamma1_star: SINR target of link 1
        c: channel constants
        epsilon: stopping tolerance on the objective
        x0: initial TX1 parameter (warm start); midpoint of the bounds if None

    Returns:
        NnSolution(gamma2_star, x1_star, x2_star)
    """
    settings = settings or AscentSettings.from_config(SOLVER_CONFIG, epsilon)
    if epsilon is not None and settings.epsilon != epsilon:
        settings = replace(settings, epsilon=epsilon)
    if gamma1_star <= 0:
        raise InfeasibleTarget(f"gamma1 must be positive, got {gamma1_star}")

    gamma_bar = gamma1_max_nn(c)
    if gamma1_star > gamma_bar * (1.0 + FEASIBILITY_TOLERANCE):
        raise InfeasibleTarget(
            f"gamma1={gamma1_star:.6g} exceeds the single-user SINR {gamma_bar:.6g}")
    if gamma1_star >= gamma_bar:
        return NnSolution(gamma1_min_nn(c.swapped()), c.kappa1, 0.0)
    if gamma1_star <= gamma1_min_nn(c):
        # Horizontal weak segment: TX1 on ZF with reduced power, TX2 on MR
        return NnSolution(c.g22 ** 2 / c.sigma2_sq, 0.0, c.kappa2)

    problem = NnScalarProblem.build(gamma1_star, c)
    return problem.solve(settings, x0)


def _timed_meta(method: str, start: float, **extra) -> dict:
    return {"method": method, "wall_time_s": time.perf_counter() - start, **extra}


def boundary_nn_numerical(c: ChannelConstants, M: int = 500,
                          epsilon: Optional[float] = None,
                          parallel: bool = False,
                          threads: Optional[int] = None) -> Boundary:
    """
    Strongly PO boundary by uniform sampling of R1 and one scalar solve per sample.

    Sequential sweeps warm-start each solve from the previous optimum; parallel
    sweeps start every solve at the midpoint of its interval.
    """
    if M < 2:
        raise DomainError(f"M must be >= 2, got {M}")
    start = time.perf_counter()
    settings = AscentSettings.from_config(SOLVER_CONFIG, epsilon)
    (r1_min, r2_max), (r1_max, r2_min) = endpoints_nn(c)
    grid = np.linspace(r1_min, r1_max, M)
    interior = grid[1:-1]

    def solve(r1: float, x0: Optional[float]) -> NnSolution:
        return max_r2_given_r1_nn(2.0 ** r1 - 1.0, c, x0=x0, settings=settings)

    if parallel and len(interior):
        workers = threads or SOLVER_CONFIG.threads
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solutions = list(pool.map(lambda r: solve(r, None), interior))
    else:
        solutions, x_prev = [], 0.0
        for r1 in interior:
            sol = solve(r1, x_prev)
            solutions.append(sol)
            x_prev = sol.x1_star

    points = [RatePoint(r1_min, r2_max, SCENARIO, RateParams(x1=0.0, x2=c.kappa2))]
    for r1, sol in zip(interior, solutions):
        points.append(RatePoint(float(r1), math.log2(1.0 + sol.gamma2_star), SCENARIO,
                                RateParams(x1=sol.x1_star, x2=sol.x2_star)))
    points.append(RatePoint(r1_max, r2_min, SCENARIO, RateParams(x1=c.kappa1, x2=0.0)))

    boundary = pareto_filter(points, scenario=SCENARIO)
    logger.debug(f"NN numerical boundary: {len(boundary)} of {M} samples kept")
    return Boundary(boundary.points, SCENARIO,
                    _timed_meta("nn_numerical", start, M=M, epsilon=settings.epsilon,
                                parallel=parallel))


# --- Closed-form method ----------------------------------------------------

def lambda_to_x(lam, kappa: float):
    """TX parameter x of the normalized mixture lam*MR + (1 - lam)*ZF."""
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr < 0.0) or np.any(lam_arr > 1.0) or not 0.0 < kappa < 1.0:
        raise DomainError(f"lambda must lie in [0, 1] and kappa in (0, 1), got {lam}, {kappa}")
    rho = 1.0 - math.sqrt(1.0 - kappa * kappa)
    x = kappa * lam_arr / np.sqrt(2.0 * rho * lam_arr ** 2 - 2.0 * rho * lam_arr + 1.0)
    return float(x) if np.ndim(x) == 0 else x


def f_value(x1: float, c: ChannelConstants) -> float:
    """TX1 side of the stationarity condition, f(x1) = u1' v2^2 / (v2' v2 u1)."""
    if x1 <= SINGULAR_THRESHOLD:
        raise SingularAtZero(f"f is singular at x1={x1}")
    u1 = float(mixed_gain(x1, c.alpha1, c.alpha1_tilde))
    u1p = float(mixed_gain_prime(x1, c.alpha1, c.alpha1_tilde))
    return u1p * (x1 * x1 + c.zeta1) / (x1 * u1)


def g_value(x2: float, c: ChannelConstants) -> float:
    """TX2 side of the stationarity condition, g(x2) = v1' v1 u2 / (u2' v1^2)."""
    u2 = float(mixed_gain(x2, c.alpha2, c.alpha2_tilde))
    u2p = float(mixed_gain_prime(x2, c.alpha2, c.alpha2_tilde))
    return x2 * u2 / (u2p * (x2 * x2 + c.zeta2))


def cubic_coefficients_nn(f_val: float, rho2: float, zeta2: float) -> CubicCoefficients:
    """Cubic in lambda2 whose roots in [0, 1] solve g(x2(lambda2)) = f_val."""
    if f_val < 0:
        raise DomainError(f"f must be nonnegative, got {f_val}")
    return CubicCoefficients(
        c3=rho2 * (2.0 - rho2 + 2.0 * zeta2) * f_val - rho2 ** 2,
        c2=-rho2 * (2.0 - rho2 + 4.0 * zeta2) * f_val + rho2 ** 2,
        c1=(1.0 + 2.0 * rho2) * zeta2 * f_val + (1.0 - rho2),
        c0=-zeta2 * f_val,
    )


@dataclass(frozen=True)
class NnClosedFormState:
    """One sample of the closed-form sweep."""
    lambda1: float
    f_value: float
    constants: ChannelConstants

    def lambda2_roots(self) -> List[float]:
        c = self.constants
        roots = roots_in_unit_interval(cubic_coefficients_nn(self.f_value, c.rho2, c.zeta2))
        if not roots:
            raise NoFeasibleRoot(f"No root in [0, 1] for lambda1={self.lambda1:.6g}")
        return roots


def _nn_point(x1: float, x2: float, c: ChannelConstants, **params) -> RatePoint:
    r1, r2 = rates_from_powers(SCENARIO, *powers_nn(x1, x2, c), c.sigma1_sq, c.sigma2_sq)
    return RatePoint(float(r1), float(r2), SCENARIO, RateParams(x1=x1, x2=x2, **params))


def boundary_nn_closed_form(c: ChannelConstants, M: int = 500) -> Boundary:
    """Strongly PO boundary from a uniform sweep of the TX1 mixing weight lambda1."""
    if M < 2:
        raise DomainError(f"M must be >= 2, got {M}")
    start = time.perf_counter()
    lambdas = np.linspace(0.0, 1.0, M)
    skipped = 0

    points = [_nn_point(0.0, c.kappa2, c, lambda1=0.0, lambda2=1.0)]
    for lam1 in lambdas[1:-1]:
        x1 = lambda_to_x(lam1, c.kappa1)
        state = NnClosedFormState(float(lam1), max(0.0, f_value(x1, c)), c)
        try:
            roots = state.lambda2_roots()
        except NoFeasibleRoot as e:
            skipped += 1
            logger.warning(f"Skipping closed-form sample: {e}")
            continue
        for lam2 in roots:
            points.append(_nn_point(x1, lambda_to_x(lam2, c.kappa2), c,
                                    lambda1=float(lam1), lambda2=float(lam2)))
    points.append(_nn_point(c.kappa1, 0.0, c, lambda1=1.0, lambda2=0.0))

    boundary = pareto_filter(points, scenario=SCENARIO)
    return Boundary(boundary.points, SCENARIO,
                    _timed_meta("nn_closed_form", start, M=M, skipped=skipped))


# --- Weak segments ---------------------------------------------------------

class WeakSegments(NamedTuple):
    """Weak PO parts of the NN boundary.

    The vertical edge shares a single r1 value, so it is kept as raw points
    ordered by increasing r2 rather than as a Boundary.
    """
    horizontal: Boundary
    vertical: Tuple[RatePoint, ...]


def weak_segments_nn(c: ChannelConstants, M: int = 500) -> WeakSegments:
    """Segments traced by scaling the ZF transmitter's power from 0 to 1."""
    if M < 2:
        raise DomainError(f"M must be >= 2, got {M}")
    t = np.linspace(0.0, 1.0, M)
    (_, r2_max), (r1_max, _) = endpoints_nn(c)

    r1_h = np.log2(1.0 + t * c.alpha1_tilde ** 2 / (c.beta2 ** 2 + c.sigma1_sq))
    horizontal = [RatePoint(float(r), r2_max, SCENARIO,
                            RateParams(x1=0.0, y1=float(math.sqrt(tk)), x2=c.kappa2, case="weak"))
                  for r, tk in zip(r1_h, t)]

    r2_v = np.log2(1.0 + t * c.alpha2_tilde ** 2 / (c.beta1 ** 2 + c.sigma2_sq))
    vertical = tuple(RatePoint(r1_max, float(r), SCENARIO,
                               RateParams(x1=c.kappa1, x2=0.0, y2=float(math.sqrt(tk)), case="weak"))
                     for r, tk in zip(r2_v, t))

    return WeakSegments(pareto_filter(horizontal, scenario=SCENARIO,
                                      meta={"method": "nn_weak", "M": M}),
                        vertical)


def full_boundary_nn(c: ChannelConstants, M: int = 500, method: str = "closed_form",
                     epsilon: Optional[float] = None) -> Boundary:
    """Strongly PO boundary joined with the horizontal weak segment."""
    strong = boundary_nn_closed_form(c, M) if method == "closed_form" \
        else boundary_nn_numerical(c, M, epsilon)
    weak = weak_segments_nn(c, M)
    merged = pareto_filter(list(weak.horizontal.points) + list(strong.points), scenario=SCENARIO)
    return Boundary(merged.points, SCENARIO, {**strong.meta, "with_weak": True})
