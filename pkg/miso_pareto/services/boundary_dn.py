"""
Pareto boundary when RX1 decodes the interference and RX2 treats it as noise.

Everything is closed form. For a target SINR of link 1, TX1 spends just enough
power along the direction that leaks least to RX2; TX2 then maximizes
min{a x2, b x2 + c sqrt(1 - x2^2)}, a line against a concave curve, whose
optimum falls into one of three cases. The opposite scenario (ND) is obtained
by interchanging the link indices.
"""

import logging
import math
import time
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from ..errors import DomainError, InfeasibleTarget
from .channel import ChannelConstants, ChannelRealization
from .gains import mixed_gain
from .pareto import Boundary, mirror, pareto_filter
from .rates import Beamformer, DecodingScenario, RateParams, RatePoint, combine, direction_basis

logger = logging.getLogger(__name__)

SCENARIO = DecodingScenario.DN
FEASIBILITY_TOLERANCE = 1e-12


class DnCase(str, Enum):
    MR = "MR"                  # TX2 on the direction of its own channel
    INTERSECT = "INTERSECT"    # line and curve intersect
    CROSSTALK = "CROSSTALK"    # curve maximum, i.e. TX2 matched to its crosstalk channel


_CASES = (DnCase.MR, DnCase.INTERSECT, DnCase.CROSSTALK)


def max_min_line_curve(a, b, c):
    """
    Maximize min{a x, b x + c sqrt(1 - x^2)} over x in [0, 1] (a, b, c > 0).

    Returns:
        (x_star, squared optimum, case index into MR/INTERSECT/CROSSTALK),
        each broadcast over the inputs
    """
    a, b, c = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, c)))
    guard = b + c * c / b
    line_binding = a <= guard
    with np.errstate(divide="ignore", invalid="ignore"):
        x_intersect = c / np.sqrt(c * c + (a - b) ** 2)
    x = np.where(a <= b, 1.0, np.where(line_binding, x_intersect, b / np.sqrt(b * b + c * c)))
    value = np.where(line_binding, (a * x) ** 2, b * b + c * c)
    case = np.where(a <= b, 0, np.where(line_binding, 1, 2))
    return x, value, case


@dataclass(frozen=True)
class DnSolveResult:
    x1_star: float
    y1_star: float
    x2_star: float
    gamma2_star: float
    case_tag: DnCase

    def __post_init__(self):
        if self.x1_star < 0 or self.y1_star < 0 or \
                self.x1_star ** 2 + self.y1_star ** 2 > 1.0 + 1e-9:
            raise DomainError(f"TX1 parameters ({self.x1_star}, {self.y1_star}) outside the quarter disc")


def powers_dn(x1, y1, x2, c: ChannelConstants):
    """Received powers (p1, q2, p2, q1) of the DN parameterization."""
    x1, y1, x2 = (np.asarray(v, dtype=float) for v in (x1, y1, x2))
    p1 = (c.alpha1 * x1 + c.alpha1_tilde * y1) ** 2
    q2 = c.g12 ** 2 * x1 ** 2
    p2 = c.g22 ** 2 * x2 ** 2
    q1 = mixed_gain(x2, c.beta2, c.beta2_tilde) ** 2
    return p1, q2, p2, q1


def param_beamformers_dn(x1: float, y1: float, x2: float,
                         ch: ChannelRealization) -> Tuple[Beamformer, Beamformer]:
    """TX1 spans its MR/ZF plane with power x1^2 + y1^2; TX2 spans its crosstalk plane at full power."""
    if not 0.0 <= x2 <= 1.0:
        raise DomainError(f"x2 must lie in [0, 1], got {x2}")
    w1 = combine(direction_basis(ch.h12, ch.h11), x1, y1)
    w2 = combine(direction_basis(ch.h22, ch.h21), x2, math.sqrt(max(0.0, 1.0 - x2 * x2)))
    return w1, w2


def _solve_dn_arrays(gamma1: np.ndarray, c: ChannelConstants):
    gs = gamma1 * c.sigma1_sq
    root = np.sqrt(gs)
    x1 = np.maximum(0.0, (c.alpha1 * root - c.alpha1_tilde * np.sqrt(np.clip(c.g11 ** 2 - gs, 0.0, None)))
                    / c.g11 ** 2)
    y1 = np.clip((root - c.alpha1 * x1) / c.alpha1_tilde, 0.0, None)
    # Rounding at full power can push the pair marginally outside the disc
    norm = np.sqrt(x1 ** 2 + y1 ** 2)
    scale = np.where(norm > 1.0, 1.0 / np.maximum(norm, 1.0), 1.0)
    x1, y1 = x1 * scale, y1 * scale

    a = c.g22 / np.sqrt(x1 ** 2 * c.g12 ** 2 + c.sigma2_sq)
    den = np.sqrt(c.sigma1_sq * (gamma1 + 1.0))
    x2, gamma2, case = max_min_line_curve(a, c.beta2 / den, c.beta2_tilde / den)
    return x1, y1, x2, gamma2, case


def _check_gamma(gamma1_star: float, c: ChannelConstants) -> float:
    gamma_max = c.g11 ** 2 / c.sigma1_sq
    if gamma1_star < 0 or gamma1_star > gamma_max * (1.0 + FEASIBILITY_TOLERANCE):
        raise InfeasibleTarget(f"gamma1={gamma1_star:.6g} outside [0, {gamma_max:.6g}]")
    return min(gamma1_star, gamma_max)


def solve_dn(gamma1_star: float, c: ChannelConstants) -> DnSolveResult:
    """Optimal parameters and SINR of link 2 for a given SINR target of link 1."""
    gamma = _check_gamma(gamma1_star, c)
    x1, y1, x2, gamma2, case = _solve_dn_arrays(np.array([gamma]), c)
    return DnSolveResult(float(x1[0]), float(y1[0]), float(x2[0]), float(gamma2[0]),
                         _CASES[int(case[0])])


def gamma2bar_dn(c: ChannelConstants) -> Tuple[float, DnCase]:
    """Highest SINR of link 2 in the DN region (TX1 silent)."""
    sigma1, sigma2 = math.sqrt(c.sigma1_sq), math.sqrt(c.sigma2_sq)
    _, value, case = max_min_line_curve(c.g22 / sigma2, c.beta2 / sigma1, c.beta2_tilde / sigma1)
    return float(value), _CASES[int(case)]


def boundary_dn(c: ChannelConstants, M: int = 500) -> Boundary:
    """DN boundary on a uniform R1 grid from 0 to the single-user rate of link 1."""
    if M < 2:
        raise DomainError(f"M must be >= 2, got {M}")
    start = time.perf_counter()
    r1_max = math.log2(1.0 + c.g11 ** 2 / c.sigma1_sq)
    r1 = np.linspace(0.0, r1_max, M)
    gamma1 = np.minimum(2.0 ** r1 - 1.0, c.g11 ** 2 / c.sigma1_sq)
    x1, y1, x2, gamma2, case = _solve_dn_arrays(gamma1, c)
    r2 = np.log2(1.0 + gamma2)

    points = [
        RatePoint(float(r1[k]), float(r2[k]), SCENARIO,
                  RateParams(x1=float(x1[k]), y1=float(y1[k]), x2=float(x2[k]),
                             case=_CASES[int(case[k])].value))
        for k in range(M)
    ]
    boundary = pareto_filter(points, scenario=SCENARIO)
    return Boundary(boundary.points, SCENARIO,
                    {"method": "dn_closed_form", "M": M,
                     "wall_time_s": time.perf_counter() - start})


def boundary_nd(c: ChannelConstants, M: int = 500) -> Boundary:
    """ND boundary: the DN boundary of the link-interchanged channel, mirrored."""
    start = time.perf_counter()
    swapped = boundary_dn(c.swapped(), M)
    return mirror(swapped, meta={"method": "nd_closed_form", "M": M,
                                 "wall_time_s": time.perf_counter() - start})
