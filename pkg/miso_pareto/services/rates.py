"""
Rate Evaluation Service

Received powers and the maximum achievable rate pair of a beamformer pair under
each decoding scenario. RX_i either treats the interference as noise (n) or
decodes and cancels it first (d, successive interference cancellation).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

import numpy as np

from ..errors import DimensionMismatch, DomainError
from .channel import ChannelRealization

logger = logging.getLogger(__name__)

POWER_TOLERANCE = 1e-12


class DecodingScenario(str, Enum):
    """Decoding strategy pair (RX1, RX2); d = decode interference, n = treat as noise."""
    NN = "nn"
    DN = "dn"
    ND = "nd"
    DD = "dd"

    @property
    def mirrored(self) -> "DecodingScenario":
        return {"nn": DecodingScenario.NN, "dn": DecodingScenario.ND,
                "nd": DecodingScenario.DN, "dd": DecodingScenario.DD}[self.value]


@dataclass(frozen=True, eq=False)
class Beamformer:
    """Transmit beamforming vector under a unit power constraint."""
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=complex).reshape(-1)
        power = float(np.vdot(w, w).real)
        if not np.isfinite(power):
            raise DomainError("Beamformer has non-finite entries")
        if power > 1.0 + POWER_TOLERANCE:
            raise DomainError(f"Beamformer power {power:.15g} exceeds 1")
        object.__setattr__(self, "w", w)

    @property
    def power(self) -> float:
        return float(np.vdot(self.w, self.w).real)


@dataclass(frozen=True)
class RateParams:
    """Parameters that produced a rate point; unused ones stay None."""
    x1: Optional[float] = None
    y1: Optional[float] = None
    x2: Optional[float] = None
    y2: Optional[float] = None
    lambda1: Optional[float] = None
    lambda2: Optional[float] = None
    case: Optional[str] = None

    def mirrored(self) -> "RateParams":
        return RateParams(x1=self.x2, y1=self.y2, x2=self.x1, y2=self.y1,
                          lambda1=self.lambda2, lambda2=self.lambda1, case=self.case)


@dataclass(frozen=True)
class RatePoint:
    """Achievable rate pair in bits per channel use."""
    r1: float
    r2: float
    scenario: DecodingScenario
    params: RateParams = field(default_factory=RateParams)

    def __post_init__(self):
        for name in ("r1", "r2"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            if value < -POWER_TOLERANCE:
                raise DomainError(f"{name} must be nonnegative, got {value}")
            object.__setattr__(self, name, max(value, 0.0))

    def mirrored(self) -> "RatePoint":
        return RatePoint(self.r2, self.r1, self.scenario.mirrored, self.params.mirrored())

    def as_dict(self) -> Dict[str, Any]:
        return {"scenario": self.scenario.value, "r1": self.r1, "r2": self.r2,
                **{k: v for k, v in self.params.__dict__.items()}}


def _check_length(w: Beamformer, ch: ChannelRealization) -> None:
    if len(w.w) != ch.n_t:
        raise DimensionMismatch(f"Beamformer length {len(w.w)} != n_T {ch.n_t}")


def received_powers(w1: Beamformer, w2: Beamformer,
                    ch: ChannelRealization) -> Tuple[float, float, float, float]:
    """
    Received signal and interference powers.

    Returns:
        (p1, q2, p2, q1) where p_i = |h_ii^H w_i|^2 and q_i = |h_ji^H w_j|^2
    """
    _check_length(w1, ch)
    _check_length(w2, ch)
    p1 = abs(np.vdot(ch.h11, w1.w)) ** 2
    q2 = abs(np.vdot(ch.h12, w1.w)) ** 2
    p2 = abs(np.vdot(ch.h22, w2.w)) ** 2
    q1 = abs(np.vdot(ch.h21, w2.w)) ** 2
    return float(p1), float(q2), float(p2), float(q1)


def sinr_from_powers(scenario: DecodingScenario, p1, q2, p2, q1,
                     sigma1_sq: float, sigma2_sq: float):
    """
    Effective SINR pair for a decoding scenario; works elementwise on arrays.

    With SIC at RX_i the interfering message must be decodable there, so the
    interferer's rate is capped by the SINR of that decoding step.
    """
    p1, q2, p2, q1 = (np.asarray(v, dtype=float) for v in (p1, q2, p2, q1))
    if scenario == DecodingScenario.NN:
        g1 = p1 / (q1 + sigma1_sq)
        g2 = p2 / (q2 + sigma2_sq)
    elif scenario == DecodingScenario.DN:
        g1 = p1 / sigma1_sq
        g2 = np.minimum(q1 / (p1 + sigma1_sq), p2 / (q2 + sigma2_sq))
    elif scenario == DecodingScenario.ND:
        g1 = np.minimum(q2 / (p2 + sigma2_sq), p1 / (q1 + sigma1_sq))
        g2 = p2 / sigma2_sq
    elif scenario == DecodingScenario.DD:
        g1 = np.minimum(p1 / sigma1_sq, q2 / (p2 + sigma2_sq))
        g2 = np.minimum(p2 / sigma2_sq, q1 / (p1 + sigma1_sq))
    else:
        raise DomainError(f"Unknown decoding scenario {scenario!r}")
    return g1, g2


def rates_from_powers(scenario: DecodingScenario, p1, q2, p2, q1,
                      sigma1_sq: float, sigma2_sq: float):
    g1, g2 = sinr_from_powers(scenario, p1, q2, p2, q1, sigma1_sq, sigma2_sq)
    return np.log2(1.0 + g1), np.log2(1.0 + g2)


def rate_pair(scenario: DecodingScenario, w1: Beamformer, w2: Beamformer,
              ch: ChannelRealization) -> RatePoint:
    """Maximum achievable rates of a beamformer pair under the given scenario."""
    p1, q2, p2, q1 = received_powers(w1, w2, ch)
    r1, r2 = rates_from_powers(DecodingScenario(scenario), p1, q2, p2, q1,
                               ch.sigma1_sq, ch.sigma2_sq)
    return RatePoint(float(r1), float(r2), DecodingScenario(scenario))


def projection(onto: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Orthogonal projection of v onto span(onto)."""
    return onto * (np.vdot(onto, v) / np.vdot(onto, onto))


def orthogonal_projection(onto: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Projection of v onto the orthogonal complement of span(onto)."""
    return v - projection(onto, v)


def _unit(v: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(v)
    if norm == 0:
        raise DomainError("Cannot normalize a zero vector")
    return v / norm


def direction_basis(onto: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Unit vectors along the projection of v onto span(onto) and its orthogonal complement."""
    return _unit(projection(onto, v)), _unit(orthogonal_projection(onto, v))


def combine(basis: Tuple[np.ndarray, np.ndarray], x: float, y: float) -> Beamformer:
    """Beamformer x*e_parallel + y*e_orthogonal with (x, y) in the unit quarter disc."""
    if x < 0 or y < 0 or x * x + y * y > 1.0 + POWER_TOLERANCE:
        raise DomainError(f"Beamformer coordinates ({x}, {y}) outside the unit quarter disc")
    return Beamformer(x * basis[0] + y * basis[1])


def mr_beamformer(i: int, ch: ChannelRealization) -> Beamformer:
    """Maximum-ratio transmission h_ii/||h_ii||."""
    return Beamformer(_unit(ch.direct(i)))


def zf_beamformer(i: int, ch: ChannelRealization) -> Beamformer:
    """Zero-forcing: unit-norm projection of h_ii orthogonal to the crosstalk channel."""
    return Beamformer(_unit(orthogonal_projection(ch.crosstalk(i), ch.direct(i))))
