"""
Channel Realization Service

Builds two-user MISO interference channel realizations, reduces them to the
scalar constants every boundary method consumes, and synthesizes canonical
2-antenna channels from given constants.

Indexing convention: ``h_ij`` is the (conjugated) channel from TX_i to RX_j,
so ``h11``/``h22`` are direct links and ``h12``/``h21`` are crosstalk links.
"""

import json
import logging
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Optional

import numpy as np

from ..config import SOLVER_CONFIG
from ..errors import (
    ColinearChannels,
    DimensionMismatch,
    DomainError,
    OrthogonalChannels,
    RedrawExhausted,
)

logger = logging.getLogger(__name__)

RAYLEIGH_PRNG = "numpy.random.PCG64"
MAX_REDRAWS = 100


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Four complex channel vectors plus receiver noise variances."""
    h11: np.ndarray
    h12: np.ndarray
    h21: np.ndarray
    h22: np.ndarray
    sigma1_sq: float = 1.0
    sigma2_sq: float = 1.0

    def __post_init__(self):
        for name in ("h11", "h12", "h21", "h22"):
            vec = np.asarray(getattr(self, name), dtype=complex).reshape(-1)
            object.__setattr__(self, name, vec)
        lengths = {len(self.h11), len(self.h12), len(self.h21), len(self.h22)}
        if len(lengths) != 1:
            raise DimensionMismatch(f"Channel vectors have differing lengths {sorted(lengths)}")
        if len(self.h11) < 2:
            raise DomainError(f"Need at least 2 transmit antennas, got {len(self.h11)}")
        if not (self.sigma1_sq > 0 and self.sigma2_sq > 0):
            raise DomainError("Noise variances must be positive")

    @property
    def n_t(self) -> int:
        return len(self.h11)

    def direct(self, i: int) -> np.ndarray:
        return self.h11 if _check_index(i) == 1 else self.h22

    def crosstalk(self, i: int) -> np.ndarray:
        """Channel from TX_i to the unintended receiver."""
        return self.h12 if _check_index(i) == 1 else self.h21

    def swapped(self) -> "ChannelRealization":
        """Interchange the roles of the two links."""
        return ChannelRealization(
            h11=self.h22, h12=self.h21, h21=self.h12, h22=self.h11,
            sigma1_sq=self.sigma2_sq, sigma2_sq=self.sigma1_sq,
        )

    def to_dict(self) -> Dict[str, Any]:
        def pairs(v: np.ndarray):
            return [[float(z.real), float(z.imag)] for z in v]

        return {
            "n_t": self.n_t,
            "h11": pairs(self.h11), "h12": pairs(self.h12),
            "h21": pairs(self.h21), "h22": pairs(self.h22),
            "sigma1_sq": float(self.sigma1_sq), "sigma2_sq": float(self.sigma2_sq),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ChannelRealization":
        try:
            vectors = {
                name: np.array([complex(re, im) for re, im in data[name]])
                for name in ("h11", "h12", "h21", "h22")
            }
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"Malformed channel record: {e}") from e
        ch = cls(
            **vectors,
            sigma1_sq=float(data.get("sigma1_sq", SOLVER_CONFIG.sigma_sq_default)),
            sigma2_sq=float(data.get("sigma2_sq", SOLVER_CONFIG.sigma_sq_default)),
        )
        if "n_t" in data and int(data["n_t"]) != ch.n_t:
            raise DimensionMismatch(f"n_t={data['n_t']} but vectors have length {ch.n_t}")
        return ch


@dataclass(frozen=True)
class ChannelConstants:
    """Scalar channel constants; the only channel information the boundary methods use."""
    g11: float
    g12: float
    g21: float
    g22: float
    kappa1: float
    kappa2: float
    alpha1: float
    alpha2: float
    alpha1_tilde: float
    alpha2_tilde: float
    beta1: float
    beta2: float
    beta1_tilde: float
    beta2_tilde: float
    rho1: float
    rho2: float
    zeta1: float
    zeta2: float
    sigma1_sq: float
    sigma2_sq: float

    PRIMARY = ("g11", "g12", "g21", "g22", "kappa1", "kappa2", "sigma1_sq", "sigma2_sq")

    @classmethod
    def from_primary(cls, g11: float, g12: float, g21: float, g22: float,
                     kappa1: float, kappa2: float,
                     sigma1_sq: float = 1.0, sigma2_sq: float = 1.0) -> "ChannelConstants":
        """Derive the full constant set from norms, correlations and noise variances."""
        values = (g11, g12, g21, g22, kappa1, kappa2, sigma1_sq, sigma2_sq)
        if not all(np.isfinite(v) for v in values):
            raise DomainError(f"Channel constants must be finite, got {values}")
        if min(g11, g12, g21, g22) <= 0:
            raise DomainError("Channel norms must be positive")
        if not (0 < kappa1 < 1 and 0 < kappa2 < 1):
            raise DomainError(f"kappa must lie in (0, 1), got ({kappa1}, {kappa2})")
        if sigma1_sq <= 0 or sigma2_sq <= 0:
            raise DomainError("Noise variances must be positive")

        s1 = np.sqrt(1.0 - kappa1 ** 2)
        s2 = np.sqrt(1.0 - kappa2 ** 2)
        return cls(
            g11=float(g11), g12=float(g12), g21=float(g21), g22=float(g22),
            kappa1=float(kappa1), kappa2=float(kappa2),
            alpha1=float(g11 * kappa1), alpha2=float(g22 * kappa2),
            alpha1_tilde=float(g11 * s1), alpha2_tilde=float(g22 * s2),
            beta1=float(g12 * kappa1), beta2=float(g21 * kappa2),
            beta1_tilde=float(g12 * s1), beta2_tilde=float(g21 * s2),
            rho1=float(1.0 - s1), rho2=float(1.0 - s2),
            zeta1=float(sigma2_sq / g12 ** 2), zeta2=float(sigma1_sq / g21 ** 2),
            sigma1_sq=float(sigma1_sq), sigma2_sq=float(sigma2_sq),
        )

    def primary(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in self.PRIMARY}

    def swapped(self) -> "ChannelConstants":
        """Constants of the link-interchanged channel (RX/TX indices 1 <-> 2)."""
        return ChannelConstants.from_primary(
            self.g22, self.g21, self.g12, self.g11,
            self.kappa2, self.kappa1, self.sigma2_sq, self.sigma1_sq,
        )

    def to_dict(self) -> Dict[str, float]:
        return {k: v for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ChannelConstants":
        """Rebuild from a flat record; derived fields, when present, must agree."""
        missing = [k for k in cls.PRIMARY[:6] if k not in data]
        if missing:
            raise DomainError(f"Constants record lacks {missing}")
        constants = cls.from_primary(
            *(float(data[k]) for k in cls.PRIMARY[:6]),
            sigma1_sq=float(data.get("sigma1_sq", SOLVER_CONFIG.sigma_sq_default)),
            sigma2_sq=float(data.get("sigma2_sq", SOLVER_CONFIG.sigma_sq_default)),
        )
        for f in fields(cls):
            if f.name in data and not np.isclose(float(data[f.name]), getattr(constants, f.name),
                                                 rtol=1e-9, atol=1e-12):
                raise DomainError(
                    f"Inconsistent constant {f.name}: file has {data[f.name]}, "
                    f"primary values give {getattr(constants, f.name)}"
                )
        return constants


def _check_index(i: int) -> int:
    if i not in (1, 2):
        raise DomainError(f"Link index must be 1 or 2, got {i}")
    return i


def _correlation(h_cross: np.ndarray, h_direct: np.ndarray) -> float:
    denom = np.linalg.norm(h_cross) * np.linalg.norm(h_direct)
    if denom == 0:
        raise OrthogonalChannels("Zero channel vector")
    return float(abs(np.vdot(h_cross, h_direct)) / denom)


def derive_constants(ch: ChannelRealization,
                     kappa_margin: Optional[float] = None) -> ChannelConstants:
    """
    Reduce a channel realization to its scalar constants.

    Args:
        ch: channel realization
        kappa_margin: distance from 0 and 1 below which correlations are rejected

    Returns:
        ChannelConstants for the realization
    """
    margin = SOLVER_CONFIG.kappa_margin if kappa_margin is None else kappa_margin
    kappas = []
    for i in (1, 2):
        kappa = _correlation(ch.crosstalk(i), ch.direct(i))
        if kappa > 1.0 - margin:
            raise ColinearChannels(f"kappa{i}={kappa:.12g}: direct and crosstalk channels are colinear")
        if kappa < margin:
            raise OrthogonalChannels(f"kappa{i}={kappa:.3g}: direct and crosstalk channels are orthogonal")
        kappas.append(kappa)

    return ChannelConstants.from_primary(
        float(np.linalg.norm(ch.h11)), float(np.linalg.norm(ch.h12)),
        float(np.linalg.norm(ch.h21)), float(np.linalg.norm(ch.h22)),
        kappas[0], kappas[1], ch.sigma1_sq, ch.sigma2_sq,
    )


def synth_channels(g11: float, g12: float, g21: float, g22: float,
                   kappa1: float, kappa2: float,
                   sigma1_sq: float = 1.0, sigma2_sq: float = 1.0) -> ChannelRealization:
    """Canonical real 2-antenna realization with the given constants."""
    # Validates ranges
    ChannelConstants.from_primary(g11, g12, g21, g22, kappa1, kappa2, sigma1_sq, sigma2_sq)
    return ChannelRealization(
        h11=g11 * np.array([1.0, 0.0]),
        h12=g12 * np.array([kappa1, np.sqrt(1.0 - kappa1 ** 2)]),
        h21=g21 * np.array([kappa2, np.sqrt(1.0 - kappa2 ** 2)]),
        h22=g22 * np.array([1.0, 0.0]),
        sigma1_sq=sigma1_sq, sigma2_sq=sigma2_sq,
    )


def synth_from_constants(constants: ChannelConstants) -> ChannelRealization:
    return synth_channels(**constants.primary())


def random_rayleigh(n_t: int, seed: int,
                    sigma1_sq: Optional[float] = None,
                    sigma2_sq: Optional[float] = None) -> ChannelRealization:
    """
    Draw an i.i.d. Rayleigh realization (entries CN(0, 1)) from a PCG64 stream.

    Vectors are drawn in the order h11, h12, h21, h22. Draws whose correlations
    violate the kappa margins are discarded and redrawn from the same stream.
    """
    if n_t < 2:
        raise DomainError(f"Need at least 2 transmit antennas, got {n_t}")
    s1 = SOLVER_CONFIG.sigma_sq_default if sigma1_sq is None else sigma1_sq
    s2 = SOLVER_CONFIG.sigma_sq_default if sigma2_sq is None else sigma2_sq

    rng = np.random.Generator(np.random.PCG64(seed))
    for attempt in range(MAX_REDRAWS):
        draws = (rng.standard_normal((4, n_t)) + 1j * rng.standard_normal((4, n_t))) / np.sqrt(2.0)
        ch = ChannelRealization(*draws, sigma1_sq=s1, sigma2_sq=s2)
        try:
            derive_constants(ch)
        except (ColinearChannels, OrthogonalChannels) as e:
            logger.debug(f"Redrawing Rayleigh channel (attempt {attempt + 1}): {e}")
            continue
        return ch
    raise RedrawExhausted(f"No valid Rayleigh draw after {MAX_REDRAWS} attempts (seed={seed})")


def load_channel_file(path: str) -> ChannelRealization:
    with open(path, "r") as f:
        return ChannelRealization.from_dict(json.load(f))


def save_channel_file(ch: ChannelRealization, path: str) -> None:
    with open(path, "w") as f:
        json.dump(ch.to_dict(), f, indent=2)


def load_constants_file(path: str) -> ChannelConstants:
    with open(path, "r") as f:
        return ChannelConstants.from_dict(json.load(f))


# Figure presets; the noise variances are an assumption (unit noise)
PRESETS: Dict[str, Dict[str, float]] = {
    "fig2": dict(g11=1.0, g12=2.0, g21=2.0, g22=1.0, kappa1=0.3, kappa2=0.3,
                 sigma1_sq=1.0, sigma2_sq=1.0),
    "fig3": dict(g11=1.0, g12=2.0, g21=2.0, g22=1.0, kappa1=0.85, kappa2=0.85,
                 sigma1_sq=1.0, sigma2_sq=1.0),
    "fig4": dict(g11=1.0, g12=2.0, g21=2.0, g22=1.0, kappa1=0.85, kappa2=0.3,
                 sigma1_sq=1.0, sigma2_sq=1.0),
}


def preset_constants(name: str) -> ChannelConstants:
    try:
        return ChannelConstants.from_primary(**PRESETS[name])
    except KeyError:
        raise DomainError(f"Unknown preset {name!r}; choose from {sorted(PRESETS)}")
