"""
Elementary gain functions shared by the boundary parameterizations.

All functions accept scalars or numpy arrays.
"""

import numpy as np


def mixed_gain(x, a, a_tilde):
    """a*x + a_tilde*sqrt(1 - x^2): amplitude seen through a two-direction beamformer."""
    x = np.asarray(x, dtype=float)
    return a * x + a_tilde * np.sqrt(np.clip(1.0 - x * x, 0.0, None))


def mixed_gain_prime(x, a, a_tilde):
    """Derivative of ``mixed_gain``; -inf at x = 1."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return a - a_tilde * x / np.sqrt(np.clip(1.0 - x * x, 0.0, None))


def noisy_norm(x, g, sigma_sq):
    """sqrt(g^2 x^2 + sigma^2): interference-plus-noise amplitude."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(g * g * x * x + sigma_sq)


def angle_bound(kappa: float, ratio: float) -> float:
    """
    kappa*sqrt(r) - sqrt(1 - kappa^2)*sqrt(1 - r) for r in [0, 1].

    Smallest x in [0, kappa] at which a mixed gain with correlation kappa reaches
    sqrt(r) of its maximum.
    """
    r = min(1.0, max(0.0, ratio))
    return float(kappa * np.sqrt(r) - np.sqrt(1.0 - kappa * kappa) * np.sqrt(1.0 - r))
