"""
Real roots of cubic equations in closed form.

Cardano's formula when the discriminant admits a single real root, the
trigonometric form when all three roots are real; degenerate leading
coefficients fall back to the quadratic and linear cases.
"""

import math
from dataclasses import dataclass
from typing import List, Optional

from ..config import SOLVER_CONFIG
from ..errors import AllZeroCoefficients, DomainError

DEGENERATE_RELATIVE = 1e-14
DISCRIMINANT_RELATIVE = 1e-15
COLLAPSE_RELATIVE = 1e-10


@dataclass(frozen=True)
class CubicCoefficients:
    """Coefficients of c3*l^3 + c2*l^2 + c1*l + c0 = 0."""
    c3: float
    c2: float
    c1: float
    c0: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.c3, self.c2, self.c1, self.c0)):
            raise DomainError(f"Non-finite cubic coefficients {self}")

    @property
    def scale(self) -> float:
        return max(abs(self.c3), abs(self.c2), abs(self.c1), abs(self.c0))

    def __call__(self, lam: float) -> float:
        return ((self.c3 * lam + self.c2) * lam + self.c1) * lam + self.c0

    def derivative(self, lam: float) -> float:
        return (3.0 * self.c3 * lam + 2.0 * self.c2) * lam + self.c1


def _cbrt(v: float) -> float:
    return math.copysign(abs(v) ** (1.0 / 3.0), v)


def _polish(c: CubicCoefficients, lam: float) -> float:
    """One Newton step, kept only if it does not increase the residual."""
    slope = c.derivative(lam)
    if slope == 0.0:
        return lam
    candidate = lam - c(lam) / slope
    return candidate if abs(c(candidate)) <= abs(c(lam)) else lam


def _collapse(roots: List[float]) -> List[float]:
    out: List[float] = []
    for r in sorted(roots):
        if out and abs(r - out[-1]) <= COLLAPSE_RELATIVE * max(1.0, abs(r)):
            continue
        out.append(r)
    return out


def _quadratic_roots(a: float, b: float, c: float, scale: float) -> List[float]:
    if abs(a) <= DEGENERATE_RELATIVE * scale:
        if abs(b) <= DEGENERATE_RELATIVE * scale:
            return []
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0:
        if disc > -DISCRIMINANT_RELATIVE * max(b * b, abs(4.0 * a * c)):
            return [-b / (2.0 * a)]
        return []
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    if q == 0.0:
        return [0.0]
    return [q / a, c / q]


def _depressed_roots(p: float, q: float) -> List[float]:
    """Real roots of t^3 + p t + q = 0."""
    half_q = q / 2.0
    third_p = p / 3.0
    disc = half_q * half_q + third_p ** 3
    tolerance = DISCRIMINANT_RELATIVE * (half_q * half_q + abs(third_p) ** 3)

    if abs(disc) <= tolerance:
        if p == 0.0 and q == 0.0:
            return [0.0]
        if abs(p) <= DEGENERATE_RELATIVE * abs(q) ** (2.0 / 3.0):
            return [_cbrt(-q)]
        # One simple and one double root
        return [3.0 * q / p, -1.5 * q / p]
    if disc > 0:
        sq = math.sqrt(disc)
        return [_cbrt(-half_q + sq) + _cbrt(-half_q - sq)]

    r = 2.0 * math.sqrt(-third_p)
    arg = max(-1.0, min(1.0, (3.0 * q / (2.0 * p)) * math.sqrt(-3.0 / p)))
    phi = math.acos(arg) / 3.0
    return [r * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3)]


def real_roots(c: CubicCoefficients) -> List[float]:
    """
    All distinct real roots of the cubic, ascending.

    Raises:
        AllZeroCoefficients: if every coefficient is zero
    """
    scale = c.scale
    if scale == 0.0:
        raise AllZeroCoefficients("The zero polynomial has no isolated roots")

    if abs(c.c3) <= DEGENERATE_RELATIVE * scale:
        roots = _quadratic_roots(c.c2, c.c1, c.c0, scale)
    else:
        b, cc, d = c.c2 / c.c3, c.c1 / c.c3, c.c0 / c.c3
        p = cc - b * b / 3.0
        q = 2.0 * b ** 3 / 27.0 - b * cc / 3.0 + d
        roots = [t - b / 3.0 for t in _depressed_roots(p, q)]

    return _collapse([_polish(c, r) for r in roots])


def roots_in_unit_interval(c: CubicCoefficients, tol: Optional[float] = None) -> List[float]:
    """Real roots within [0, 1] up to ``tol`` (the configured root tolerance by default), clamped onto it."""
    tol = SOLVER_CONFIG.root_tolerance if tol is None else tol
    return _collapse([min(1.0, max(0.0, r)) for r in real_roots(c) if -tol <= r <= 1.0 + tol])
