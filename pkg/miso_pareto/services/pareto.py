"""
Pareto Boundary Service

Sort-and-sweep Pareto filtering of rate point clouds, merging of per-scenario
boundaries into the boundary of their union, comparison metrics between
boundaries, and the boundary CSV format.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import DomainError, EmptyInput
from .rates import DecodingScenario, RateParams, RatePoint

logger = logging.getLogger(__name__)

UNION = "union"

CSV_COLUMNS = ["scenario", "r1_bpcu", "r2_bpcu", "x1", "y1", "x2", "y2", "lambda1", "lambda2"]
CSV_FLOAT_FORMAT = "%.12g"

ScenarioTag = Union[DecodingScenario, str]


@dataclass(frozen=True)
class Boundary:
    """Pareto frontier of one rate region, ordered by r1 ascending."""
    points: Tuple[RatePoint, ...]
    scenario: ScenarioTag
    meta: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def r1(self) -> np.ndarray:
        return np.array([p.r1 for p in self.points], dtype=float)

    @property
    def r2(self) -> np.ndarray:
        return np.array([p.r2 for p in self.points], dtype=float)

    @property
    def tag(self) -> str:
        return self.scenario.value if isinstance(self.scenario, DecodingScenario) else str(self.scenario)

    def check_invariants(self, tolerance: float = 0.0) -> None:
        """Raise DomainError unless r1 strictly increases and r2 never increases."""
        r1, r2 = self.r1, self.r2
        if len(r1) > 1:
            if np.any(np.diff(r1) <= 0):
                raise DomainError(f"Boundary {self.tag}: r1 not strictly increasing")
            if np.any(np.diff(r2) > tolerance):
                raise DomainError(f"Boundary {self.tag}: r2 increases along the boundary")

    def envelope(self, r1_values) -> np.ndarray:
        """
        Largest achievable r2 at each r1 of the normal region bounded by this boundary.

        Piecewise-linear between samples, flat to the left of the first sample,
        and -inf beyond the last sample.
        """
        r1_values = np.asarray(r1_values, dtype=float)
        r1, r2 = self.r1, self.r2
        out = np.interp(r1_values, r1, r2, left=r2[0], right=-np.inf)
        # np.interp returns the right value only strictly beyond the last sample
        out[r1_values > r1[-1]] = -np.inf
        return out

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for p in self.points:
            params = p.params
            rows.append({
                "scenario": p.scenario.value,
                "r1_bpcu": p.r1, "r2_bpcu": p.r2,
                "x1": params.x1, "y1": params.y1, "x2": params.x2, "y2": params.y2,
                "lambda1": params.lambda1, "lambda2": params.lambda2,
                "case": params.case,
            })
        frame = pd.DataFrame(rows, columns=CSV_COLUMNS + ["case"])
        if frame["case"].isna().all():
            frame = frame.drop(columns=["case"])
        return frame


def pareto_mask(r1, r2, strict: bool = False) -> np.ndarray:
    """
    Indices of the rate pairs that survive Pareto filtering, ordered by r1 ascending.

    A pair is dropped when another pair is strictly larger in both coordinates
    (or, with ``strict``, at least as large in both and larger in one). Pairs
    sharing r1 collapse onto the one with the largest r2.
    """
    r1 = np.asarray(r1, dtype=float).reshape(-1)
    r2 = np.asarray(r2, dtype=float).reshape(-1)
    if r1.size == 0:
        raise EmptyInput("Cannot Pareto-filter an empty point set")
    if r1.shape != r2.shape:
        raise DomainError("r1 and r2 must have the same length")
    if not (np.all(np.isfinite(r1)) and np.all(np.isfinite(r2))):
        raise DomainError("Rates must be finite")

    # Descending by r1, ties by descending r2
    order = np.lexsort((-r2, -r1))
    s1, s2 = r1[order], r2[order]
    group_start = np.ones(len(s1), dtype=bool)
    group_start[1:] = s1[1:] != s1[:-1]

    best_before = np.empty_like(s2)
    best_before[0] = -np.inf
    best_before[1:] = np.maximum.accumulate(s2)[:-1]

    keep = group_start & ((s2 > best_before) if strict else (s2 >= best_before))
    return order[keep][::-1]


def pareto_filter(points: Sequence[RatePoint], scenario: Optional[ScenarioTag] = None,
                  strict: bool = False, meta: Optional[Dict[str, Any]] = None) -> Boundary:
    """
    Extract the (weak) Pareto frontier of a set of rate points.

    Args:
        points: candidate rate points
        scenario: tag of the resulting boundary, defaults to the first point's scenario
        strict: also drop weakly dominated points
        meta: metadata attached to the boundary

    Returns:
        Boundary sorted by r1 ascending
    """
    points = list(points)
    if not points:
        raise EmptyInput("Cannot Pareto-filter an empty point set")
    idx = pareto_mask([p.r1 for p in points], [p.r2 for p in points], strict=strict)
    tag = scenario if scenario is not None else points[0].scenario
    return Boundary(tuple(points[i] for i in idx), tag, dict(meta or {}))


def mirror(boundary: Boundary, meta: Optional[Dict[str, Any]] = None) -> Boundary:
    """Swap the link indices of every point, giving the boundary of the interchanged channel."""
    scenario = boundary.scenario.mirrored if isinstance(boundary.scenario, DecodingScenario) \
        else boundary.scenario
    mirrored = [p.mirrored() for p in boundary.points]
    return pareto_filter(mirrored, scenario=scenario,
                         meta=dict(boundary.meta if meta is None else meta))


def union_boundary(boundaries: Sequence[Boundary], M: int) -> Boundary:
    """
    Boundary of the union of normal regions, sampled on M uniform r1 points.

    Each input is resampled onto [0, max r1] by its envelope and the pointwise
    maximum of r2 is kept. The last grid point sits at the largest r1 reached by
    any input, where the region closes with a vertical edge.
    """
    boundaries = [b for b in boundaries if len(b)]
    if not boundaries:
        raise EmptyInput("union_boundary needs at least one nonempty boundary")
    if M < 2:
        raise DomainError(f"M must be >= 2, got {M}")

    r1_max = max(float(b.r1[-1]) for b in boundaries)
    grid = np.linspace(0.0, r1_max, M)
    envelopes = np.vstack([b.envelope(grid) for b in boundaries])
    winner = np.argmax(envelopes, axis=0)
    best = envelopes[winner, np.arange(M)]

    points = []
    for k in range(M):
        source = boundaries[winner[k]].scenario
        scenario = source if isinstance(source, DecodingScenario) else DecodingScenario.NN
        points.append(RatePoint(float(grid[k]), float(best[k]), scenario,
                                RateParams(case=f"from_{boundaries[winner[k]].tag}")))
    return pareto_filter(points, scenario=UNION,
                         meta={"method": "union", "M": M,
                               "sources": [b.tag for b in boundaries]})


def max_excess(outer: Boundary, inner: Boundary, slack: float = 0.0) -> float:
    """
    How far ``inner`` sticks out of the region bounded by ``outer``.

    Each inner point is compared against the outer envelope evaluated ``slack``
    to its left, which tolerates steep boundary parts. Returns the largest r2
    excess, 0 when ``inner`` lies inside.
    """
    r1, r2 = inner.r1, inner.r2
    env = outer.envelope(np.maximum(r1 - slack, 0.0))
    excess = r2 - env
    return float(max(0.0, np.max(excess)))


def _point_to_polyline(px: np.ndarray, py: np.ndarray,
                       qx: np.ndarray, qy: np.ndarray) -> np.ndarray:
    if len(qx) == 1:
        return np.hypot(px - qx[0], py - qy[0])
    ax, ay = qx[:-1][None, :], qy[:-1][None, :]
    dx, dy = (qx[1:] - qx[:-1])[None, :], (qy[1:] - qy[:-1])[None, :]
    seg_len_sq = dx ** 2 + dy ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = ((px[:, None] - ax) * dx + (py[:, None] - ay) * dy) / seg_len_sq
    t = np.clip(np.nan_to_num(t), 0.0, 1.0)
    dist = np.hypot(px[:, None] - (ax + t * dx), py[:, None] - (ay + t * dy))
    return dist.min(axis=1)


def hausdorff_distance(a: Boundary, b: Boundary) -> float:
    """Symmetric Hausdorff distance between the two boundaries taken as polylines."""
    if not len(a) or not len(b):
        raise EmptyInput("hausdorff_distance needs two nonempty boundaries")
    d_ab = _point_to_polyline(a.r1, a.r2, b.r1, b.r2).max()
    d_ba = _point_to_polyline(b.r1, b.r2, a.r1, a.r2).max()
    return float(max(d_ab, d_ba))


def max_sum_rate(boundary: Boundary) -> RatePoint:
    if not len(boundary):
        raise EmptyInput("Boundary has no points")
    return boundary.points[int(np.argmax(boundary.r1 + boundary.r2))]


def boundary_to_csv(boundary: Boundary, path: str) -> None:
    boundary.to_frame().to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="")
    logger.info(f"Wrote {len(boundary)} points of boundary '{boundary.tag}' to {path}")


def boundary_from_csv(path: str, scenario: Optional[ScenarioTag] = None) -> Boundary:
    frame = pd.read_csv(path)
    missing = [c for c in CSV_COLUMNS if c not in frame.columns]
    if missing:
        raise DomainError(f"{path} lacks columns {missing}")

    def value(row, name):
        v = row.get(name)
        return None if v is None or pd.isna(v) else v

    points = []
    for _, row in frame.iterrows():
        params = RateParams(
            **{k: (None if value(row, k) is None else float(row[k]))
               for k in ("x1", "y1", "x2", "y2", "lambda1", "lambda2")},
            case=value(row, "case"),
        )
        points.append(RatePoint(float(row["r1_bpcu"]), float(row["r2_bpcu"]),
                                DecodingScenario(row["scenario"]), params))
    tag = scenario if scenario is not None else (points[0].scenario if points else UNION)
    return Boundary(tuple(points), tag)
