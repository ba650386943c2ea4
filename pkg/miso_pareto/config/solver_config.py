# miso_pareto/config/solver_config.py
import os
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Optional, Tuple

import yaml

from ..errors import ConfigError


@dataclass(frozen=True)
class SolverConfig:
    """Numerical and output settings shared by every boundary method"""

    # Sampling
    grid_points: int = 500
    epsilon: float = 5e-5

    # Projected gradient ascent with backtracking
    initial_step_fraction: float = 0.1
    backtrack_shrink: float = 0.5
    sufficient_increase: float = 0.3
    max_iterations: int = 10_000
    max_backtracks: int = 60
    radicand_nudge: float = 1e-12

    # Tolerances
    kappa_margin: float = 1e-9
    root_tolerance: float = 1e-9

    # Execution
    threads: int = os.cpu_count() or 1
    sigma_sq_default: float = 1.0
    output_dir: str = "results"
    log_level: str = "INFO"

    # Benchmark
    benchmark_sizes: Tuple[int, ...] = (125, 250, 500, 1000)
    oracle_3d_max_points: int = 250

    def __post_init__(self):
        if self.grid_points < 2:
            raise ConfigError(f"grid_points must be >= 2, got {self.grid_points}")
        if self.epsilon <= 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if not 0 < self.backtrack_shrink < 1:
            raise ConfigError(f"backtrack_shrink must lie in (0, 1), got {self.backtrack_shrink}")
        if not 0 < self.sufficient_increase < 1:
            raise ConfigError(f"sufficient_increase must lie in (0, 1), got {self.sufficient_increase}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if self.sigma_sq_default <= 0:
            raise ConfigError(f"sigma_sq_default must be positive, got {self.sigma_sq_default}")
        if self.root_tolerance < 0:
            raise ConfigError(f"root_tolerance must be nonnegative, got {self.root_tolerance}")


_ENV_OVERRIDES = {
    "MISO_PARETO_M": ("grid_points", int),
    "MISO_PARETO_EPSILON": ("epsilon", float),
    "MISO_PARETO_THREADS": ("threads", int),
    "MISO_PARETO_OUTPUT_DIR": ("output_dir", str),
    "MISO_PARETO_LOG_LEVEL": ("log_level", str),
}


def _read_yaml(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a mapping at top level")
    # Allow the settings to live under a 'solver' section
    return data.get("solver", data)


def load_solver_config(path: Optional[str] = None) -> SolverConfig:
    """Load solver configuration from an optional YAML file and environment variables.

    Environment variables take precedence over the file.
    """
    values: Dict[str, Any] = {}
    known = {f.name for f in fields(SolverConfig)}

    path = path or os.getenv("MISO_PARETO_CONFIG")
    if path:
        file_values = _read_yaml(path)
        unknown = set(file_values) - known
        if unknown:
            raise ConfigError(f"Unknown solver settings in {path}: {sorted(unknown)}")
        values.update(file_values)
        if "benchmark_sizes" in values:
            values["benchmark_sizes"] = tuple(int(m) for m in values["benchmark_sizes"])

    for env_name, (field_name, cast) in _ENV_OVERRIDES.items():
        raw = os.getenv(env_name)
        if raw is None or raw == "":
            continue
        try:
            values[field_name] = cast(raw)
        except ValueError as e:
            raise ConfigError(f"{env_name}={raw!r} is not a valid {cast.__name__}") from e

    return replace(SolverConfig(), **values)


# Global configuration instance
SOLVER_CONFIG = load_solver_config()
