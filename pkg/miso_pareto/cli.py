"""
Command-line front end.

Computes the requested rate region boundaries for one channel and writes one
CSV per boundary, a gnuplot script, an HTML figure and a meta.json record.
With --benchmark it instead times the fast methods against the grid-search
oracles.
"""

import argparse
import json
import logging
import os
import platform
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import plotly

from . import __version__
from .config import SOLVER_CONFIG
from .errors import DomainError, InfeasibleTarget, MisoParetoError
from .layouts.region_plot import write_gnuplot_script, write_region_html
from .services.benchmark import run_benchmark
from .services.channel import (
    PRESETS,
    RAYLEIGH_PRNG,
    ChannelConstants,
    ChannelRealization,
    derive_constants,
    load_channel_file,
    load_constants_file,
    preset_constants,
    random_rayleigh,
    save_channel_file,
)
from .services.pareto import Boundary, boundary_to_csv
from .services.region import file_stem, normalize_method, region_service

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4

DEFAULT_SCENARIOS = ("nn", "dn", "nd", "dd", "union")
SOURCES = ("preset", "constants", "constants_file", "channels", "rayleigh")


@dataclass
class RunSpec:
    """One invocation: where the channel comes from and what to compute."""
    source: str
    source_value: str
    scenarios: Tuple[str, ...] = DEFAULT_SCENARIOS
    M: int = field(default_factory=lambda: SOLVER_CONFIG.grid_points)
    epsilon: float = field(default_factory=lambda: SOLVER_CONFIG.epsilon)
    out_dir: str = field(default_factory=lambda: SOLVER_CONFIG.output_dir)
    benchmark: bool = False
    parallel: bool = False
    threads: Optional[int] = None

    def __post_init__(self):
        if self.source not in SOURCES:
            raise DomainError(f"Unknown channel source {self.source!r}")
        self.scenarios = tuple(normalize_method(s) for s in self.scenarios)
        if not self.scenarios:
            raise DomainError("At least one scenario is required")
        if self.M < 2:
            raise DomainError(f"M must be >= 2, got {self.M}")
        if not self.epsilon > 0:
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")

    def resolve_channel(self) -> Tuple[ChannelConstants, Optional[ChannelRealization], Dict]:
        """Channel constants, the realization when one exists, and a description for meta.json."""
        info = {"source": self.source, "value": self.source_value}
        if self.source == "preset":
            return preset_constants(self.source_value), None, info
        if self.source == "constants":
            values = _parse_floats(self.source_value, "--constants")
            if len(values) not in (6, 8):
                raise DomainError("--constants expects g11,g12,g21,g22,k1,k2[,s1,s2]")
            if len(values) == 6:
                values += [SOLVER_CONFIG.sigma_sq_default] * 2
                info["sigma_sq_assumed"] = SOLVER_CONFIG.sigma_sq_default
            return ChannelConstants.from_primary(*values), None, info
        if self.source == "constants_file":
            return load_constants_file(self.source_value), None, info
        if self.source == "channels":
            ch = load_channel_file(self.source_value)
        else:
            values = _parse_floats(self.source_value, "--rayleigh")
            if len(values) != 2 or values[0] != int(values[0]) or values[1] != int(values[1]):
                raise DomainError("--rayleigh expects <nT>,<seed> as integers")
            ch = random_rayleigh(int(values[0]), int(values[1]))
            info["prng"] = RAYLEIGH_PRNG
        return derive_constants(ch), ch, info


def _parse_floats(text: str, flag: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"{flag}: cannot parse {text!r} as comma-separated numbers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="miso-pareto",
        description="Pareto boundaries of the two-user MISO interference channel with SIC receivers",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=sorted(PRESETS), help="Built-in channel constants")
    source.add_argument("--constants", metavar="g11,g12,g21,g22,k1,k2,s1,s2",
                        help="Inline channel constants (noise variances optional)")
    source.add_argument("--constants-file", metavar="FILE", help="JSON file of channel constants")
    source.add_argument("--channels", metavar="FILE", help="JSON file of channel vectors")
    source.add_argument("--rayleigh", metavar="nT,seed", help="Random Rayleigh realization")

    parser.add_argument("--scenario", default=",".join(DEFAULT_SCENARIOS),
                        help="Comma-separated list of nn, nn-closed, dn, nd, dd, union, oracle:<s>")
    parser.add_argument("--M", type=int, default=SOLVER_CONFIG.grid_points, help="Grid points")
    parser.add_argument("--epsilon", type=float, default=SOLVER_CONFIG.epsilon,
                        help="Gradient ascent tolerance")
    parser.add_argument("--out", default=SOLVER_CONFIG.output_dir, help="Output directory")
    parser.add_argument("--benchmark", action="store_true", help="Time methods against the oracles")
    parser.add_argument("--parallel", action="store_true", help="Parallel sweeps and scenarios")
    parser.add_argument("--log-level", default=SOLVER_CONFIG.log_level,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> Tuple[RunSpec, str]:
    args = build_parser().parse_args(argv)
    for name in SOURCES:
        value = getattr(args, name)
        if value is not None:
            source, source_value = name, value
            break
    spec = RunSpec(
        source=source,
        source_value=source_value,
        scenarios=tuple(s for s in args.scenario.split(",") if s.strip()),
        M=args.M,
        epsilon=args.epsilon,
        out_dir=args.out,
        benchmark=args.benchmark,
        parallel=args.parallel,
    )
    return spec, args.log_level


def _versions() -> Dict[str, str]:
    return {
        "miso_pareto": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "pandas": pd.__version__,
        "plotly": plotly.__version__,
    }


def _write_meta(path: str, spec: RunSpec, constants: ChannelConstants, channel_info: Dict,
                extra: Dict) -> None:
    meta = {
        "channel": channel_info,
        "constants": constants.to_dict(),
        "assumptions": {"sigma_sq_default": SOLVER_CONFIG.sigma_sq_default},
        "M": spec.M,
        "epsilon": spec.epsilon,
        "parallel": spec.parallel,
        "versions": _versions(),
        **extra,
    }
    with open(path, "w") as f:
        json.dump(meta, f, indent=2, default=str)


def run(spec: RunSpec) -> Dict[str, Boundary]:
    """
    Compute every requested boundary and write the output files.

    Returns:
        method key -> Boundary, in request order
    """
    constants, ch, channel_info = spec.resolve_channel()
    os.makedirs(spec.out_dir, exist_ok=True)
    if ch is not None:
        save_channel_file(ch, os.path.join(spec.out_dir, "channels.json"))

    start = time.perf_counter()
    boundaries = region_service.compute_many(spec.scenarios, constants, spec.M, spec.epsilon,
                                             parallel=spec.parallel, threads=spec.threads)

    csv_files = {}
    for key, boundary in boundaries.items():
        path = os.path.join(spec.out_dir, f"boundary_{file_stem(key)}.csv")
        boundary_to_csv(boundary, path)
        csv_files[key] = path

    write_gnuplot_script(csv_files, os.path.join(spec.out_dir, "region.gp"))
    write_region_html(boundaries, os.path.join(spec.out_dir, "region.html"))
    _write_meta(os.path.join(spec.out_dir, "meta.json"), spec, constants, channel_info, {
        "scenarios": list(spec.scenarios),
        "timings_s": {k: b.meta.get("wall_time_s") for k, b in boundaries.items()},
        "points": {k: len(b) for k, b in boundaries.items()},
        "total_wall_time_s": time.perf_counter() - start,
    })
    logger.info(f"Wrote {len(boundaries)} boundaries to {spec.out_dir}")
    return boundaries


def benchmark(spec: RunSpec):
    """Time the fast methods against their oracles and write benchmark.csv / meta.json."""
    constants, _, channel_info = spec.resolve_channel()
    os.makedirs(spec.out_dir, exist_ok=True)
    report = run_benchmark(constants, SOLVER_CONFIG.benchmark_sizes, spec.epsilon)
    report.timings.to_csv(os.path.join(spec.out_dir, "benchmark.csv"), index=False)
    _write_meta(os.path.join(spec.out_dir, "meta.json"), spec, constants, channel_info, {
        "benchmark": {"exponents": report.exponents, "speedups": report.speedups,
                      "reference_sizes": report.reference_sizes,
                      "checks": report.checks, "passed": report.passed},
    })
    for method, exponent in sorted(report.exponents.items()):
        logger.info(f"{method:>10}: growth exponent {exponent:.2f}")
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        spec, log_level = parse_args(argv)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID

    logging.basicConfig(level=getattr(logging, log_level),
                        format='%(asctime)s - %(levelname)s - %(message)s')
    try:
        if spec.benchmark:
            benchmark(spec)
        else:
            run(spec)
    except InfeasibleTarget as e:
        logger.error(f"Infeasible target: {e}")
        return EXIT_INFEASIBLE
    except (DomainError, ValueError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_INVALID
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_IO
    except MisoParetoError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
