"""
fracmap public API.

- build_weights(q, n_max)        -> memory-kernel weights of the fractional iteration
- solve_orbit(problem, weights)  -> one orbit with the full memory sum
- run_sweep(config, threads)     -> bifurcation diagram (one Bifurcative Set per x0)
- detect_period / segment_transients / bs_distance -> post-processing
"""

from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("fracmap-cli")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0+unknown"

from .analysis import (  # noqa: E402
    bs_distance,
    detect_period,
    first_bifurcation_point,
    segment_transients,
)
from .kernel import KernelWeights, build_weights  # noqa: E402
from .maps import MapFamily, MapSpec  # noqa: E402
from .solver import Orbit, OrbitProblem, solve_orbit  # noqa: E402
from .sweep import BifurcationDiagram, SweepConfig, run_sweep  # noqa: E402

__all__ = [
    "__version__",
    "BifurcationDiagram",
    "KernelWeights",
    "MapFamily",
    "MapSpec",
    "Orbit",
    "OrbitProblem",
    "SweepConfig",
    "bs_distance",
    "build_weights",
    "detect_period",
    "first_bifurcation_point",
    "run_sweep",
    "segment_transients",
    "solve_orbit",
]
