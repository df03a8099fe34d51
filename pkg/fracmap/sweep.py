"""fracmap.sweep

Bifurcation diagrams as collections of Bifurcative Sets.

A sweep runs one orbit per (grid value, initial condition) and keeps the last
tail_length samples of each. All orbits from one initial condition form that
condition's Bifurcative Set; the diagram is the keyed collection of sets over
a shared grid.

Parallel runs fan the (grid value, x0) tasks out to a process pool; results
land in preallocated slots by index, so completion order never matters and
the output is identical for any worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .errors import ConfigError
from .kernel import KernelWeights, weights_recurrence
from .maps import MapFamily, MapSpec
from .solver import (
    DEFAULT_DIVERGENCE_THRESHOLD,
    OrbitProblem,
    solve_iolm,
    solve_orbit,
)

DEFAULT_N_MAX = 2500
DEFAULT_TAIL = 200
DEFAULT_POINTS = 600

Tail = Optional[np.ndarray]


class SweepAxis(str, Enum):
    P = "p"
    Q = "q"


class Scheme(str, Enum):
    FRACTIONAL = "fractional"
    INTEGER = "integer"


def parse_grid(text: str) -> Tuple[float, ...]:
    """'lo:hi:points' -> inclusive, evenly spaced grid."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ConfigError([f"grid {text!r} must look like lo:hi:points"])
    try:
        lo, hi = float(parts[0]), float(parts[1])
        points = int(parts[2])
    except ValueError:
        raise ConfigError([f"grid {text!r} must look like lo:hi:points"]) from None
    if points < 1:
        raise ConfigError([f"grid {text!r}: points must be >= 1"])
    if points == 1:
        return (lo,)
    return tuple(float(v) for v in np.linspace(lo, hi, points))


def unit_grid(points: int) -> Tuple[float, ...]:
    """k/points for k = 1..points: the q axis, open at 0 and closed at 1."""
    points = int(points)
    if points < 1:
        raise ConfigError([f"points must be >= 1, got {points}"])
    return tuple(float(k) / points for k in range(1, points + 1))


@dataclass(frozen=True)
class SweepConfig:
    axis: SweepAxis
    grid: Tuple[float, ...]
    fixed_value: float
    initial_conditions: Tuple[float, ...]
    n_max: int = DEFAULT_N_MAX
    tail_length: int = DEFAULT_TAIL
    family: MapFamily = MapFamily.LOGISTIC
    scheme: Scheme = Scheme.FRACTIONAL
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD

    def errors(self) -> List[str]:
        errs: List[str] = []
        grid = list(self.grid)
        if not grid:
            errs.append("sweep.grid must be non-empty")
        elif any(not math.isfinite(g) for g in grid):
            errs.append("sweep.grid values must be finite")
        elif any(b <= a for a, b in zip(grid, grid[1:])):
            errs.append("sweep.grid must be strictly increasing")
        if self.axis is SweepAxis.Q:
            if any(not (0.0 < g <= 1.0) for g in grid):
                errs.append("sweep.grid values must lie in (0, 1] along the q axis")
        elif self.scheme is Scheme.FRACTIONAL and not (0.0 < self.fixed_value <= 1.0):
            errs.append("orbit.q must be in (0, 1]")
        if not self.initial_conditions:
            errs.append("orbit.x0 must list at least one initial condition")
        elif any(not math.isfinite(x) for x in self.initial_conditions):
            errs.append("orbit.x0 values must be finite")
        elif len(set(self.initial_conditions)) != len(self.initial_conditions):
            errs.append("orbit.x0 values must be distinct")
        if self.n_max < 1:
            errs.append("orbit.n_max must be >= 1")
        if not (1 <= self.tail_length < self.n_max):
            errs.append("sweep.tail must be >= 1 and < orbit.n_max")
        if not self.divergence_threshold > 0:
            errs.append("orbit.divergence_threshold must be > 0")
        if self.scheme is Scheme.INTEGER:
            if self.axis is not SweepAxis.P:
                errs.append("sweep.scheme=integer only sweeps the p axis")
            if self.family is not MapFamily.LOGISTIC:
                errs.append("sweep.scheme=integer only runs the logistic map")
        if self.family is MapFamily.CUSTOM:
            errs.append("map.family=custom cannot be swept from a config")
        return errs

    def check(self) -> "SweepConfig":
        errs = self.errors()
        if errs:
            raise ConfigError(errs)
        return self

    def point(self, grid_value: float) -> Tuple[float, float]:
        """(q, param) at one grid value."""
        if self.axis is SweepAxis.P:
            return float(self.fixed_value), float(grid_value)
        return float(grid_value), float(self.fixed_value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "axis": self.axis.value,
            "grid": list(self.grid),
            "fixed_value": self.fixed_value,
            "initial_conditions": list(self.initial_conditions),
            "n_max": self.n_max,
            "tail_length": self.tail_length,
            "family": self.family.value,
            "scheme": self.scheme.value,
            "divergence_threshold": self.divergence_threshold,
        }


@dataclass(frozen=True, eq=False)
class BifurcativeSet:
    """Tails from one initial condition; tails[i] is None where the orbit diverged."""

    x0: float
    grid: np.ndarray
    tails: Tuple[Tail, ...]

    def __post_init__(self) -> None:
        if len(self.tails) != self.grid.shape[0]:
            raise ValueError("one tail entry per grid value is required")

    @property
    def diverged(self) -> np.ndarray:
        return np.array([t is None for t in self.tails], dtype=bool)

    def same_as(self, other: "BifurcativeSet") -> bool:
        if self.x0 != other.x0 or not np.array_equal(self.grid, other.grid):
            return False
        for a, b in zip(self.tails, other.tails):
            if (a is None) != (b is None):
                return False
            if a is not None and a.tobytes() != b.tobytes():
                return False
        return True


@dataclass(frozen=True, eq=False)
class BifurcationDiagram:
    config: Optional[SweepConfig]
    sets: Tuple[BifurcativeSet, ...]

    @property
    def grid(self) -> np.ndarray:
        return self.sets[0].grid

    @property
    def initial_conditions(self) -> Tuple[float, ...]:
        return tuple(s.x0 for s in self.sets)

    @property
    def all_diverged(self) -> bool:
        return all(bool(s.diverged.all()) for s in self.sets)

    def set_for(self, x0: float) -> BifurcativeSet:
        for s in self.sets:
            if s.x0 == float(x0):
                return s
        raise KeyError(f"no Bifurcative Set for x0={x0!r}")

    def same_as(self, other: "BifurcationDiagram") -> bool:
        return len(self.sets) == len(other.sets) and all(
            a.same_as(b) for a, b in zip(self.sets, other.sets)
        )

    def to_frame(self) -> pd.DataFrame:
        """Long format: one row per tail sample, one marker row per diverged orbit."""
        cols: Dict[str, list] = {
            "grid_value": [],
            "x0": [],
            "sample": [],
            "diverged": [],
        }
        for gi, g in enumerate(self.grid.tolist()):
            for s in self.sets:
                tail = s.tails[gi]
                if tail is None:
                    cols["grid_value"].append(g)
                    cols["x0"].append(s.x0)
                    cols["sample"].append(np.nan)
                    cols["diverged"].append(True)
                    continue
                n = tail.shape[0]
                cols["grid_value"].extend([g] * n)
                cols["x0"].extend([s.x0] * n)
                cols["sample"].extend(tail.tolist())
                cols["diverged"].extend([False] * n)
        return pd.DataFrame(cols)


def weights_cache(config: SweepConfig) -> Dict[float, KernelWeights]:
    """One table along p (q is fixed), one per grid value along q."""
    if config.scheme is Scheme.INTEGER:
        return {}
    if config.axis is SweepAxis.P:
        qs: Sequence[float] = [float(config.fixed_value)]
    else:
        qs = [float(g) for g in config.grid]
    return {q: weights_recurrence(q, config.n_max) for q in qs}


def _run_point(
    config: SweepConfig, cache: Dict[float, KernelWeights], gi: int, xi: int
) -> Tail:
    q, param = config.point(config.grid[gi])
    x0 = float(config.initial_conditions[xi])
    if config.scheme is Scheme.INTEGER:
        orbit = solve_iolm(param, x0, config.n_max, config.divergence_threshold)
    else:
        problem = OrbitProblem(
            q=q,
            map=MapSpec(config.family, param),
            x0=x0,
            n_max=config.n_max,
            divergence_threshold=config.divergence_threshold,
        )
        orbit = solve_orbit(problem, cache[q])
    if orbit.diverged:
        return None
    return orbit.tail(config.tail_length).copy()


_WORKER: Dict[str, Any] = {}


def _init_worker(config: SweepConfig, cache: Dict[float, KernelWeights]) -> None:
    _WORKER["config"] = config
    _WORKER["cache"] = cache


def _run_task(task: Tuple[int, int]) -> Tail:
    return _run_point(_WORKER["config"], _WORKER["cache"], task[0], task[1])


def resolve_threads(threads: Union[int, str, None]) -> int:
    if threads is None:
        return 1
    if isinstance(threads, str):
        if threads.strip().lower() == "auto":
            return max(1, os.cpu_count() or 1)
        threads = int(threads)
    return max(1, int(threads))


def run_sweep(
    config: SweepConfig, threads: Union[int, str, None] = 1
) -> BifurcationDiagram:
    config.check()
    workers = resolve_threads(threads)
    cache = weights_cache(config)

    n_grid = len(config.grid)
    n_x0 = len(config.initial_conditions)
    tasks = [(gi, xi) for gi in range(n_grid) for xi in range(n_x0)]
    slots: List[List[Tail]] = [[None] * n_grid for _ in range(n_x0)]

    if workers == 1 or len(tasks) == 1:
        results = [_run_point(config, cache, gi, xi) for gi, xi in tasks]
    else:
        chunk = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_init_worker,
            initargs=(config, cache),
        ) as ex:
            results = list(ex.map(_run_task, tasks, chunksize=chunk))

    for (gi, xi), tail in zip(tasks, results):
        slots[xi][gi] = tail

    grid = np.asarray(config.grid, dtype=np.float64)
    grid.setflags(write=False)
    sets = tuple(
        BifurcativeSet(x0=float(x0), grid=grid, tails=tuple(slots[xi]))
        for xi, x0 in enumerate(config.initial_conditions)
    )
    return BifurcationDiagram(config=config, sets=sets)
