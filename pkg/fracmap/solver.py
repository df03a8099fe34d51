"""fracmap.solver

Orbits of the Caputo-like discrete initial value problem

    x(n) = x(0) + sum_{i=1..n} c[n-i] * f(x(i-1)),   n >= 1

with the normalized kernel weights c from fracmap.kernel. The full memory is
kept: every step is an inner product of the reversed weights with all earlier
map values. An orbit stops at the first sample whose magnitude exceeds the
divergence threshold (or is not finite); that sample is the last one stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import gammaln

from .kernel import KernelWeights, check_order, memory_sum
from .maps import MapSpec

DEFAULT_DIVERGENCE_THRESHOLD = 1e10
REFERENCE_MAX_STEPS = 10_000


class WeightsMismatchError(ValueError):
    """Weights built for another order, or shorter than the horizon."""


@dataclass(frozen=True)
class OrbitProblem:
    q: float
    map: MapSpec
    x0: float
    n_max: int
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD

    def __post_init__(self) -> None:
        check_order(self.q)
        if int(self.n_max) < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max!r}")
        if not self.divergence_threshold > 0:
            raise ValueError("divergence_threshold must be > 0")
        if not math.isfinite(self.x0):
            raise ValueError(f"x0 must be finite, got {self.x0!r}")


@dataclass(frozen=True, eq=False)
class Orbit:
    """
    samples[0] = x0; length n_max+1 unless the orbit diverged, in which case
    samples ends at divergence_index.
    """

    samples: np.ndarray
    diverged: bool = False
    divergence_index: Optional[int] = None

    def __post_init__(self) -> None:
        self.samples.setflags(write=False)

    def __len__(self) -> int:
        return int(self.samples.shape[0])

    @property
    def x0(self) -> float:
        return float(self.samples[0])

    def tail(self, length: int) -> np.ndarray:
        return self.samples[-int(length) :]

    def same_as(self, other: "Orbit") -> bool:
        """Bitwise equality of samples and divergence metadata."""
        return (
            self.diverged == other.diverged
            and self.divergence_index == other.divergence_index
            and self.samples.shape == other.samples.shape
            and self.samples.tobytes() == other.samples.tobytes()
        )


def _escaped(x: float, threshold: float) -> bool:
    return not math.isfinite(x) or abs(x) > threshold


def _finish(x: np.ndarray, n: int, diverged: bool) -> Orbit:
    if diverged:
        return Orbit(samples=x[: n + 1].copy(), diverged=True, divergence_index=n)
    return Orbit(samples=x)


def solve_orbit(problem: OrbitProblem, weights: KernelWeights) -> Orbit:
    n_max = int(problem.n_max)
    if weights.q != float(problem.q):
        raise WeightsMismatchError(
            f"weights built for q={weights.q!r}, problem has q={problem.q!r}"
        )
    if weights.n_max < n_max:
        raise WeightsMismatchError(
            f"weights hold {weights.n_max} entries, horizon needs {n_max}"
        )
    if not weights.all_finite:
        raise WeightsMismatchError("weights contain non-finite entries")

    f = problem.map.as_callable()
    thr = float(problem.divergence_threshold)
    x0 = float(problem.x0)

    # rc[n_max-n:] lines up c[n-1], ..., c[0] with f(x(0)), ..., f(x(n-1))
    rc = weights.reversed()[weights.n_max - n_max :]
    x = np.empty(n_max + 1, dtype=np.float64)
    fx = np.empty(n_max, dtype=np.float64)
    x[0] = x0

    for n in range(1, n_max + 1):
        fx[n - 1] = f(x[n - 1])
        xn = x0 + memory_sum(rc[n_max - n :], fx[:n])
        x[n] = xn
        if _escaped(xn, thr):
            return _finish(x, n, True)
    return _finish(x, n_max, False)


def solve_orbit_reference(problem: OrbitProblem) -> Orbit:
    """
    Independent oracle: recompute the gamma ratios with log-gamma inside the
    double loop, step by step, instead of reusing a precomputed table.

    O(n_max^2) gamma evaluations; desk-scale horizons only.
    """
    n_max = int(problem.n_max)
    if n_max > REFERENCE_MAX_STEPS:
        raise ValueError(
            f"reference solver is limited to n_max <= {REFERENCE_MAX_STEPS}, "
            f"got {n_max}"
        )
    q = float(problem.q)
    lgq = gammaln(q)
    f = problem.map.as_callable()
    thr = float(problem.divergence_threshold)
    x0 = float(problem.x0)

    x = np.empty(n_max + 1, dtype=np.float64)
    fx = np.empty(n_max, dtype=np.float64)
    x[0] = x0

    for n in range(1, n_max + 1):
        fx[n - 1] = f(x[n - 1])
        # k = n - i for i = 1..n
        k = np.arange(n - 1, -1, -1, dtype=np.float64)
        w = np.exp(gammaln(k + q) - gammaln(k + 1.0) - lgq)
        w[-1] = 1.0
        xn = x0 + memory_sum(w, fx[:n])
        x[n] = xn
        if _escaped(xn, thr):
            return _finish(x, n, True)
    return _finish(x, n_max, False)


def solve_iolm(
    p: float,
    x0: float,
    n_max: int,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
) -> Orbit:
    """Classic integer-order logistic map x(n+1) = p*x(n)*(1-x(n))."""
    n_max = int(n_max)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max!r}")
    p = float(p)
    x = np.empty(n_max + 1, dtype=np.float64)
    x[0] = float(x0)
    xn = x[0]
    for n in range(1, n_max + 1):
        xn = p * xn * (1.0 - xn)
        x[n] = xn
        if _escaped(xn, divergence_threshold):
            return _finish(x, n, True)
    return _finish(x, n_max, False)


def solve_difference_form(problem: OrbitProblem) -> Orbit:
    """
    One-step recursion x(n) = x(n-1) + f(x(n-1)): the q = 1 limit of the
    fractional scheme, used as its oracle.
    """
    n_max = int(problem.n_max)
    f = problem.map.as_callable()
    thr = float(problem.divergence_threshold)
    x = np.empty(n_max + 1, dtype=np.float64)
    x[0] = float(problem.x0)
    xn = x[0]
    for n in range(1, n_max + 1):
        xn = xn + f(xn)
        x[n] = xn
        if _escaped(xn, thr):
            return _finish(x, n, True)
    return _finish(x, n_max, False)
