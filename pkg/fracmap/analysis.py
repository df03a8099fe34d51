"""fracmap.analysis

Post-processing of orbits and diagrams:
- period detection (numerically-periodic orbits: periodic within a tolerance)
- sliding-window segmentation of long transients
- Hausdorff distance profiles between Bifurcative Sets
- first bifurcation point of a p-axis set

Pure functions, no I/O.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from .errors import AnalysisError, NoBifurcationFound
from .solver import Orbit
from .sweep import BifurcativeSet

DEFAULT_TOL = 1e-4
DEFAULT_WINDOW = 400
DEFAULT_STRIDE = 100
DEFAULT_MAX_PERIOD = 64
DEFAULT_SIMILARITY_TOL = 0.005


class VerdictKind(str, Enum):
    FIXED_POINT_LIKE = "fixed_point_like"
    NPO = "npo"
    CHAOTIC_LIKE = "chaotic_like"
    DIVERGED = "diverged"


@dataclass(frozen=True)
class PeriodVerdict:
    """
    kind plus, for periodic kinds, the period and the max mismatch over the
    window. window is the half-open sample range [start, stop) analyzed.
    """

    kind: VerdictKind
    window: Tuple[int, int]
    period: Optional[int] = None
    residual: Optional[float] = None

    @property
    def key(self) -> Tuple[str, Optional[int]]:
        return self.kind.value, self.period

    @property
    def periodic(self) -> bool:
        return self.kind in (VerdictKind.FIXED_POINT_LIKE, VerdictKind.NPO)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "period": self.period,
            "residual": self.residual,
            "window": list(self.window),
        }


def _classify(
    x: np.ndarray, start: int, stop: int, max_period: int, tol: float
) -> PeriodVerdict:
    seg = x[start:stop]
    top = min(int(max_period), seg.shape[0] // 2)
    for m in range(1, top + 1):
        residual = float(np.max(np.abs(seg[m:] - seg[:-m])))
        if residual <= tol:
            kind = VerdictKind.FIXED_POINT_LIKE if m == 1 else VerdictKind.NPO
            return PeriodVerdict(kind, (start, stop), period=m, residual=residual)
    return PeriodVerdict(VerdictKind.CHAOTIC_LIKE, (start, stop))


def detect_period(
    orbit: Orbit,
    window: int = DEFAULT_WINDOW,
    max_period: int = DEFAULT_MAX_PERIOD,
    tol: float = DEFAULT_TOL,
) -> PeriodVerdict:
    """
    Smallest m <= max_period with max |x(n) - x(n-m)| <= tol over the last
    `window` samples (both x(n) and x(n-m) inside the window).
    """
    n = len(orbit)
    if orbit.diverged:
        return PeriodVerdict(VerdictKind.DIVERGED, (0, n))
    window = int(window)
    if window < 2 or window > n:
        raise AnalysisError(f"window={window} needs 2 <= window <= {n} samples")
    if tol < 0:
        raise AnalysisError("tol must be >= 0")
    return _classify(orbit.samples, n - window, n, max_period, tol)


def detect_period_samples(
    samples: Sequence[float],
    max_period: int = DEFAULT_MAX_PERIOD,
    tol: float = DEFAULT_TOL,
) -> PeriodVerdict:
    x = np.asarray(samples, dtype=np.float64)
    if x.shape[0] < 2:
        raise AnalysisError("need at least 2 samples")
    return _classify(x, 0, x.shape[0], max_period, tol)


@dataclass(frozen=True)
class Segment:
    start: int
    stop: int
    verdict: PeriodVerdict

    def to_dict(self) -> Dict[str, Any]:
        d = self.verdict.to_dict()
        d.pop("window")
        d["range"] = [self.start, self.stop]
        return d


def _runs(verdicts: List[PeriodVerdict]) -> List[List[PeriodVerdict]]:
    runs: List[List[PeriodVerdict]] = []
    for v in verdicts:
        if runs and runs[-1][-1].key == v.key:
            runs[-1].append(v)
        else:
            runs.append([v])
    return runs


def _snap(value: float, stride: int) -> int:
    return int(value // stride) * stride


def _boundary(a: List[PeriodVerdict], b: List[PeriodVerdict], stride: int) -> int:
    # a periodic verdict vouches for its whole window, a chaotic one does not
    a_end = a[-1].window[1]
    b_start = b[0].window[0]
    if a[0].periodic and not b[0].periodic:
        return a_end
    if b[0].periodic and not a[0].periodic:
        return b_start
    return _snap((a_end + b_start) / 2, stride)


def segment_transients(
    orbit: Orbit,
    window: int = DEFAULT_WINDOW,
    stride: int = DEFAULT_STRIDE,
    max_period: int = DEFAULT_MAX_PERIOD,
    tol: float = DEFAULT_TOL,
) -> List[Segment]:
    """
    Classify sliding windows [s, s+window) for s = 0, stride, 2*stride, ...
    and merge equal verdicts into maximal segments.

    Boundaries stay on window edges: a periodic run claims every window it was
    seen in, the other side of a periodic/chaotic change starts where it ends.
    A diverged orbit is segmented up to its last finite sample, followed by a
    one-sample diverged segment.
    """
    window, stride = int(window), int(stride)
    if stride < 1:
        raise AnalysisError("stride must be >= 1")
    x = orbit.samples
    n = len(orbit)
    tailing: Optional[Segment] = None
    if orbit.diverged:
        n -= 1
        tailing = Segment(n, n + 1, PeriodVerdict(VerdictKind.DIVERGED, (n, n + 1)))
    if window < 2 or window > n:
        raise AnalysisError(f"window={window} needs 2 <= window <= {n} samples")

    starts = range(0, n - window + 1, stride)
    verdicts = [_classify(x, s, s + window, max_period, tol) for s in starts]
    runs = _runs(verdicts)

    cuts = [0]
    for a, b in zip(runs, runs[1:]):
        cuts.append(_boundary(a, b, stride))
    cuts.append(n)
    # a short chaotic run squeezed between two periodic runs can invert its
    # edges; meet in the middle
    for i in range(1, len(cuts) - 1):
        if cuts[i] < cuts[i - 1]:
            mid = _snap((cuts[i] + cuts[i - 1]) / 2, stride)
            cuts[i - 1] = cuts[i] = max(mid, cuts[i - 2] if i >= 2 else 0)

    segments: List[Segment] = []
    for run, lo, hi in zip(runs, cuts, cuts[1:]):
        if hi <= lo:
            continue
        v = run[0]
        if segments and segments[-1].verdict.key == v.key:
            segments[-1] = Segment(segments[-1].start, hi, segments[-1].verdict)
        else:
            segments.append(Segment(lo, hi, v))
    if tailing is not None:
        segments.append(tailing)
    return segments


def transition_points(segments: Sequence[Segment]) -> List[int]:
    """Sample indices where the verdict changes."""
    return [s.start for s in segments[1:]]


def tail_diameter(samples: Optional[np.ndarray]) -> float:
    if samples is None or samples.shape[0] == 0:
        return float("nan")
    return float(np.max(samples) - np.min(samples))


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two 1-D point sets."""
    d = cdist(a.reshape(-1, 1), b.reshape(-1, 1))
    return float(max(np.max(np.min(d, axis=1)), np.max(np.min(d, axis=0))))


@dataclass(frozen=True, eq=False)
class BSDistanceProfile:
    """
    distance[i]: Hausdorff distance at grid[i]; inf where exactly one side
    diverged (mismatch[i] is True there), 0 where both diverged.
    """

    grid: np.ndarray
    distance: np.ndarray
    mismatch: np.ndarray

    def _finite(
        self, lo: Optional[float] = None, hi: Optional[float] = None
    ) -> np.ndarray:
        sel = ~self.mismatch
        if lo is not None:
            sel &= self.grid >= lo
        if hi is not None:
            sel &= self.grid <= hi
        return self.distance[sel]

    def max_distance(self) -> float:
        d = self._finite()
        return float(d.max()) if d.size else float("nan")

    def mean_distance(
        self, lo: Optional[float] = None, hi: Optional[float] = None
    ) -> float:
        d = self._finite(lo, hi)
        return float(d.mean()) if d.size else float("nan")

    def exceeds(self, tol: float = DEFAULT_SIMILARITY_TOL) -> np.ndarray:
        """Grid values where the two sets are not similar (mismatches included)."""
        return self.grid[self.mismatch | (self.distance > tol)]


def bs_distance(a: BifurcativeSet, b: BifurcativeSet) -> BSDistanceProfile:
    if a.grid.shape != b.grid.shape or not np.array_equal(a.grid, b.grid):
        raise AnalysisError("Bifurcative Sets are on different grids")
    n = a.grid.shape[0]
    dist = np.zeros(n, dtype=np.float64)
    mismatch = np.zeros(n, dtype=bool)
    for i, (ta, tb) in enumerate(zip(a.tails, b.tails)):
        if ta is None and tb is None:
            continue
        if ta is None or tb is None:
            dist[i] = np.inf
            mismatch[i] = True
            continue
        dist[i] = hausdorff(ta, tb)
    return BSDistanceProfile(grid=a.grid, distance=dist, mismatch=mismatch)


def first_bifurcation_point(bs: BifurcativeSet, tol: float = 1e-3) -> float:
    """
    First grid value whose tail diameter exceeds tol after an earlier grid
    value stayed within it (a fixed point splitting into a cycle or band).
    Diverged grid values are skipped.
    """
    seen_flat = False
    for g, tail in zip(bs.grid.tolist(), bs.tails):
        if tail is None:
            continue
        if tail_diameter(tail) <= tol:
            seen_flat = True
        elif seen_flat:
            return float(g)
    raise NoBifurcationFound(f"no bifurcation within the grid for x0={bs.x0!r}")


def classify_tails(
    bs: BifurcativeSet,
    max_period: int = DEFAULT_MAX_PERIOD,
    tol: float = DEFAULT_TOL,
) -> List[Tuple[float, PeriodVerdict]]:
    """One verdict per grid value of a Bifurcative Set."""
    out: List[Tuple[float, PeriodVerdict]] = []
    for g, tail in zip(bs.grid.tolist(), bs.tails):
        if tail is None:
            out.append((float(g), PeriodVerdict(VerdictKind.DIVERGED, (0, 0))))
        else:
            out.append((float(g), detect_period_samples(tail, max_period, tol)))
    return out
