"""fracmap.repro

Named figure presets. Each preset is data only: a list of jobs (a single
orbit, a kernel-sum table, or a sweep) that the CLI runs and writes out.

Colors follow the order of the initial conditions: green, blue, red,
magenta, cyan.

fig1  FOLM series q=0.3, p=2.4 from x0 0.5 and 0.1, plus transient segments
fig2  kernel sums, direct vs log-gamma vs recurrence, q=0.5, n <= 250
fig3  IOLM p=3.2 2-cycle vs FOLM q=0.25, p=1.8 NPO, x0=0.1
fig4  single-x0 BDs vs p for q in {0.1, 0.5} over [-2.5, 2.5], q=1 over [-3, 3]
fig5  three-x0 BDs: IOLM (x0 0.5, 0.9, 0.1) and q=1 (x0 1.01, 0.5, 0.1)
fig6  three-x0 BSs, q=0.5 along p and p=2.4 along q, n_max 2500
fig7  the q-axis BSs of fig6 at n_max 7500
fig8  five-x0 BDs: p=2.2 along q, q=0.3 along p
fig9  Puu a=1.27, four positive x0 along q (upper half)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple, Union

from .maps import MapFamily
from .sweep import (
    DEFAULT_N_MAX,
    DEFAULT_POINTS,
    Scheme,
    SweepAxis,
    SweepConfig,
    parse_grid,
    unit_grid,
)

FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9")

X0_THREE = (1.01, 0.5, 0.1)
X0_IOLM = (0.5, 0.9, 0.1)
X0_FIVE = (0.1, 0.5, 0.95, 0.7, 0.85)
X0_PUU = (0.2, 0.5, 0.1, 0.4)

IOLM_SERIES_STEPS = 1000
# the periodic-looking stretch of the q=0.3 series matches period 5 only to ~1e-2
FIG1_SEGMENT_TOL = 1e-2


@dataclass(frozen=True)
class OrbitJob:
    name: str
    family: MapFamily
    param: float
    q: float
    x0: float
    n_max: int
    scheme: Scheme = Scheme.FRACTIONAL
    segment: bool = False
    # periodicity tolerance for segmenting; None uses the run's analysis.tol
    segment_tol: Optional[float] = None
    title: str = ""


@dataclass(frozen=True)
class KernelSumsJob:
    name: str
    q: float
    n_max: int
    title: str = ""


@dataclass(frozen=True)
class SweepJob:
    name: str
    config: SweepConfig
    title: str = ""


Job = Union[OrbitJob, KernelSumsJob, SweepJob]


@dataclass(frozen=True)
class Preset:
    figure: str
    title: str
    jobs: Tuple[Job, ...]
    notes: str = ""


def _grid(axis: SweepAxis, lo: float, hi: float, points: int) -> Tuple[float, ...]:
    if axis is SweepAxis.Q:
        return unit_grid(points)
    return parse_grid(f"{lo!r}:{hi!r}:{int(points)}")


def _sweep(
    name: str,
    axis: SweepAxis,
    fixed: float,
    x0s: Tuple[float, ...],
    points: int,
    n_max: int,
    *,
    lo: float = 0.0,
    hi: float = 1.0,
    family: MapFamily = MapFamily.LOGISTIC,
    scheme: Scheme = Scheme.FRACTIONAL,
    title: str = "",
) -> SweepJob:
    return SweepJob(
        name=name,
        config=SweepConfig(
            axis=axis,
            grid=_grid(axis, lo, hi, points),
            fixed_value=float(fixed),
            initial_conditions=tuple(float(x) for x in x0s),
            n_max=int(n_max),
            family=family,
            scheme=scheme,
        ),
        title=title,
    )


def _fig1(n_max: int, points: int) -> Preset:
    jobs = (
        OrbitJob(
            name="series_q0.3_p2.4",
            family=MapFamily.LOGISTIC,
            param=2.4,
            q=0.3,
            x0=0.5,
            n_max=n_max,
            segment=True,
            title="FOLM time series, q=0.3, p=2.4, x0=0.5",
        ),
        OrbitJob(
            name="series_q0.3_p2.4_x0.1",
            family=MapFamily.LOGISTIC,
            param=2.4,
            q=0.3,
            x0=0.1,
            n_max=n_max,
            segment=True,
            segment_tol=FIG1_SEGMENT_TOL,
            title="FOLM time series, q=0.3, p=2.4, x0=0.1",
        ),
    )
    return Preset(
        "fig1",
        "FOLM time series and its transients",
        jobs,
        notes=(
            "x0 assumed. From x0=0.5 every window is chaotic-like. From x0=0.1 a "
            "period-5 NPO run sits between two chaotic runs at "
            f"tol={FIG1_SEGMENT_TOL:g}"
        ),
    )


def _fig2(n_max: int, points: int) -> Preset:
    job = KernelSumsJob(
        "kernel_sums_q0.5", 0.5, n_max, title="Partial kernel sums by evaluation path"
    )
    return Preset("fig2", "Kernel sums: direct gamma overflow", (job,))


def _fig3(n_max: int, points: int) -> Preset:
    iolm = OrbitJob(
        name="iolm_p3.2",
        family=MapFamily.LOGISTIC,
        param=3.2,
        q=1.0,
        x0=0.1,
        n_max=IOLM_SERIES_STEPS,
        scheme=Scheme.INTEGER,
        segment=True,
        title="IOLM, p=3.2",
    )
    folm = OrbitJob(
        name="folm_q0.25_p1.8",
        family=MapFamily.LOGISTIC,
        param=1.8,
        q=0.25,
        x0=0.1,
        n_max=n_max,
        segment=True,
        title="FOLM, q=0.25, p=1.8",
    )
    return Preset(
        "fig3", "IOLM 2-cycle vs FOLM numerically-periodic orbit", (iolm, folm)
    )


def _fig4(n_max: int, points: int) -> Preset:
    jobs = tuple(
        _sweep(
            f"bd_p_q{q}",
            SweepAxis.P,
            q,
            (0.5,),
            points,
            n_max,
            lo=lo,
            hi=hi,
            title=f"BD vs p, q={q}",
        )
        for q, lo, hi in ((0.1, -2.5, 2.5), (0.5, -2.5, 2.5), (1.0, -3.0, 3.0))
    )
    return Preset("fig4", "Single-x0 BDs vs p for three orders", jobs)


def _fig5(n_max: int, points: int) -> Preset:
    iolm = _sweep(
        "bd_iolm",
        SweepAxis.P,
        1.0,
        X0_IOLM,
        points,
        n_max,
        lo=2.5,
        hi=4.0,
        scheme=Scheme.INTEGER,
        title="IOLM BD vs p",
    )
    folm = _sweep(
        "bd_q1",
        SweepAxis.P,
        1.0,
        X0_THREE,
        points,
        n_max,
        lo=1.3,
        hi=2.5,
        title="FOLM BD vs p, q=1",
    )
    return Preset(
        "fig5",
        "Three-x0 BDs of the IOLM and of the q=1 FOLM",
        (iolm, folm),
        notes="IOLM p range [2.5, 4.0] assumed",
    )


def _fig6(n_max: int, points: int) -> Preset:
    along_p = _sweep(
        "bs_p_q0.5",
        SweepAxis.P,
        0.5,
        X0_THREE,
        points,
        n_max,
        lo=1.3,
        hi=2.5,
        title="BSs vs p, q=0.5",
    )
    along_q = _sweep(
        "bs_q_p2.4", SweepAxis.Q, 2.4, X0_THREE, points, n_max, title="BSs vs q, p=2.4"
    )
    return Preset(
        "fig6", "Three-x0 Bifurcative Sets along p and q", (along_p, along_q)
    )


def _fig7(n_max: int, points: int) -> Preset:
    job = _sweep(
        "bs_q_p2.4", SweepAxis.Q, 2.4, X0_THREE, points, n_max, title="BSs vs q, p=2.4"
    )
    return Preset("fig7", "Three-x0 Bifurcative Sets along q, long horizon", (job,))


def _fig8(n_max: int, points: int) -> Preset:
    along_q = _sweep(
        "bd_q_p2.2", SweepAxis.Q, 2.2, X0_FIVE, points, n_max, title="BD vs q, p=2.2"
    )
    along_p = _sweep(
        "bd_p_q0.3",
        SweepAxis.P,
        0.3,
        X0_FIVE,
        points,
        n_max,
        lo=1.3,
        hi=2.5,
        title="BD vs p, q=0.3",
    )
    return Preset(
        "fig8",
        "Five-x0 BDs",
        (along_q, along_p),
        notes="p range [1.3, 2.5] for the q=0.3 panel is a choice",
    )


def _fig9(n_max: int, points: int) -> Preset:
    job = _sweep(
        "bd_puu_a1.27",
        SweepAxis.Q,
        1.27,
        X0_PUU,
        points,
        n_max,
        family=MapFamily.PUU,
        title="Puu BD vs q, a=1.27",
    )
    return Preset(
        "fig9",
        "Puu map, four-x0 BD (upper half)",
        (job,),
        notes="symmetric about x=0; only positive x0 are run",
    )


PresetBuilder = Callable[[int, int], Preset]

# figure id -> (builder, default n_max)
PRESETS: Dict[str, Tuple[PresetBuilder, int]] = {
    "fig1": (_fig1, DEFAULT_N_MAX),
    "fig2": (_fig2, 250),
    "fig3": (_fig3, 3500),
    "fig4": (_fig4, DEFAULT_N_MAX),
    "fig5": (_fig5, DEFAULT_N_MAX),
    "fig6": (_fig6, DEFAULT_N_MAX),
    "fig7": (_fig7, 7500),
    "fig8": (_fig8, DEFAULT_N_MAX),
    "fig9": (_fig9, DEFAULT_N_MAX),
}


def build_preset(
    figure_id: str, n_max: Optional[int] = None, points: Optional[int] = None
) -> Preset:
    """
    Jobs for one figure. n_max overrides the horizon of every orbit and sweep
    job except fig3's IOLM series; points overrides every sweep's grid size.
    """
    key = str(figure_id).strip().lower()
    if key not in PRESETS:
        raise KeyError(
            f"unknown figure {figure_id!r} (expected one of {', '.join(FIGURES)})"
        )
    builder, default_n = PRESETS[key]
    n = int(n_max) if n_max else default_n
    pts = int(points) if points else DEFAULT_POINTS
    return builder(n, pts)
