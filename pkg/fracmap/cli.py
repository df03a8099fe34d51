#!/usr/bin/env python
"""fracmap.cli

Command-line front end.

    fracmap orbit --map logistic --param 2.4 --q 0.3 --x0 0.5 --n-max 2500
    fracmap bifurcation --axis q --param 2.4 --x0 1.01,0.5,0.1 --threads auto
    fracmap analyze --input out/orbit_logistic_q0.3_p2.4_x00.5.csv
    fracmap compare-bs --input out/bifurcation_p.csv --x0 0.5,0.1
    fracmap kernel-check --q 0.5 --n-max 250
    fracmap repro fig6 --n-max 5000

Exit codes: 0 ok, 1 config error, 2 I/O error, 3 every orbit diverged.
Messages go to stderr; data goes to files under --out (or stdout with
`orbit --out -`).
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from . import datasets as ds
from . import reporting
from .analysis import (
    bs_distance,
    classify_tails,
    detect_period,
    first_bifurcation_point,
    segment_transients,
    tail_diameter,
    transition_points,
)
from .errors import AnalysisError, ConfigError, DatasetError, NoBifurcationFound
from .kernel import (
    DIRECT,
    LOGGAMMA,
    RECURRENCE,
    build_weights,
    closed_form_sum,
    first_nonfinite,
    kernel_sums,
    weights_recurrence,
)
from .maps import MapFamily, MapSpec
from .repro import PRESETS, KernelSumsJob, OrbitJob, SweepJob, build_preset
from .run_config import (
    RunConfig,
    build_run_config_v1,
    env_overrides,
    merge,
)
from .solver import Orbit, OrbitProblem, solve_iolm, solve_orbit
from .sweep import BifurcationDiagram, Scheme, SweepConfig, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_DIVERGED = 3

STDOUT = "-"


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage errors as ConfigError instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError([message])


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}"
        ) from None


def _threads(text: str) -> Any:
    t = str(text).strip().lower()
    if t == "auto":
        return t
    try:
        return int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f'expected a count or "auto", got {text!r}'
        ) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run config (fracmap.run_config.v1).")
    common.add_argument("--out", dest="output_dir", help="Output directory.")
    common.add_argument("--format", choices=["csv", "json"], help="Data file format.")
    common.add_argument("--threads", type=_threads, help='Worker count or "auto".')
    common.add_argument("--quiet", action="store_true", help="Only print errors.")
    common.add_argument(
        "--seedless",
        action="store_true",
        help="Assert a deterministic run (no RNG is used anywhere).",
    )

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--map", dest="family", choices=["logistic", "puu"])
    model.add_argument("--param", type=float, help="p (logistic) or a (puu).")
    model.add_argument("--q", type=float, help="Fractional order in (0, 1].")
    model.add_argument(
        "--x0", type=_float_list, help="Initial condition(s), comma-separated."
    )
    model.add_argument("--n-max", dest="n_max", type=int, help="Iterations.")
    model.add_argument(
        "--scheme",
        choices=["fractional", "integer"],
        help="integer runs the classic one-step logistic map.",
    )

    analysis = argparse.ArgumentParser(add_help=False)
    analysis.add_argument(
        "--input", dest="inputs", action="append", help="Dataset file (repeatable)."
    )
    analysis.add_argument("--window", type=int)
    analysis.add_argument("--stride", type=int)
    analysis.add_argument("--max-period", dest="max_period", type=int)

    p = _Parser(prog="fracmap", description="Fractional-order map engine.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sub.add_parser("orbit", parents=[common, model], help="Single orbits.")

    bd = sub.add_parser(
        "bifurcation", parents=[common, model], help="Bifurcation diagram sweep."
    )
    bd.add_argument("--axis", choices=["p", "q"])
    bd.add_argument("--grid", help="lo:hi:points (default: 1.3:2.5:600 or k/600).")
    bd.add_argument("--tail", type=int, help="Samples kept per orbit.")

    an = sub.add_parser(
        "analyze", parents=[common, analysis], help="Periods and transients."
    )
    an.add_argument("--tol", type=float, help="Periodicity tolerance.")

    cb = sub.add_parser(
        "compare-bs", parents=[common, analysis], help="Distances between BSs."
    )
    cb.add_argument("--x0", type=_float_list, help="Pair of x0 values to compare.")
    cb.add_argument("--tol", type=float, help="Similarity tolerance.")

    kc = sub.add_parser("kernel-check", parents=[common], help="Kernel overflow table.")
    kc.add_argument("--q", type=float)
    kc.add_argument("--n-max", dest="n_max", type=int)

    rp = sub.add_parser("repro", parents=[common], help="Run a figure preset.")
    rp.add_argument("figure", help="fig1 ... fig9")
    rp.add_argument("--n-max", dest="n_max", type=int)
    rp.add_argument("--points", type=int, help="Grid points per sweep axis.")
    return p


def _flag_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Explicit CLI flags as a partial run_config document."""
    a = vars(args)
    doc: Dict[str, Any] = {}

    def put(section: Optional[str], key: str, value: Any) -> None:
        if value is None:
            return
        if section is None:
            doc[key] = value
        else:
            doc.setdefault(section, {})[key] = value

    put(None, "output_dir", a.get("output_dir"))
    put(None, "format", a.get("format"))
    put(None, "threads", a.get("threads"))
    put(None, "figure", a.get("figure"))
    put(None, "points", a.get("points"))
    put(None, "inputs", a.get("inputs"))
    put("map", "family", a.get("family"))
    put("map", "param", a.get("param"))
    put("orbit", "q", a.get("q"))
    put("orbit", "x0", a.get("x0"))
    put("orbit", "n_max", a.get("n_max"))
    put("sweep", "axis", a.get("axis"))
    put("sweep", "grid", a.get("grid"))
    put("sweep", "tail", a.get("tail"))
    put("sweep", "scheme", a.get("scheme"))
    put("analysis", "window", a.get("window"))
    put("analysis", "stride", a.get("stride"))
    put("analysis", "max_period", a.get("max_period"))
    if a.get("tol") is not None:
        key = "similarity_tol" if args.command == "compare-bs" else "tol"
        put("analysis", key, a["tol"])
    return doc


def _load_config_file(path: str) -> Dict[str, Any]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError([f"config file {path}: {e.strerror or e}"]) from None
    except ValueError as e:
        raise ConfigError([f"config file {path}: invalid JSON ({e})"]) from None
    if not isinstance(doc, dict):
        raise ConfigError([f"config file {path}: must hold a JSON object"])
    return doc


def build_config(
    args: argparse.Namespace, environ: Mapping[str, str] = os.environ
) -> RunConfig:
    """defaults < env < --config file < flags."""
    doc = build_run_config_v1(args.command)
    doc = merge(doc, env_overrides(environ))
    file_doc: Dict[str, Any] = {}
    if getattr(args, "config", None):
        file_doc = _load_config_file(args.config)
        file_doc.pop("subcommand", None)
        doc = merge(doc, file_doc)
    flags = _flag_overrides(args)
    doc = merge(doc, flags)

    if args.command == "repro":
        n_given = "n_max" in flags.get("orbit", {}) or "n_max" in file_doc.get(
            "orbit", {}
        )
        fig = str(doc.get("figure", "")).strip().lower()
        doc["figure"] = fig
        if not n_given and fig in PRESETS:
            doc["orbit"]["n_max"] = PRESETS[fig][1]
    return RunConfig.from_dict(doc)


# --- shared helpers ---


def _num(v: float) -> Optional[float]:
    """JSON-safe float: None for nan/inf."""
    v = float(v)
    return v if math.isfinite(v) else None


def _solve(problem: OrbitProblem, scheme: Scheme) -> Orbit:
    if scheme is Scheme.INTEGER:
        return solve_iolm(
            problem.map.param,
            problem.x0,
            problem.n_max,
            problem.divergence_threshold,
        )
    return solve_orbit(problem, weights_recurrence(problem.q, problem.n_max))


def _orbit_meta(
    family: MapFamily, param: float, q: float, x0: float, n_max: int, scheme: Scheme
) -> Dict[str, Any]:
    return {
        "map": family.value,
        "param": float(param),
        "q": float(q),
        "x0": float(x0),
        "n_max": int(n_max),
        "scheme": scheme.value,
    }


def _ext(cfg: RunConfig) -> str:
    return ".json" if cfg.format == "json" else ".csv"


def _segments_doc(
    orbit: Orbit, cfg: RunConfig, tol: Optional[float] = None
) -> Dict[str, Any]:
    a = cfg.analysis
    tol = a.tol if tol is None else tol
    window = min(a.window, len(orbit) - (1 if orbit.diverged else 0))
    segments = segment_transients(orbit, window, a.stride, a.max_period, tol)
    verdict = detect_period(orbit, window, a.max_period, tol)
    return {
        "schema": "fracmap.orbit_analysis.v1",
        "tol": tol,
        "window": window,
        "stride": a.stride,
        "max_period": a.max_period,
        "verdict": verdict.to_dict(),
        "segments": [s.to_dict() for s in segments],
        "transitions": transition_points(segments),
    }


def _write_diagram_files(
    out_dir: Path,
    name: str,
    diagram: BifurcationDiagram,
    cfg: RunConfig,
    sweep: SweepConfig,
    title: str = "",
    notes: str = "",
) -> List[Path]:
    data = ds.write_diagram(out_dir / f"{name}{_ext(cfg)}", diagram, cfg.format)
    plot_csv = ds.write_plot_csv(out_dir / f"{name}.plot.csv", diagram)
    colors = {
        ds.fmt(x0): ds.color_for(i) for i, x0 in enumerate(sweep.initial_conditions)
    }
    plot = ds.write_json(
        ds.plot_path(data),
        ds.plot_description(
            plot_csv.name,
            kind="scatter",
            x="axis_value",
            y="x",
            xlabel=sweep.axis.value,
            colors=colors,
            title=title,
            notes=notes,
        ),
    )
    per_x0 = {
        ds.fmt(s.x0): {"diverged": int(s.diverged.sum())} for s in diagram.sets
    }
    sidecar = ds.write_sidecar(
        ds.sidecar_path(data),
        {**cfg.to_dict(), "sweep_resolved": sweep.to_dict()},
        [data, plot_csv],
        __version__,
        results={"grid_points": len(sweep.grid), "sets": per_x0},
    )
    return [data, plot_csv, plot, sidecar]


def _diagram_summary(title: str, diagram: BifurcationDiagram) -> None:
    rows = []
    for s in diagram.sets:
        ok_tails = [t for t in s.tails if t is not None]
        widest = max((tail_diameter(t) for t in ok_tails), default=float("nan"))
        rows.append((s.x0, len(s.tails), int(s.diverged.sum()), widest))
    reporting.summary_table(
        title, ["x0", "grid points", "diverged", "max tail diameter"], rows
    )


# --- subcommands ---


def cmd_orbit(cfg: RunConfig, out_dir: Path) -> Tuple[int, List[Path]]:
    family = MapFamily(cfg.map.family)
    scheme = Scheme(cfg.sweep.scheme)
    n_max = cfg.orbit.n_max
    files: List[Path] = []
    rows = []
    diverged = 0

    if str(out_dir) == STDOUT and len(cfg.orbit.x0) != 1:
        raise ConfigError(["--out - writes a single orbit; give exactly one --x0"])

    for x0 in cfg.orbit.x0:
        orbit = _solve(cfg.orbit_problem(x0), scheme)
        meta = _orbit_meta(family, cfg.map.param, cfg.orbit.q, x0, n_max, scheme)
        diverged += int(orbit.diverged)
        rows.append((x0, len(orbit), orbit.diverged, float(orbit.samples[-1])))

        if str(out_dir) == STDOUT:
            sys.stdout.write(ds.orbit_text(orbit, meta, cfg.format))
            sys.stdout.flush()
            continue

        name = (
            f"orbit_{family.value}_q{cfg.orbit.q!r}_p{cfg.map.param!r}_x0{float(x0)!r}"
        )
        data = ds.write_orbit(out_dir / f"{name}{_ext(cfg)}", orbit, meta, cfg.format)
        plot = ds.write_json(
            ds.plot_path(data),
            ds.plot_description(
                data.name, kind="line", x="n", y="x", xlabel="n", color="blue"
            ),
        )
        sidecar = ds.write_sidecar(
            ds.sidecar_path(data),
            cfg.to_dict(),
            [data],
            __version__,
            results={
                "samples": len(orbit),
                "diverged": orbit.diverged,
                "divergence_index": orbit.divergence_index,
            },
        )
        files += [data, plot, sidecar]

    reporting.summary_table(
        f"orbit {family.value} q={cfg.orbit.q} param={cfg.map.param}",
        ["x0", "samples", "diverged", "last x"],
        rows,
    )
    for f in files:
        reporting.ok(f"wrote {f}")
    if diverged == len(cfg.orbit.x0):
        reporting.warn("every orbit diverged")
        return EXIT_DIVERGED, files
    return EXIT_OK, files


def cmd_bifurcation(cfg: RunConfig, out_dir: Path) -> Tuple[int, List[Path]]:
    sweep = cfg.sweep_config()
    diagram = run_sweep(sweep, threads=cfg.threads)
    files = _write_diagram_files(
        out_dir, f"bifurcation_{sweep.axis.value}", diagram, cfg, sweep
    )
    _diagram_summary(f"bifurcation along {sweep.axis.value}", diagram)
    for f in files:
        reporting.ok(f"wrote {f}")
    if diagram.all_diverged:
        reporting.warn("every orbit in the sweep diverged")
        return EXIT_DIVERGED, files
    return EXIT_OK, files


def _read_diagram(path: str) -> BifurcationDiagram:
    try:
        return ds.read_diagram(Path(path))
    except (KeyError, ValueError) as e:
        raise DatasetError(f"{path}: {e}") from None


def _read_orbit(path: str) -> Tuple[Orbit, Dict[str, str]]:
    try:
        return ds.read_orbit(Path(path))
    except (KeyError, ValueError) as e:
        raise DatasetError(f"{path}: {e}") from None


def _analyze_orbit(
    path: str, cfg: RunConfig, out_dir: Path
) -> Tuple[bool, List[Path]]:
    orbit, meta = _read_orbit(path)
    doc = _segments_doc(orbit, cfg)
    doc["input"] = Path(path).name
    doc["meta"] = meta
    out = ds.write_json(out_dir / f"{Path(path).stem}.analysis.json", doc)
    reporting.summary_table(
        f"segments of {Path(path).name}",
        ["start", "stop", "kind", "period", "residual"],
        [
            (s["range"][0], s["range"][1], s["kind"], s["period"], s["residual"])
            for s in doc["segments"]
        ],
        caption=f"tol={cfg.analysis.tol!r}",
    )
    return orbit.diverged, [out]


def _analyze_diagram(
    path: str, cfg: RunConfig, out_dir: Path
) -> Tuple[bool, List[Path]]:
    diagram = _read_diagram(path)
    a = cfg.analysis
    rows: List[Tuple[Any, ...]] = []
    firsts: Dict[str, Optional[float]] = {}
    for s in diagram.sets:
        for g, v in classify_tails(s, a.max_period, a.tol):
            rows.append((g, s.x0, v.kind.value, v.period, v.residual))
        try:
            firsts[ds.fmt(s.x0)] = first_bifurcation_point(s, a.bifurcation_tol)
        except NoBifurcationFound:
            firsts[ds.fmt(s.x0)] = None
    out = ds.write_csv(
        out_dir / f"{Path(path).stem}.analysis.csv",
        ["grid_value", "x0", "kind", "period", "residual"],
        rows,
    )
    sidecar = ds.write_sidecar(
        ds.sidecar_path(out),
        cfg.to_dict(),
        [out],
        __version__,
        results={"input": Path(path).name, "first_bifurcation_point": firsts},
    )
    reporting.summary_table(
        f"first bifurcation points in {Path(path).name}",
        ["x0", "grid value"],
        list(firsts.items()),
        caption=f"diameter tol={a.bifurcation_tol!r}",
    )
    return diagram.all_diverged, [out, sidecar]


def cmd_analyze(cfg: RunConfig, out_dir: Path) -> Tuple[int, List[Path]]:
    files: List[Path] = []
    empty: List[bool] = []
    for path in cfg.inputs:
        kind = ds.sniff_kind(Path(path))
        if kind == ds.ORBIT_KIND:
            diverged, written = _analyze_orbit(path, cfg, out_dir)
        else:
            diverged, written = _analyze_diagram(path, cfg, out_dir)
        empty.append(diverged)
        files += written
    for f in files:
        reporting.ok(f"wrote {f}")
    return _empty_result_code(empty, "analyze"), files


def _empty_result_code(empty: Sequence[bool], command: str) -> int:
    """EXIT_DIVERGED when every input holds nothing but diverged orbits."""
    if empty and all(empty):
        reporting.warn(f"{command}: every orbit in the input diverged")
        return EXIT_DIVERGED
    return EXIT_OK


def _pairs(
    diagram: BifurcationDiagram, chosen: Sequence[float]
) -> List[Tuple[float, float]]:
    x0s = list(diagram.initial_conditions)
    if len(chosen) >= 2:
        missing = [x for x in chosen if x not in x0s]
        if missing:
            raise ConfigError(
                [f"compare-bs: x0 {', '.join(map(repr, missing))} not in the diagram"]
            )
        x0s = list(chosen)
    if len(x0s) < 2:
        raise AnalysisError("compare-bs needs a diagram with at least two x0")
    return list(itertools.combinations(x0s, 2))


def cmd_compare_bs(cfg: RunConfig, out_dir: Path) -> Tuple[int, List[Path]]:
    a = cfg.analysis
    files: List[Path] = []
    empty: List[bool] = []
    for path in cfg.inputs:
        diagram = _read_diagram(path)
        empty.append(diagram.all_diverged)
        rows: List[Tuple[Any, ...]] = []
        pairs_doc: List[Dict[str, Any]] = []
        summary = []
        for xa, xb in _pairs(diagram, cfg.orbit.x0):
            prof = bs_distance(diagram.set_for(xa), diagram.set_for(xb))
            for g, d, m in zip(
                prof.grid.tolist(), prof.distance.tolist(), prof.mismatch.tolist()
            ):
                rows.append((g, xa, xb, None if m else d, m))
            over = prof.exceeds(a.similarity_tol)
            pairs_doc.append(
                {
                    "x0_a": xa,
                    "x0_b": xb,
                    "max_distance": _num(prof.max_distance()),
                    "mean_distance": _num(prof.mean_distance()),
                    "mismatch_points": int(prof.mismatch.sum()),
                    "dissimilar_points": int(over.shape[0]),
                    "similar": bool(over.shape[0] == 0),
                }
            )
            summary.append(
                (xa, xb, prof.max_distance(), prof.mean_distance(), over.shape[0])
            )

        firsts: Dict[str, Optional[float]] = {}
        for s in diagram.sets:
            try:
                firsts[ds.fmt(s.x0)] = first_bifurcation_point(s, a.bifurcation_tol)
            except NoBifurcationFound:
                firsts[ds.fmt(s.x0)] = None

        out = ds.write_csv(
            out_dir / f"{Path(path).stem}.distance.csv",
            ["grid_value", "x0_a", "x0_b", "distance", "mismatch"],
            rows,
        )
        sidecar = ds.write_sidecar(
            ds.sidecar_path(out),
            cfg.to_dict(),
            [out],
            __version__,
            results={
                "input": Path(path).name,
                "metric": "hausdorff",
                "similarity_tol": a.similarity_tol,
                "pairs": pairs_doc,
                "first_bifurcation_point": firsts,
            },
        )
        reporting.summary_table(
            f"BS distances in {Path(path).name}",
            ["x0 a", "x0 b", "max", "mean", f"points > {a.similarity_tol:g}"],
            summary,
        )
        files += [out, sidecar]
    for f in files:
        reporting.ok(f"wrote {f}")
    return _empty_result_code(empty, "compare-bs"), files


def _kernel_files(
    out_dir: Path, q: float, n_max: int, cfg: RunConfig, name: str = "", title: str = ""
) -> List[Path]:
    name = name or f"kernel_q{q!r}"
    tables = {m: build_weights(q, n_max, m) for m in (DIRECT, LOGGAMMA, RECURRENCE)}
    direct = tables[DIRECT]
    weights = ds.write_csv(
        out_dir / f"{name}.csv",
        ["k", "c_direct", "c_loggamma", "c_recurrence", "direct_finite"],
        zip(
            range(n_max),
            direct.c.tolist(),
            tables[LOGGAMMA].c.tolist(),
            tables[RECURRENCE].c.tolist(),
            direct.finite.tolist(),
        ),
    )
    sums = kernel_sums(q, n_max)
    closed = [closed_form_sum(q, int(n)) for n in sums["n"].tolist()]
    sums_csv = ds.write_csv(
        out_dir / f"{name}.sums.csv",
        ["n", "direct", "loggamma", "recurrence", "closed_form"],
        zip(
            sums["n"].tolist(),
            sums[DIRECT].tolist(),
            sums[LOGGAMMA].tolist(),
            sums[RECURRENCE].tolist(),
            closed,
        ),
    )
    plot = ds.write_json(
        ds.plot_path(sums_csv),
        ds.plot_description(
            sums_csv.name,
            kind="line",
            x="n",
            y="direct,loggamma",
            xlabel="n",
            ylabel="S(n)",
            colors={"direct": "red", "loggamma": "blue"},
            title=title,
        ),
    )

    bad = first_nonfinite(direct)
    ok = direct.finite
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.abs(direct.c[ok] - tables[RECURRENCE].c[ok]) / np.abs(
            tables[RECURRENCE].c[ok]
        )
    results = {
        "direct_first_nonfinite_k": bad,
        "direct_nonfinite_count": int((~ok).sum()),
        "max_rel_diff_direct_vs_recurrence": _num(rel.max()) if rel.size else None,
        "max_rel_diff_loggamma_vs_recurrence": _num(
            np.max(
                np.abs(tables[LOGGAMMA].c - tables[RECURRENCE].c)
                / np.abs(tables[RECURRENCE].c)
            )
        ),
    }
    sidecar = ds.write_sidecar(
        ds.sidecar_path(weights),
        cfg.to_dict(),
        [weights, sums_csv],
        __version__,
        results=results,
    )
    if bad is not None:
        reporting.warn(f"direct gamma ratio is non-finite from k={bad} (q={q!r})")
    return [weights, sums_csv, plot, sidecar]


def cmd_kernel_check(cfg: RunConfig, out_dir: Path) -> Tuple[int, List[Path]]:
    files = _kernel_files(out_dir, cfg.orbit.q, cfg.orbit.n_max, cfg)
    for f in files:
        reporting.ok(f"wrote {f}")
    return EXIT_OK, files


def cmd_repro(cfg: RunConfig, out_dir: Path) -> Tuple[int, List[Path]]:
    preset = build_preset(cfg.figure, n_max=cfg.orbit.n_max, points=cfg.points or None)
    fig_dir = out_dir / preset.figure
    files: List[Path] = []
    outcomes: List[bool] = []

    for job in preset.jobs:
        if isinstance(job, OrbitJob):
            problem = OrbitProblem(
                q=job.q,
                map=MapSpec(job.family, job.param),
                x0=job.x0,
                n_max=job.n_max,
                divergence_threshold=cfg.orbit.divergence_threshold,
            )
            orbit = _solve(problem, job.scheme)
            outcomes.append(orbit.diverged)
            meta = _orbit_meta(
                job.family, job.param, job.q, job.x0, job.n_max, job.scheme
            )
            data = ds.write_orbit(
                fig_dir / f"{job.name}{_ext(cfg)}", orbit, meta, cfg.format
            )
            written = [data]
            results: Dict[str, Any] = {
                "samples": len(orbit),
                "diverged": orbit.diverged,
            }
            if job.segment and not orbit.diverged:
                seg = ds.write_json(
                    fig_dir / f"{job.name}.analysis.json",
                    _segments_doc(orbit, cfg, tol=job.segment_tol),
                )
                written.append(seg)
            plot = ds.write_json(
                ds.plot_path(data),
                ds.plot_description(
                    data.name,
                    kind="line",
                    x="n",
                    y="x",
                    xlabel="n",
                    color="blue",
                    title=job.title,
                    notes=preset.notes,
                ),
            )
            sidecar = ds.write_sidecar(
                ds.sidecar_path(data),
                {**cfg.to_dict(), "job": meta},
                written,
                __version__,
                results=results,
            )
            files += written + [plot, sidecar]
        elif isinstance(job, KernelSumsJob):
            files += _kernel_files(
                fig_dir, job.q, job.n_max, cfg, name=job.name, title=job.title
            )
        elif isinstance(job, SweepJob):
            diagram = run_sweep(job.config, threads=cfg.threads)
            outcomes.append(diagram.all_diverged)
            files += _write_diagram_files(
                fig_dir,
                job.name,
                diagram,
                cfg,
                job.config,
                title=job.title,
                notes=preset.notes,
            )
            _diagram_summary(job.title or job.name, diagram)

    reporting.ok(f"{preset.figure}: {preset.title} ({len(files)} files in {fig_dir})")
    if outcomes and all(outcomes):
        reporting.warn(f"{preset.figure}: every orbit diverged")
        return EXIT_DIVERGED, files
    return EXIT_OK, files


COMMANDS = {
    "orbit": cmd_orbit,
    "bifurcation": cmd_bifurcation,
    "analyze": cmd_analyze,
    "compare-bs": cmd_compare_bs,
    "kernel-check": cmd_kernel_check,
    "repro": cmd_repro,
}


def run(cfg: RunConfig, argv: Sequence[str] = ()) -> int:
    out_dir = Path(cfg.output_dir)
    if cfg.output_dir != STDOUT:
        out_dir.mkdir(parents=True, exist_ok=True)
    code, files = COMMANDS[cfg.subcommand](cfg, out_dir)
    if files and cfg.output_dir != STDOUT:
        ds.write_manifest(out_dir, files, list(argv), __version__)
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        reporting.set_quiet(getattr(args, "quiet", False))
        cfg = build_config(args)
        return run(cfg, argv)
    except ConfigError as e:
        for msg in e.errors:
            reporting.err(msg)
        return EXIT_CONFIG
    except AnalysisError as e:
        reporting.err(str(e))
        return EXIT_CONFIG
    except OSError as e:
        reporting.err(str(e))
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
