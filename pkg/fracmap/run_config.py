"""fracmap.run_config

Run configuration as a versioned JSON document ("fracmap.run_config.v1").

Sources, lowest to highest precedence:
- built-in defaults (the dataclass defaults below)
- env: FRACMAP_OUT, FRACMAP_THREADS, FRACMAP_FORMAT
- a JSON config file (--config)
- explicit CLI flags

validate_run_config_v1 returns one message per offending field, in the
"section.field must ..." form; from_dict raises ConfigError with that list.
"""

from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Mapping, Tuple, Union

from .errors import ConfigError
from .maps import MapFamily, MapSpec
from .repro import FIGURES
from .solver import DEFAULT_DIVERGENCE_THRESHOLD, OrbitProblem
from .sweep import (
    DEFAULT_N_MAX,
    DEFAULT_POINTS,
    DEFAULT_TAIL,
    Scheme,
    SweepAxis,
    SweepConfig,
    parse_grid,
    unit_grid,
)

RUN_CONFIG_V1_SCHEMA = "fracmap.run_config.v1"

SUBCOMMANDS = ("orbit", "bifurcation", "analyze", "compare-bs", "kernel-check", "repro")
FORMATS = ("csv", "json")
DEFAULT_P_GRID = f"1.3:2.5:{DEFAULT_POINTS}"

ENV_OUT = "FRACMAP_OUT"
ENV_THREADS = "FRACMAP_THREADS"
ENV_FORMAT = "FRACMAP_FORMAT"

Threads = Union[int, str]


@dataclass(frozen=True)
class MapSection:
    family: str = "logistic"
    param: float = 2.4


@dataclass(frozen=True)
class OrbitSection:
    q: float = 0.3
    x0: Tuple[float, ...] = (0.5,)
    n_max: int = DEFAULT_N_MAX
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD


@dataclass(frozen=True)
class SweepSection:
    axis: str = "p"
    # "lo:hi:points"; empty means the axis default
    grid: str = ""
    tail: int = DEFAULT_TAIL
    scheme: str = "fractional"


@dataclass(frozen=True)
class AnalysisSection:
    window: int = 400
    stride: int = 100
    max_period: int = 64
    tol: float = 1e-4
    similarity_tol: float = 0.005
    bifurcation_tol: float = 1e-3


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    map: MapSection = field(default_factory=MapSection)
    orbit: OrbitSection = field(default_factory=OrbitSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    analysis: AnalysisSection = field(default_factory=AnalysisSection)
    figure: str = ""
    inputs: Tuple[str, ...] = ()
    points: int = 0
    output_dir: str = "out"
    format: str = "csv"
    threads: Threads = 1

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d["orbit"]["x0"] = list(self.orbit.x0)
        d["inputs"] = list(self.inputs)
        return {"schema": RUN_CONFIG_V1_SCHEMA, **d}

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "RunConfig":
        errors = validate_run_config_v1(doc)
        if errors:
            raise ConfigError(errors)
        m = doc.get("map") or {}
        o = doc.get("orbit") or {}
        s = doc.get("sweep") or {}
        a = doc.get("analysis") or {}
        threads = doc.get("threads", 1)
        cfg = cls(
            subcommand=str(doc["subcommand"]),
            map=MapSection(**{**asdict(MapSection()), **m}),
            orbit=OrbitSection(
                **{
                    **asdict(OrbitSection()),
                    **o,
                    "x0": tuple(float(v) for v in o.get("x0", OrbitSection().x0)),
                }
            ),
            sweep=SweepSection(**{**asdict(SweepSection()), **s}),
            analysis=AnalysisSection(**{**asdict(AnalysisSection()), **a}),
            figure=str(doc.get("figure", "")),
            inputs=tuple(str(p) for p in doc.get("inputs", ())),
            points=int(doc.get("points", 0)),
            output_dir=str(doc.get("output_dir", "out")),
            format=str(doc.get("format", "csv")),
            threads=threads if threads == "auto" else int(threads),
        )
        if cfg.subcommand == "bifurcation":
            cfg.sweep_config().check()
        return cfg

    def map_spec(self) -> MapSpec:
        return MapSpec.from_name(self.map.family, self.map.param)

    def orbit_problem(self, x0: float) -> OrbitProblem:
        return OrbitProblem(
            q=self.orbit.q,
            map=self.map_spec(),
            x0=float(x0),
            n_max=self.orbit.n_max,
            divergence_threshold=self.orbit.divergence_threshold,
        )

    def sweep_config(self) -> SweepConfig:
        axis = SweepAxis(self.sweep.axis)
        if self.sweep.grid:
            grid = parse_grid(self.sweep.grid)
        elif axis is SweepAxis.P:
            grid = parse_grid(DEFAULT_P_GRID)
        else:
            grid = unit_grid(DEFAULT_POINTS)
        fixed = self.orbit.q if axis is SweepAxis.P else self.map.param
        return SweepConfig(
            axis=axis,
            grid=grid,
            fixed_value=float(fixed),
            initial_conditions=tuple(self.orbit.x0),
            n_max=self.orbit.n_max,
            tail_length=self.sweep.tail,
            family=MapFamily(self.map.family),
            scheme=Scheme(self.sweep.scheme),
            divergence_threshold=self.orbit.divergence_threshold,
        )


def build_run_config_v1(subcommand: str, **overrides: Any) -> Dict[str, Any]:
    """Default document for a subcommand, with top-level or section overrides."""
    doc = RunConfig(subcommand=subcommand).to_dict()
    return merge(doc, overrides)


def merge(base: Mapping[str, Any], over: Mapping[str, Any]) -> Dict[str, Any]:
    out = dict(base)
    for k, v in over.items():
        if isinstance(v, Mapping) and isinstance(out.get(k), Mapping):
            out[k] = merge(out[k], v)
        else:
            out[k] = v
    return out


def env_overrides(environ: Mapping[str, str] = os.environ) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    if environ.get(ENV_OUT):
        out["output_dir"] = environ[ENV_OUT]
    if environ.get(ENV_THREADS):
        v = environ[ENV_THREADS].strip().lower()
        out["threads"] = v if v == "auto" else _int_or_raw(v)
    if environ.get(ENV_FORMAT):
        out["format"] = environ[ENV_FORMAT].strip().lower()
    return out


def _int_or_raw(v: str) -> Any:
    try:
        return int(v)
    except ValueError:
        return v


def _is_num(v: Any) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _is_int(v: Any) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def validate_run_config_v1(doc: Any) -> List[str]:
    errors: List[str] = []

    def err(msg: str) -> None:
        errors.append(msg)

    if not isinstance(doc, Mapping):
        return ["doc must be an object"]

    if doc.get("schema", RUN_CONFIG_V1_SCHEMA) != RUN_CONFIG_V1_SCHEMA:
        err(f'schema must be "{RUN_CONFIG_V1_SCHEMA}"')

    sub = doc.get("subcommand")
    if sub not in SUBCOMMANDS:
        err(f"subcommand must be one of {', '.join(SUBCOMMANDS)}")

    sections = {
        "map": MapSection,
        "orbit": OrbitSection,
        "sweep": SweepSection,
        "analysis": AnalysisSection,
    }
    for name, cls in sections.items():
        sec = doc.get(name, {})
        if not isinstance(sec, Mapping):
            err(f"{name} must be an object")
            continue
        known = set(asdict(cls()))
        for k in sec:
            if k not in known:
                err(f"{name}.{k} is not a known field")

    m = doc.get("map") if isinstance(doc.get("map"), Mapping) else {}
    if "family" in m and m["family"] not in ("logistic", "puu"):
        err("map.family must be logistic|puu")
    if "param" in m and not _is_num(m["param"]):
        err("map.param must be a finite number")

    o = doc.get("orbit") if isinstance(doc.get("orbit"), Mapping) else {}
    if "q" in o and not (_is_num(o["q"]) and 0.0 < o["q"] <= 1.0):
        err("orbit.q must be in (0, 1]")
    if "x0" in o:
        x0 = o["x0"]
        if not isinstance(x0, (list, tuple)) or not x0:
            err("orbit.x0 must be a non-empty list of numbers")
        elif not all(_is_num(v) for v in x0):
            err("orbit.x0 values must be finite numbers")
    if "n_max" in o and not (_is_int(o["n_max"]) and o["n_max"] >= 1):
        err("orbit.n_max must be an integer >= 1")
    if "divergence_threshold" in o and not (
        _is_num(o["divergence_threshold"]) and o["divergence_threshold"] > 0
    ):
        err("orbit.divergence_threshold must be a number > 0")

    s = doc.get("sweep") if isinstance(doc.get("sweep"), Mapping) else {}
    if "axis" in s and s["axis"] not in ("p", "q"):
        err("sweep.axis must be p|q")
    if "grid" in s:
        if not isinstance(s["grid"], str):
            err("sweep.grid must be a 'lo:hi:points' string")
        elif s["grid"]:
            try:
                parse_grid(s["grid"])
            except ConfigError as e:
                errors.extend(f"sweep.{m_}" for m_ in e.errors)
    if "tail" in s and not (_is_int(s["tail"]) and s["tail"] >= 1):
        err("sweep.tail must be an integer >= 1")
    if "scheme" in s and s["scheme"] not in ("fractional", "integer"):
        err("sweep.scheme must be fractional|integer")

    a = doc.get("analysis") if isinstance(doc.get("analysis"), Mapping) else {}
    for k in ("window", "stride", "max_period"):
        if k in a and not (_is_int(a[k]) and a[k] >= 1):
            err(f"analysis.{k} must be an integer >= 1")
    for k in ("tol", "similarity_tol", "bifurcation_tol"):
        if k in a and not (_is_num(a[k]) and a[k] >= 0):
            err(f"analysis.{k} must be a number >= 0")

    fmt = doc.get("format", "csv")
    if fmt not in FORMATS:
        err("format must be csv|json")

    threads = doc.get("threads", 1)
    if not (threads == "auto" or (_is_int(threads) and threads >= 1)):
        err('threads must be an integer >= 1 or "auto"')

    out_dir = doc.get("output_dir", "out")
    if not isinstance(out_dir, str) or not out_dir:
        err("output_dir must be a non-empty string")

    points = doc.get("points", 0)
    if not (_is_int(points) and points >= 0):
        err("points must be an integer >= 0")

    inputs = doc.get("inputs", [])
    if not isinstance(inputs, (list, tuple)) or not all(
        isinstance(p, str) for p in inputs
    ):
        err("inputs must be a list of paths")
    elif sub in ("analyze", "compare-bs") and not inputs:
        err(f"inputs must name a dataset file for {sub}")

    if sub == "repro":
        fig = doc.get("figure", "")
        if fig not in FIGURES:
            err(f"figure must be one of {', '.join(FIGURES)}")

    return errors
