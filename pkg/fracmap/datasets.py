"""fracmap.datasets

Dataset files written by the CLI and the readers that load them back.

Formats (see docs/DATASETS.md):
- orbit CSV:    '# fracmap.orbit.v1 key=value ...' provenance line, then n,x
- diagram CSV:  grid_value,x0,sample,diverged (long format; one empty-sample
                row with diverged=true per diverged orbit)
- kernel CSV:   k,c_direct,c_loggamma,c_recurrence,direct_finite
- sidecar JSON: <name>.json with config echo, version and sha256 per data file
- plot JSON:    <name>.plot.json, a minimal scatter/line description
- run_manifest.json: the only file carrying a timestamp

Floats are written with repr(), the shortest text that parses back to the
same double, so identical runs give byte-identical files.
"""

from __future__ import annotations

import csv
import datetime as dt
import hashlib
import json
import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import DatasetError
from .solver import Orbit
from .sweep import BifurcationDiagram, BifurcativeSet

ORBIT_SCHEMA = "fracmap.orbit.v1"
DIAGRAM_SCHEMA = "fracmap.diagram.v1"
SIDECAR_SCHEMA = "fracmap.sidecar.v1"
MANIFEST_SCHEMA = "fracmap.run_manifest.v1"

DIAGRAM_COLUMNS = ["grid_value", "x0", "sample", "diverged"]

# per-x0 colors in the order the initial conditions are listed
PALETTE = ("green", "blue", "red", "magenta", "cyan", "orange", "black")


def fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def color_for(index: int) -> str:
    return PALETTE[index % len(PALETTE)]


def _utc_now_iso() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat().replace("+00:00", "Z")


def _replace_atomic(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    os.replace(tmp, path)
    return path


def json_text(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_json(path: Path, obj: Any) -> Path:
    return _replace_atomic(Path(path), json_text(obj))


def csv_text(
    header: Sequence[str], rows: Iterable[Sequence[Any]], comment: Optional[str] = None
) -> str:
    lines: List[str] = []
    if comment:
        lines.append(f"# {comment}\n")

    class _Sink:
        def write(self, s: str) -> None:
            lines.append(s)

    w = csv.writer(_Sink(), lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return "".join(lines)


def write_csv(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    comment: Optional[str] = None,
) -> Path:
    return _replace_atomic(Path(path), csv_text(header, rows, comment))


def sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def sidecar_path(data_path: Path) -> Path:
    data_path = Path(data_path)
    return data_path.with_name(data_path.stem + ".sidecar.json")


def plot_path(data_path: Path) -> Path:
    data_path = Path(data_path)
    return data_path.with_name(data_path.stem + ".plot.json")


def write_sidecar(
    path: Path,
    config: Mapping[str, Any],
    files: Sequence[Path],
    version: str,
    results: Optional[Mapping[str, Any]] = None,
) -> Path:
    """Provenance next to the data: config echo, version, checksums. No timestamp."""
    doc: Dict[str, Any] = {
        "schema": SIDECAR_SCHEMA,
        "fracmap_version": version,
        "config": dict(config),
        "files": {Path(p).name: {"sha256": sha256_file(Path(p))} for p in files},
    }
    if results:
        doc["results"] = dict(results)
    return write_json(path, doc)


def write_manifest(
    out_dir: Path, files: Sequence[Path], argv: Sequence[str], version: str
) -> Path:
    doc = {
        "schema": MANIFEST_SCHEMA,
        "generated_at": _utc_now_iso(),
        "fracmap_version": version,
        "argv": list(argv),
        "files": sorted(Path(p).name for p in files),
    }
    return write_json(Path(out_dir) / "run_manifest.json", doc)


# --- orbits ---


def orbit_comment(meta: Mapping[str, Any]) -> str:
    parts = [ORBIT_SCHEMA] + [f"{k}={fmt(v)}" for k, v in meta.items()]
    return " ".join(parts)


def orbit_doc(orbit: Orbit, meta: Mapping[str, Any]) -> Dict[str, Any]:
    return {
        "schema": ORBIT_SCHEMA,
        "meta": dict(meta),
        "diverged": orbit.diverged,
        "divergence_index": orbit.divergence_index,
        "x": orbit.samples.tolist(),
    }


def orbit_text(orbit: Orbit, meta: Mapping[str, Any], file_format: str = "csv") -> str:
    meta = dict(meta)
    meta["diverged"] = orbit.diverged
    if file_format == "json":
        return json_text(orbit_doc(orbit, meta))
    rows = ((n, x) for n, x in enumerate(orbit.samples.tolist()))
    return csv_text(["n", "x"], rows, comment=orbit_comment(meta))


def write_orbit(
    path: Path, orbit: Orbit, meta: Mapping[str, Any], file_format: str = "csv"
) -> Path:
    return _replace_atomic(Path(path), orbit_text(orbit, meta, file_format))


def _parse_comment(line: str) -> Dict[str, str]:
    out: Dict[str, str] = {}
    for tok in line.lstrip("#").split():
        if "=" in tok:
            k, v = tok.split("=", 1)
            out[k] = v
    return out


def read_orbit(path: Path) -> Tuple[Orbit, Dict[str, str]]:
    """Load an orbit CSV or JSON written by write_orbit."""
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text(encoding="utf-8"))
        x = np.asarray(doc["x"], dtype=np.float64)
        meta = {k: fmt(v) for k, v in doc.get("meta", {}).items()}
        diverged = bool(doc.get("diverged"))
    else:
        with open(path, "r", encoding="utf-8") as f:
            first = f.readline()
        meta = _parse_comment(first) if first.startswith("#") else {}
        df = pd.read_csv(path, comment="#", float_precision="round_trip")
        if list(df.columns[:2]) != ["n", "x"]:
            raise DatasetError(f"{path}: not an orbit CSV (expected columns n,x)")
        x = df["x"].to_numpy(dtype=np.float64)
        diverged = meta.get("diverged") == "true"
    idx = int(x.shape[0] - 1) if diverged else None
    return Orbit(samples=x, diverged=diverged, divergence_index=idx), meta


# --- diagrams ---


def diagram_rows(diagram: BifurcationDiagram) -> Iterable[Tuple[Any, ...]]:
    for gi, g in enumerate(diagram.grid.tolist()):
        for s in diagram.sets:
            tail = s.tails[gi]
            if tail is None:
                yield (g, s.x0, None, True)
                continue
            for v in tail.tolist():
                yield (g, s.x0, v, False)


def diagram_doc(diagram: BifurcationDiagram) -> Dict[str, Any]:
    return {
        "schema": DIAGRAM_SCHEMA,
        "grid": diagram.grid.tolist(),
        "sets": [
            {
                "x0": s.x0,
                "tails": [None if t is None else t.tolist() for t in s.tails],
            }
            for s in diagram.sets
        ],
    }


def write_diagram(
    path: Path, diagram: BifurcationDiagram, file_format: str = "csv"
) -> Path:
    if file_format == "json":
        return write_json(path, diagram_doc(diagram))
    return write_csv(path, DIAGRAM_COLUMNS, diagram_rows(diagram))


def read_diagram(path: Path) -> BifurcationDiagram:
    """Load a diagram CSV or JSON; the result carries no SweepConfig."""
    path = Path(path)
    if path.suffix == ".json":
        doc = json.loads(path.read_text(encoding="utf-8"))
        grid = np.asarray(doc["grid"], dtype=np.float64)
        sets = tuple(
            BifurcativeSet(
                x0=float(s["x0"]),
                grid=grid,
                tails=tuple(
                    None if t is None else np.asarray(t, dtype=np.float64)
                    for t in s["tails"]
                ),
            )
            for s in doc["sets"]
        )
        return BifurcationDiagram(config=None, sets=sets)

    df = pd.read_csv(
        path,
        float_precision="round_trip",
        true_values=["true"],
        false_values=["false"],
    )
    missing = [c for c in DIAGRAM_COLUMNS if c not in df.columns]
    if missing:
        raise DatasetError(f"{path}: not a diagram CSV (missing {', '.join(missing)})")

    grid = np.asarray(pd.unique(df["grid_value"]), dtype=np.float64)
    sets: List[BifurcativeSet] = []
    for x0, part in df.groupby("x0", sort=False):
        by_g = {g: rows for g, rows in part.groupby("grid_value", sort=False)}
        tails = []
        for g in grid.tolist():
            rows = by_g.get(g)
            if rows is None:
                raise DatasetError(
                    f"{path}: x0={x0!r} has no rows for grid value {g!r}"
                )
            if bool(rows["diverged"].astype(bool).any()):
                tails.append(None)
            else:
                tails.append(rows["sample"].to_numpy(dtype=np.float64))
        sets.append(BifurcativeSet(x0=float(x0), grid=grid, tails=tuple(tails)))
    return BifurcationDiagram(config=None, sets=tuple(sets))


ORBIT_KIND = "orbit"
DIAGRAM_KIND = "diagram"


def sniff_kind(path: Path) -> str:
    """orbit or diagram, from the schema key (JSON) or the first line (CSV)."""
    path = Path(path)
    if path.suffix == ".json":
        try:
            schema = json.loads(path.read_text(encoding="utf-8")).get("schema")
        except (ValueError, AttributeError) as e:
            raise DatasetError(f"{path}: not a fracmap JSON dataset ({e})") from None
        kinds = {ORBIT_SCHEMA: ORBIT_KIND, DIAGRAM_SCHEMA: DIAGRAM_KIND}
        if schema in kinds:
            return kinds[schema]
    else:
        with open(path, "r", encoding="utf-8") as f:
            first = f.readline().strip()
        if first.startswith(f"# {ORBIT_SCHEMA}") or first == "n,x":
            return ORBIT_KIND
        if first.split(",")[:1] == ["grid_value"]:
            return DIAGRAM_KIND
    raise DatasetError(f"{path}: not a fracmap orbit or diagram file")


def plot_rows(diagram: BifurcationDiagram) -> Iterable[Tuple[Any, ...]]:
    """Plot-ready long format: diverged orbits are left out, color keyed per x0."""
    colors = {s.x0: color_for(i) for i, s in enumerate(diagram.sets)}
    for g, x0, v, diverged in diagram_rows(diagram):
        if not diverged:
            yield (g, v, x0, colors[x0])


def write_plot_csv(path: Path, diagram: BifurcationDiagram) -> Path:
    return write_csv(path, ["axis_value", "x", "x0", "color"], plot_rows(diagram))


def plot_description(
    data_file: str,
    *,
    kind: str,
    x: str,
    y: str,
    xlabel: str,
    ylabel: str = "x",
    color: Optional[str] = None,
    colors: Optional[Mapping[str, str]] = None,
    title: str = "",
    notes: str = "",
) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "schema": "fracmap.plot.v1",
        "data": data_file,
        "kind": kind,
        "x": x,
        "y": y,
        "xlabel": xlabel,
        "ylabel": ylabel,
        "title": title,
        "marker_size": 0.2 if kind == "scatter" else None,
    }
    if color:
        doc["color"] = color
    if colors:
        doc["colors"] = dict(colors)
    if notes:
        doc["notes"] = notes
    return doc
