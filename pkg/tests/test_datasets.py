import csv
import hashlib
import json

import numpy as np
import pytest

from fracmap import datasets as ds
from fracmap.errors import DatasetError
from fracmap.kernel import weights_recurrence
from fracmap.maps import MapSpec
from fracmap.solver import OrbitProblem, solve_iolm, solve_orbit
from fracmap.sweep import BifurcationDiagram, BifurcativeSet


def _folm(n_max=300):
    problem = OrbitProblem(q=0.3, map=MapSpec.logistic(2.4), x0=0.5, n_max=n_max)
    return solve_orbit(problem, weights_recurrence(0.3, n_max))


def _diagram():
    grid = np.array([1.5, 2.0, 2.5])
    a = BifurcativeSet(
        x0=0.5,
        grid=grid,
        tails=(np.array([0.1, 0.2]), np.array([1.0 / 3.0, 2.0 / 3.0]), None),
    )
    b = BifurcativeSet(
        x0=0.1,
        grid=grid,
        tails=(np.array([0.3, 0.4]), None, np.array([0.7, 0.9])),
    )
    return BifurcationDiagram(config=None, sets=(a, b))


def test_fmt():
    assert ds.fmt(0.1) == "0.1"
    assert ds.fmt(1.0 / 3.0) == repr(1.0 / 3.0)
    assert ds.fmt(np.float64(2.5)) == "2.5"
    assert ds.fmt(True) == "true"
    assert ds.fmt(np.bool_(False)) == "false"
    assert ds.fmt(None) == ""
    assert ds.fmt(7) == "7"


def test_orbit_csv_round_trip(tmp_path):
    orbit = _folm()
    meta = {"map": "logistic", "param": 2.4, "q": 0.3, "x0": 0.5}
    path = ds.write_orbit(tmp_path / "o.csv", orbit, meta)

    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# fracmap.orbit.v1 ")
    assert "q=0.3" in lines[0] and "diverged=false" in lines[0]
    assert lines[1] == "n,x"
    assert len(lines) == 2 + 301

    back, back_meta = ds.read_orbit(path)
    assert back.same_as(orbit)
    assert back_meta["param"] == "2.4"


def test_orbit_json_round_trip(tmp_path):
    orbit = solve_iolm(3.2, 5.0, 100)
    path = ds.write_orbit(tmp_path / "o.json", orbit, {"map": "logistic"}, "json")
    doc = json.loads(path.read_text(encoding="utf-8"))
    assert doc["schema"] == ds.ORBIT_SCHEMA
    back, _ = ds.read_orbit(path)
    assert back.diverged
    assert back.same_as(orbit)


def test_writes_are_byte_identical(tmp_path):
    orbit = _folm()
    p1 = ds.write_orbit(tmp_path / "a.csv", orbit, {"q": 0.3})
    p2 = ds.write_orbit(tmp_path / "b.csv", orbit, {"q": 0.3})
    assert p1.read_bytes() == p2.read_bytes()
    assert not list(tmp_path.glob("*.tmp"))


@pytest.mark.parametrize("name,file_format", [("d.csv", "csv"), ("d.json", "json")])
def test_diagram_round_trip(tmp_path, name, file_format):
    diagram = _diagram()
    path = ds.write_diagram(tmp_path / name, diagram, file_format)
    back = ds.read_diagram(path)
    assert back.config is None
    assert back.same_as(diagram)


def test_diagram_csv_layout(tmp_path):
    path = ds.write_diagram(tmp_path / "d.csv", _diagram())
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ds.DIAGRAM_COLUMNS
    # grid-major, then x0 in listed order
    assert rows[1] == ["1.5", "0.5", "0.1", "false"]
    assert ["2.0", "0.1", "", "true"] in rows
    assert len(rows) == 1 + 2 + 2 + 2 + 1 + 1 + 2


def test_plot_rows_skip_diverged():
    rows = list(ds.plot_rows(_diagram()))
    assert all(r[2] in (0.5, 0.1) for r in rows)
    assert len(rows) == 8
    colors = {r[2]: r[3] for r in rows}
    assert colors == {0.5: "green", 0.1: "blue"}


def test_palette_order():
    assert [ds.color_for(i) for i in range(5)] == [
        "green",
        "blue",
        "red",
        "magenta",
        "cyan",
    ]


def test_sidecar_and_manifest(tmp_path):
    data = ds.write_csv(tmp_path / "x.csv", ["a"], [[1.5]])
    side = ds.write_sidecar(
        ds.sidecar_path(data), {"q": 0.5}, [data], "1.2.3", results={"k": 1}
    )
    assert side.name == "x.sidecar.json"
    doc = json.loads(side.read_text(encoding="utf-8"))
    digest = hashlib.sha256(data.read_bytes()).hexdigest()
    assert doc["files"]["x.csv"]["sha256"] == digest
    assert doc["config"] == {"q": 0.5}
    assert doc["results"] == {"k": 1}
    assert "generated_at" not in doc
    assert side.read_text(encoding="utf-8").endswith("}\n")

    man = ds.write_manifest(tmp_path, [data, side], ["orbit"], "1.2.3")
    mdoc = json.loads(man.read_text(encoding="utf-8"))
    assert mdoc["schema"] == ds.MANIFEST_SCHEMA
    assert "generated_at" in mdoc
    assert mdoc["files"] == ["x.csv", "x.sidecar.json"]


def test_sniff_kind(tmp_path):
    o = ds.write_orbit(tmp_path / "o.csv", _folm(20), {"q": 0.3})
    d = ds.write_diagram(tmp_path / "d.csv", _diagram())
    dj = ds.write_diagram(tmp_path / "d.json", _diagram(), "json")
    assert ds.sniff_kind(o) == ds.ORBIT_KIND
    assert ds.sniff_kind(d) == ds.DIAGRAM_KIND
    assert ds.sniff_kind(dj) == ds.DIAGRAM_KIND

    junk = tmp_path / "junk.csv"
    junk.write_text("a,b\n1,2\n", encoding="utf-8")
    with pytest.raises(DatasetError):
        ds.sniff_kind(junk)
    with pytest.raises(DatasetError):
        ds.read_diagram(junk)


def test_plot_description():
    doc = ds.plot_description(
        "d.plot.csv",
        kind="scatter",
        x="axis_value",
        y="x",
        xlabel="p",
        colors={"0.5": "green"},
    )
    assert doc["kind"] == "scatter"
    assert doc["colors"] == {"0.5": "green"}
    assert "xlim" not in doc
