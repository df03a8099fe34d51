import numpy as np
import pytest

from fracmap.errors import ConfigError
from fracmap.maps import MapFamily
from fracmap.sweep import (
    BifurcationDiagram,
    Scheme,
    SweepAxis,
    SweepConfig,
    parse_grid,
    resolve_threads,
    run_sweep,
    unit_grid,
    weights_cache,
)


def _config(**kw):
    base = dict(
        axis=SweepAxis.P,
        grid=parse_grid("1.3:2.5:7"),
        fixed_value=0.5,
        initial_conditions=(0.5, 0.1),
        n_max=300,
        tail_length=50,
    )
    base.update(kw)
    return SweepConfig(**base)


def test_parse_grid():
    g = parse_grid("1.3:2.5:5")
    assert len(g) == 5
    assert g[0] == 1.3 and g[-1] == 2.5
    assert parse_grid("-3:3:1") == (-3.0,)
    for bad in ("1.3:2.5", "a:b:c", "1:2:0"):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_unit_grid_is_open_at_zero():
    assert unit_grid(4) == (0.25, 0.5, 0.75, 1.0)
    with pytest.raises(ConfigError):
        unit_grid(0)


def test_config_errors():
    assert _config().errors() == []
    errs = _config(axis=SweepAxis.Q, grid=(0.0, 0.5), fixed_value=2.4).errors()
    assert any("(0, 1]" in e for e in errs)
    assert any("tail" in e for e in _config(tail_length=300).errors())
    assert any("distinct" in e for e in _config(initial_conditions=(0.5, 0.5)).errors())
    assert any("increasing" in e for e in _config(grid=(2.0, 1.0)).errors())
    with pytest.raises(ConfigError):
        _config(fixed_value=1.5).check()


def test_integer_scheme_skips_order_check():
    cfg = _config(scheme=Scheme.INTEGER, fixed_value=7.0)
    assert cfg.errors() == []
    errs = _config(scheme=Scheme.INTEGER, axis=SweepAxis.Q, grid=(0.5, 1.0)).errors()
    assert any("p axis" in e for e in errs)


def test_point_maps_axis():
    assert _config().point(2.0) == (0.5, 2.0)
    cfg = _config(axis=SweepAxis.Q, grid=(0.5, 1.0), fixed_value=2.4)
    assert cfg.point(0.5) == (0.5, 2.4)


def test_weights_cache_sizes():
    assert list(weights_cache(_config())) == [0.5]
    cfg = _config(axis=SweepAxis.Q, grid=unit_grid(5), fixed_value=2.4)
    cache = weights_cache(cfg)
    assert sorted(cache) == list(unit_grid(5))
    assert all(w.n_max == 300 for w in cache.values())
    assert weights_cache(_config(scheme=Scheme.INTEGER)) == {}


def test_resolve_threads():
    assert resolve_threads(None) == 1
    assert resolve_threads(3) == 3
    assert resolve_threads("2") == 2
    assert resolve_threads("auto") >= 1


def test_run_sweep_shape():
    diagram = run_sweep(_config())
    assert isinstance(diagram, BifurcationDiagram)
    assert diagram.initial_conditions == (0.5, 0.1)
    assert diagram.grid.shape == (7,)
    for s in diagram.sets:
        assert len(s.tails) == 7
        assert all(t is not None and t.shape == (50,) for t in s.tails)
    assert not diagram.all_diverged
    assert diagram.set_for(0.1).x0 == 0.1
    with pytest.raises(KeyError):
        diagram.set_for(0.3)


def test_parallel_matches_serial():
    cfg = _config()
    serial = run_sweep(cfg, threads=1)
    parallel = run_sweep(cfg, threads=2)
    assert serial.same_as(parallel)


def test_grid_points_are_independent():
    full = run_sweep(_config(), threads=2)
    grid = full.grid.tolist()
    dropped = grid[:3] + grid[4:]
    part = run_sweep(_config(grid=tuple(dropped)), threads=2)
    keep = [i for i in range(len(grid)) if i != 3]
    for whole, cut in zip(full.sets, part.sets):
        assert cut.x0 == whole.x0
        for j, i in enumerate(keep):
            assert cut.tails[j].tobytes() == whole.tails[i].tobytes()


def test_q_axis_sweep():
    cfg = _config(axis=SweepAxis.Q, grid=(0.5, 0.75, 1.0), fixed_value=1.2)
    diagram = run_sweep(cfg)
    assert diagram.grid.tolist() == [0.5, 0.75, 1.0]


def test_integer_scheme_two_cycle():
    cfg = _config(
        grid=(3.2,), fixed_value=1.0, initial_conditions=(0.1,), scheme=Scheme.INTEGER
    )
    tail = run_sweep(cfg).sets[0].tails[0]
    assert len(set(np.round(tail, 9).tolist())) == 2


def test_all_diverged_marker_rows():
    cfg = _config(
        grid=(3.5, 3.6),
        fixed_value=1.0,
        initial_conditions=(2.0,),
        n_max=100,
        tail_length=10,
    )
    diagram = run_sweep(cfg)
    assert diagram.all_diverged
    assert diagram.sets[0].diverged.tolist() == [True, True]
    frame = diagram.to_frame()
    assert list(frame.columns) == ["grid_value", "x0", "sample", "diverged"]
    assert len(frame) == 2
    assert frame["diverged"].all()
    assert frame["sample"].isna().all()


def test_puu_family_sweep():
    cfg = _config(
        axis=SweepAxis.Q,
        grid=(0.5, 1.0),
        fixed_value=1.27,
        family=MapFamily.PUU,
        initial_conditions=(0.2,),
    )
    diagram = run_sweep(cfg)
    assert len(diagram.sets) == 1
