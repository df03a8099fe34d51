import unittest

import numpy as np
import pytest

from fracmap.analysis import (
    BSDistanceProfile,
    PeriodVerdict,
    VerdictKind,
    bs_distance,
    classify_tails,
    detect_period,
    detect_period_samples,
    first_bifurcation_point,
    hausdorff,
    segment_transients,
    tail_diameter,
    transition_points,
)
from fracmap.errors import AnalysisError, NoBifurcationFound
from fracmap.kernel import weights_recurrence
from fracmap.maps import MapSpec
from fracmap.solver import Orbit, OrbitProblem, solve_iolm, solve_orbit
from fracmap.sweep import (
    BifurcativeSet,
    SweepAxis,
    SweepConfig,
    parse_grid,
    run_sweep,
)


def _chaotic(n):
    return solve_iolm(3.9, 0.1, n - 1).samples


class TestDetectPeriod(unittest.TestCase):
    def test_iolm_two_cycle(self):
        v = detect_period(solve_iolm(3.2, 0.1, 1000), window=200)
        self.assertEqual(v.kind, VerdictKind.NPO)
        self.assertEqual(v.period, 2)
        self.assertLess(v.residual, 1e-10)
        self.assertEqual(v.window, (801, 1001))

    def test_fixed_point(self):
        v = detect_period(solve_iolm(2.5, 0.1, 1000), window=200)
        self.assertEqual(v.kind, VerdictKind.FIXED_POINT_LIKE)
        self.assertEqual(v.period, 1)

    def test_chaotic(self):
        v = detect_period(solve_iolm(3.9, 0.1, 1000), window=200)
        self.assertEqual(v.kind, VerdictKind.CHAOTIC_LIKE)
        self.assertIsNone(v.period)
        self.assertFalse(v.periodic)

    def test_diverged(self):
        v = detect_period(solve_iolm(3.2, 5.0, 100))
        self.assertEqual(v.kind, VerdictKind.DIVERGED)

    def test_window_too_long(self):
        with self.assertRaises(AnalysisError):
            detect_period(solve_iolm(3.2, 0.1, 100), window=400)
        with self.assertRaises(AnalysisError):
            detect_period(solve_iolm(3.2, 0.1, 100), window=50, tol=-1.0)


def test_exact_sequence_with_zero_tol():
    v = detect_period_samples([1.0, 2.0, 3.0] * 20, tol=0.0)
    assert v.kind is VerdictKind.NPO
    assert v.period == 3
    assert v.residual == 0.0


def test_period_limited_by_max_period():
    x = np.tile(np.arange(5, dtype=float), 40)
    assert detect_period_samples(x, max_period=4).kind is VerdictKind.CHAOTIC_LIKE
    assert detect_period_samples(x, max_period=5).period == 5


def test_verdict_to_dict():
    d = PeriodVerdict(VerdictKind.NPO, (0, 10), period=2, residual=0.0).to_dict()
    assert d == {"kind": "npo", "period": 2, "residual": 0.0, "window": [0, 10]}


def test_segments_two_regimes():
    x = np.concatenate([_chaotic(1000), np.tile([0.3, 0.7], 500)])
    segs = segment_transients(Orbit(samples=x), window=200, stride=100)
    assert [s.verdict.key for s in segs] == [("chaotic_like", None), ("npo", 2)]
    assert transition_points(segs) == [1000]
    assert segs[0].start == 0 and segs[-1].stop == 2000


def test_segments_three_regimes():
    x = np.concatenate([_chaotic(1000), np.tile([0.3, 0.7], 400), np.full(700, 0.6)])
    segs = segment_transients(Orbit(samples=x), window=200, stride=100)
    assert [s.verdict.kind for s in segs] == [
        VerdictKind.CHAOTIC_LIKE,
        VerdictKind.NPO,
        VerdictKind.FIXED_POINT_LIKE,
    ]
    assert transition_points(segs) == [1000, 1800]
    for a, b in zip(segs, segs[1:]):
        assert a.stop == b.start
    assert segs[1].to_dict()["range"] == [1000, 1800]


def test_segments_of_diverged_orbit():
    x = np.concatenate([np.full(500, 0.25), [1e12]])
    orbit = Orbit(samples=x, diverged=True, divergence_index=500)
    segs = segment_transients(orbit, window=100, stride=50)
    assert segs[-1].verdict.kind is VerdictKind.DIVERGED
    assert (segs[-1].start, segs[-1].stop) == (500, 501)
    assert segs[0].verdict.kind is VerdictKind.FIXED_POINT_LIKE


def test_segments_survive_stride_refinement():
    problem = OrbitProblem(q=0.25, map=MapSpec.logistic(1.8), x0=0.1, n_max=3500)
    orbit = solve_orbit(problem, weights_recurrence(0.25, 3500))
    window = 400
    by_stride = {s: segment_transients(orbit, window, s) for s in (100, 50, 25)}
    for coarse, fine in [(100, 50), (50, 25)]:
        for seg in by_stride[coarse]:
            if seg.stop - seg.start <= 2 * window:
                continue
            # boundaries may move by less than a window; the core stays put
            lo, hi = seg.start + window, seg.stop - window
            assert any(
                f.verdict.key == seg.verdict.key and f.start <= lo and hi <= f.stop
                for f in by_stride[fine]
            ), (coarse, seg, by_stride[fine])
    for segs in by_stride.values():
        cuts = transition_points(segs)
        assert cuts and 600 <= cuts[0] <= 800, cuts


def test_segments_bad_stride():
    with pytest.raises(AnalysisError):
        segment_transients(Orbit(samples=np.zeros(100)), window=50, stride=0)


def test_hausdorff():
    assert hausdorff(np.array([0.0, 1.0]), np.array([0.0, 2.0])) == 1.0
    assert hausdorff(np.array([0.5]), np.array([0.5, 0.5])) == 0.0


def test_tail_diameter():
    assert tail_diameter(np.array([0.2, 0.9, 0.5])) == pytest.approx(0.7)
    assert np.isnan(tail_diameter(None))


def _set(x0, grid, tails):
    return BifurcativeSet(x0=x0, grid=np.asarray(grid, dtype=float), tails=tuple(tails))


def test_bs_distance_profile():
    t = np.array([0.2, 0.4])
    a = _set(0.5, [1.0, 2.0, 3.0], [t, None, None])
    b = _set(0.1, [1.0, 2.0, 3.0], [t + 0.1, t, None])
    prof = bs_distance(a, b)
    assert isinstance(prof, BSDistanceProfile)
    assert prof.distance[0] == pytest.approx(0.1)
    assert np.isinf(prof.distance[1])
    assert prof.distance[2] == 0.0
    assert prof.mismatch.tolist() == [False, True, False]
    assert prof.exceeds(0.05).tolist() == [1.0, 2.0]
    assert prof.max_distance() == pytest.approx(0.1)
    assert prof.mean_distance() == pytest.approx(0.05)
    assert prof.mean_distance(lo=2.5) == 0.0


def test_bs_distance_grid_mismatch():
    t = np.array([0.2])
    with pytest.raises(AnalysisError):
        bs_distance(_set(0.5, [1.0], [t]), _set(0.1, [1.5], [t]))


def test_first_bifurcation_point_synthetic():
    flat = np.full(10, 0.6)
    wide = np.array([0.3, 0.7] * 5)
    bs = _set(0.5, [1.0, 2.0, 3.0, 4.0], [wide, flat, None, wide])
    assert first_bifurcation_point(bs) == 4.0
    with pytest.raises(NoBifurcationFound):
        first_bifurcation_point(_set(0.5, [1.0, 2.0], [flat, flat]))


def test_first_bifurcation_near_two_at_q_one():
    # x + p*x*(1-x) loses its fixed point x=1 at p=2
    cfg = SweepConfig(
        axis=SweepAxis.P,
        grid=parse_grid("1.3:2.5:121"),
        fixed_value=1.0,
        initial_conditions=(0.5,),
        n_max=1500,
        tail_length=200,
    )
    bs = run_sweep(cfg).sets[0]
    assert abs(first_bifurcation_point(bs, tol=1e-3) - 2.0) <= 0.011


def test_classify_tails():
    flat = np.full(20, 0.6)
    cyc = np.array([0.3, 0.7] * 10)
    out = classify_tails(_set(0.5, [1.0, 2.0, 3.0], [flat, cyc, None]))
    assert [v.kind for _, v in out] == [
        VerdictKind.FIXED_POINT_LIKE,
        VerdictKind.NPO,
        VerdictKind.DIVERGED,
    ]
    assert [g for g, _ in out] == [1.0, 2.0, 3.0]


def test_folm_orbit_verdict_is_reported():
    problem = OrbitProblem(q=0.9, map=MapSpec.logistic(1.0), x0=0.5, n_max=800)
    orbit = solve_orbit(problem, weights_recurrence(0.9, 800))
    v = detect_period(orbit, window=200, tol=1e-3)
    assert v.kind is VerdictKind.FIXED_POINT_LIKE
