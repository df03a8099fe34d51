import math
import unittest

import numpy as np
import pytest

from fracmap.kernel import (
    COMPENSATED_THRESHOLD,
    brute_force_sum,
    build_weights,
    check_order,
    closed_form_sum,
    compensated_sum,
    first_nonfinite,
    kernel_sums,
    memory_sum,
    partial_kernel_sum,
    weights_direct,
    weights_loggamma,
    weights_recurrence,
)

QS = (0.1, 0.3, 0.5, 0.7, 0.9)


class TestWeights(unittest.TestCase):
    def test_first_entries(self):
        w = weights_recurrence(0.3, 4)
        self.assertEqual(w.c[0], 1.0)
        self.assertAlmostEqual(w.c[1], 0.3, places=15)
        self.assertAlmostEqual(w.c[2], 0.3 * 1.3 / 2.0, places=15)
        self.assertEqual(w.n_max, 4)
        self.assertTrue(w.all_finite)

    def test_q_one_is_all_ones(self):
        for method in ("recurrence", "loggamma"):
            w = build_weights(1.0, 500, method)
            self.assertTrue(np.all(w.c == 1.0), method)

    def test_weights_are_read_only(self):
        w = weights_recurrence(0.5, 10)
        with self.assertRaises(ValueError):
            w.c[0] = 2.0

    def test_reversed_is_contiguous(self):
        w = weights_recurrence(0.5, 10)
        r = w.reversed()
        self.assertTrue(r.flags["C_CONTIGUOUS"])
        self.assertEqual(r[0], w.c[-1])
        self.assertEqual(r[-1], 1.0)

    def test_loggamma_agrees_with_recurrence(self):
        for q in QS:
            a = weights_recurrence(q, 100).c
            b = weights_loggamma(q, 100).c
            np.testing.assert_allclose(b, a, rtol=1e-11, err_msg=f"q={q}")

    def test_unknown_method(self):
        with self.assertRaises(ValueError):
            build_weights(0.5, 10, "magic")


@pytest.mark.parametrize("q", [0.0, -0.2, 1.5, float("nan")])
def test_check_order_rejects(q):
    with pytest.raises(ValueError):
        check_order(q)


def test_bad_length():
    with pytest.raises(ValueError):
        weights_recurrence(0.5, 0)


def test_direct_path_overflows_but_stable_paths_do_not():
    direct = weights_direct(0.5, 250)
    bad = first_nonfinite(direct)
    assert bad is not None and bad <= 200
    assert direct.finite[:150].all()
    assert not direct.all_finite

    ref = weights_recurrence(0.5, 250).c
    ok = direct.finite
    np.testing.assert_allclose(direct.c[ok], ref[ok], rtol=1e-10)


def test_stable_paths_finite_to_a_million():
    assert weights_recurrence(0.5, 10**6).all_finite
    assert weights_loggamma(0.5, 10**6).all_finite


@pytest.mark.parametrize("q", QS)
@pytest.mark.parametrize("n", [1, 2, 10, 100, 5000])
def test_partial_sum_matches_closed_form(q, n):
    assert math.isclose(partial_kernel_sum(q, n), closed_form_sum(q, n), rel_tol=1e-10)


@pytest.mark.parametrize("q", QS)
def test_closed_form_against_brute_force(q):
    for n in range(1, 21):
        assert math.isclose(brute_force_sum(q, n), closed_form_sum(q, n), rel_tol=1e-12)


def test_kernel_sums_table():
    t = kernel_sums(0.5, 250)
    assert t["n"][0] == 1 and t["n"][-1] == 250
    assert not np.isfinite(t["direct"][-1])
    assert np.isfinite(t["loggamma"]).all()
    assert np.isfinite(t["recurrence"]).all()
    assert math.isclose(t["recurrence"][-1], closed_form_sum(0.5, 250), rel_tol=1e-10)


def test_compensated_sum_is_exact():
    assert compensated_sum([1e16, 1.0, -1e16]) == 1.0
    assert compensated_sum(np.array([0.1] * 10)) == 1.0


def test_memory_sum_short_is_dot():
    w = weights_recurrence(0.4, 50).reversed()
    t = np.linspace(-1.0, 1.0, 50)
    assert memory_sum(w, t) == float(np.dot(w, t))


def test_memory_sum_long_is_order_independent():
    n = COMPENSATED_THRESHOLD + 7
    w = weights_recurrence(0.4, n).reversed()
    t = np.sin(np.arange(n, dtype=np.float64))
    forward = memory_sum(w, t)
    backward = memory_sum(w[::-1].copy(), t[::-1].copy())
    assert forward == backward
