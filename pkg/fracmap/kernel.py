"""fracmap.kernel

Memory-kernel weights of the Caputo-like discrete iteration.

The solution sum weighs the map value from step i by Gamma(n-i+q)/Gamma(n-i+1),
and with the leading 1/Gamma(q) folded in the coefficient depends only on
k = n - i:

    c[k] = Gamma(k+q) / (Gamma(q) * Gamma(k+1)),   c[0] = 1

Three interchangeable ways of building the table:
- recurrence (default): c[k] = c[k-1] * (k-1+q)/k, finite for any length
- log-gamma: exp(lnGamma(k+q) - lnGamma(k+1)) / Gamma(q), for cross-checks
- direct: Gamma(k+q)/Gamma(k+1) evaluated as is, overflowing past k ~ 170;
  kept only to show that failure

Summation policy shared with the solver: contiguous dot product for sums of up
to COMPENSATED_THRESHOLD terms, exactly rounded fsum of the products beyond.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Optional

import numpy as np
from scipy.special import gamma, gammaln, poch

COMPENSATED_THRESHOLD = 10_000

RECURRENCE = "recurrence"
LOGGAMMA = "loggamma"
DIRECT = "direct"
METHODS = (RECURRENCE, LOGGAMMA, DIRECT)


def check_order(q: float) -> float:
    """Return q as float, or raise ValueError unless 0 < q <= 1."""
    q = float(q)
    if not (0.0 < q <= 1.0):
        raise ValueError(f"fractional order q must be in (0, 1], got {q!r}")
    return q


def _check_length(n_max: int) -> int:
    n = int(n_max)
    if n < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max!r}")
    return n


@dataclass(frozen=True, eq=False)
class KernelWeights:
    """
    Normalized kernel coefficients for one fractional order.

    c: read-only float64 array, c[k] for k = 0..n_max-1
    finite: per-entry flag; all True except on the direct path past overflow
    """

    q: float
    c: np.ndarray
    method: str
    finite: np.ndarray

    def __post_init__(self) -> None:
        self.c.setflags(write=False)
        self.finite.setflags(write=False)

    @property
    def n_max(self) -> int:
        return int(self.c.shape[0])

    @property
    def all_finite(self) -> bool:
        return bool(self.finite.all())

    def reversed(self) -> np.ndarray:
        """Weights in descending-k order, contiguous (what the solver slices)."""
        out = np.ascontiguousarray(self.c[::-1])
        out.setflags(write=False)
        return out


def _make(q: float, c: np.ndarray, method: str) -> KernelWeights:
    return KernelWeights(q=q, c=c, method=method, finite=np.isfinite(c))


def weights_recurrence(q: float, n_max: int) -> KernelWeights:
    q = check_order(q)
    n = _check_length(n_max)
    k = np.arange(1, n, dtype=np.float64)
    c = np.empty(n, dtype=np.float64)
    c[0] = 1.0
    # cumprod runs left to right, the same order as the scalar recurrence
    np.cumprod((k - 1.0 + q) / k, out=c[1:])
    return _make(q, c, RECURRENCE)


def weights_loggamma(q: float, n_max: int) -> KernelWeights:
    q = check_order(q)
    n = _check_length(n_max)
    k = np.arange(n, dtype=np.float64)
    c = np.exp(gammaln(k + q) - gammaln(k + 1.0)) / gamma(q)
    c[0] = 1.0
    return _make(q, c, LOGGAMMA)


def weights_direct(q: float, n_max: int) -> KernelWeights:
    """Naive gamma ratio. Entries where either gamma overflows are set to inf."""
    q = check_order(q)
    n = _check_length(n_max)
    k = np.arange(n, dtype=np.float64)
    num = gamma(k + q)
    den = gamma(k + 1.0)
    # Gamma(k+q) can still fit while Gamma(k+1) is already inf: the 0 that
    # division would give is just as wrong as the overflow itself
    ok = np.isfinite(num) & np.isfinite(den)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        c = np.where(ok, num / den, np.inf) / gamma(q)
    return _make(q, c, DIRECT)


_BUILDERS = {
    RECURRENCE: weights_recurrence,
    LOGGAMMA: weights_loggamma,
    DIRECT: weights_direct,
}


def build_weights(q: float, n_max: int, method: str = RECURRENCE) -> KernelWeights:
    fn = _BUILDERS.get(method)
    if fn is None:
        raise ValueError(
            f"unknown kernel method {method!r} (expected one of {METHODS})"
        )
    return fn(q, n_max)


def compensated_sum(values: Iterable[float]) -> float:
    """Exactly rounded sum; result does not depend on term order."""
    if isinstance(values, np.ndarray):
        values = values.tolist()
    return math.fsum(values)


def memory_sum(weights_desc: np.ndarray, terms: np.ndarray) -> float:
    """
    Sum of weights_desc[j] * terms[j] over equal-length arrays.

    Long sums go through compensated_sum of the elementwise products, which is
    order independent and so immune to BLAS threading.
    """
    if terms.shape[0] > COMPENSATED_THRESHOLD:
        return compensated_sum(weights_desc * terms)
    return float(np.dot(weights_desc, terms))


def partial_kernel_sum(q: float, n: int) -> float:
    """S(n) = sum_{k<n} Gamma(k+q)/Gamma(k+1), via the recurrence path."""
    w = weights_recurrence(q, n)
    if n > COMPENSATED_THRESHOLD:
        s = compensated_sum(w.c)
    else:
        s = float(np.sum(w.c))
    return gamma(w.q) * s


def closed_form_sum(q: float, n: int) -> float:
    """Gamma(n+q) / (q * Gamma(n)), the closed form of partial_kernel_sum."""
    q = check_order(q)
    n = _check_length(n)
    return float(poch(float(n), q)) / q


def brute_force_sum(q: float, n: int) -> float:
    """Term-by-term sum of Gamma(k+q)/Gamma(k+1); small n only (no overflow care)."""
    q = check_order(q)
    n = _check_length(n)
    return math.fsum(math.gamma(k + q) / math.gamma(k + 1) for k in range(n))


def kernel_sums(q: float, n_max: int) -> Dict[str, np.ndarray]:
    """
    Running un-normalized sums S(1..n_max) by the three paths.

    This is the constant-f stress test: the direct column turns non-finite once
    a single gamma overflows, the other two stay bounded.
    """
    q = check_order(q)
    g = gamma(q)
    out: Dict[str, np.ndarray] = {"n": np.arange(1, _check_length(n_max) + 1)}
    for method in (DIRECT, LOGGAMMA, RECURRENCE):
        w = build_weights(q, n_max, method)
        with np.errstate(over="ignore", invalid="ignore"):
            out[method] = np.cumsum(w.c) * g
    return out


def first_nonfinite(weights: KernelWeights) -> Optional[int]:
    bad = np.flatnonzero(~weights.finite)
    return int(bad[0]) if bad.size else None
