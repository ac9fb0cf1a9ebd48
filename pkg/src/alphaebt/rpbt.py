"""Random-projection test for equal distributions of compositions.

Compositions are sent to the unit sphere by taking square roots, projected
on ``B`` random directions, each projection pair is compared with a
two-sample Kolmogorov-Smirnov test, and the ``B`` p-values are combined.
"""

from __future__ import annotations

import math

import numpy as np

from .distributions import RngStream
from .energy import TestResult
from .simplex import as_dataset

__all__ = [
    "combine_pvalues_bh",
    "combine_pvalues_bonferroni",
    "kolmogorov_sf",
    "ks_two_sample",
    "ks_uniform",
    "random_direction",
    "rpbt_test",
    "sqrt_map",
]

_SERIES_EPS = 1e-12
_SMALL_T = 1.0


def sqrt_map(x) -> np.ndarray:
    """Componentwise square root; compositions land on the unit sphere."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("negative component")
    return np.sqrt(x)


def random_direction(D: int, rng) -> np.ndarray:
    """A direction uniform on the unit sphere in ``R^D``.

    `rng` is an :class:`RngStream` or a numpy ``Generator``.
    """
    if D < 2:
        raise ValueError("D must be at least 2")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    while True:
        v = gen.standard_normal(D)
        norm = np.linalg.norm(v)
        if norm > 0:
            return v / norm


def _kolmogorov_sf(t):
    t = np.asarray(t, dtype=float)
    out = np.ones_like(t)
    big = t >= _SMALL_T
    small = (t > 0) & ~big
    if np.any(big):
        tb = t[big]
        acc = np.zeros_like(tb)
        j = 1
        while True:
            term = np.exp(-2.0 * j * j * tb * tb)
            acc += (1.0 if j % 2 else -1.0) * term
            if np.all(term < _SERIES_EPS):
                break
            j += 1
        out[big] = 2.0 * acc
    if np.any(small):
        # same function written with the Jacobi theta identity; the
        # alternating series converges too slowly near zero
        ts = t[small]
        acc = np.zeros_like(ts)
        j = 1
        while True:
            term = np.exp(-((2 * j - 1) ** 2) * math.pi**2 / (8.0 * ts * ts))
            acc += term
            if np.all(term < _SERIES_EPS):
                break
            j += 1
        out[small] = 1.0 - math.sqrt(2.0 * math.pi) / ts * acc
    return np.clip(out, np.finfo(float).tiny, 1.0)


def kolmogorov_sf(t: float) -> float:
    """Survival function of the Kolmogorov distribution, clamped to (0, 1]."""
    return float(_kolmogorov_sf(t))


def _ks_statistics(A, B):
    # column-wise two-sample KS distance, A: (n1, m), B: (n2, m)
    n1, n2 = A.shape[0], B.shape[0]
    pooled = np.concatenate([A, B], axis=0)
    order = np.argsort(pooled, axis=0, kind="stable")
    vals = np.take_along_axis(pooled, order, axis=0)
    from_a = order < n1
    cdf_a = np.cumsum(from_a, axis=0) / n1
    cdf_b = np.cumsum(~from_a, axis=0) / n2
    # only compare at the last of each run of tied values
    last = np.ones_like(vals, dtype=bool)
    last[:-1] = vals[:-1] != vals[1:]
    gap = np.where(last, np.abs(cdf_a - cdf_b), 0.0)
    return gap.max(axis=0)


def ks_two_sample(s1, s2):
    """Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.

    Returns
    -------
    statistic : float
        ``sup |F1 - F2|`` over the pooled points.
    p_value : float
        Kolmogorov survival function at ``sqrt(n1 n2 / (n1 + n2)) * statistic``.

    Examples
    --------
    >>> ks_two_sample([1, 3], [2, 4])[0]
    0.5
    """
    s1 = np.asarray(s1, dtype=float).ravel()
    s2 = np.asarray(s2, dtype=float).ravel()
    if s1.size == 0 or s2.size == 0:
        raise ValueError("empty sample")
    d = float(_ks_statistics(s1[:, None], s2[:, None])[0])
    n1, n2 = s1.size, s2.size
    return d, kolmogorov_sf(math.sqrt(n1 * n2 / (n1 + n2)) * d)


def ks_uniform(sample):
    """One-sample KS test of `sample` against U(0, 1), asymptotic p-value."""
    x = np.sort(np.asarray(sample, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise ValueError("empty sample")
    i = np.arange(1, n + 1)
    cdf = np.clip(x, 0.0, 1.0)
    d = float(max(np.max(i / n - cdf), np.max(cdf - (i - 1) / n)))
    return d, kolmogorov_sf(math.sqrt(n) * d)


def _check_pvalues(pvalues):
    p = np.asarray(pvalues, dtype=float).ravel()
    if p.size == 0:
        raise ValueError("no p-values to combine")
    if np.any(~(p > 0)) or np.any(p > 1):
        raise ValueError("p-values must lie in (0, 1]")
    return p


def combine_pvalues_bh(pvalues) -> float:
    """Benjamini-Heller combination ``min_i (B / i) p_(i)``, capped at 1.

    >>> combine_pvalues_bh([0.01, 0.04, 0.5])
    0.03
    """
    p = np.sort(_check_pvalues(pvalues))
    B = p.size
    return float(min(1.0, np.min(B / np.arange(1, B + 1) * p)))


def combine_pvalues_bonferroni(pvalues) -> float:
    p = _check_pvalues(pvalues)
    return float(min(1.0, p.size * p.min()))


def rpbt_test(X, Y, B: int = 100, seed: int = 0, combine: str = "bh") -> TestResult:
    """Random-projection test of equal distributions for two samples.

    Parameters
    ----------
    X, Y : (n1, D), (n2, D) compositions
    B : int
        Number of random directions.
    seed : int
        Direction ``b`` is drawn from substream ``b`` of this seed.
    combine : {"bh", "bonferroni"}

    Returns
    -------
    TestResult
        ``statistic`` holds the largest KS distance over the projections.
    """
    X = as_dataset(X)
    Y = as_dataset(Y)
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"dimension mismatch: D={X.shape[1]} vs D={Y.shape[1]}")
    if X.shape[0] < 2 or Y.shape[0] < 2:
        raise ValueError("every sample needs at least 2 observations")
    B = int(B)
    if B < 1:
        raise ValueError("B must be at least 1")
    combiner = {"bh": combine_pvalues_bh, "bonferroni": combine_pvalues_bonferroni}.get(combine)
    if combiner is None:
        raise ValueError(f"unknown combination rule {combine!r}")

    D = X.shape[1]
    root = RngStream(seed).child(1)
    dirs = np.column_stack([random_direction(D, root.child(b)) for b in range(B)])
    d = _ks_statistics(sqrt_map(X) @ dirs, sqrt_map(Y) @ dirs)
    n1, n2 = X.shape[0], Y.shape[0]
    pvals = _kolmogorov_sf(math.sqrt(n1 * n2 / (n1 + n2)) * d)
    return TestResult(
        statistic=(float(d.max()),),
        p_value=(combiner(pvals),),
        method="rpbt",
        alpha=None,
        replications=B,
        seed=int(seed),
        sizes=(n1, n2),
    )
