"""Energy statistics and the permutation test for equal distributions.

The two-sample statistic is the scaled e-distance between the samples,
computed either on raw Euclidean vectors or with the alpha-metric between
compositions. With more than two samples the statistic is the sum of the
pairwise two-sample statistics.

The permutation test computes the pooled distance matrix once per alpha
and then only relabels its rows: for a label assignment encoded as an
indicator matrix ``L`` (groups x observations), every within- and
between-group distance sum is an entry of ``L @ M @ L.T``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .distributions import RngStream
from .simplex import as_dataset, check_alpha, has_zeros
from .transforms import alpha_transform, pairwise_distance_matrix, standardize_columns

__all__ = [
    "TestResult",
    "alpha_energy_statistic",
    "e_distance",
    "energy_statistic_euclidean",
    "k_sample_statistic",
    "permutation_test",
    "pooled_distances",
]

METHODS = ("alpha_ebt", "euclidean_ebt", "rpbt")

_BATCH = 128


@dataclass(frozen=True)
class TestResult:
    """Outcome of an equality-of-distributions test.

    `statistic` and `p_value` hold one entry per alpha value (a single entry
    for the Euclidean and projection tests).
    """

    __test__ = False

    statistic: tuple
    p_value: tuple
    method: str
    alpha: Optional[tuple]
    replications: int
    seed: int
    sizes: tuple = ()

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        for p in self.p_value:
            if not 0 < p <= 1:
                raise ValueError(f"p-value {p} outside (0, 1]")

    def asdict(self) -> dict:
        return asdict(self)


def e_distance(between, within_a, within_b) -> float:
    """Scaled e-distance from the three distance blocks of two samples.

    Parameters
    ----------
    between : (n1, n2) array
    within_a : (n1, n1) array
    within_b : (n2, n2) array
    """
    between = np.asarray(between, dtype=float)
    within_a = np.asarray(within_a, dtype=float)
    within_b = np.asarray(within_b, dtype=float)
    if between.ndim != 2:
        raise ValueError("between-sample block must be 2-D")
    n1, n2 = between.shape
    if n1 < 1 or n2 < 1:
        raise ValueError("both samples must be non-empty")
    if within_a.shape != (n1, n1) or within_b.shape != (n2, n2):
        raise ValueError("distance blocks have inconsistent shapes")
    return float(_e_from_sums(between.sum(), within_a.sum(), within_b.sum(), n1, n2))


def _e_from_sums(s_ab, s_aa, s_bb, n1, n2):
    return (n1 * n2 / (n1 + n2)) * (
        2.0 * s_ab / (n1 * n2) - s_aa / (n1 * n1) - s_bb / (n2 * n2)
    )


def energy_statistic_euclidean(X, Y) -> float:
    """Two-sample energy statistic with Euclidean distances in ``R^d``."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if Y.ndim == 1:
        Y = Y[:, None]
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"dimension mismatch: d={X.shape[1]} vs d={Y.shape[1]}")
    return e_distance(cdist(X, Y), cdist(X, X), cdist(Y, Y))


def _real_rows(data):
    a = np.asarray(data, dtype=float)
    if a.ndim != 2 or a.shape[1] < 1:
        raise ValueError("expected a 2-D array of observations")
    if not np.all(np.isfinite(a)):
        raise ValueError("non-finite value in data")
    return a


def _checked_pool(datasets, alpha_values, euclidean=False):
    if euclidean:
        blocks = [_real_rows(d) for d in datasets]
    else:
        blocks = [as_dataset(d) for d in datasets]
    D = {b.shape[1] for b in blocks}
    if len(D) != 1:
        raise ValueError(f"datasets disagree on the number of components: {sorted(D)}")
    pooled = np.vstack(blocks)
    if euclidean:
        return blocks, pooled
    zeros = has_zeros(pooled)
    for a in alpha_values:
        check_alpha(a, zeros=zeros)
    return blocks, pooled


def pooled_distances(pooled, alpha: Optional[float], standardize: bool = False) -> np.ndarray:
    """Distance matrix among all pooled rows.

    ``alpha=None`` means plain Euclidean distance on the raw vectors. With
    `standardize`, rows are alpha-transformed, columns are standardised over
    the pooled rows and Euclidean distances are taken afterwards.
    """
    if alpha is None:
        Z = np.asarray(pooled, dtype=float)
        if standardize:
            Z = standardize_columns(Z)
        return cdist(Z, Z)
    if standardize:
        Z = standardize_columns(alpha_transform(pooled, alpha))
        return cdist(Z, Z)
    return pairwise_distance_matrix(pooled, pooled, alpha)


def alpha_energy_statistic(X, Y, alpha: float, standardize: bool = False) -> float:
    """Two-sample energy statistic with alpha-metric distances.

    Examples
    --------
    >>> X = [[0.2, 0.3, 0.5], [0.1, 0.1, 0.8]]
    >>> alpha_energy_statistic(X, X, 1.0)
    0.0
    """
    (Xa, Ya), pooled = _checked_pool([X, Y], [alpha])
    n1 = Xa.shape[0]
    M = pooled_distances(pooled, alpha, standardize)
    return e_distance(M[:n1, n1:], M[:n1, :n1], M[n1:, n1:])


def _statistic_from_group_sums(G, sizes):
    # G[..., g, h] is the sum of distances between groups g and h
    total = 0.0
    for g, h in combinations(range(len(sizes)), 2):
        total = total + _e_from_sums(G[..., g, h], G[..., g, g], G[..., h, h], sizes[g], sizes[h])
    return total


def k_sample_statistic(datasets: Sequence, alpha: Optional[float], standardize: bool = False) -> float:
    """Sum of the two-sample statistics over all unordered pairs of samples."""
    if len(datasets) < 2:
        raise ValueError("need at least two samples")
    alphas = [] if alpha is None else [alpha]
    blocks, pooled = _checked_pool(datasets, alphas, euclidean=alpha is None)
    sizes = [b.shape[0] for b in blocks]
    M = pooled_distances(pooled, alpha, standardize)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    L = (labels[None, :] == np.arange(len(sizes))[:, None]).astype(float)
    return float(_statistic_from_group_sums(L @ M @ L.T, sizes))


def _indicators(perms, sizes):
    # perms: (b, N) pooled indices; the first sizes[0] go to group 0, etc.
    b, N = perms.shape
    k = len(sizes)
    group_of_slot = np.repeat(np.arange(k), sizes)
    L = np.zeros((b, k, N))
    L[np.arange(b)[:, None], group_of_slot[None, :], perms] = 1.0
    return L


def _permuted_statistics(M, perms, sizes):
    L = _indicators(perms, sizes)
    G = (L @ M) @ L.transpose(0, 2, 1)
    return _statistic_from_group_sums(G, sizes)


def permutation_test(
    datasets: Sequence,
    alpha=1.0,
    R: int = 999,
    seed: int = 0,
    standardize: bool = False,
) -> TestResult:
    """Permutation test of equal distributions across two or more samples.

    Parameters
    ----------
    datasets : sequence of (n_g, D) arrays or CompositionalDataset
    alpha : float, sequence of floats, or None
        One test is reported per alpha value, all sharing the same
        permutations. ``None`` runs the energy test on the raw rows with
        Euclidean distance; the rows then need not be compositions.
    R : int
        Number of random relabellings.
    seed : int
        Master seed; permutations come from its own substream.
    standardize : bool
        Standardise the transformed columns over the pooled sample first.

    Returns
    -------
    TestResult
        ``p = (1 + #{T_perm >= T_obs}) / (R + 1)`` for each alpha.
    """
    if len(datasets) < 2:
        raise ValueError("need at least two samples")
    R = int(R)
    if R < 1:
        raise ValueError("R must be at least 1")
    if alpha is None:
        alphas = [None]
    else:
        alphas = [float(a) for a in np.atleast_1d(alpha)]
        if not alphas:
            raise ValueError("no alpha values given")
    blocks, pooled = _checked_pool(datasets, [a for a in alphas if a is not None], euclidean=alpha is None)
    sizes = [b.shape[0] for b in blocks]
    if min(sizes) < 2:
        raise ValueError("every sample needs at least 2 observations")
    N = pooled.shape[0]

    matrices = [pooled_distances(pooled, a, standardize) for a in alphas]
    identity = np.arange(N)[None, :]
    observed = [float(_permuted_statistics(M, identity, sizes)[0]) for M in matrices]
    # absorbs rounding differences between equal statistics
    tol = [1e-10 * N * max(M.mean(), np.finfo(float).tiny) for M in matrices]

    counts = np.zeros(len(alphas), dtype=np.int64)
    gen = RngStream(seed).child(0).generator()
    done = 0
    while done < R:
        b = min(_BATCH, R - done)
        perms = gen.permuted(np.broadcast_to(np.arange(N), (b, N)), axis=1)
        for i, M in enumerate(matrices):
            t = _permuted_statistics(M, perms, sizes)
            counts[i] += int(np.count_nonzero(t >= observed[i] - tol[i]))
        done += b

    pvals = tuple(float((1 + c) / (R + 1)) for c in counts)
    return TestResult(
        statistic=tuple(observed),
        p_value=pvals,
        method="euclidean_ebt" if alpha is None else "alpha_ebt",
        alpha=None if alpha is None else tuple(alphas),
        replications=R,
        seed=int(seed),
        sizes=tuple(sizes),
    )
