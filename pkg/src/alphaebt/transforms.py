"""Power, log-ratio and alpha transformations of compositions, and the
alpha-metric built on them.

All functions broadcast over leading axes: pass a single composition of
shape ``(D,)`` or a block of shape ``(n, D)``.

Notes
-----
For ``alpha != 0`` the transformation is

.. math::

    w_\\alpha(x) = \\frac{D u_\\alpha(x) - 1}{\\alpha}, \\qquad
    u_\\alpha(x)_i = \\frac{x_i^\\alpha}{\\sum_j x_j^\\alpha},

and ``alpha == 0`` is the centred log-ratio. Left-multiplying by the
Helmert sub-matrix removes the zero-sum redundancy.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .simplex import CompositionError, check_alpha

__all__ = [
    "aitchison_distance",
    "alpha_metric",
    "alpha_transform",
    "clr",
    "helmert_submatrix",
    "ilr",
    "pairwise_distance_matrix",
    "power_transform",
    "standardize_columns",
    "w_alpha",
]


def _prepare(x, alpha):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] < 2:
        raise CompositionError("a composition needs at least 2 components")
    if np.any(x < 0):
        raise CompositionError("negative component")
    alpha = check_alpha(alpha, zeros=bool(np.any(x == 0)))
    return x, alpha


def _powers(x, alpha):
    # exp(alpha*log x) for positive parts, exact zeros stay zero (alpha > 0 there)
    with np.errstate(divide="ignore"):
        logx = np.log(x)
    return np.where(x > 0, np.exp(alpha * logx), 0.0)


def power_transform(x, alpha: float) -> np.ndarray:
    """Aitchison's power transformation ``x**alpha`` re-closed onto the simplex.

    ``alpha == 0`` on strictly positive data gives the barycentre.

    Examples
    --------
    >>> power_transform([0.25, 0.25, 0.5], 0.5).round(6)
    array([0.292893, 0.292893, 0.414214])
    """
    x, alpha = _prepare(x, alpha)
    p = _powers(x, alpha)
    return p / p.sum(axis=-1, keepdims=True)


def clr(x) -> np.ndarray:
    """Centred log-ratio: ``log(x_i / g(x))`` with `g` the geometric mean."""
    x, _ = _prepare(x, 0.0)
    logx = np.log(x)
    return logx - logx.mean(axis=-1, keepdims=True)


def w_alpha(x, alpha: float) -> np.ndarray:
    """Zero-sum alpha-transformed vector in ``R^D`` (CLR when ``alpha == 0``)."""
    x, alpha = _prepare(x, alpha)
    if alpha == 0:
        return clr(x)
    D = x.shape[-1]
    u = power_transform(x, alpha)
    return (D * u - 1.0) / alpha


def helmert_submatrix(D: int) -> np.ndarray:
    """Helmert matrix of order `D` with its first row removed.

    Row ``i`` (1-based) holds ``1/sqrt(i(i+1))`` in its first ``i`` columns
    and ``-i/sqrt(i(i+1))`` in column ``i+1``. Rows are orthonormal and each
    is orthogonal to the all-ones vector.
    """
    D = int(D)
    if D < 2:
        raise ValueError(f"Helmert sub-matrix needs D >= 2, got {D}")
    H = np.zeros((D - 1, D))
    for i in range(1, D):
        c = 1.0 / np.sqrt(i * (i + 1.0))
        H[i - 1, :i] = c
        H[i - 1, i] = -i * c
    return H


def alpha_transform(x, alpha: float) -> np.ndarray:
    """The alpha-transformation ``H @ w_alpha(x)``, landing in ``R^(D-1)``.

    At ``alpha == 0`` this is the isometric log-ratio transform with the
    Helmert basis.
    """
    w = w_alpha(x, alpha)
    H = helmert_submatrix(w.shape[-1])
    return w @ H.T


def ilr(x) -> np.ndarray:
    return alpha_transform(x, 0.0)


def aitchison_distance(x, y) -> float:
    """Aitchison distance, i.e. the alpha-metric at ``alpha == 0``."""
    return float(np.linalg.norm(clr(x) - clr(y)))


def alpha_metric(x, y, alpha: float) -> float:
    """Distance between two compositions after the alpha-transformation.

    For ``alpha != 0`` this is ``D/|alpha| * ||u_alpha(x) - u_alpha(y)||``;
    ``alpha == 0`` gives the Aitchison distance and ``alpha == 1`` is ``D``
    times the Euclidean distance between the raw compositions.

    Parameters
    ----------
    x, y : array_like, shape (D,)
    alpha : float in [-1, 1]

    Returns
    -------
    float
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    check_alpha(alpha, zeros=bool(np.any(x == 0) or np.any(y == 0)))
    if alpha == 0:
        return aitchison_distance(x, y)
    D = x.shape[-1]
    diff = power_transform(x, alpha) - power_transform(y, alpha)
    return float(D / abs(alpha) * np.sqrt(np.sum(diff * diff)))


def _embed(X, alpha):
    # rows mapped so that Euclidean distance equals the alpha-metric
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if alpha == 0:
        return clr(X)
    D = X.shape[-1]
    return power_transform(X, alpha) * (D / abs(alpha))


def pairwise_distance_matrix(X, Y, alpha: float) -> np.ndarray:
    """All alpha-metric distances between rows of `X` and rows of `Y`.

    Returns
    -------
    ndarray, shape (n_X, n_Y)
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"dimension mismatch: D={X.shape[1]} vs D={Y.shape[1]}")
    check_alpha(alpha, zeros=bool(np.any(X == 0) or np.any(Y == 0)))
    return cdist(_embed(X, alpha), _embed(Y, alpha))


def standardize_columns(Z) -> np.ndarray:
    """Centre each column and scale it to unit sample standard deviation.

    Moments are computed over all rows passed in, so hand in the pooled
    samples, not one sample at a time.
    """
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[0] < 2:
        raise ValueError("need a 2-D matrix with at least 2 rows")
    mean = Z.mean(axis=0)
    sd = Z.std(axis=0, ddof=1)
    if np.any(sd == 0) or np.any(sd <= 1e-14 * np.maximum(1.0, np.abs(mean))):
        raise ValueError("zero variance column")
    return (Z - mean) / sd
