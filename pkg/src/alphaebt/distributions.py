"""Random generators on the simplex and closed-form KL divergences.

Randomness is addressed through :class:`RngStream`: a master seed plus a
tuple of integer keys. Two streams with different keys are independent, so
every Monte Carlo replicate, permutation batch and projection set can be
given its own stream and results do not depend on evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .simplex import close
from .special import digamma, log_gamma

__all__ = [
    "DirichletParams",
    "RngStream",
    "SimplicialNormalParams",
    "alr_inverse",
    "generate_covariance",
    "kl_dirichlet",
    "kl_mvn",
    "sample_dirichlet",
    "sample_mvn",
    "sample_simplicial_normal",
]

_U64 = 2**64


@dataclass(frozen=True)
class RngStream:
    """Addressable random substream.

    Examples
    --------
    >>> s = RngStream(7)
    >>> a = s.child(3).generator().random()
    >>> b = s.child(3).generator().random()
    >>> a == b
    True
    """

    seed: int
    key: tuple = ()

    def __post_init__(self):
        seed = int(self.seed)
        if not 0 <= seed < _U64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        key = tuple(int(k) for k in self.key)
        if any(k < 0 for k in key):
            raise ValueError("stream keys must be non-negative")
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "key", key)

    def child(self, *ids: int) -> "RngStream":
        return RngStream(self.seed, self.key + tuple(ids))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        return np.random.Generator(np.random.PCG64(ss))


def _generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    return RngStream(0 if rng is None else rng).generator()


@dataclass(frozen=True)
class DirichletParams:
    a: tuple

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).ravel()
        if a.size < 2:
            raise ValueError("Dirichlet needs at least 2 components")
        if not np.all(np.isfinite(a)) or np.any(a <= 0):
            raise ValueError("Dirichlet concentrations must be positive")
        object.__setattr__(self, "a", tuple(float(v) for v in a))

    @property
    def D(self) -> int:
        return len(self.a)

    @property
    def a0(self) -> float:
        return float(sum(self.a))


@dataclass(frozen=True, eq=False)
class SimplicialNormalParams:
    """Mean and covariance of the Gaussian in additive log-ratio space."""

    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float).ravel()
        sigma = np.array(self.sigma, dtype=float)
        d = mu.size
        if sigma.shape != (d, d):
            raise ValueError(f"sigma must be {d}x{d}, got {sigma.shape}")
        if not np.allclose(sigma, sigma.T, rtol=0, atol=1e-10):
            raise ValueError("sigma must be symmetric")
        np.linalg.cholesky(sigma)  # LinAlgError when not positive definite
        mu.flags.writeable = False
        sigma.flags.writeable = False
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @property
    def D(self) -> int:
        return self.mu.size + 1


def sample_dirichlet(params, n: int, rng) -> np.ndarray:
    """Draw `n` compositions as normalised independent gamma variates."""
    if not isinstance(params, DirichletParams):
        params = DirichletParams(params)
    if n < 1:
        raise ValueError("n must be at least 1")
    g = _generator(rng).standard_gamma(np.asarray(params.a), size=(int(n), params.D))
    return np.asarray(close(g))


def alr_inverse(u) -> np.ndarray:
    """Map ``R^(D-1)`` onto the simplex; the first part is the reference.

    ``x = (1, exp(u_1), ..., exp(u_{D-1})) / (1 + sum(exp(u)))``, evaluated
    with a max-shift so large entries do not overflow.
    """
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise ValueError("alr_inverse needs finite input")
    m = np.maximum(np.max(u, axis=-1, keepdims=True), 0.0)
    ref = np.exp(-m)
    e = np.exp(u - m)
    num = np.concatenate([ref, e], axis=-1)
    return num / num.sum(axis=-1, keepdims=True)


def sample_mvn(mu, sigma, n: int, rng) -> np.ndarray:
    """Gaussian draws via the Cholesky factor of `sigma`."""
    mu = np.asarray(mu, dtype=float)
    L = np.linalg.cholesky(np.asarray(sigma, dtype=float))
    z = _generator(rng).standard_normal((int(n), mu.size))
    return mu + z @ L.T


def sample_simplicial_normal(params: SimplicialNormalParams, n: int, rng) -> np.ndarray:
    """Gaussian in log-ratio coordinates pushed onto the simplex by :func:`alr_inverse`."""
    return alr_inverse(sample_mvn(params.mu, params.sigma, n, rng))


def generate_covariance(d: int, rng, eigen_mean: float = 0.4, return_parts: bool = False):
    """Random covariance ``B diag(lam) B^T``.

    `B` is the orthonormal factor of a QR decomposition of a ``d x d``
    standard normal matrix and ``lam`` are exponential with mean
    `eigen_mean`.

    Returns
    -------
    sigma : ndarray, shape (d, d)
    (B, lam) : tuple, only when `return_parts`
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    gen = _generator(rng)
    B, _ = np.linalg.qr(gen.standard_normal((d, d)))
    lam = gen.exponential(eigen_mean, size=d)
    sigma = (B * lam) @ B.T
    sigma = 0.5 * (sigma + sigma.T)
    if return_parts:
        return sigma, (B, lam)
    return sigma


def kl_dirichlet(a, b) -> float:
    """``KL(Dir(a) || Dir(b))`` in closed form.

    >>> round(kl_dirichlet((2, 2), (1, 1)), 5)
    0.12509
    """
    a = DirichletParams(a).a if not isinstance(a, DirichletParams) else a.a
    b = DirichletParams(b).a if not isinstance(b, DirichletParams) else b.a
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    if a == b:
        return 0.0
    a0 = sum(a)
    b0 = sum(b)
    psi_a0 = digamma(a0)
    kl = log_gamma(a0) - log_gamma(b0)
    for ai, bi in zip(a, b):
        kl += (ai - bi) * (digamma(ai) - psi_a0) + log_gamma(bi) - log_gamma(ai)
    return max(kl, 0.0)


def _chol_logdet(L):
    return 2.0 * np.sum(np.log(np.diag(L)))


def kl_mvn(mu1, sigma1, mu2, sigma2) -> float:
    """``KL(N(mu1, sigma1) || N(mu2, sigma2))`` via Cholesky solves."""
    mu1 = np.atleast_1d(np.asarray(mu1, dtype=float))
    mu2 = np.atleast_1d(np.asarray(mu2, dtype=float))
    s1 = np.atleast_2d(np.asarray(sigma1, dtype=float))
    s2 = np.atleast_2d(np.asarray(sigma2, dtype=float))
    d = mu1.size
    if mu2.size != d or s1.shape != (d, d) or s2.shape != (d, d):
        raise ValueError("dimension mismatch")
    L1 = np.linalg.cholesky(s1)
    L2 = np.linalg.cholesky(s2)
    if np.array_equal(mu1, mu2) and np.array_equal(s1, s2):
        return 0.0
    trace = np.trace(cho_solve((L2, True), s1))
    diff = solve_triangular(L2, mu2 - mu1, lower=True)
    maha = float(diff @ diff)
    logdet_ratio = _chol_logdet(L1) - _chol_logdet(L2)
    kl = 0.5 * (trace + maha - logdet_ratio - d)
    return max(float(kl), 0.0)
