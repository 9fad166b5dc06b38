"""Covariance estimation and closed-form Gaussian (conditional) mutual information.

All quantities are in nats.  For jointly Gaussian ``(X, Y, Z)``::

    I(X; Y | Z) = 1/2 * log( |K_xz| |K_yz| / (|K_z| |K_xyz|) )

where ``K_s`` is the covariance of the sub-vector ``s`` and ``|K_{}| = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from .errors import (InsufficientSamplesError, InvalidArgumentError,
                     NotPositiveDefiniteError)

#: Ridge used when a sample covariance is too close to singular, as a
#: multiple of its mean diagonal magnitude.
RELATIVE_RIDGE = 1e-8

_LOG_2PI_E = np.log(2.0 * np.pi * np.e)


@dataclass(frozen=True, eq=False)
class CovarianceEstimate:
    """A symmetric covariance matrix plus the ridge added before factorizing."""

    matrix: np.ndarray
    sample_count: int | None = None
    ridge: float = 0.0

    def __post_init__(self):
        k = np.array(self.matrix, dtype=np.float64)
        if k.ndim != 2 or k.shape[0] != k.shape[1]:
            raise InvalidArgumentError(f"covariance must be square, got shape {k.shape}")
        scale = max(1.0, float(np.max(np.abs(k)))) if k.size else 1.0
        if k.size and np.max(np.abs(k - k.T)) > 1e-12 * scale:
            raise InvalidArgumentError("covariance matrix is not symmetric")
        if not np.all(np.isfinite(k)):
            raise InvalidArgumentError("covariance matrix has non-finite entries")
        if self.ridge < 0:
            raise InvalidArgumentError(f"ridge must be nonnegative, got {self.ridge}")
        k = 0.5 * (k + k.T)
        k.setflags(write=False)
        object.__setattr__(self, "matrix", k)
        object.__setattr__(self, "ridge", float(self.ridge))

    @property
    def dim(self):
        return self.matrix.shape[0]

    def sub(self, idx):
        """Principal sub-block on ``idx``, keeping the same ridge."""
        idx = np.asarray(idx, dtype=int)
        return CovarianceEstimate(self.matrix[np.ix_(idx, idx)], self.sample_count, self.ridge)

    def with_ridge(self, ridge):
        return CovarianceEstimate(self.matrix, self.sample_count, ridge)


def default_ridge(matrix):
    """``RELATIVE_RIDGE`` times the mean diagonal magnitude of ``matrix``."""
    diag = np.abs(np.diag(np.asarray(matrix)))
    scale = float(diag.mean()) if diag.size else 0.0
    return RELATIVE_RIDGE * (scale if scale > 0 else 1.0)


def sample_covariance(vectors, centered=False, ridge=0.0):
    """Covariance of ``N`` row vectors normalized by ``N``.

    If ``centered`` is false the sample mean is removed first.  The result
    is symmetrized exactly by averaging with its transpose.
    """
    v = np.asarray(vectors, dtype=np.float64)
    if v.ndim == 1:
        v = v[:, None]
    n = v.shape[0]
    if n < 2:
        raise InsufficientSamplesError(f"need at least 2 samples, got {n}")
    if not centered:
        v = v - v.mean(axis=0)
    k = v.T @ v / n
    return CovarianceEstimate(0.5 * (k + k.T), n, ridge)


def cholesky_logdet(a):
    """Log-determinant of a symmetric positive definite array via Cholesky.

    Raises :class:`NotPositiveDefiniteError` naming the 0-based pivot at
    which the factorization broke down.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.shape[0] == 0:
        return 0.0
    c, info = lapack.dpotrf(a, lower=1, clean=0)
    if info > 0:
        raise NotPositiveDefiniteError(
            f"matrix is not positive definite: Cholesky failed at pivot {info - 1}",
            pivot=info - 1)
    if info < 0:
        raise InvalidArgumentError(f"dpotrf rejected argument {-info}")
    return 2.0 * float(np.sum(np.log(np.diag(c))))


def log_det_psd(k):
    """``log |K + ridge * I|`` for a :class:`CovarianceEstimate` (or bare array)."""
    if not isinstance(k, CovarianceEstimate):
        k = CovarianceEstimate(k)
    a = k.matrix
    if k.ridge:
        a = a + k.ridge * np.eye(a.shape[0])
    return cholesky_logdet(a)


def gaussian_entropy(k):
    """Differential entropy ``1/2 log((2 pi e)^d |K|)`` in nats."""
    if not isinstance(k, CovarianceEstimate):
        k = CovarianceEstimate(k)
    return 0.5 * (k.dim * _LOG_2PI_E + log_det_psd(k))


def _index_set(idx, d, name):
    idx = np.atleast_1d(np.asarray(idx, dtype=int)) if np.size(idx) else np.zeros(0, int)
    if idx.size and (idx.min() < 0 or idx.max() >= d):
        raise InvalidArgumentError(f"{name} indices out of range [0, {d})")
    if np.unique(idx).size != idx.size:
        raise InvalidArgumentError(f"{name} has repeated indices")
    return idx


def gaussian_cmi(k, idx_x, idx_y, idx_cond=()):
    """Gaussian conditional mutual information ``I(X; Y | Z)`` in nats.

    Parameters
    ----------
    k : CovarianceEstimate or array_like
        Joint covariance containing every referenced coordinate.
    idx_x, idx_y, idx_cond : sequence of int
        Disjoint coordinate index sets for ``X``, ``Y`` and the conditioning
        block ``Z`` (which may be empty).
    """
    if not isinstance(k, CovarianceEstimate):
        k = CovarianceEstimate(k)
    d = k.dim
    ix = _index_set(idx_x, d, "idx_x")
    iy = _index_set(idx_y, d, "idx_y")
    iz = _index_set(idx_cond, d, "idx_cond")
    if ix.size == 0 or iy.size == 0:
        raise InvalidArgumentError("idx_x and idx_y must be nonempty")
    all_idx = np.concatenate([ix, iy, iz])
    if np.unique(all_idx).size != all_idx.size:
        raise InvalidArgumentError("index sets must be disjoint")

    def ld(idx):
        return log_det_psd(k.sub(idx)) if idx.size else 0.0

    return 0.5 * (ld(np.concatenate([ix, iz])) + ld(np.concatenate([iy, iz]))
                  - ld(iz) - ld(all_idx))


@dataclass(frozen=True, eq=False)
class JointGaussianModel:
    """Zero-mean Gaussian law of the stacked vector ``(X_1..X_m, Y_1..Y_m)``.

    Each ``X_t`` occupies ``d_x`` consecutive coordinates and each ``Y_t``
    ``d_y``; the whole ``X`` block comes first.
    """

    covariance: np.ndarray
    m: int
    d_x: int = 1
    d_y: int = 1

    def __post_init__(self):
        k = np.array(self.covariance, dtype=np.float64)
        dim = self.m * (self.d_x + self.d_y)
        if k.shape != (dim, dim):
            raise InvalidArgumentError(
                f"covariance must be {dim}x{dim} for m={self.m}, d_x={self.d_x}, "
                f"d_y={self.d_y}; got {k.shape}")
        k = CovarianceEstimate(k).matrix
        object.__setattr__(self, "covariance", k)

    def x_coords(self, i):
        """Coordinates of ``X_i`` (1-indexed time)."""
        return np.arange((i - 1) * self.d_x, i * self.d_x)

    def y_coords(self, j):
        off = self.m * self.d_x
        return np.arange(off + (j - 1) * self.d_y, off + j * self.d_y)

    def x_history(self, i):
        """Coordinates of ``X^i = (X_1..X_i)``; empty for ``i <= 0``."""
        return np.arange(0, max(i, 0) * self.d_x)

    def y_history(self, j):
        off = self.m * self.d_x
        return np.arange(off, off + max(j, 0) * self.d_y)

    def swapped(self):
        """Model of ``(Y, X)``."""
        nx = self.m * self.d_x
        perm = np.concatenate([np.arange(nx, self.covariance.shape[0]), np.arange(nx)])
        return JointGaussianModel(self.covariance[np.ix_(perm, perm)], self.m,
                                  self.d_y, self.d_x)

    def mutual_information(self):
        """``I(X^m; Y^m)`` from the three block determinants."""
        nx = self.m * self.d_x
        k = self.covariance
        return 0.5 * (cholesky_logdet(k[:nx, :nx]) + cholesky_logdet(k[nx:, nx:])
                      - cholesky_logdet(k))

    def sample(self, n, seed=None):
        """Draw ``n`` windows; returns arrays ``(n, m, d_x)`` and ``(n, m, d_y)``."""
        rng = np.random.default_rng(seed)
        z = rng.multivariate_normal(np.zeros(self.covariance.shape[0]), self.covariance,
                                    size=n, method="cholesky")
        nx = self.m * self.d_x
        return z[:, :nx].reshape(n, self.m, self.d_x), z[:, nx:].reshape(n, self.m, self.d_y)


def iid_correlated_model(m, rho):
    """``m`` i.i.d. pairs ``(X_t, Y_t)`` of unit-variance scalars with correlation ``rho``."""
    eye = np.eye(m)
    k = np.block([[eye, rho * eye], [rho * eye, eye]])
    return JointGaussianModel(k, m)
