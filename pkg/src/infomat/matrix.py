"""The InfoMat: an ``m x m`` matrix whose ``(i, j)`` entry is
``I(X_i; Y_j | X^{i-1}, Y^{j-1})`` in nats.

Entries sum to ``I(X^m; Y^m)`` by the chain rule.  Indices in the public
API are 1-based to match the usual ``X_1, ..., X_m`` notation; the
``entries`` array itself is ordinary 0-based numpy storage.

Three constructors are provided:

* :func:`infomat_from_gaussian_model` -- exact, from a known joint covariance.
* :func:`estimate_gaussian` -- sample-covariance (Gaussian approximation) estimate.
* :func:`estimate_plugin_discrete` -- empirical-histogram entropies for symbols.
"""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (ConfigurationError, FormatError, InsufficientSamplesError,
                     InvalidArgumentError, NotPositiveDefiniteError)
from .gauss import CovarianceEstimate, cholesky_logdet, default_ridge, sample_covariance

PROVENANCES = ("exact-gaussian", "estimated-gaussian", "plugin-discrete", "exact-pmf")
EXACT_PROVENANCES = ("exact-gaussian", "exact-pmf")

#: Largest histogram key space the plug-in estimator will index.
MAX_KEY_SPACE = 2 ** 26
NEGATIVE_WARNING_LEVEL = -0.05


class EstimationWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class InfoMat:
    """Matrix of conditional mutual information terms (nats).

    Row index ``i`` refers to ``X_i`` and column index ``j`` to ``Y_j``.
    ``metadata`` carries estimator settings such as ``N``, ``stride``,
    ``ridge`` and ``truncation``.
    """

    entries: np.ndarray
    provenance: str = "exact-pmf"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.float64)
        if e.ndim != 2 or e.shape[0] != e.shape[1] or e.shape[0] < 1:
            raise InvalidArgumentError(f"InfoMat must be a nonempty square matrix, got {e.shape}")
        if not np.all(np.isfinite(e)):
            raise InvalidArgumentError("InfoMat entries must be finite")
        if self.provenance not in PROVENANCES:
            raise InvalidArgumentError(f"unknown provenance {self.provenance!r}")
        if self.provenance in EXACT_PROVENANCES and e.min() < -1e-9:
            raise InvalidArgumentError(
                f"exact InfoMat has negative entry {e.min():.3e}")
        if e.min() < NEGATIVE_WARNING_LEVEL:
            warnings.warn(f"estimated InfoMat has entry {e.min():.4f} nats below "
                          f"{NEGATIVE_WARNING_LEVEL}; estimate is unreliable",
                          EstimationWarning, stacklevel=3)
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "metadata", dict(self.metadata))

    @property
    def m(self):
        return self.entries.shape[0]

    def __getitem__(self, ij):
        """1-indexed entry access: ``M[i, j]``."""
        i, j = ij
        if not (1 <= i <= self.m and 1 <= j <= self.m):
            raise IndexError(f"({i}, {j}) outside 1..{self.m}")
        return float(self.entries[i - 1, j - 1])

    @property
    def is_exact(self):
        return self.provenance in EXACT_PROVENANCES


def total_mi(mat):
    """Sum of all entries, i.e. ``I(X^m; Y^m)`` by the chain rule."""
    return float(np.sum(mat.entries))


# -- Gaussian -----------------------------------------------------------------

def _block_coords(a, b, m, d_x, d_y):
    return np.concatenate([np.arange(a * d_x), m * d_x + np.arange(b * d_y)])


def _map_rows(fn, rows, n_jobs):
    if n_jobs is None or n_jobs == 1:
        return [fn(r) for r in rows]
    with ThreadPoolExecutor(max_workers=None if n_jobs < 0 else n_jobs) as ex:
        return list(ex.map(fn, rows))


def _logdet_table(k, m, d_x, d_y, ridge, n_jobs=1):
    """``T[a, b] = log |K_{X^a, Y^b} + ridge I|`` for ``0 <= a, b <= m``."""
    shifted = k + ridge * np.eye(k.shape[0]) if ridge else k

    def row(a):
        out = np.empty(m + 1)
        for b in range(m + 1):
            idx = _block_coords(a, b, m, d_x, d_y)
            out[b] = cholesky_logdet(shifted[np.ix_(idx, idx)]) if idx.size else 0.0
        return out

    return np.vstack(_map_rows(row, range(m + 1), n_jobs))


def _combine(table):
    """Four-term combination ``T[i,j-1] + T[i-1,j] - T[i-1,j-1] - T[i,j]``."""
    return table[1:, :-1] + table[:-1, 1:] - table[:-1, :-1] - table[1:, 1:]


def infomat_from_covariance(covariance, m, d_x=1, d_y=1, ridge=0.0, m_out=None,
                            provenance="exact-gaussian", metadata=None, n_jobs=1):
    """Gaussian InfoMat from the covariance of ``(X_1..X_m, Y_1..Y_m)``.

    Every entry uses nested principal sub-blocks of the one covariance, so
    the four determinants behind each entry are mutually consistent.
    ``m_out`` restricts the result to the leading ``m_out x m_out`` corner.
    """
    k = covariance.matrix if isinstance(covariance, CovarianceEstimate) else np.asarray(covariance)
    m_out = m if m_out is None else m_out
    if not 1 <= m_out <= m:
        raise InvalidArgumentError(f"requested size {m_out} outside 1..{m}")
    if m_out < m:
        keep = _block_coords(m_out, m_out, m, d_x, d_y)
        k = k[np.ix_(keep, keep)]
    table = _logdet_table(k, m_out, d_x, d_y, ridge, n_jobs)
    meta = {"ridge": ridge}
    meta.update(metadata or {})
    return InfoMat(0.5 * _combine(table), provenance, meta)


def infomat_from_gaussian_model(model, m=None, n_jobs=1):
    """Exact InfoMat of a :class:`~infomat.gauss.JointGaussianModel`.

    ``m`` may be smaller than the model horizon to get the leading corner
    (entries only depend on ``X^i, Y^j``).
    """
    return infomat_from_covariance(model.covariance, model.m, model.d_x, model.d_y,
                                   ridge=0.0, m_out=m, provenance="exact-gaussian",
                                   n_jobs=n_jobs)


def estimate_gaussian(ds, ridge=None, n_jobs=1):
    """Gaussian-approximation InfoMat estimate from windowed continuous data.

    One sample covariance over all of ``(X^m, Y^m)`` is formed from the
    windows; each entry is the closed-form Gaussian CMI evaluated on its
    nested sub-blocks.

    Parameters
    ----------
    ds : WindowedDataset
        Continuous windows; centered data uses the ``1/N sum v v^T`` form,
        otherwise the sample mean is removed first.
    ridge : float, optional
        Absolute diagonal loading.  ``None`` factorizes without loading and
        falls back to :func:`~infomat.gauss.default_ridge` of the full
        covariance only if some block is numerically singular.
    n_jobs : int
        Worker threads for the determinant table (``-1`` = all cores).
    """
    if ds.kind != "continuous":
        raise InvalidArgumentError("Gaussian estimation needs continuous data")
    m, d_x, d_y, n = ds.m, ds.d_x, ds.d_y, ds.n_windows
    need = m * max(d_x, d_y) + 2
    if n < need:
        limit = next((i, j) for i in range(1, m + 1) for j in range(1, m + 1)
                     if i * d_x + j * d_y > n - 1)
        raise InsufficientSamplesError(
            f"{n} windows cannot support an {m}x{m} estimate (need >= {need}); "
            f"entry {limit} is the first whose covariance block is rank deficient")
    cov = sample_covariance(ds.stacked(), centered=ds.centered)
    meta = {"N": n, "stride": ds.stride, "centered": ds.centered}
    if ridge is not None:
        return infomat_from_covariance(cov, m, d_x, d_y, ridge=ridge,
                                       provenance="estimated-gaussian", metadata=meta,
                                       n_jobs=n_jobs)
    try:
        return infomat_from_covariance(cov, m, d_x, d_y, ridge=0.0,
                                       provenance="estimated-gaussian", metadata=meta,
                                       n_jobs=n_jobs)
    except NotPositiveDefiniteError:
        return infomat_from_covariance(cov, m, d_x, d_y, ridge=default_ridge(cov.matrix),
                                       provenance="estimated-gaussian", metadata=meta,
                                       n_jobs=n_jobs)


# -- discrete plug-in ---------------------------------------------------------

def plugin_entropy(columns, alphabet_size):
    """Maximum-likelihood entropy (nats) of the rows of an ``(N, k)`` symbol array."""
    n, k = columns.shape
    if k == 0:
        return 0.0
    radix = alphabet_size ** np.arange(k, dtype=np.int64)
    keys = columns.astype(np.int64) @ radix
    # sorted counts make the sum independent of how symbols are labelled
    counts = np.sort(np.unique(keys, return_counts=True)[1])
    return math.log(n) - float(np.dot(counts, np.log(counts))) / n


def _parse_truncation(truncation, m):
    if truncation is None or truncation == "full":
        return m, m
    try:
        lx, ly = truncation
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"truncation must be (L_x, L_y) or 'full', got {truncation!r}")
    if int(lx) != lx or int(ly) != ly or lx < 0 or ly < 0:
        raise InvalidArgumentError(f"truncation lengths must be nonnegative integers, got {truncation!r}")
    return min(int(lx), m), min(int(ly), m)


def estimate_plugin_discrete(ds, truncation=None, n_jobs=1):
    """Plug-in InfoMat estimate for symbol data.

    Each entry is ``H(X^i,Y^{j-1}) + H(X^{i-1},Y^j) - H(X^{i-1},Y^{j-1}) - H(X^i,Y^j)``
    with empirical-pmf entropies over the windows.

    With ``truncation=(L_x, L_y)`` the histories ``X^{i-1}`` and ``Y^{j-1}``
    are replaced by their last ``L_x`` and ``L_y`` symbols (a *truncated*
    InfoMat); ``None`` or ``"full"`` keeps full histories.
    """
    if ds.kind != "discrete":
        raise InvalidArgumentError("plug-in estimation needs discrete data")
    m, d_x, d_y, a = ds.m, ds.d_x, ds.d_y, ds.alphabet_size
    lx, ly = _parse_truncation(truncation, m)
    # widest histogram: X_i plus L_x past steps, Y_j plus L_y past steps
    width = min(lx + 1, m) * d_x + min(ly + 1, m) * d_y
    if a > 1 and width * math.log2(a) > math.log2(MAX_KEY_SPACE):
        raise ConfigurationError(
            f"histogram key space {a}^{width} exceeds 2^26 cells; "
            f"use a shorter truncation (L_x, L_y)")
    x = ds.x.reshape(ds.n_windows, m * d_x)
    y = ds.y.reshape(ds.n_windows, m * d_y)

    def cols(x_lo, x_hi, y_lo, y_hi):
        # 1-indexed inclusive time ranges; empty when hi < lo
        xs = x[:, max(x_lo - 1, 0) * d_x:max(x_hi, 0) * d_x]
        ys = y[:, max(y_lo - 1, 0) * d_y:max(y_hi, 0) * d_y]
        return np.concatenate([xs, ys], axis=1)

    def entry_row(i):
        out = np.empty(m)
        for j in range(1, m + 1):
            x0, y0 = max(1, i - lx), max(1, j - ly)
            h_xi = plugin_entropy(cols(x0, i, y0, j - 1), a)
            h_yj = plugin_entropy(cols(x0, i - 1, y0, j), a)
            h_hist = plugin_entropy(cols(x0, i - 1, y0, j - 1), a)
            h_all = plugin_entropy(cols(x0, i, y0, j), a)
            out[j - 1] = h_xi + h_yj - h_hist - h_all
        return out

    def table_row(i):
        return np.array([plugin_entropy(cols(1, i, 1, j), a) for j in range(m + 1)])

    if lx >= m and ly >= m:
        entries = _combine(np.vstack(_map_rows(table_row, range(m + 1), n_jobs)))
    else:
        entries = np.vstack(_map_rows(entry_row, range(1, m + 1), n_jobs))
    meta = {"N": ds.n_windows, "stride": ds.stride,
            "truncation": "full" if (lx >= m and ly >= m) else [lx, ly]}
    return InfoMat(entries, "plugin-discrete", meta)


# -- CSV persistence ----------------------------------------------------------

def write_infomat_csv(mat, path):
    """Write ``mat`` as ``# infomat v1`` CSV with full-precision floats."""
    lines = ["# infomat v1", f"# m={mat.m}", "# units=nats", f"# provenance={mat.provenance}"]
    lines += [",".join(repr(float(v)) for v in row) for row in mat.entries]
    Path(path).write_text("\n".join(lines) + "\n")


def read_infomat_csv(path):
    """Read a matrix written by :func:`write_infomat_csv`."""
    text = Path(path).read_text()
    header, rows, offset = {}, [], 0
    for line in text.splitlines(keepends=True):
        s = line.strip()
        if s.startswith("#"):
            body = s[1:].strip()
            if "=" in body:
                key, _, value = body.partition("=")
                header[key.strip()] = value.strip()
            else:
                header.setdefault("magic", body)
        elif s:
            try:
                rows.append([float(v) for v in s.split(",")])
            except ValueError:
                raise FormatError(f"non-numeric row {s[:40]!r}", offset=offset)
        offset += len(line.encode())
    if header.get("magic") != "infomat v1":
        raise FormatError("missing '# infomat v1' header", offset=0)
    if header.get("units", "nats") != "nats":
        raise FormatError(f"unsupported units {header['units']!r}")
    try:
        m = int(header["m"])
    except (KeyError, ValueError):
        raise FormatError("missing or invalid '# m=' header")
    entries = np.array(rows, dtype=np.float64)
    if entries.shape != (m, m):
        raise FormatError(f"expected {m}x{m} values, found shape {entries.shape}")
    return InfoMat(entries, header.get("provenance", "exact-pmf"))
