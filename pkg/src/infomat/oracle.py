"""Brute-force information quantities from an explicit :class:`JointPMF`.

Slow and simple on purpose: every marginal is a dense ``sum`` over the
complementary axes.  These functions are the ground truth the estimators
and the conservation-law checks are measured against.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError
from .matrix import InfoMat

MAX_TABLE_SIZE = 2 ** 26


def _marginal(pmf, coords):
    table = pmf.table
    keep = sorted(set(int(c) for c in coords))
    if any(c < 0 or c >= table.ndim for c in keep):
        raise InvalidArgumentError(f"coords {coords} outside [0, {table.ndim})")
    drop = tuple(a for a in range(table.ndim) if a not in keep)
    return table.sum(axis=drop) if drop else table


def pmf_entropy(pmf, coords):
    """Entropy (nats) of the marginal on axes ``coords``; ``0 log 0 = 0``.

    Axes ``0..m-1`` are ``X_1..X_m`` and ``m..2m-1`` are ``Y_1..Y_m``.
    The empty coordinate set has entropy 0.
    """
    if pmf.table.size == 0:
        raise InvalidArgumentError("empty probability table")
    if len(coords) == 0:
        return 0.0
    p = _marginal(pmf, coords).ravel()
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def _history(pmf, a, b):
    """Axes of ``(X^a, Y^b)``."""
    m = pmf.m
    return list(range(a)) + list(range(m, m + b))


def pmf_cmi(pmf, i, j):
    """``I(X_i; Y_j | X^{i-1}, Y^{j-1})`` via the four-entropy combination (1-indexed)."""
    m = pmf.m
    if not (1 <= i <= m and 1 <= j <= m):
        raise InvalidArgumentError(f"({i}, {j}) outside 1..{m}")
    h = lambda a, b: pmf_entropy(pmf, _history(pmf, a, b))
    return h(i, j - 1) + h(i - 1, j) - h(i - 1, j - 1) - h(i, j)


def _check_size(pmf):
    if pmf.table.size > MAX_TABLE_SIZE:
        raise ResourceLimitError(f"table has {pmf.table.size} cells, limit is 2^26")


def pmf_infomat(pmf):
    """Exact InfoMat, entry by entry."""
    _check_size(pmf)
    m = pmf.m
    entries = np.array([[pmf_cmi(pmf, i, j) for j in range(1, m + 1)]
                        for i in range(1, m + 1)])
    return InfoMat(entries, "exact-pmf")


def pmf_total_mi(pmf):
    """``I(X^m; Y^m)`` as one sum ``sum p log(p / (p_X p_Y))`` over the full table."""
    _check_size(pmf)
    m = pmf.m
    t = pmf.table
    px = t.sum(axis=tuple(range(m, 2 * m)), keepdims=True)
    py = t.sum(axis=tuple(range(m)), keepdims=True)
    prod = px * py
    mask = t > 0
    return float(np.sum(t[mask] * np.log(t[mask] / np.broadcast_to(prod, t.shape)[mask])))
