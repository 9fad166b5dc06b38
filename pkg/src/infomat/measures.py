"""Region algebra over an InfoMat and the conservation-law checks.

Directed information, delayed directed information, transfer entropy and
instantaneous information are all sums of InfoMat entries over simple
index regions.  Positions are 1-indexed: cell ``(i, j)`` pairs ``X_i``
with ``Y_j``.

============================  ==================================
measure                       region
============================  ==================================
``I(X^m -> Y^m)``             ``j >= i`` (upper triangle + diagonal)
``I(D^k X^m -> Y^m)``         ``j - i >= k``
``T^{X->Y}_{i+1}(i, i)``      column ``i+1``, rows ``1..i``
``I_inst``                    diagonal
============================  ==================================
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .matrix import total_mi

KINDS = ("di", "delayed_di", "reverse_delayed_di", "te_column", "te_row",
         "diagonal", "superdiagonal", "full", "custom")


@dataclass(frozen=True, eq=False)
class RegionMask:
    m: int
    cells: np.ndarray
    kind: str = "custom"
    param: int | None = None

    def __post_init__(self):
        c = np.array(self.cells, dtype=bool)
        if c.shape != (self.m, self.m):
            raise InvalidArgumentError(f"mask must be {self.m}x{self.m}, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "cells", c)

    def positions(self):
        """Sorted 1-indexed ``(i, j)`` pairs in the region."""
        return [(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(self.cells))]

    def __len__(self):
        return int(self.cells.sum())

    def __or__(self, other):
        return RegionMask(self.m, self.cells | other.cells)

    def __and__(self, other):
        return RegionMask(self.m, self.cells & other.cells)


def region_mask(kind, k_or_i=None, m=None):
    """Build the mask for a named region.

    ``k_or_i`` is the delay ``k`` for ``delayed_di``/``reverse_delayed_di``/
    ``superdiagonal`` and the time ``i`` for ``te_column``/``te_row``.
    """
    if m is None or int(m) != m or m < 1:
        raise InvalidArgumentError(f"m must be a positive integer, got {m}")
    if kind not in KINDS or kind == "custom":
        raise InvalidArgumentError(f"unknown region kind {kind!r}")
    r, c = np.indices((m, m)) + 1
    param = None
    if kind in ("delayed_di", "reverse_delayed_di", "superdiagonal", "te_column", "te_row"):
        if k_or_i is None or int(k_or_i) != k_or_i:
            raise InvalidArgumentError(f"{kind} needs an integer parameter")
        param = int(k_or_i)
        hi = m - 1 if kind in ("te_column", "te_row", "superdiagonal") else m
        if not 0 <= param <= hi:
            raise InvalidArgumentError(f"{kind} parameter {param} outside [0, {hi}]")
    if kind == "di":
        cells = c >= r
    elif kind == "delayed_di":
        cells = c - r >= param
    elif kind == "reverse_delayed_di":
        cells = r - c >= param
    elif kind == "superdiagonal":
        cells = c - r == param
    elif kind == "diagonal":
        cells = c == r
    elif kind == "te_column":
        cells = (c == param + 1) & (r <= param)
    elif kind == "te_row":
        cells = (r == param + 1) & (c <= param)
    else:
        cells = np.ones((m, m), bool)
    return RegionMask(m, cells, kind, param)


def region_sum(mat, mask):
    """Sum of the entries of ``mat`` inside ``mask`` (row-major order)."""
    if mask.m != mat.m:
        raise InvalidArgumentError(f"mask side {mask.m} != InfoMat side {mat.m}")
    return float(np.sum(mat.entries[mask.cells]))


def directed_information(mat):
    """``I(X^m -> Y^m)``: upper triangle including the diagonal."""
    return region_sum(mat, region_mask("di", None, mat.m))


def delayed_di(mat, k):
    """``I(D^k X^m -> Y^m)``: cells with ``j - i >= k``; ``k = 0`` is plain DI."""
    return region_sum(mat, region_mask("delayed_di", k, mat.m))


def instantaneous(mat):
    """Instantaneous information, the trace."""
    return float(np.trace(mat.entries))


def te_sum(mat, i):
    """``T^{X->Y}_{i+1}(i, i) = I(X^i; Y_{i+1} | Y^i)`` as the column-``(i+1)`` sub-sum."""
    return region_sum(mat, region_mask("te_column", i, mat.m))


def shifted_column_sum(mat, i, k=1):
    """Column ``i+1`` restricted to rows ``r <= i + 1 - k``.

    For ``k = 1`` this is :func:`te_sum`; summing over ``i = k..m-1`` gives
    ``delayed_di(mat, k)``.
    """
    m = mat.m
    if not (1 <= i <= m - 1) or not (1 <= k <= m):
        raise InvalidArgumentError(f"(i={i}, k={k}) out of range for m={m}")
    rows = i + 1 - k
    return float(np.sum(mat.entries[:max(rows, 0), i]))


def superdiagonal_sum(mat, k):
    return region_sum(mat, region_mask("superdiagonal", k, mat.m))


def to_bits(nats):
    return nats / math.log(2)


@dataclass
class IdentityResult:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self):
        return abs(self.residual) <= self.tolerance

    def as_dict(self):
        return {"name": self.name, "residual": self.residual,
                "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class IdentityReport:
    results: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    @property
    def max_residual(self):
        return max((abs(r.residual) for r in self.results), default=0.0)

    def __getitem__(self, name):
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def as_dict(self):
        return {"identities": [r.as_dict() for r in self.results], "all_pass": self.passed}

    def to_json(self, **kw):
        return json.dumps(self.as_dict(), **kw)


def verify_identities(m_xy, m_yx, tol=1e-9):
    """Residuals of the conservation laws for a forward/reverse InfoMat pair.

    ``m_yx`` is the InfoMat of the swapped pair ``(Y, X)``.  For exact
    quantities it equals the transpose of ``m_xy``; it is passed separately so
    that independently estimated reverse matrices can be checked too.  Each
    term is read from its own matrix.
    """
    if m_xy.m != m_yx.m:
        raise InvalidArgumentError(f"InfoMat sizes differ: {m_xy.m} vs {m_yx.m}")
    m = m_xy.m
    mi = total_mi(m_xy)
    inst = instantaneous(m_xy)
    out = []

    def add(name, value):
        out.append(IdentityResult(name, float(value), tol))

    add("mi_symmetry", mi - total_mi(m_yx))
    add("massey", mi - directed_information(m_xy) - delayed_di(m_yx, 1))
    add("massey_reverse", total_mi(m_yx) - directed_information(m_yx) - delayed_di(m_xy, 1))
    add("amblard", mi - delayed_di(m_xy, 1) - delayed_di(m_yx, 1) - inst)
    te_xy = sum(te_sum(m_xy, i) for i in range(1, m))
    te_yx = sum(te_sum(m_yx, i) for i in range(1, m))
    add("te_conservation", mi - te_xy - te_yx - inst)
    for label, mat in (("xy", m_xy), ("yx", m_yx)):
        for k in range(1, m):
            cols = sum(shifted_column_sum(mat, i, k) for i in range(k, m))
            add(f"te_decomposition_{label}_k{k}", delayed_di(mat, k) - cols)
        for k in range(0, m):
            add(f"di_chain_rule_{label}_k{k}",
                delayed_di(mat, k) - delayed_di(mat, k + 1) - superdiagonal_sum(mat, k))
    return IdentityReport(out)


def summarize(mat, reverse=None, units="nats", tol=1e-9):
    """Headline measures of ``mat`` (and identity residuals if ``reverse`` is given)."""
    if units not in ("nats", "bits"):
        raise InvalidArgumentError(f"units must be 'nats' or 'bits', got {units!r}")
    conv = to_bits if units == "bits" else (lambda v: v)
    m = mat.m
    di = directed_information(mat)
    report = {
        "m": m,
        "units": units,
        "provenance": mat.provenance,
        "total_mi": conv(total_mi(mat)),
        "directed_information": conv(di),
        "normalized_directed_information": conv(di / m),
        "delayed_directed_information": {str(k): conv(delayed_di(mat, k)) for k in range(1, m)},
        "instantaneous": conv(instantaneous(mat)),
        "transfer_entropy": {str(i + 1): conv(te_sum(mat, i)) for i in range(1, m)},
    }
    if reverse is not None:
        report["reverse_directed_information"] = conv(directed_information(reverse))
        ids = verify_identities(mat, reverse, tol)
        report["identities"] = ids.as_dict()["identities"]
        report["all_pass"] = ids.passed
    return report
