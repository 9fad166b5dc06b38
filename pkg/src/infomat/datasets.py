"""Paired sequence containers, windowing, centering and the SPD1 file format.

A :class:`SequencePair` holds two aligned sequences ``x`` (``n_steps x d_x``)
and ``y`` (``n_steps x d_y``).  Estimators never see the raw pair; they
work on a :class:`WindowedDataset`, i.e. ``N`` length-``m`` slices that are
treated as i.i.d. draws of ``(X^m, Y^m)``.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import FormatError, InvalidArgumentError, TruncatedFileError

MAGIC = b"SPD1"
VERSION = 1
_HEADER = struct.Struct("<4sIIIIBB2x")
KIND_CONTINUOUS = 0
KIND_DISCRETE = 1


def _frozen(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def _as_2d(a, name):
    a = np.asarray(a)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise InvalidArgumentError(f"{name} must be 1-D or 2-D, got shape {a.shape}")
    return a


def _check_values(arr, alphabet_size, name):
    if alphabet_size is None:
        if not np.all(np.isfinite(arr)):
            raise InvalidArgumentError(f"{name} contains NaN or Inf")
        return arr.astype(np.float64, copy=False)
    if not 1 <= alphabet_size <= 256:
        raise InvalidArgumentError(f"alphabet_size must lie in [1, 256], got {alphabet_size}")
    if arr.size and (np.any(arr < 0) or np.any(arr >= alphabet_size)
                     or np.any(np.asarray(arr) != np.floor(arr))):
        raise InvalidArgumentError(f"{name} has symbols outside [0, {alphabet_size})")
    return arr.astype(np.uint8)


@dataclass(frozen=True, eq=False)
class SequencePair:
    """Two aligned sequences.

    ``alphabet_size`` is ``None`` for continuous data; otherwise every entry
    is a symbol in ``[0, alphabet_size)`` stored as ``uint8``.
    """

    x: np.ndarray
    y: np.ndarray
    alphabet_size: int | None = None

    def __post_init__(self):
        x = _check_values(_as_2d(self.x, "x"), self.alphabet_size, "x")
        y = _check_values(_as_2d(self.y, "y"), self.alphabet_size, "y")
        if x.shape[0] != y.shape[0]:
            raise InvalidArgumentError(
                f"x and y must share n_steps, got {x.shape[0]} and {y.shape[0]}")
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))

    @property
    def kind(self):
        return "continuous" if self.alphabet_size is None else "discrete"

    @property
    def n_steps(self):
        return self.x.shape[0]

    @property
    def d_x(self):
        return self.x.shape[1]

    @property
    def d_y(self):
        return self.y.shape[1]

    def __eq__(self, other):
        if not isinstance(other, SequencePair):
            return NotImplemented
        return (self.alphabet_size == other.alphabet_size
                and self.x.dtype == other.x.dtype
                and np.array_equal(self.x, other.x)
                and np.array_equal(self.y, other.y))


@dataclass(frozen=True, eq=False)
class WindowedDataset:
    """``N`` windows of paired length-``m`` sequences.

    ``x`` has shape ``(N, m, d_x)`` and ``y`` has shape ``(N, m, d_y)``.
    """

    x: np.ndarray
    y: np.ndarray
    stride: int | None = None
    centered: bool = False
    alphabet_size: int | None = None

    def __post_init__(self):
        x = np.asarray(self.x)
        y = np.asarray(self.y)
        if x.ndim == 2:
            x = x[:, :, None]
        if y.ndim == 2:
            y = y[:, :, None]
        if x.ndim != 3 or y.ndim != 3:
            raise InvalidArgumentError("windows must have shape (N, m) or (N, m, d)")
        if x.shape[:2] != y.shape[:2]:
            raise InvalidArgumentError(
                f"x and y windows disagree: {x.shape[:2]} vs {y.shape[:2]}")
        if x.shape[0] < 1 or x.shape[1] < 1:
            raise InvalidArgumentError("need at least one window of length >= 1")
        x = _check_values(x, self.alphabet_size, "x")
        y = _check_values(y, self.alphabet_size, "y")
        if self.stride is not None and (int(self.stride) != self.stride or self.stride < 1):
            raise InvalidArgumentError(f"stride must be a positive integer, got {self.stride}")
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))
        object.__setattr__(self, "stride",
                           x.shape[1] if self.stride is None else int(self.stride))

    @property
    def kind(self):
        return "continuous" if self.alphabet_size is None else "discrete"

    @property
    def n_windows(self):
        return self.x.shape[0]

    @property
    def m(self):
        return self.x.shape[1]

    @property
    def d_x(self):
        return self.x.shape[2]

    @property
    def d_y(self):
        return self.y.shape[2]

    def swapped(self):
        """Dataset with the roles of ``x`` and ``y`` exchanged."""
        return replace(self, x=self.y, y=self.x)

    def stacked(self):
        """Window matrix ``(N, m*d_x + m*d_y)`` ordered as ``X_1..X_m, Y_1..Y_m``."""
        n = self.n_windows
        return np.concatenate([self.x.reshape(n, -1), self.y.reshape(n, -1)], axis=1)

    def to_pair(self):
        """Concatenate the windows back into one long sequence pair."""
        return SequencePair(self.x.reshape(-1, self.d_x), self.y.reshape(-1, self.d_y),
                            self.alphabet_size)


def window(pair, m, stride=None):
    """Slice ``pair`` into length-``m`` windows at offsets ``0, stride, 2*stride, ...``.

    ``stride`` defaults to ``m`` (disjoint blocks).  A trailing partial
    window is discarded, so ``N = (n_steps - m) // stride + 1``.
    """
    if stride is None:
        stride = m
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"window length must be a positive integer, got {m}")
    if int(stride) != stride or stride < 1:
        raise InvalidArgumentError(f"stride must be a positive integer, got {stride}")
    m, stride = int(m), int(stride)
    if m > pair.n_steps:
        raise InvalidArgumentError(f"window length {m} exceeds n_steps={pair.n_steps}")
    n = (pair.n_steps - m) // stride + 1
    idx = np.arange(n)[:, None] * stride + np.arange(m)[None, :]
    return WindowedDataset(pair.x[idx], pair.y[idx], stride=stride,
                           alphabet_size=pair.alphabet_size)


def center(ds):
    """Subtract the per-time-index, per-coordinate mean taken across windows."""
    if ds.kind != "continuous":
        raise InvalidArgumentError("centering is only defined for continuous data")
    x = ds.x - ds.x.mean(axis=0, keepdims=True)
    y = ds.y - ds.y.mean(axis=0, keepdims=True)
    return replace(ds, x=x, y=y, centered=True)


def write_dataset(pair, path):
    """Write ``pair`` in the little-endian SPD1 binary format."""
    discrete = pair.kind == "discrete"
    header = _HEADER.pack(MAGIC, VERSION, pair.n_steps, pair.d_x, pair.d_y,
                          KIND_DISCRETE if discrete else KIND_CONTINUOUS,
                          pair.alphabet_size % 256 if discrete else 0)
    dtype = np.dtype("u1") if discrete else np.dtype("<f8")
    body = np.concatenate([pair.x, pair.y], axis=1).astype(dtype)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(body).tobytes())


def read_dataset(path):
    """Read an SPD1 file written by :func:`write_dataset`."""
    data = Path(path).read_bytes()
    if len(data) < 4 or data[:4] != MAGIC:
        raise FormatError(f"bad magic {data[:4]!r}, expected {MAGIC!r}", offset=0)
    if len(data) < _HEADER.size:
        raise TruncatedFileError(
            f"header needs {_HEADER.size} bytes, file has {len(data)}", offset=len(data))
    _, version, n_steps, d_x, d_y, kind, alphabet = _HEADER.unpack_from(data)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", offset=4)
    if kind not in (KIND_CONTINUOUS, KIND_DISCRETE):
        raise FormatError(f"unknown kind byte {kind}", offset=20)
    if kind == KIND_CONTINUOUS and alphabet != 0:
        raise FormatError("continuous data must declare alphabet_size 0", offset=21)
    dtype = np.dtype("u1") if kind == KIND_DISCRETE else np.dtype("<f8")
    width = d_x + d_y
    need = n_steps * width * dtype.itemsize
    have = len(data) - _HEADER.size
    if have < need:
        raise TruncatedFileError(
            f"payload declares {need} bytes ({n_steps} steps x {width} coords), "
            f"only {have} present", offset=len(data))
    if have > need:
        raise FormatError(f"{have - need} trailing bytes after payload",
                          offset=_HEADER.size + need)
    body = np.frombuffer(data, dtype=dtype, count=n_steps * width,
                         offset=_HEADER.size).reshape(n_steps, width)
    if kind == KIND_DISCRETE:
        alphabet_size = alphabet if alphabet else 256
        return SequencePair(body[:, :d_x], body[:, d_x:], alphabet_size)
    return SequencePair(body[:, :d_x].astype(np.float64), body[:, d_x:].astype(np.float64))


def read_csv(path, d_x=1, d_y=1, alphabet_size=None):
    """Import a CSV with one row per time step: ``d_x`` x-columns then ``d_y`` y-columns."""
    body = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    if body.shape[1] != d_x + d_y:
        raise FormatError(f"expected {d_x + d_y} columns, found {body.shape[1]}")
    return SequencePair(body[:, :d_x], body[:, d_x:], alphabet_size)
