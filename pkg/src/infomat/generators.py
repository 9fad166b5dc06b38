"""Synthetic data: Gaussian autoregressive pairs, nonlinear cyclic shifts and
the binary Ising channel driven by a finite-state input policy.

Randomness is organised in fixed blocks of :data:`BLOCK` windows; block
``b`` draws from ``SeedSequence([seed, b])``.  Window ``w`` therefore
depends only on ``(seed, w)``, whatever ``N`` or thread count is used.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .datasets import WindowedDataset
from .errors import (InvalidArgumentError, InvalidModelError, InvalidPolicyError,
                     ResourceLimitError)
from .gauss import JointGaussianModel

BLOCK = 1024


def _block_rng(seed, block):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(block)])))


def _blockwise(n, seed, draw, n_jobs=1):
    """Run ``draw(rng, BLOCK)`` per block and keep the first ``n`` windows."""
    blocks = range(-(-n // BLOCK))

    def one(b):
        return draw(_block_rng(seed, b), BLOCK)

    if n_jobs == 1:
        parts = [one(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=None if n_jobs < 0 else n_jobs) as ex:
            parts = list(ex.map(one, blocks))
    return tuple(np.concatenate(p, axis=0)[:n] for p in zip(*parts))


# -- Gaussian AR ----------------------------------------------------------------

def _noise_matrix(noise, d):
    a = np.asarray(noise, dtype=np.float64)
    if a.ndim == 0:
        a = a * np.eye(d)
    elif a.ndim == 1:
        a = np.diag(a)
    if a.shape != (d, d):
        raise InvalidModelError(f"noise covariance must be {d}x{d}, got {a.shape}")
    if not np.allclose(a, a.T) or np.linalg.eigvalsh(a).min() <= 0:
        raise InvalidModelError("noise covariance must be symmetric positive definite")
    return a


@dataclass(frozen=True, eq=False)
class GaussianARModel:
    """Linear recursion over a horizon of ``m`` steps::

        X_t = sum_k alpha_x[k] X_{t-k} + alpha_y[k] Y_{t-k} + N^X_t
        Y_t = sum_k beta_x[k]  X_{t-k} + beta_y[k]  Y_{t-k} + N^Y_t

    Weight arrays are indexed by lag ``k`` and zero-padded to length ``m``.
    Lag-0 self weights must vanish and at most one of ``alpha_y[0]`` and
    ``beta_x[0]`` may be nonzero, so the recursion is solvable by forward
    substitution.  Cross weights need ``d_x == d_y``.
    """

    m: int
    alpha_x: np.ndarray = ()
    alpha_y: np.ndarray = ()
    beta_x: np.ndarray = ()
    beta_y: np.ndarray = ()
    noise_x: np.ndarray = 1.0
    noise_y: np.ndarray = 1.0
    d_x: int = 1
    d_y: int = 1

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise InvalidModelError(f"horizon m must be a positive integer, got {self.m}")
        for name in ("alpha_x", "alpha_y", "beta_x", "beta_y"):
            w = np.atleast_1d(np.asarray(getattr(self, name), dtype=np.float64))
            if w.ndim != 1 or w.size > self.m:
                raise InvalidModelError(f"{name} must hold at most m={self.m} lag weights")
            if not np.all(np.isfinite(w)):
                raise InvalidModelError(f"{name} has non-finite weights")
            w = np.concatenate([w, np.zeros(self.m - w.size)])
            w.setflags(write=False)
            object.__setattr__(self, name, w)
        if self.alpha_x[0] != 0 or self.beta_y[0] != 0:
            raise InvalidModelError("lag-0 self weights alpha_x[0], beta_y[0] must be zero")
        if self.alpha_y[0] != 0 and self.beta_x[0] != 0:
            raise InvalidModelError("only one instantaneous cross weight may be nonzero")
        if self.d_x != self.d_y and (np.any(self.alpha_y) or np.any(self.beta_x)):
            raise InvalidModelError("cross weights need d_x == d_y")
        object.__setattr__(self, "noise_x", _noise_matrix(self.noise_x, self.d_x))
        object.__setattr__(self, "noise_y", _noise_matrix(self.noise_y, self.d_y))

    @property
    def y_first(self):
        """True when ``Y_t`` feeds ``X_t`` (so ``Y_t`` is generated first)."""
        return self.alpha_y[0] != 0

    @classmethod
    def from_json(cls, path_or_dict, m=None):
        cfg = path_or_dict
        if not isinstance(cfg, dict):
            cfg = json.loads(Path(cfg).read_text())
        kw = {k: cfg[k] for k in ("alpha_x", "alpha_y", "beta_x", "beta_y",
                                   "noise_x", "noise_y", "d_x", "d_y") if k in cfg}
        horizon = m if m is not None else cfg.get("m")
        if horizon is None:
            horizon = max([len(np.atleast_1d(kw.get(k, ()))) for k in
                           ("alpha_x", "alpha_y", "beta_x", "beta_y")] + [1])
        lags = {k: np.atleast_1d(kw[k])[:horizon] for k in
                ("alpha_x", "alpha_y", "beta_x", "beta_y") if k in kw}
        kw.update(lags)
        return cls(m=int(horizon), **kw)

    def to_json(self):
        return {"m": self.m, "d_x": self.d_x, "d_y": self.d_y,
                "alpha_x": self.alpha_x.tolist(), "alpha_y": self.alpha_y.tolist(),
                "beta_x": self.beta_x.tolist(), "beta_y": self.beta_y.tolist(),
                "noise_x": self.noise_x.tolist(), "noise_y": self.noise_y.tolist()}


def iid_gamma_model(m, gamma):
    """``Y_t = gamma X_t + N^Y_t`` with everything else zero."""
    return GaussianARModel(m, beta_x=[gamma])


def symmetric_lambda_model(m, lam, gamma=0.5):
    """Lag-1 coupling ``lam`` in all four directions on top of the
    instantaneous load ``Y_t = gamma X_t + ...``.

    Information concentrates on the diagonal and decays away from it.
    """
    w = np.zeros(m)
    if m > 1:
        w[1] = lam
    bx = w.copy()
    bx[0] = gamma
    return GaussianARModel(m, alpha_x=w, alpha_y=w, beta_x=bx, beta_y=w)


def delayed_coupling_model(m, weights):
    """``X_t`` driven by ``Y_{t-k}`` with weight ``weights[k-1]``.

    Weights growing with ``k`` put a band of information below the
    diagonal, centred on the lag where the effective coupling peaks.
    """
    ay = np.zeros(m)
    w = np.asarray(weights, dtype=float)[:m - 1]
    ay[1:1 + w.size] = w
    return GaussianARModel(m, alpha_y=ay)


def _causal_order(model):
    """Stacked-vector coordinates in generation order (time, then X/Y order)."""
    m, dx, dy = model.m, model.d_x, model.d_y
    order = []
    for t in range(m):
        xs = list(range(t * dx, (t + 1) * dx))
        ys = list(range(m * dx + t * dy, m * dx + (t + 1) * dy))
        order += ys + xs if model.y_first else xs + ys
    return np.array(order)


def ar_joint_covariance(model):
    """Exact covariance of ``(X_1..X_m, Y_1..Y_m)`` for a :class:`GaussianARModel`.

    Writes the recursion as ``Z = A Z + E`` with ``A`` strictly lower
    triangular in generation order; then ``Z = (I - A)^{-1} E`` and
    ``K = L Sigma_E L^T``.
    """
    m, dx, dy = model.m, model.d_x, model.d_y
    dim = m * (dx + dy)
    a = np.zeros((dim, dim))
    ix = lambda t: slice(t * dx, (t + 1) * dx)
    iy = lambda t: slice(m * dx + t * dy, m * dx + (t + 1) * dy)
    for t in range(m):
        for k in range(t + 1):
            s = t - k
            if model.alpha_x[k]:
                a[ix(t), ix(s)] += model.alpha_x[k] * np.eye(dx)
            if model.alpha_y[k]:
                a[ix(t), iy(s)] += model.alpha_y[k] * np.eye(dx)
            if model.beta_x[k]:
                a[iy(t), ix(s)] += model.beta_x[k] * np.eye(dy)
            if model.beta_y[k]:
                a[iy(t), iy(s)] += model.beta_y[k] * np.eye(dy)
    order = _causal_order(model)
    if np.any(np.triu(a[np.ix_(order, order)])):
        raise InvalidModelError("recursion is not causal in generation order")
    noise = np.zeros((dim, dim))
    for t in range(m):
        noise[ix(t), ix(t)] = model.noise_x
        noise[iy(t), iy(t)] = model.noise_y
    lmat = np.linalg.solve(np.eye(dim) - a, np.eye(dim))
    k = lmat @ noise @ lmat.T
    return JointGaussianModel(0.5 * (k + k.T), m, dx, dy)


def ar_sample(model, n, seed=0, n_jobs=1):
    """Draw ``n`` independent windows by running the recursion step by step."""
    m, dx, dy = model.m, model.d_x, model.d_y
    cx = np.linalg.cholesky(model.noise_x)
    cy = np.linalg.cholesky(model.noise_y)

    def draw(rng, b):
        eps = rng.standard_normal((b, m, dx + dy))
        nx = eps[:, :, :dx] @ cx.T
        ny = eps[:, :, dx:] @ cy.T
        x = np.zeros((b, m, dx))
        y = np.zeros((b, m, dy))
        for t in range(m):
            def drive(wa, wb, lag0):
                acc = 0.0
                for k in range(lag0, t + 1):
                    if wa[k]:
                        acc = acc + wa[k] * x[:, t - k]
                    if wb[k]:
                        acc = acc + wb[k] * y[:, t - k]
                return acc
            if model.y_first:
                y[:, t] = drive(model.beta_x, model.beta_y, 1) + ny[:, t]
                x[:, t] = drive(model.alpha_x, model.alpha_y, 0) + nx[:, t]
            else:
                x[:, t] = drive(model.alpha_x, model.alpha_y, 1) + nx[:, t]
                y[:, t] = drive(model.beta_x, model.beta_y, 0) + ny[:, t]
        return x, y

    x, y = _blockwise(n, seed, draw, n_jobs)
    return WindowedDataset(x, y)


def gaussian_model_sample(model, n, seed=0):
    """``n`` windows drawn from a :class:`JointGaussianModel`, block-seeded like the AR sampler."""
    chol = np.linalg.cholesky(model.covariance)
    nx = model.m * model.d_x

    def draw(rng, b):
        z = rng.standard_normal((b, chol.shape[0])) @ chol.T
        return z[:, :nx], z[:, nx:]

    x, y = _blockwise(n, seed, draw)
    return WindowedDataset(x.reshape(n, model.m, model.d_x), y.reshape(n, model.m, model.d_y))


# -- nonlinear shift ----------------------------------------------------------

def signed_log(v):
    """Monotone ``sign(v) * log(1 + |v|)``, defined on the whole real line."""
    return np.sign(v) * np.log1p(np.abs(v))


MONOTONE_MAPS = {
    "identity": lambda v: v,
    "signed-log": signed_log,
    "cube": lambda v: v ** 3,
}


def nonlinear_shift(ds, shift, map_x="identity", map_y="identity"):
    """Cyclically rotate each ``y`` window by ``shift`` steps, then apply the
    named monotone maps coordinatewise.

    After rotation ``Y'_{t} = Y_{t - shift mod m}``, so ``X_i`` pairs with
    ``Y'_{i + shift mod m}``.
    """
    if ds.kind != "continuous":
        raise InvalidArgumentError("nonlinear_shift needs continuous data")
    if int(shift) != shift or not 0 <= shift < ds.m:
        raise InvalidArgumentError(f"shift must be an integer in [0, {ds.m}), got {shift}")
    try:
        fx, fy = MONOTONE_MAPS[map_x], MONOTONE_MAPS[map_y]
    except KeyError as exc:
        raise InvalidArgumentError(
            f"unknown map {exc.args[0]!r}; choose from {sorted(MONOTONE_MAPS)}") from None
    y = np.roll(ds.y, int(shift), axis=1)
    return WindowedDataset(fx(ds.x), fy(y), stride=ds.stride)


def cyclic_shift_model(model, shift):
    """Exact Gaussian model of the data after :func:`nonlinear_shift` with identity maps."""
    if int(shift) != shift or not 0 <= shift < model.m:
        raise InvalidArgumentError(f"shift must be an integer in [0, {model.m}), got {shift}")
    m, dx, dy = model.m, model.d_x, model.d_y
    src_t = (np.arange(m) - shift) % m
    ycoords = (m * dx + src_t[:, None] * dy + np.arange(dy)[None, :]).ravel()
    perm = np.concatenate([np.arange(m * dx), ycoords])
    return JointGaussianModel(model.covariance[np.ix_(perm, perm)], m, dx, dy)


# -- Ising channel ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class IsingPolicy:
    """Finite-state input policy for the binary Ising channel with feedback.

    ``delta[q, s, y]`` is the next state after channel state ``s`` and fed-back
    output ``y``; ``pi[q, s]`` is the probability of sending ``x = 1`` from
    state ``q`` when the channel state is ``s``.
    """

    delta: np.ndarray
    pi: np.ndarray
    q0: int = 0
    name: str = "fsm"

    def __post_init__(self):
        delta = np.asarray(self.delta)
        pi = np.asarray(self.pi, dtype=np.float64)
        if delta.ndim != 3 or delta.shape[1:] != (2, 2):
            raise InvalidPolicyError(f"delta must have shape (Q, 2, 2), got {delta.shape}")
        n_states = delta.shape[0]
        if pi.shape != (n_states, 2):
            raise InvalidPolicyError(f"pi must have shape ({n_states}, 2), got {pi.shape}")
        if np.any(delta != np.floor(delta)) or delta.min() < 0 or delta.max() >= n_states:
            raise InvalidPolicyError("delta entries must be states in [0, Q)")
        if not np.all(np.isfinite(pi)) or pi.min() < 0 or pi.max() > 1:
            raise InvalidPolicyError("pi must be probabilities in [0, 1]")
        if not 0 <= self.q0 < n_states:
            raise InvalidPolicyError(f"q0={self.q0} is not a state")
        delta = delta.astype(np.int64)
        delta.setflags(write=False)
        pi.setflags(write=False)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "pi", pi)

    @property
    def n_states(self):
        return self.delta.shape[0]

    @property
    def emission(self):
        """``pi`` as full rows ``P(x | q, s)`` of shape ``(Q, 2, 2)``."""
        return np.stack([1.0 - self.pi, self.pi], axis=-1)

    @classmethod
    def iid_uniform(cls):
        return cls(np.zeros((1, 2, 2), int), np.full((1, 2), 0.5), 0, "iid_uniform")

    @classmethod
    def constant(cls, symbol):
        return cls(np.zeros((1, 2, 2), int), np.full((1, 2), float(symbol)), 0,
                   f"constant_{symbol}")

    @classmethod
    def from_json(cls, path_or_dict):
        """Load ``{"states", "q0", "delta", "pi"}``; ``"iid"`` gives the uniform policy."""
        if path_or_dict in ("iid", "iid_uniform"):
            return cls.iid_uniform()
        cfg = path_or_dict
        if not isinstance(cfg, dict):
            cfg = json.loads(Path(cfg).read_text())
        try:
            delta, pi = cfg["delta"], cfg["pi"]
        except KeyError as exc:
            raise InvalidPolicyError(f"policy file lacks {exc.args[0]!r}") from None
        states = cfg.get("states", len(delta))
        n_states = len(states) if isinstance(states, list) else int(states)
        if len(delta) != n_states:
            raise InvalidPolicyError(f"declared {n_states} states, delta has {len(delta)}")
        return cls(delta, pi, int(cfg.get("q0", 0)), cfg.get("name", "fsm"))

    def to_json(self):
        return {"name": self.name, "states": self.n_states, "q0": self.q0,
                "delta": self.delta.tolist(), "pi": self.pi.tolist()}


def ising_sample(policy, n, m, seed=0, n_jobs=1):
    """Simulate ``n`` windows of length ``m`` through the Ising channel.

    ``s_1 ~ Ber(1/2)``; each step draws ``x_t`` from the policy, outputs
    ``y_t = x_t`` if ``x_t == s_t`` and otherwise ``x_t`` or ``s_t`` with
    probability 1/2 each; then ``q <- delta[q, s_t, y_t]`` and ``s <- x_t``.
    """
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"m must be a positive integer, got {m}")

    def draw(rng, b):
        u = rng.random((b, 2 * m + 1))
        s = (u[:, 0] < 0.5).astype(np.int64)
        q = np.full(b, policy.q0, dtype=np.int64)
        x = np.empty((b, m), np.uint8)
        y = np.empty((b, m), np.uint8)
        for t in range(m):
            xt = (u[:, 1 + 2 * t] < policy.pi[q, s]).astype(np.int64)
            yt = np.where(u[:, 2 + 2 * t] < 0.5, xt, s)
            x[:, t], y[:, t] = xt, yt
            q = policy.delta[q, s, yt]
            s = xt
        return x, y

    x, y = _blockwise(n, seed, draw, n_jobs)
    return WindowedDataset(x, y, alphabet_size=2)


# -- exact joint pmf ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class JointPMF:
    """Dense probability table of ``(X_1..X_m, Y_1..Y_m)``.

    ``table`` has ``2m`` axes: ``X_1..X_m`` (size ``alphabet_x``) followed
    by ``Y_1..Y_m`` (size ``alphabet_y``).
    """

    table: np.ndarray

    def __post_init__(self):
        t = np.array(self.table, dtype=np.float64)
        if t.ndim < 2 or t.ndim % 2:
            raise InvalidArgumentError("table needs an even number (2m >= 2) of axes")
        if t.size == 0:
            raise InvalidArgumentError("empty probability table")
        m = t.ndim // 2
        if len(set(t.shape[:m])) != 1 or len(set(t.shape[m:])) != 1:
            raise InvalidArgumentError("all X axes (and all Y axes) must share an alphabet")
        if t.min() < 0 or abs(t.sum() - 1.0) > 1e-12:
            raise InvalidArgumentError(f"table must be a pmf (sum={t.sum()!r}, min={t.min()!r})")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    @property
    def m(self):
        return self.table.ndim // 2

    @property
    def alphabet_x(self):
        return self.table.shape[0]

    @property
    def alphabet_y(self):
        return self.table.shape[-1]

    def swapped(self):
        m = self.m
        return JointPMF(np.transpose(self.table, list(range(m, 2 * m)) + list(range(m))))

    @classmethod
    def random(cls, m, alphabet_x=2, alphabet_y=2, rng=None, concentration=1.0):
        """Dirichlet-sampled joint, handy for identity checks."""
        rng = np.random.default_rng(rng)
        shape = (alphabet_x,) * m + (alphabet_y,) * m
        p = rng.dirichlet(np.full(int(np.prod(shape)), concentration))
        return cls(p.reshape(shape) / p.sum())


ISING_PMF_MAX_M = 8


def ising_joint_pmf(policy, m):
    """Exact law of ``(X^m, Y^m)`` for the Ising channel under ``policy``.

    Forward recursion over all input/output paths, carrying the joint
    weight of the channel state and policy state; ``s_1`` is uniform.
    """
    if int(m) != m or m < 1:
        raise InvalidArgumentError(f"m must be a positive integer, got {m}")
    if m > ISING_PMF_MAX_M:
        raise ResourceLimitError(f"exact enumeration limited to m <= {ISING_PMF_MAX_M}")
    nq = policy.n_states
    emit = policy.emission                              # (Q, s, x)
    chan = np.zeros((2, 2, 2))                          # (s, x, y)
    for s in range(2):
        for x in range(2):
            if x == s:
                chan[s, x, x] = 1.0
            else:
                chan[s, x, x] = chan[s, x, s] = 0.5
    nxt = np.zeros((nq, 2, 2, nq))                      # (q, s, y, q')
    for q in range(nq):
        for s in range(2):
            for y in range(2):
                nxt[q, s, y, policy.delta[q, s, y]] = 1.0
    # alpha axes: (path..., s_next, q_next); path grows by (x_t, y_t)
    alpha = np.zeros((2, nq))
    alpha[:, policy.q0] = 0.5
    for _ in range(m):
        # weight[..., s, q, x, y] then fold into new (s'=x, q')
        w = alpha[..., :, :, None, None] * emit.transpose(1, 0, 2)[:, :, :, None] \
            * chan[:, None, :, :]
        # sum over s with q' transition: result (..., x, y, q')
        w = np.einsum("...sqxy,qsyr->...xyr", w, nxt)
        # new alpha: (..., x, y, s'=x, q')
        eye = np.eye(2)
        alpha = w[..., :, :, None, :] * eye[:, None, :, None]
    p = alpha.sum(axis=(-1, -2))                        # (x1, y1, ..., xm, ym)
    order = list(range(0, 2 * m, 2)) + list(range(1, 2 * m, 2))
    p = np.transpose(p, order)
    return JointPMF(p)
