"""Oracle-backed identity suites over random small joints."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gauss import iid_correlated_model
from .generators import JointPMF
from .matrix import infomat_from_gaussian_model, total_mi
from .measures import verify_identities
from .oracle import pmf_infomat, pmf_total_mi


@dataclass
class SuiteResult:
    name: str
    cases: int
    max_residual: float
    tolerance: float

    @property
    def passed(self):
        return self.max_residual <= self.tolerance


def _random_joints(n, m, seed):
    rng = np.random.default_rng(seed)
    return [JointPMF.random(m, 2, 2, rng) for _ in range(n)]


def _pairs(n, m, seed):
    for pmf in _random_joints(n, m, seed):
        yield pmf, pmf_infomat(pmf), pmf_infomat(pmf.swapped())


def chain_rule(n=100, m=3, seed=0, tol=1e-9):
    worst = max(abs(total_mi(pmf_infomat(p)) - pmf_total_mi(p))
                for p in _random_joints(n, m, seed))
    return SuiteResult("chain_rule", n, worst, tol)


def _identity_suite(name, prefix, n, m, seed, tol):
    worst = 0.0
    for _, fwd, rev in _pairs(n, m, seed):
        rep = verify_identities(fwd, rev, tol)
        worst = max([worst] + [abs(r.residual) for r in rep.results if r.name.startswith(prefix)])
    return SuiteResult(name, n, worst, tol)


def massey(n=100, m=3, seed=1, tol=1e-9):
    return _identity_suite("massey", "massey", n, m, seed, tol)


def amblard(n=100, m=3, seed=2, tol=1e-9):
    return _identity_suite("amblard", "amblard", n, m, seed, tol)


def te_conservation(n=100, m=3, seed=3, tol=1e-9):
    return _identity_suite("te_conservation", "te_conservation", n, m, seed, tol)


def te_decomposition(n=50, m=4, seed=4, tol=1e-12):
    return _identity_suite("te_decomposition", "te_decomposition", n, m, seed, tol)


def di_chain_rule(n=50, m=4, seed=5, tol=1e-12):
    return _identity_suite("di_chain_rule", "di_chain_rule", n, m, seed, tol)


def relabeling(n=20, m=3, seed=6, tol=1e-12):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for pmf in _random_joints(n, m, seed):
        t = pmf.table
        for ax in range(t.ndim):
            if rng.random() < 0.5:
                t = np.flip(t, axis=ax)
        diff = np.abs(pmf_infomat(pmf).entries - pmf_infomat(JointPMF(t)).entries).max()
        worst = max(worst, float(diff))
    return SuiteResult("relabeling", n, worst, tol)


def gaussian_iid(m=8, rho=0.9, tol=1e-9):
    mat = infomat_from_gaussian_model(iid_correlated_model(m, rho))
    target = -0.5 * math.log(1 - rho ** 2)
    e = mat.entries
    worst = max(np.abs(np.diag(e) - target).max(), np.abs(e - np.diag(np.diag(e))).max())
    return SuiteResult("gaussian_iid", 1, float(worst), tol)


SUITES = {
    "chain_rule": chain_rule,
    "massey": massey,
    "amblard": amblard,
    "te_conservation": te_conservation,
    "te_decomposition": te_decomposition,
    "di_chain_rule": di_chain_rule,
    "relabeling": relabeling,
    "gaussian_iid": gaussian_iid,
}


def run(names="all"):
    if names == "all":
        names = list(SUITES)
    return [SUITES[n]() for n in names]
