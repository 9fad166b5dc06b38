import json
import math

import numpy as np
import pytest

from infomat import (InfoMat, InvalidArgumentError, JointPMF, iid_correlated_model,
                     infomat_from_gaussian_model, pmf_infomat, total_mi)
from infomat.measures import (KINDS, IdentityReport, RegionMask, delayed_di, directed_information,
                              instantaneous, region_mask, region_sum, shifted_column_sum,
                              summarize, superdiagonal_sum, te_sum, to_bits, verify_identities)

LN2 = math.log(2)


def ones(m):
    return InfoMat(np.ones((m, m)), "plugin-discrete")


def random_pair(seed, m=3, ax=2, ay=2):
    pmf = JointPMF.random(m, ax, ay, np.random.default_rng(seed))
    return pmf_infomat(pmf), pmf_infomat(pmf.swapped())


class TestMasks:
    def test_di_region(self):
        mask = region_mask("di", None, 3)
        assert len(mask) == 6
        assert mask.positions() == [(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]

    def test_delayed_region(self):
        assert region_mask("delayed_di", 1, 3).positions() == [(1, 2), (1, 3), (2, 3)]
        assert len(region_mask("delayed_di", 3, 3)) == 0
        assert region_mask("delayed_di", 0, 4).positions() == region_mask("di", None, 4).positions()

    def test_te_column(self):
        assert region_mask("te_column", 2, 4).positions() == [(1, 3), (2, 3)]
        assert region_mask("te_row", 2, 4).positions() == [(3, 1), (3, 2)]

    @pytest.mark.parametrize("kind,param", [("delayed_di", 5), ("te_column", 4), ("delayed_di", -1),
                                            ("te_column", None), ("nope", None), ("custom", None)])
    def test_bad_parameters(self, kind, param):
        with pytest.raises(InvalidArgumentError):
            region_mask(kind, param, 4)

    def test_bad_m(self):
        with pytest.raises(InvalidArgumentError):
            region_mask("di", None, 0)

    def test_mask_algebra(self):
        m = 5
        di = region_mask("di", None, m)
        rev = region_mask("reverse_delayed_di", 1, m)
        assert len(di | rev) == m * m and len(di & rev) == 0
        assert set(KINDS) >= {"di", "delayed_di", "te_column", "diagonal"}

    def test_wrong_shape(self):
        with pytest.raises(InvalidArgumentError):
            RegionMask(3, np.ones((2, 2), bool))

    @pytest.mark.parametrize("m", [1, 2, 5, 9])
    def test_diagonal_and_delays_partition(self, m):
        """Diagonal plus both strictly delayed triangles tile the whole matrix exactly once."""
        count = (region_mask("diagonal", None, m).cells.astype(int)
                 + region_mask("delayed_di", 1, m).cells
                 + region_mask("reverse_delayed_di", 1, m).cells)
        assert np.array_equal(count, np.ones((m, m), int))


class TestRegionSums:
    def test_counts_on_ones(self):
        mat = ones(3)
        assert directed_information(mat) == 6
        assert delayed_di(mat, 1) == 3
        assert te_sum(ones(4), 2) == 2
        assert instantaneous(mat) == 3
        assert superdiagonal_sum(ones(4), 1) == 3

    def test_sum_matches_loop(self):
        e = np.random.default_rng(0).random((6, 6))
        mat = InfoMat(e, "plugin-discrete")
        for k in range(0, 7):
            assert delayed_di(mat, k) == pytest.approx(
                sum(e[i - 1, j - 1] for i in range(1, 7) for j in range(1, 7) if j - i >= k))

    def test_size_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            region_sum(ones(3), region_mask("di", None, 4))

    def test_shifted_column(self):
        mat = ones(5)
        assert shifted_column_sum(mat, 3, 1) == te_sum(mat, 3)
        assert shifted_column_sum(mat, 3, 2) == 2
        assert shifted_column_sum(mat, 1, 3) == 0
        with pytest.raises(InvalidArgumentError):
            shifted_column_sum(mat, 5, 1)

    def test_bits(self):
        assert to_bits(LN2) == pytest.approx(1.0)


class TestIdentities:
    @pytest.mark.parametrize("seed", range(10))
    def test_exact_pmf_pairs(self, seed):
        fwd, rev = random_pair(seed, m=3 + seed % 2)
        report = verify_identities(fwd, rev)
        assert report.passed, report.to_json()
        assert report.max_residual <= 1e-9

    def test_ternary_alphabets(self):
        rep = verify_identities(*random_pair(20, m=2, ax=3, ay=4))
        assert rep.passed

    def test_massey_on_gaussian_iid(self):
        model = iid_correlated_model(6, 0.9)
        fwd = infomat_from_gaussian_model(model)
        rev = infomat_from_gaussian_model(model.swapped())
        rep = verify_identities(fwd, rev)
        assert rep["massey"].residual == pytest.approx(0.0, abs=1e-9)
        assert delayed_di(rev, 1) == pytest.approx(0.0, abs=1e-9)
        assert directed_information(fwd) == pytest.approx(total_mi(fwd), abs=1e-9)

    def test_independent_streams_all_zero(self):
        px = np.random.default_rng(1).dirichlet(np.ones(8)).reshape(2, 2, 2)
        py = np.random.default_rng(2).dirichlet(np.ones(8)).reshape(2, 2, 2)
        pmf = JointPMF(np.multiply.outer(px, py))
        fwd, rev = pmf_infomat(pmf), pmf_infomat(pmf.swapped())
        assert np.abs(fwd.entries).max() <= 1e-12
        assert verify_identities(fwd, rev).passed

    def test_reverse_is_transpose(self):
        fwd, rev = random_pair(3, m=3)
        np.testing.assert_allclose(fwd.entries.T, rev.entries, atol=1e-12)

    def test_corrupted_reverse_fails(self):
        fwd, rev = random_pair(4)
        bad = InfoMat(rev.entries + np.eye(3) * 0.01, "exact-pmf")
        rep = verify_identities(fwd, bad)
        assert not rep.passed
        assert not rep["mi_symmetry"].passed

    def test_report_json(self):
        rep = verify_identities(*random_pair(5))
        data = json.loads(rep.to_json())
        assert data["all_pass"] is True
        names = {d["name"] for d in data["identities"]}
        assert {"massey", "amblard", "te_conservation", "mi_symmetry"} <= names
        with pytest.raises(KeyError):
            rep["nope"]

    def test_size_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            verify_identities(ones(2), ones(3))

    def test_empty_report(self):
        assert IdentityReport().passed and IdentityReport().max_residual == 0.0


class TestSummary:
    def test_units(self):
        mat = InfoMat(np.diag([LN2, LN2]), "exact-pmf")
        rep = summarize(mat, units="bits")
        assert rep["total_mi"] == pytest.approx(2.0)
        assert rep["normalized_directed_information"] == pytest.approx(1.0)
        assert rep["instantaneous"] == pytest.approx(2.0)
        assert "identities" not in rep
        with pytest.raises(InvalidArgumentError):
            summarize(mat, units="bans")

    def test_with_reverse(self):
        fwd, rev = random_pair(6)
        rep = summarize(fwd, rev)
        assert rep["all_pass"] and len(rep["identities"]) > 5
        json.dumps(rep)
