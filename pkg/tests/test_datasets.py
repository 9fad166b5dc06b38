import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from infomat import (FormatError, InvalidArgumentError, SequencePair, TruncatedFileError,
                     WindowedDataset, center, read_csv, read_dataset, window, write_dataset)


def _pair(n, dx=1, dy=1):
    return SequencePair(np.arange(n * dx, dtype=float).reshape(n, dx),
                        -np.arange(n * dy, dtype=float).reshape(n, dy))


class TestWindow:
    def test_block_partition(self):
        ds = window(_pair(10), 5, 5)
        assert ds.n_windows == 2
        np.testing.assert_array_equal(ds.x[:, :, 0], [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]])

    def test_identity_case(self):
        pair = _pair(10)
        ds = window(pair, 10, 1)
        assert ds.n_windows == 1
        np.testing.assert_array_equal(ds.x[0], pair.x)
        np.testing.assert_array_equal(ds.y[0], pair.y)

    def test_overlapping_offsets(self):
        ds = window(_pair(12), 5, 2)
        # N = (12 - 5) // 2 + 1
        assert ds.n_windows == 4
        np.testing.assert_array_equal(ds.x[:, 0, 0], [0, 2, 4, 6])

    def test_default_stride_is_m(self):
        assert window(_pair(23), 5).n_windows == 4

    @pytest.mark.parametrize("m,stride", [(11, 1), (0, 1), (5, 0)])
    def test_bad_arguments(self, m, stride):
        with pytest.raises(InvalidArgumentError):
            window(_pair(10), m, stride)

    @given(n=st.integers(1, 60), m=st.integers(1, 12))
    def test_disjoint_windows_reproduce_prefix(self, n, m):
        if m > n:
            return
        pair = _pair(n, 2, 1)
        ds = window(pair, m, m)
        k = m * (n // m)
        assert ds.n_windows == n // m
        np.testing.assert_array_equal(ds.x.reshape(-1, 2), pair.x[:k])
        np.testing.assert_array_equal(ds.y.reshape(-1, 1), pair.y[:k])


class TestCenter:
    def test_zero_unchanged(self):
        ds = WindowedDataset(np.zeros((3, 4)), np.zeros((3, 4)))
        c = center(ds)
        assert c.centered
        np.testing.assert_array_equal(c.x, 0)

    def test_constant_becomes_zero(self):
        ds = WindowedDataset(np.full((3, 4), 7.5), np.full((3, 4), -2.0))
        np.testing.assert_array_equal(center(ds).y, 0)

    def test_two_windows(self):
        ds = WindowedDataset(np.array([[1.0], [3.0]]), np.zeros((2, 1)))
        np.testing.assert_array_equal(center(ds).x[:, 0, 0], [-1.0, 1.0])

    def test_discrete_rejected(self):
        ds = WindowedDataset(np.zeros((3, 2)), np.ones((3, 2)), alphabet_size=2)
        with pytest.raises(InvalidArgumentError):
            center(ds)

    @settings(max_examples=50)
    @given(hnp.arrays(np.float64, (6, 4, 2), elements=st.floats(-1e3, 1e3)))
    def test_mean_zero_and_idempotent(self, arr):
        ds = center(WindowedDataset(arr, arr[..., :1] * 2))
        assert np.abs(ds.x.mean(axis=0)).max() <= 1e-12 * max(1.0, np.abs(arr).max())
        again = center(ds)
        np.testing.assert_allclose(again.x, ds.x, atol=1e-12 * max(1.0, np.abs(arr).max()))


class TestSequencePair:
    def test_length_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            SequencePair(np.zeros(3), np.zeros(4))

    def test_nan_rejected(self):
        with pytest.raises(InvalidArgumentError):
            SequencePair(np.array([0.0, np.nan]), np.zeros(2))

    def test_symbols_in_range(self):
        with pytest.raises(InvalidArgumentError):
            SequencePair(np.array([0, 2]), np.zeros(2), alphabet_size=2)

    def test_immutable(self):
        p = _pair(4)
        with pytest.raises(ValueError):
            p.x[0, 0] = 1.0


class TestPersistence:
    @settings(max_examples=25, deadline=None)
    @given(hnp.arrays(np.float64, st.tuples(st.integers(1, 20), st.integers(1, 3)),
                      elements=st.floats(allow_nan=False, allow_infinity=False)))
    def test_continuous_round_trip(self, tmp_path_factory, arr):
        path = tmp_path_factory.mktemp("spd") / "d.spd"
        pair = SequencePair(arr, arr[:, :1] * 0.5)
        write_dataset(pair, path)
        back = read_dataset(path)
        assert back == pair
        assert back.x.tobytes() == pair.x.tobytes()

    def test_discrete_round_trip(self, tmp_path):
        r = np.random.default_rng(0)
        pair = SequencePair(r.integers(0, 5, (30, 2)), r.integers(0, 5, (30, 1)), 5)
        write_dataset(pair, tmp_path / "d.spd")
        back = read_dataset(tmp_path / "d.spd")
        assert back == pair and back.alphabet_size == 5 and back.kind == "discrete"

    def test_header_layout(self, tmp_path):
        write_dataset(SequencePair([1.0, 2.0], [3.0, 4.0]), tmp_path / "d.spd")
        raw = (tmp_path / "d.spd").read_bytes()
        assert raw[:4] == b"SPD1"
        assert int.from_bytes(raw[4:8], "little") == 1
        assert int.from_bytes(raw[8:12], "little") == 2
        assert raw[20] == 0 and raw[21] == 0
        assert len(raw) == 24 + 2 * 2 * 8
        # row-major [time][x..., y...]
        assert np.frombuffer(raw[24:], "<f8").tolist() == [1.0, 3.0, 2.0, 4.0]

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "bad.spd"
        write_dataset(_pair(3), p)
        p.write_bytes(b"XXXX" + p.read_bytes()[4:])
        with pytest.raises(FormatError) as err:
            read_dataset(p)
        assert err.value.offset == 0

    def test_truncated_payload(self, tmp_path):
        p = tmp_path / "short.spd"
        write_dataset(_pair(5), p)
        p.write_bytes(p.read_bytes()[:-3])
        with pytest.raises(TruncatedFileError) as err:
            read_dataset(p)
        assert err.value.offset == 24 + 5 * 2 * 8 - 3

    def test_csv_import(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("# x0,x1,y0\n1,2,3\n4,5,6\n# trailing comment\n")
        pair = read_csv(p, d_x=2, d_y=1)
        np.testing.assert_array_equal(pair.x, [[1, 2], [4, 5]])
        np.testing.assert_array_equal(pair.y, [[3], [6]])

    def test_csv_column_mismatch(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("1,2,3\n")
        with pytest.raises(FormatError):
            read_csv(p, d_x=1, d_y=1)


def test_stacked_layout():
    ds = WindowedDataset(np.arange(12.0).reshape(2, 3, 2), 100 + np.arange(6.0).reshape(2, 3, 1))
    s = ds.stacked()
    assert s.shape == (2, 9)
    np.testing.assert_array_equal(s[0], [0, 1, 2, 3, 4, 5, 100, 101, 102])
    assert ds.swapped().d_x == 1
