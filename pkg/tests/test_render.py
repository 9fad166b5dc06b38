import re

import numpy as np
import pytest

from infomat import InfoMat, InvalidArgumentError
from infomat.render import (FIVE_STOPS, RenderSpec, colormap_rgb, gray_levels, render_csv,
                            render_pgm, render_svg)


def mat(e, prov="estimated-gaussian"):
    return InfoMat(np.asarray(e, float), prov)


def pgm_pixels(data, m):
    header = f"P5\n{m} {m}\n255\n".encode()
    assert data.startswith(header)
    return np.frombuffer(data[len(header):], np.uint8).reshape(m, m)


class TestPGM:
    def test_zero_matrix_is_black(self):
        px = pgm_pixels(render_pgm(mat(np.zeros((3, 3)))), 3)
        assert not px.any()

    def test_diagonal(self):
        px = pgm_pixels(render_pgm(mat(np.diag([0.5, 1.0]))), 2)
        np.testing.assert_array_equal(px, [[128, 0], [0, 255]])

    def test_negative_clamped(self):
        px = pgm_pixels(render_pgm(mat([[-0.02, 1.0], [0.25, 0.0]])), 2)
        np.testing.assert_array_equal(px, [[0, 255], [64, 0]])

    def test_clip(self):
        spec = RenderSpec(colormap="grayscale", value_clip=0.5)
        np.testing.assert_array_equal(gray_levels(mat([[1.0, 0.25]] * 2), spec), [[255, 128]] * 2)

    def test_byte_identical_repeats(self, tmp_path):
        e = np.random.default_rng(0).random((7, 7))
        a = render_pgm(mat(e), path=tmp_path / "a.pgm")
        b = render_pgm(mat(e.copy()))
        assert a == b == (tmp_path / "a.pgm").read_bytes()

    @pytest.mark.parametrize("scale", [1e-3, 0.37, 3.0, 1e4])
    def test_joint_rescaling_invariance(self, scale):
        e = np.random.default_rng(1).random((6, 6))
        base = render_pgm(mat(e), RenderSpec(value_clip=0.8))
        assert render_pgm(mat(e * scale), RenderSpec(value_clip=0.8 * scale)) == base
        assert render_pgm(mat(e * scale)) == render_pgm(mat(e))

    def test_bad_spec(self):
        with pytest.raises(InvalidArgumentError):
            RenderSpec(colormap="jet")
        with pytest.raises(InvalidArgumentError):
            RenderSpec(value_clip=0.0)


class TestSVG:
    def test_cells_and_labels(self, tmp_path):
        text = render_svg(mat([[0.1, 0.0], [0.0, 0.2]]), path=tmp_path / "a.svg", title="demo")
        assert text.count('class="cell"') == 4
        assert re.findall(r'class="col-label"[^>]*>(\d+)<', text) == ["1", "2"]
        assert re.findall(r'class="row-label"[^>]*>(\d+)<', text) == ["1", "2"]
        assert (tmp_path / "a.svg").read_text() == text
        assert "<title>demo</title>" in text

    def test_fill_colors(self):
        text = render_svg(mat([[0.0, 1.0], [0.0, 0.0]]))
        fills = re.findall(r'fill="#([0-9a-f]{6})"', text)
        lo = "".join(f"{int(v):02x}" for v in FIVE_STOPS[0])
        hi = "".join(f"{int(v):02x}" for v in FIVE_STOPS[-1])
        assert fills == [lo, hi, lo, lo]

    def test_deterministic(self):
        e = np.random.default_rng(2).random((4, 4))
        assert render_svg(mat(e)) == render_svg(mat(e))

    def test_colormap_endpoints(self):
        np.testing.assert_array_equal(colormap_rgb([0.0, 1.0], "grayscale"), [[0] * 3, [255] * 3])
        np.testing.assert_array_equal(colormap_rgb(0.25), FIVE_STOPS[1])


def test_csv_export(tmp_path):
    render_csv(mat(np.eye(2)), tmp_path / "m.csv")
    assert (tmp_path / "m.csv").read_text().startswith("# infomat v1\n")
