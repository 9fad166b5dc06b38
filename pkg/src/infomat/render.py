"""Deterministic heatmaps of an InfoMat: binary PGM, SVG and CSV.

Row ``i`` (``X_i``) runs top to bottom and column ``j`` (``Y_j``) left to
right.  Negative entries are estimation noise and render as 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .errors import InvalidArgumentError
from .matrix import write_infomat_csv

# dark purple -> blue -> teal -> green -> yellow
FIVE_STOPS = np.array([
    [68, 1, 84],
    [59, 82, 139],
    [33, 145, 140],
    [94, 201, 98],
    [253, 231, 37],
], dtype=np.float64)


@dataclass(frozen=True)
class RenderSpec:
    colormap: str = "fixed-5-stop"
    value_clip: float | None = None
    clamp_negative: bool = True

    def __post_init__(self):
        if self.colormap not in ("grayscale", "fixed-5-stop"):
            raise InvalidArgumentError(f"unknown colormap {self.colormap!r}")
        if self.value_clip is not None and not self.value_clip > 0:
            raise InvalidArgumentError(f"value_clip must be positive, got {self.value_clip}")


def _clip_value(mat, spec):
    if spec.value_clip is not None:
        return float(spec.value_clip)
    top = float(mat.entries.max())
    return top if top > 0 else 1.0


def intensities(mat, spec=RenderSpec()):
    """Cell intensities in ``[0, 1]``."""
    clip = _clip_value(mat, spec)
    e = mat.entries
    if spec.clamp_negative:
        e = np.maximum(e, 0.0)
    return np.clip(e / clip, 0.0, 1.0)


def gray_levels(mat, spec=RenderSpec()):
    """``round(255 * clamp(entry, 0, clip) / clip)`` as ``uint8``, rounding half up.

    The ratio is rounded to 9 decimals first so that jointly rescaling the
    matrix and the clip cannot flip a level through last-bit noise.
    """
    scaled = np.round(255.0 * intensities(mat, spec), 9)
    return np.floor(scaled + 0.5).astype(np.uint8)


def render_pgm(mat, spec=RenderSpec(), path=None):
    """Binary P5 PGM, one pixel per cell.  Returns the bytes; writes them if ``path`` is given."""
    m = mat.m
    data = f"P5\n{m} {m}\n255\n".encode("ascii") + gray_levels(mat, spec).tobytes()
    if path is not None:
        Path(path).write_bytes(data)
    return data


def colormap_rgb(values, colormap="fixed-5-stop"):
    """Map values in ``[0, 1]`` to integer RGB triples."""
    v = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    if colormap == "grayscale":
        g = np.floor(255.0 * v + 0.5)
        return np.stack([g, g, g], axis=-1).astype(int)
    pos = v * (len(FIVE_STOPS) - 1)
    lo = np.minimum(np.floor(pos).astype(int), len(FIVE_STOPS) - 2)
    frac = (pos - lo)[..., None]
    rgb = FIVE_STOPS[lo] * (1 - frac) + FIVE_STOPS[lo + 1] * frac
    return np.floor(rgb + 0.5).astype(int)


def render_svg(mat, spec=RenderSpec(), path=None, cell=24, title=None):
    """SVG heatmap with ``m x m`` cell rectangles and axis labels ``1..m``."""
    m = mat.m
    rgb = colormap_rgb(intensities(mat, spec), spec.colormap)
    margin = 2 * cell
    size = margin + m * cell + cell // 2
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="{cell // 2}">']
    if title:
        out.append(f'<title>{escape(title)}</title>')
    for i in range(m):
        for j in range(m):
            r, g, b = rgb[i, j]
            out.append(f'<rect class="cell" x="{margin + j * cell}" y="{margin + i * cell}" '
                       f'width="{cell}" height="{cell}" fill="#{r:02x}{g:02x}{b:02x}">'
                       f'<title>I[{i + 1},{j + 1}] = {mat.entries[i, j]:.6g} nats</title></rect>')
    for k in range(m):
        c = margin + k * cell + cell // 2
        out.append(f'<text class="col-label" x="{c}" y="{margin - cell // 4}" '
                   f'text-anchor="middle">{k + 1}</text>')
        out.append(f'<text class="row-label" x="{margin - cell // 4}" y="{c}" '
                   f'text-anchor="end" dominant-baseline="middle">{k + 1}</text>')
    out.append(f'<text x="{margin + m * cell // 2}" y="{cell // 2}" text-anchor="middle">Y index j</text>')
    out.append(f'<text x="{cell // 2}" y="{margin + m * cell // 2}" text-anchor="middle" '
               f'transform="rotate(-90 {cell // 2} {margin + m * cell // 2})">X index i</text>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def render_csv(mat, path):
    write_infomat_csv(mat, path)
