"""Raster rendering of time-by-scale grids.

Time runs along x, grid scales along y with the smallest scale in the top
row (log-spaced grids therefore give a log scale axis). Values map to gray
levels by ``floor(255 * clip((v - vmin) / (vmax - vmin), 0, 1))``.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParam, MalformedGrid

__all__ = ["to_gray", "apply_colormap", "write_pgm", "write_ppm", "write_png"]

# fixed color stops for the optional "heat" table: black, purple, red, yellow, white
_HEAT_STOPS = np.array(
    [[0, 0, 0], [96, 0, 128], [220, 30, 30], [255, 200, 0], [255, 255, 255]], dtype=float
)


def to_gray(values, vmin: float = 0.0, vmax: float | None = None) -> np.ndarray:
    """Gray levels, shape ``(n_scales, n_times)``, from a ``(n_times, n_scales)`` grid.

    ``vmax`` defaults to ``max(1, grid maximum)`` so normalized power maps
    onto the full range and phase grids (up to pi/2) are not clipped.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 2 or v.size == 0:
        raise MalformedGrid("grid must be a non-empty 2-D array")
    if not np.all(np.isfinite(v)):
        raise MalformedGrid("grid contains non-finite values")
    if vmax is None:
        vmax = max(1.0, float(v.max()))
    if not vmax > vmin:
        raise InvalidParam(f"vmax ({vmax}) must exceed vmin ({vmin})")
    scaled = np.clip((v - vmin) / (vmax - vmin), 0.0, 1.0)
    return np.floor(scaled * 255.0).astype(np.uint8).T.copy()


def apply_colormap(gray: np.ndarray) -> np.ndarray:
    """Map gray levels through the fixed heat table to ``(h, w, 3)`` RGB."""
    pos = np.linspace(0, 255, len(_HEAT_STOPS))
    levels = np.arange(256)
    table = np.stack([np.interp(levels, pos, _HEAT_STOPS[:, c]) for c in range(3)], axis=1)
    table = np.round(table).astype(np.uint8)
    return table[gray]


def write_pgm(path, gray: np.ndarray):
    h, w = gray.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(gray, dtype=np.uint8).tobytes())


def write_ppm(path, rgb: np.ndarray):
    h, w, _ = rgb.shape
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (w, h))
        fh.write(np.ascontiguousarray(rgb, dtype=np.uint8).tobytes())


def write_png(path, pixels: np.ndarray):
    try:
        from PIL import Image
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise InvalidParam("PNG output needs Pillow (pip install 'artifact[png]')") from exc
    Image.fromarray(pixels).save(path, format="PNG")
