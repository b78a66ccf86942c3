"""Scalp topography: disc interpolation, angle similarity, raster export.

Per-electrode scalars are spread over an N x N grid covering the unit disc
by inverse-distance-squared weighting, which is exact at electrode sites
and never leaves the value range of its inputs. Cells outside the disc
carry NaN and stay out of every statistic. Rasters are written as binary
PPM (diverging blue-to-red palette) or PGM, byte-deterministic.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .core import Montage
from .errors import DegenerateRange, InvalidConfig, LengthMismatch, ZeroVector

_NODE_SNAP = 1e-9

# Diverging palette stops at t = 0, .25, .5, .75, 1.
_BLUE_RED = np.array(
    [
        [0, 0, 255],
        [0, 255, 255],
        [0, 255, 0],
        [255, 255, 0],
        [255, 0, 0],
    ],
    dtype=np.float64,
)


@dataclass(frozen=True)
class TopoVector:
    """Per-electrode scalars (band power, ratio, ...), montage order."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise LengthMismatch(f"values must be a non-empty 1-D array, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise LengthMismatch("values must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class TopoGrid:
    """Interpolated N x N field; NaN marks cells outside the disc."""

    resolution: int
    values: np.ndarray
    palette_range: tuple[float, float]

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.shape != (self.resolution, self.resolution):
            raise InvalidConfig(
                f"grid shape {arr.shape} does not match resolution {self.resolution}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        object.__setattr__(
            self, "palette_range", (float(self.palette_range[0]), float(self.palette_range[1]))
        )

    @property
    def mask(self) -> np.ndarray:
        """True where a cell lies inside the disc."""
        return np.isfinite(self.values)


def grid_coordinates(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Cell-center coordinates: x left to right, y top (+1, nose) down."""
    if resolution < 2:
        raise InvalidConfig(f"resolution must be >= 2, got {resolution}")
    x = np.linspace(-1.0, 1.0, resolution)
    y = np.linspace(1.0, -1.0, resolution)
    return np.meshgrid(x, y, indexing="xy")


def interpolate_scalp(vector: TopoVector, montage: Montage, resolution: int = 64) -> TopoGrid:
    """Inverse-distance-squared interpolation over the unit disc.

    A cell within snapping distance of an electrode takes that electrode's
    value exactly. palette_range records the vector's own span, padded by
    half a unit when the vector is constant so rendering stays defined.
    """
    pos = montage.positions()
    if len(vector) != len(pos):
        raise LengthMismatch(
            f"{len(vector)} values for {len(pos)} EEG electrodes in {montage.name!r}"
        )
    gx, gy = grid_coordinates(resolution)
    inside = gx * gx + gy * gy <= 1.0 + 1e-12
    pts = np.stack([gx[inside], gy[inside]], axis=1)
    d2 = np.sum((pts[:, None, :] - pos[None, :, :]) ** 2, axis=2)
    vals = np.empty(len(pts))
    near = d2 < _NODE_SNAP**2
    hit = near.any(axis=1)
    vals[hit] = vector.values[np.argmax(near[hit], axis=1)]
    with np.errstate(divide="ignore"):
        w = 1.0 / d2[~hit]
    vals[~hit] = (w @ vector.values) / w.sum(axis=1)
    grid = np.full(gx.shape, np.nan)
    grid[inside] = vals
    vmin = float(vector.values.min())
    vmax = float(vector.values.max())
    if vmin == vmax:
        vmin, vmax = vmin - 0.5, vmax + 0.5
    return TopoGrid(resolution=resolution, values=grid, palette_range=(vmin, vmax))


def topo_similarity(a: TopoVector, b: TopoVector) -> float:
    """Cosine of the angle between two topography vectors, in [-1, 1]."""
    if len(a) != len(b):
        raise LengthMismatch(f"vector lengths differ: {len(a)} vs {len(b)}")
    na = float(np.linalg.norm(a.values))
    nb = float(np.linalg.norm(b.values))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("similarity undefined for a zero vector")
    cos = float(np.dot(a.values, b.values) / (na * nb))
    return min(1.0, max(-1.0, cos))


def render_topomap(grid: TopoGrid, palette: str = "blue_red") -> bytes:
    """Binary raster of the grid; masked cells are white.

    blue_red produces a P6 PPM over the diverging palette; gray produces
    a P5 PGM. Values are normalized by palette_range and clipped.
    """
    vmin, vmax = grid.palette_range
    if not vmin < vmax:
        raise DegenerateRange(f"palette range [{vmin}, {vmax}] is empty")
    n = grid.resolution
    mask = grid.mask
    t = np.zeros(grid.values.shape)
    t[mask] = np.clip((grid.values[mask] - vmin) / (vmax - vmin), 0.0, 1.0)

    if palette == "gray":
        shade = np.rint(t * 255.0).astype(np.uint8)
        shade[~mask] = 255
        return b"P5\n%d %d\n255\n" % (n, n) + shade.tobytes()
    if palette != "blue_red":
        raise InvalidConfig(f"palette must be 'blue_red' or 'gray', got {palette!r}")

    seg = t * (len(_BLUE_RED) - 1)
    idx = np.minimum(seg.astype(np.int64), len(_BLUE_RED) - 2)
    frac = (seg - idx)[..., None]
    rgb = _BLUE_RED[idx] * (1.0 - frac) + _BLUE_RED[idx + 1] * frac
    rgb = np.rint(rgb).astype(np.uint8)
    rgb[~mask] = 255
    return b"P6\n%d %d\n255\n" % (n, n) + rgb.tobytes()


def grid_to_csv(grid: TopoGrid) -> str:
    """Row-major CSV of the grid; masked cells are empty fields."""
    out = io.StringIO()
    for row in grid.values:
        out.write(
            ",".join("" if not math.isfinite(v) else repr(float(v)) for v in row) + "\n"
        )
    return out.getvalue()


def similarity_matrix(vectors: list[TopoVector]) -> np.ndarray:
    """Pairwise cosine similarity; diagonal is exactly 1."""
    m = len(vectors)
    out = np.eye(m)
    for i in range(m):
        for j in range(i + 1, m):
            out[i, j] = out[j, i] = topo_similarity(vectors[i], vectors[j])
    return out
