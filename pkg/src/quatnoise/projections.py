"""2D slices M_ab of the 4D parameter set: grids, equality checks, PGM output."""
from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .escape import MapConfig, _escape_kernel
from .hypercomplex import Hypercomplex, quaternion

DEFAULT_REAL_WINDOW = (-2.25, 4.25, -1.5, 1.5)
DEFAULT_IMAG_WINDOW = (-1.6, 1.6, -1.6, 1.6)
MISMATCH_CAP = 100


class GridShapeError(ValueError):
    pass


@dataclass(frozen=True)
class ProjectionSpec:
    """Which two coordinates of r vary (1-based), over what window, at what size.

    ``window`` is ``(u_min, u_max, v_min, v_max)``; ``u`` feeds coordinate
    ``axes[0]`` and ``v`` feeds ``axes[1]``.
    """

    axes: tuple[int, int]
    window: tuple[float, float, float, float] | None = None
    resolution: tuple[int, int] = (256, 256)

    def __post_init__(self):
        a, b = (int(x) for x in self.axes)
        if not 1 <= a < b <= 4:
            raise ValueError(f"axes must satisfy 1 <= a < b <= 4, got {self.axes}")
        object.__setattr__(self, "axes", (a, b))
        window = self.window
        if window is None:
            window = DEFAULT_REAL_WINDOW if a == 1 else DEFAULT_IMAG_WINDOW
        window = tuple(float(x) for x in window)
        if len(window) != 4 or not (window[0] < window[1] and window[2] < window[3]):
            raise ValueError(f"window needs u_min < u_max and v_min < v_max, got {window}")
        object.__setattr__(self, "window", window)
        w, h = (int(x) for x in self.resolution)
        if w < 2 or h < 2:
            raise ValueError(f"resolution must be at least 2x2, got {self.resolution}")
        object.__setattr__(self, "resolution", (w, h))

    def u_centers(self) -> np.ndarray:
        u0, u1, _, _ = self.window
        w = self.resolution[0]
        return u0 + (np.arange(w) + 0.5) * ((u1 - u0) / w)

    def v_centers(self) -> np.ndarray:
        """Pixel-centre v values, top row first (descending)."""
        _, _, v0, v1 = self.window
        h = self.resolution[1]
        return (v0 + (np.arange(h) + 0.5) * ((v1 - v0) / h))[::-1]


@dataclass
class EscapeGrid:
    """Escape counts laid out as an image: ``counts[row, col]``.

    Column ``col`` samples ``u_centers()[col]``; row 0 is the top of the
    picture, i.e. the largest v.
    """

    spec: ProjectionSpec
    cfg: MapConfig
    counts: np.ndarray = field(repr=False)

    def bounded_fraction(self) -> float:
        return float(np.mean(self.counts == self.cfg.max_iter))


def embed_param(spec: ProjectionSpec, u: float, v: float) -> Hypercomplex:
    c = [0.0, 0.0, 0.0, 0.0]
    a, b = spec.axes
    c[a - 1] = u
    c[b - 1] = v
    return quaternion(*c)


@numba.njit(cache=True, parallel=True)
def _grid_kernel(us, vs, ia, ib, z0, threshold, max_iter):
    h = vs.size
    w = us.size
    out = np.empty((h, w), dtype=np.int32)
    for row in numba.prange(h):
        for col in range(w):
            r = [0.0, 0.0, 0.0, 0.0]
            r[ia] = us[col]
            r[ib] = vs[row]
            _, k = _escape_kernel(r[0], r[1], r[2], r[3], z0, threshold, max_iter)
            out[row, col] = k
    return out


def escape_grid(spec: ProjectionSpec, cfg: MapConfig | None = None) -> EscapeGrid:
    cfg = cfg or MapConfig()
    counts = _grid_kernel(spec.u_centers(), spec.v_centers(), spec.axes[0] - 1, spec.axes[1] - 1,
                          cfg.z0, float(cfg.escape_threshold), cfg.max_iter)
    return EscapeGrid(spec, cfg, counts)


@dataclass
class GridComparison:
    equal: bool
    n_mismatch: int
    mismatches: list[tuple[int, int]]

    def __bool__(self) -> bool:
        return self.equal


def grids_equal(g1: EscapeGrid, g2: EscapeGrid) -> GridComparison:
    """Entrywise comparison; lists up to 100 mismatching (row, col) pixels."""
    if g1.counts.shape != g2.counts.shape:
        raise GridShapeError(f"grid shapes differ: {g1.counts.shape} vs {g2.counts.shape}")
    diff = np.argwhere(g1.counts != g2.counts)
    pixels = [(int(r), int(c)) for r, c in diff[:MISMATCH_CAP]]
    return GridComparison(len(diff) == 0, int(len(diff)), pixels)


def to_gray(grid: EscapeGrid) -> np.ndarray:
    counts = grid.counts.astype(np.int64)
    return (255 * counts // grid.cfg.max_iter).clip(0, 255).astype(np.uint8)


def render_pgm(grid: EscapeGrid) -> bytes:
    """Binary PGM (P5, maxval 255); bounded pixels come out white."""
    h, w = grid.counts.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    return header + to_gray(grid).tobytes(order="C")


def read_pgm(data: bytes) -> np.ndarray:
    """Parse the P5 layout written by :func:`render_pgm` (no comments)."""
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = (int(x) for x in parts[1].split())
    if int(parts[2]) != 255:
        raise ValueError("only maxval 255 is supported")
    pix = np.frombuffer(parts[3], dtype=np.uint8)
    if pix.size != w * h:
        raise ValueError(f"expected {w * h} pixels, got {pix.size}")
    return pix.reshape(h, w)
