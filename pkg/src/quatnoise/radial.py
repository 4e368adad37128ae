"""Escape time along a ray of the M_23 plane, and the radii of its peaks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.signal import find_peaks

from .escape import SCAN_MAX_ITER, MapConfig, _escape_kernel
from .points import PointProcess

DEFAULT_PROMINENCE = 2
# scan window as multiples of the outer boundary radius
SCAN_LO_FACTOR = 0.8
SCAN_HI_FACTOR = 1.1


def scan_config(**overrides) -> MapConfig:
    """Map defaults for radial scans: as :class:`MapConfig` but 256 iterations."""
    overrides.setdefault("max_iter", SCAN_MAX_ITER)
    return MapConfig(**overrides)


@dataclass
class RadialProfile:
    r_min: float
    r_max: float
    radii: np.ndarray = field(repr=False)
    iterations: np.ndarray = field(repr=False)
    cfg: MapConfig
    angle: float = 0.0

    def __len__(self) -> int:
        return self.radii.size


@numba.njit(cache=True, parallel=True)
def _ray_kernel(radii, c, s, z0, threshold, max_iter):
    out = np.empty(radii.size, dtype=np.int32)
    for i in numba.prange(radii.size):
        _, k = _escape_kernel(0.0, radii[i] * c, radii[i] * s, 0.0, z0, threshold, max_iter)
        out[i] = k
    return out


def radial_profile(r_min: float, r_max: float, n: int, angle: float = 0.0,
                   cfg: MapConfig | None = None) -> RadialProfile:
    """Escape counts at ``n`` evenly spaced radii along ``r = (0, R cos a, R sin a, 0)``."""
    if not (0 <= r_min < r_max) or not math.isfinite(r_max):
        raise ValueError(f"need 0 <= r_min < r_max, got [{r_min}, {r_max}]")
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    cfg = cfg or scan_config()
    radii = r_min + np.arange(n) * ((r_max - r_min) / (n - 1))
    radii[-1] = r_max
    iters = _ray_kernel(radii, math.cos(angle), math.sin(angle), cfg.z0,
                        float(cfg.escape_threshold), cfg.max_iter)
    return RadialProfile(float(r_min), float(r_max), radii, iters, cfg, float(angle))


def _bounded(radius: float, cfg: MapConfig) -> bool:
    escaped, _ = _escape_kernel(0.0, radius, 0.0, 0.0, cfg.z0, float(cfg.escape_threshold), cfg.max_iter)
    return not escaped


def outer_radius(cfg: MapConfig | None = None, lo: float = 0.0, hi: float = 2.0, tol: float = 1e-12) -> float:
    """Bisect for the bounded/escaping transition of ``(0, R, 0, 0)``.

    ``lo`` must be bounded and ``hi`` escaping.  The bounded set along the
    ray is not an interval, so the answer is the transition the bisection
    path happens to land on; with the default bracket that is the outer tip.
    """
    cfg = cfg or scan_config()
    if not _bounded(lo, cfg):
        raise ValueError(f"lower bracket R={lo} escapes")
    if _bounded(hi, cfg):
        raise ValueError(f"upper bracket R={hi} is bounded")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _bounded(mid, cfg):
            lo = mid
        else:
            hi = mid
    return lo


def default_scan_window(cfg: MapConfig | None = None) -> tuple[float, float]:
    r_out = outer_radius(cfg)
    return SCAN_LO_FACTOR * r_out, SCAN_HI_FACTOR * r_out


def extract_peaks(profile: RadialProfile, min_prominence: float = DEFAULT_PROMINENCE) -> PointProcess:
    """Radii of local maxima of the iteration count with enough prominence.

    A flat-topped peak reports the mean radius of its first and last sample.
    Saturated runs (bounded at ``max_iter``) count as peaks like any other.
    """
    if min_prominence < 1:
        raise ValueError("min_prominence must be >= 1")
    return PointProcess(peak_positions(profile.radii, profile.iterations, min_prominence))


def peak_positions(x: np.ndarray, y: np.ndarray, min_prominence: float) -> np.ndarray:
    _, props = find_peaks(np.asarray(y), prominence=min_prominence, plateau_size=1)
    x = np.asarray(x, dtype=np.float64)
    return 0.5 * (x[props["left_edges"]] + x[props["right_edges"]])
