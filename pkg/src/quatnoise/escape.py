"""Escape-time dynamics of the quaternionic logistic map z -> r z (1 - z)."""
from __future__ import annotations

import math
import os
import sys
from dataclasses import dataclass

import numba
import numpy as np

from .hypercomplex import Hypercomplex, HypercomplexOverflow, quat_mul, quaternion

# Coordinates above this can overflow in one more step; treat as escaped.
OVERFLOW_GUARD = math.sqrt(sys.float_info.max) / 4.0

DEFAULT_THRESHOLD = 1e10
DEFAULT_MAX_ITER = 50
SCAN_MAX_ITER = 256

# the bundled TBB is too old for numba and only produces a warning; skip it
if "NUMBA_THREADING_LAYER_PRIORITY" not in os.environ:
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

_qmul = numba.njit(cache=True)(quat_mul)


@dataclass(frozen=True)
class MapConfig:
    z0: tuple[float, float, float, float] = (0.5, 0.0, 0.0, 0.0)
    escape_threshold: float = DEFAULT_THRESHOLD
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        z0 = tuple(float(c) for c in (self.z0.coords if isinstance(self.z0, Hypercomplex) else self.z0))
        if len(z0) != 4 or not all(math.isfinite(c) for c in z0):
            raise ValueError(f"z0 must be 4 finite coordinates, got {self.z0!r}")
        object.__setattr__(self, "z0", z0)
        if not (self.escape_threshold > 1.0 and math.isfinite(self.escape_threshold)):
            raise ValueError(f"escape_threshold must be a finite number > 1, got {self.escape_threshold}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError(f"max_iter must be a positive integer, got {self.max_iter}")
        object.__setattr__(self, "max_iter", int(self.max_iter))

    def as_dict(self) -> dict:
        return {"z0": list(self.z0), "escape_threshold": self.escape_threshold, "max_iter": self.max_iter}


@dataclass(frozen=True)
class EscapeOutcome:
    escaped: bool
    iterations: int


@numba.njit(cache=True)
def _escape_kernel(r0, r1, r2, r3, z0, threshold, max_iter):
    r = (r0, r1, r2, r3)
    rmax = max(abs(r0), abs(r1), abs(r2), abs(r3))
    z = z0
    for k in range(1, max_iter + 1):
        zmax = max(abs(z[0]), abs(z[1]), abs(z[2]), abs(z[3]))
        if zmax > OVERFLOW_GUARD or rmax > OVERFLOW_GUARD:
            return True, k
        w = (1.0 - z[0], -z[1], -z[2], -z[3])
        z = _qmul(r, _qmul(z, w))
        n = math.sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3])
        # NaN compares false, so test finiteness explicitly
        if not math.isfinite(n) or n > threshold:
            return True, k
    return False, max_iter


@numba.njit(cache=True, parallel=True)
def _escape_many(params, z0, threshold, max_iter):
    """Escape counts for an (n, 4) array of parameters."""
    n = params.shape[0]
    out = np.empty(n, dtype=np.int32)
    for i in numba.prange(n):
        _, k = _escape_kernel(params[i, 0], params[i, 1], params[i, 2], params[i, 3],
                              z0, threshold, max_iter)
        out[i] = k
    return out


def escape_counts(params: np.ndarray, cfg: MapConfig) -> np.ndarray:
    """Vectorised escape iterations for each row of ``params`` (shape ``(n, 4)``)."""
    params = np.ascontiguousarray(params, dtype=np.float64).reshape(-1, 4)
    return _escape_many(params, cfg.z0, float(cfg.escape_threshold), cfg.max_iter)


def logistic_step(z: Hypercomplex, r: Hypercomplex, *, left: bool = True) -> Hypercomplex:
    """One map step, ``r (z (1 - z))``; ``left=False`` evaluates ``(z (1 - z)) r``."""
    if z.level != 2 or r.level != 2:
        raise ValueError("logistic_step works on quaternions (level 2)")
    zc = tuple(z.coords)
    w = (1.0 - zc[0], -zc[1], -zc[2], -zc[3])
    with np.errstate(over="ignore", invalid="ignore"):
        p = quat_mul(zc, w)
        out = quat_mul(tuple(r.coords), p) if left else quat_mul(p, tuple(r.coords))
    if not all(math.isfinite(c) for c in out):
        raise HypercomplexOverflow("logistic step overflowed")
    return quaternion(*out)


def escape_time(r: Hypercomplex, cfg: MapConfig | None = None) -> EscapeOutcome:
    cfg = cfg or MapConfig()
    if r.level != 2:
        raise ValueError("escape_time needs a quaternion parameter")
    c = r.coords
    escaped, k = _escape_kernel(float(c[0]), float(c[1]), float(c[2]), float(c[3]),
                                cfg.z0, float(cfg.escape_threshold), cfg.max_iter)
    return EscapeOutcome(bool(escaped), int(k))


def set_threads(n: int | None) -> None:
    """Cap numba's worker pool; ``None`` keeps the current setting."""
    if n is not None:
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))
