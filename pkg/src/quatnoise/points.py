"""Point processes: strictly increasing event coordinates."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DegenerateProcessError(ValueError):
    """Fewer than two events, or zero observation span."""


@dataclass(frozen=True)
class PointProcess:
    events: np.ndarray

    def __post_init__(self):
        ev = np.array(self.events, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(ev)):
            raise ValueError("events must be finite")
        if ev.size > 1 and not np.all(np.diff(ev) > 0):
            raise ValueError("events must be strictly increasing")
        ev.flags.writeable = False
        object.__setattr__(self, "events", ev)

    def __len__(self) -> int:
        return self.events.size

    @property
    def span(self) -> float:
        if self.events.size < 2:
            return 0.0
        return float(self.events[-1] - self.events[0])

    def require_spectral(self) -> None:
        if self.events.size < 2 or not self.span > 0:
            raise DegenerateProcessError(f"need N >= 2 events with positive span, got N={self.events.size}")


def poisson_points(mean_spacing: float, n: int, seed: int) -> PointProcess:
    """Cumulative sums of i.i.d. exponential gaps; reproducible per seed."""
    if not mean_spacing > 0:
        raise ValueError("mean_spacing must be positive")
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(seed)
    gaps = rng.exponential(mean_spacing, size=n)
    # exponential gaps are positive with probability one, but a 0.0 draw would break ordering
    gaps[gaps <= 0] = np.nextafter(0.0, 1.0)
    return PointProcess(np.cumsum(gaps))


def lattice_points(spacing: float, n: int) -> PointProcess:
    if not spacing > 0:
        raise ValueError("spacing must be positive")
    if n < 2:
        raise ValueError("n must be at least 2")
    return PointProcess(np.arange(1, n + 1) * spacing)
