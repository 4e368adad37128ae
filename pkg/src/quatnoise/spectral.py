"""Periodogram of a point process and power-law fits to it.

    S(f) = 2 / (R_N - R_1) * | sum_j exp(-2 pi i f R_j) |^2
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.special import digamma

from .points import DegenerateProcessError, PointProcess, lattice_points, poisson_points

__all__ = [
    "Periodogram", "SlopeFit", "FitError", "periodogram",
    "default_freq_grid", "bin_periodogram", "default_fit_band", "fit_alpha",
    "poisson_points", "lattice_points", "DegenerateProcessError",
]

BINS_PER_DECADE = 20
FIT_DECADES = 2.0
MIN_FIT_POINTS = 8
_BLOCK = 32


class FitError(ValueError):
    """Not enough usable points in the fit band."""


@dataclass
class Periodogram:
    freqs: np.ndarray
    power: np.ndarray
    # periodogram ordinates averaged into each entry; None for a raw periodogram
    counts: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.freqs = np.asarray(self.freqs, dtype=np.float64)
        self.power = np.asarray(self.power, dtype=np.float64)
        if self.freqs.shape != self.power.shape:
            raise ValueError("freqs and power lengths differ")
        if np.any(self.freqs <= 0) or np.any(np.diff(self.freqs) <= 0):
            raise ValueError("freqs must be positive and strictly increasing")
        if np.any(self.power < 0):
            raise ValueError("power must be nonnegative")
        if self.counts is not None:
            self.counts = np.asarray(self.counts, dtype=np.int64)

    def __len__(self) -> int:
        return self.freqs.size


@dataclass(frozen=True)
class SlopeFit:
    alpha: float
    intercept: float
    f_lo: float
    f_hi: float
    residual: float
    points_used: int
    zeros_excluded: int = 0

    def report(self) -> str:
        return "".join(f"{k}={v!r}\n" for k, v in (
            ("alpha", self.alpha), ("intercept", self.intercept), ("f_lo", self.f_lo),
            ("f_hi", self.f_hi), ("residual", self.residual), ("points_used", self.points_used),
            ("zeros_excluded", self.zeros_excluded)))

    @classmethod
    def parse(cls, text: str) -> "SlopeFit":
        kv = dict(line.split("=", 1) for line in text.splitlines() if "=" in line)
        return cls(float(kv["alpha"]), float(kv["intercept"]), float(kv["f_lo"]), float(kv["f_hi"]),
                   float(kv["residual"]), int(kv["points_used"]), int(kv.get("zeros_excluded", 0)))


_SPLIT = 134217729.0  # 2**27 + 1


@numba.njit(cache=True)
def _cycles(f, r):
    """Fractional part of f*r, keeping the rounding error of the product (Dekker)."""
    p = f * r
    t = _SPLIT * f
    fh = t - (t - f)
    fl = f - fh
    t = _SPLIT * r
    rh = t - (t - r)
    rl = r - rh
    err = ((fh * rh - p) + fh * rl + fl * rh) + fl * rl
    return (p - math.floor(p)) + err


@numba.njit(cache=True)
def _phasor_sum(events, f):
    """Sum of exp(-2 pi i f R_j) with a fixed pairwise reduction order."""
    n = events.size
    nblk = (n + _BLOCK - 1) // _BLOCK
    re = np.empty(nblk)
    im = np.empty(nblk)
    for b in range(nblk):
        sr = 0.0
        si = 0.0
        for j in range(b * _BLOCK, min(n, (b + 1) * _BLOCK)):
            ph = -2.0 * math.pi * _cycles(f, events[j])
            sr += math.cos(ph)
            si += math.sin(ph)
        re[b] = sr
        im[b] = si
    m = nblk
    while m > 1:
        half = m // 2
        for i in range(half):
            re[i] = re[2 * i] + re[2 * i + 1]
            im[i] = im[2 * i] + im[2 * i + 1]
        if m % 2:
            re[half] = re[m - 1]
            im[half] = im[m - 1]
            m = half + 1
        else:
            m = half
    return re[0], im[0]


@numba.njit(cache=True, parallel=True)
def _periodogram_kernel(events, freqs, scale):
    out = np.empty(freqs.size)
    for m in numba.prange(freqs.size):
        sr, si = _phasor_sum(events, freqs[m])
        out[m] = scale * (sr * sr + si * si)
    return out


def periodogram(pp: PointProcess, freqs) -> Periodogram:
    """Evaluate S(f) directly at each requested frequency.

    The result does not depend on the number of threads: each frequency is
    summed independently, always in the same order.
    """
    pp.require_spectral()
    freqs = np.ascontiguousarray(freqs, dtype=np.float64).reshape(-1)
    if np.any(~(freqs > 0)):
        raise ValueError("frequencies must be positive")
    power = _periodogram_kernel(np.ascontiguousarray(pp.events), freqs, 2.0 / pp.span)
    return Periodogram(freqs, power)


def default_freq_grid(pp: PointProcess, n_freqs: int = 1000, harmonic: bool = True) -> np.ndarray:
    """Log-spaced frequencies from ``1/span`` up to ``N/(2 span)``.

    With ``harmonic`` the points are rounded to integer multiples of
    ``1/span`` and deduplicated.  Off-harmonic frequencies pick up leakage
    from the ``N**2`` peak at f = 0, which swamps the lowest decades.
    """
    pp.require_spectral()
    if n_freqs < 2:
        raise ValueError("n_freqs must be >= 2")
    n = len(pp)
    span = pp.span
    kmax = n / 2.0
    if kmax <= 1.0:
        raise DegenerateProcessError("need N > 2 for a non-trivial frequency range")
    k = np.geomspace(1.0, kmax, n_freqs)
    if harmonic:
        k = np.unique(np.round(k))
        k = k[k >= 1]
    return k / span


def bin_periodogram(pg: Periodogram, bins_per_decade: int = BINS_PER_DECADE) -> Periodogram:
    """Average power in geometric bins anchored at the lowest frequency.

    Each output frequency is the geometric mean of the bin's members; empty
    bins are dropped.  ``counts`` records how many ordinates each bin holds.
    """
    if bins_per_decade < 1:
        raise ValueError("bins_per_decade must be >= 1")
    if len(pg) == 0:
        raise ValueError("empty periodogram")
    if pg.counts is not None:
        raise ValueError("periodogram is already binned")
    logf = np.log10(pg.freqs)
    # small slack so points sitting on an edge land deterministically in the upper bin
    idx = np.floor((logf - logf[0]) * bins_per_decade + 1e-9).astype(np.int64)
    uniq, start, counts = np.unique(idx, return_index=True, return_counts=True)
    fb = np.empty(uniq.size)
    sb = np.empty(uniq.size)
    for i, (s, c) in enumerate(zip(start, counts)):
        fb[i] = 10.0 ** logf[s:s + c].mean()
        sb[i] = pg.power[s:s + c].mean()
    return Periodogram(fb, sb, counts)


def default_fit_band(pg: Periodogram, decades: float = FIT_DECADES) -> tuple[float, float]:
    """Lowest ``decades`` of the grid, leaving out the first point."""
    if len(pg) < 2:
        raise FitError("need at least two frequencies for a band")
    lo = pg.freqs[1]
    hi = pg.freqs[0] * 10.0 ** decades
    return float(lo), float(hi)


def fit_alpha(pg: Periodogram, f_lo: float | None = None, f_hi: float | None = None) -> SlopeFit:
    """Least-squares line through log10 S vs log10 f; ``alpha = -slope``.

    For a binned periodogram each point is shifted by the expected bias of
    the log of a mean of ``n`` exponential ordinates, ``digamma(n) - ln n``,
    so that bins holding different numbers of ordinates line up.
    """
    if f_lo is None or f_hi is None:
        lo, hi = default_fit_band(pg)
        f_lo = lo if f_lo is None else f_lo
        f_hi = hi if f_hi is None else f_hi
    if not f_lo < f_hi:
        raise FitError(f"empty band [{f_lo}, {f_hi}]")
    band = (pg.freqs >= f_lo) & (pg.freqs <= f_hi)
    positive = band & (pg.power > 0)
    zeros = int(np.count_nonzero(band & ~(pg.power > 0)))
    used = int(np.count_nonzero(positive))
    if used < MIN_FIT_POINTS:
        raise FitError(f"only {used} usable points in [{f_lo:g}, {f_hi:g}] (need {MIN_FIT_POINTS})")
    x = np.log10(pg.freqs[positive])
    y = np.log10(pg.power[positive])
    if pg.counts is not None:
        n = pg.counts[positive].astype(np.float64)
        y = y - (digamma(n) - np.log(n)) / math.log(10.0)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return SlopeFit(float(-slope), float(intercept), float(f_lo), float(f_hi),
                    float(np.sqrt(np.mean(resid ** 2))), used, zeros)
