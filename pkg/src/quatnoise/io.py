"""File formats: CSV with 17 significant digits, PGM, key=value fit reports."""
from __future__ import annotations

import csv
import hashlib
from pathlib import Path

import numpy as np

from .escape import MapConfig
from .points import PointProcess
from .radial import RadialProfile
from .spectral import Periodogram, SlopeFit


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _read_rows(path, header: list[str]) -> list[list[str]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [h.strip() for h in rows[0]] != header:
        raise ValueError(f"{path}: expected header {','.join(header)}")
    return [r for r in rows[1:] if r]


def _write(path, text: str) -> None:
    # newline="" keeps "\n" on every platform so hashes are stable
    with open(path, "w", newline="") as fh:
        fh.write(text)


def write_profile(path, profile: RadialProfile) -> None:
    lines = ["R,iterations"]
    lines += [f"{fmt(r)},{int(k)}" for r, k in zip(profile.radii, profile.iterations)]
    _write(path, "\n".join(lines) + "\n")


def read_profile(path, cfg: MapConfig | None = None, angle: float = 0.0) -> RadialProfile:
    rows = _read_rows(path, ["R", "iterations"])
    if len(rows) < 2:
        raise ValueError(f"{path}: a profile needs at least two samples")
    radii = np.array([float(r[0]) for r in rows])
    iters = np.array([int(r[1]) for r in rows], dtype=np.int32)
    if np.any(np.diff(radii) <= 0):
        raise ValueError(f"{path}: R column must be strictly increasing")
    cfg = cfg or MapConfig(max_iter=max(1, int(iters.max())))
    return RadialProfile(float(radii[0]), float(radii[-1]), radii, iters, cfg, angle)


def write_points(path, pp: PointProcess) -> None:
    _write(path, "\n".join(["R_j"] + [fmt(r) for r in pp.events]) + "\n")


def read_points(path) -> PointProcess:
    rows = _read_rows(path, ["R_j"])
    return PointProcess(np.array([float(r[0]) for r in rows]))


def write_periodogram(path, pg: Periodogram) -> None:
    lines = ["f,S"] + [f"{fmt(f)},{fmt(s)}" for f, s in zip(pg.freqs, pg.power)]
    _write(path, "\n".join(lines) + "\n")


def read_periodogram(path) -> Periodogram:
    rows = _read_rows(path, ["f", "S"])
    return Periodogram(np.array([float(r[0]) for r in rows]), np.array([float(r[1]) for r in rows]))


def write_fit(path, fit: SlopeFit) -> None:
    _write(path, fit.report())


def read_fit(path) -> SlopeFit:
    return SlopeFit.parse(Path(path).read_text())


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
