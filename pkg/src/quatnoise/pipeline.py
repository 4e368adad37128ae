"""scan -> peaks -> periodogram -> fit, driven by one parameter set."""
from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path


from . import __version__
from . import io
from .escape import SCAN_MAX_ITER, MapConfig
from .points import PointProcess, poisson_points
from .radial import DEFAULT_PROMINENCE, default_scan_window, extract_peaks, radial_profile
from .spectral import (BINS_PER_DECADE, FIT_DECADES, bin_periodogram, default_fit_band,
                       default_freq_grid, fit_alpha, periodogram)

log = logging.getLogger(__name__)

MANIFEST_VERSION = 1
OUTPUTS = ("profile.csv", "peaks.csv", "psd.csv", "psd_binned.csv", "fit.txt", "control_fit.txt")


@dataclass
class PipelineParams:
    z0: tuple[float, float, float, float] = (0.5, 0.0, 0.0, 0.0)
    threshold: float = 1e10
    max_iter: int = SCAN_MAX_ITER
    r_min: float | None = None
    r_max: float | None = None
    samples: int = 100_000
    angle: float = 0.0
    prominence: float = DEFAULT_PROMINENCE
    n_freqs: int = 1000
    harmonic: bool = True
    bins_per_decade: int = BINS_PER_DECADE
    fit_decades: float = FIT_DECADES
    seed: int = 0

    def map_config(self) -> MapConfig:
        return MapConfig(tuple(self.z0), self.threshold, self.max_iter)

    def resolved(self) -> "PipelineParams":
        """Copy with the scan window filled in, so a manifest replays without bisection."""
        p = PipelineParams(**asdict(self))
        p.z0 = tuple(float(c) for c in p.z0)
        if p.r_min is None or p.r_max is None:
            lo, hi = default_scan_window(self.map_config())
            p.r_min = lo if p.r_min is None else p.r_min
            p.r_max = hi if p.r_max is None else p.r_max
        return p

    def validate(self) -> None:
        self.map_config()
        if self.samples < 2:
            raise ValueError("samples must be >= 2")
        if self.r_min is not None and self.r_max is not None and not 0 <= self.r_min < self.r_max:
            raise ValueError("need 0 <= r_min < r_max")
        if self.prominence < 1:
            raise ValueError("prominence must be >= 1")
        if self.n_freqs < 2:
            raise ValueError("n_freqs must be >= 2")
        if self.bins_per_decade < 0:
            raise ValueError("bins_per_decade must be >= 0")
        if not self.fit_decades > 0:
            raise ValueError("fit_decades must be positive")

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineParams":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown pipeline parameters: {sorted(unknown)}")
        d = dict(d)
        if "z0" in d:
            d["z0"] = tuple(d["z0"])
        return cls(**d)


def spectrum_and_fit(pp: PointProcess, n_freqs: int, harmonic: bool, bins_per_decade: int,
                     fit_decades: float):
    pg = periodogram(pp, default_freq_grid(pp, n_freqs, harmonic=harmonic))
    smoothed = bin_periodogram(pg, bins_per_decade) if bins_per_decade else pg
    f_lo, f_hi = default_fit_band(smoothed, fit_decades)
    return pg, smoothed, fit_alpha(smoothed, f_lo, f_hi)


def run_pipeline(params: PipelineParams, out_dir) -> dict:
    """Write every stage's output into ``out_dir`` plus ``manifest.json``; return the manifest."""
    params.validate()
    params = params.resolved()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = params.map_config()

    log.info("scanning %d radii in [%r, %r]", params.samples, params.r_min, params.r_max)
    profile = radial_profile(params.r_min, params.r_max, params.samples, params.angle, cfg)
    io.write_profile(out / "profile.csv", profile)

    pp = extract_peaks(profile, params.prominence)
    io.write_points(out / "peaks.csv", pp)
    log.info("%d peaks", len(pp))

    pg, smoothed, fit = spectrum_and_fit(pp, params.n_freqs, params.harmonic,
                                         params.bins_per_decade, params.fit_decades)
    io.write_periodogram(out / "psd.csv", pg)
    io.write_periodogram(out / "psd_binned.csv", smoothed)
    io.write_fit(out / "fit.txt", fit)

    # white-noise reference with the same N and mean spacing
    control = poisson_points(pp.span / (len(pp) - 1), len(pp), params.seed)
    _, _, control_fit = spectrum_and_fit(control, params.n_freqs, params.harmonic,
                                         params.bins_per_decade, params.fit_decades)
    io.write_fit(out / "control_fit.txt", control_fit)

    manifest = {
        "manifest_version": MANIFEST_VERSION,
        "package_version": __version__,
        "params": asdict(params) | {"z0": list(params.z0)},
        "results": {
            "n_samples": len(profile),
            "n_peaks": len(pp),
            "alpha": fit.alpha,
            "control_alpha": control_fit.alpha,
        },
        "outputs": {name: io.sha256(out / name) for name in OUTPUTS},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def load_manifest(path) -> PipelineParams:
    data = json.loads(Path(path).read_text())
    if data.get("manifest_version") != MANIFEST_VERSION:
        raise ValueError(f"unsupported manifest version {data.get('manifest_version')!r}")
    return PipelineParams.from_dict(data["params"])


def replay(manifest_path, out_dir) -> tuple[dict, list[str]]:
    """Rerun a manifest; returns the new manifest and the outputs whose hash changed."""
    old = json.loads(Path(manifest_path).read_text())
    new = run_pipeline(load_manifest(manifest_path), out_dir)
    changed = [k for k, h in old["outputs"].items() if new["outputs"].get(k) != h]
    return new, changed


def summarize(manifest: dict) -> str:
    r = manifest["results"]
    return (f"samples={r['n_samples']} peaks={r['n_peaks']} alpha={r['alpha']:.4f} "
            f"control_alpha={r['control_alpha']:.4f}")

