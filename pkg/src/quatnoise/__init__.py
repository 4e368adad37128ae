"""Quaternionic logistic-map fractals and the 1/f spectrum of their ring radii."""

__version__ = "0.1.0"

from .escape import EscapeOutcome, MapConfig, escape_time, logistic_step
from .hypercomplex import Hypercomplex, cd_add, cd_conj, cd_mul, cd_norm, quaternion
from .points import PointProcess, lattice_points, poisson_points
from .projections import ProjectionSpec, EscapeGrid, embed_param, escape_grid, grids_equal, render_pgm
from .radial import RadialProfile, extract_peaks, outer_radius, radial_profile
from .spectral import Periodogram, SlopeFit, bin_periodogram, default_freq_grid, fit_alpha, periodogram

__all__ = [
    "EscapeOutcome", "MapConfig", "escape_time", "logistic_step",
    "Hypercomplex", "cd_add", "cd_conj", "cd_mul", "cd_norm", "quaternion",
    "PointProcess", "lattice_points", "poisson_points",
    "ProjectionSpec", "EscapeGrid", "embed_param", "escape_grid", "grids_equal", "render_pgm",
    "RadialProfile", "extract_peaks", "outer_radius", "radial_profile",
    "Periodogram", "SlopeFit", "bin_periodogram", "default_freq_grid", "fit_alpha", "periodogram",
]
