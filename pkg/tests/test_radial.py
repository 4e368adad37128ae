import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatnoise.escape import MapConfig, escape_time
from quatnoise.hypercomplex import quaternion
from quatnoise.radial import (RadialProfile, default_scan_window, extract_peaks, outer_radius,
                              peak_positions, radial_profile, scan_config)


def profile_of(iters, radii=None):
    iters = np.asarray(iters, dtype=np.int32)
    radii = np.arange(iters.size, dtype=float) if radii is None else np.asarray(radii, float)
    return RadialProfile(float(radii[0]), float(radii[-1]), radii, iters, MapConfig(max_iter=1000))


def test_scan_defaults():
    assert scan_config().max_iter == 256
    assert scan_config().escape_threshold == 1e10


def test_small_radii_stay_bounded():
    cfg = scan_config()
    for angle in (0.0, 0.7, math.pi / 2, 2.5):
        prof = radial_profile(0.0, 0.1, 21, angle, cfg)
        assert np.all(prof.iterations == cfg.max_iter)
    # direct iteration of the first and last sample
    assert not escape_time(quaternion(0, 0.1), cfg).escaped


def test_two_samples_hit_endpoints():
    prof = radial_profile(0.3, 1.7, 2)
    assert prof.radii.tolist() == [0.3, 1.7]


def test_uniform_spacing():
    prof = radial_profile(0.9, 1.3, 1001)
    d = np.diff(prof.radii)
    assert np.all(d > 0)
    np.testing.assert_allclose(d, (1.3 - 0.9) / 1000, rtol=1e-12 * 1e3)
    assert np.max(np.abs(prof.radii - (0.9 + np.arange(1001) * 0.4 / 1000))) <= 1e-12 * 1.3


@pytest.mark.parametrize("args", [(0.5, 0.5, 10), (-0.1, 1.0, 10), (0.0, 1.0, 1), (1.0, 0.5, 10)])
def test_bad_range(args):
    with pytest.raises(ValueError):
        radial_profile(*args)


def test_profile_matches_pointwise():
    cfg = scan_config()
    prof = radial_profile(1.1, 1.25, 50, 0.3, cfg)
    for R, k in zip(prof.radii, prof.iterations):
        r = quaternion(0, R * math.cos(0.3), R * math.sin(0.3))
        assert escape_time(r, cfg).iterations == k


def test_rotation_leaves_profile_nearly_unchanged():
    lo, hi = default_scan_window()
    a = radial_profile(lo, hi, 20000, 0.0).iterations
    b = radial_profile(lo, hi, 20000, math.pi / 2).iterations
    assert np.mean(a == b) >= 0.995
    assert np.max(np.abs(a.astype(int) - b)) <= 1


def test_outer_radius_is_a_transition():
    cfg = scan_config()
    r_out = outer_radius(cfg)
    assert not escape_time(quaternion(0, r_out), cfg).escaped
    assert escape_time(quaternion(0, r_out + 1e-11), cfg).escaped
    # everything from there to the bracket end escapes on a coarse grid
    assert all(escape_time(quaternion(0, R), cfg).escaped for R in np.linspace(r_out + 1e-6, 2.0, 500))
    lo, hi = default_scan_window(cfg)
    assert lo == pytest.approx(0.8 * r_out) and hi == pytest.approx(1.1 * r_out)


def test_outer_radius_bracket_checked():
    with pytest.raises(ValueError):
        outer_radius(lo=1.5, hi=2.0)
    with pytest.raises(ValueError):
        outer_radius(lo=0.0, hi=0.5)


def test_isolated_peaks():
    pp = extract_peaks(profile_of([1, 5, 1, 1, 7, 1]), 2)
    assert pp.events.tolist() == [1.0, 4.0]


def test_monotone_has_no_peaks():
    assert len(extract_peaks(profile_of(np.arange(1, 30)), 1)) == 0
    assert len(extract_peaks(profile_of(np.arange(30, 0, -1)), 1)) == 0


def test_plateau_midpoint():
    pp = extract_peaks(profile_of([3, 9, 9, 3], [0.0, 0.1, 0.3, 0.4]), 2)
    assert pp.events.tolist() == [0.2]


def test_odd_plateau_and_edges():
    # saturated run in the middle counts; a run touching the edge does not
    pp = extract_peaks(profile_of([256, 256, 10, 12, 256, 256, 256, 11, 13]), 2)
    assert pp.events.tolist() == [5.0]


def test_prominence_filters():
    iters = [1, 4, 3, 6, 2, 9, 8, 9, 1]
    # prominences: 4 -> 1, 6 -> 4, both 9s -> 8 (an equal sample does not bound the window)
    assert peak_positions(np.arange(9.0), iters, 1).tolist() == [1.0, 3.0, 5.0, 7.0]
    assert peak_positions(np.arange(9.0), iters, 2).tolist() == [3.0, 5.0, 7.0]
    assert peak_positions(np.arange(9.0), iters, 4).tolist() == [3.0, 5.0, 7.0]
    assert peak_positions(np.arange(9.0), iters, 5).tolist() == [5.0, 7.0]


def test_bad_prominence():
    with pytest.raises(ValueError):
        extract_peaks(profile_of([1, 2, 1]), 0)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(1, 60), min_size=3, max_size=80), st.integers(1, 10), st.integers(0, 10))
def test_peak_properties(iters, p1, dp):
    iters = np.array(iters)
    x = np.linspace(0.0, 1.0, iters.size)
    a = peak_positions(x, iters, p1)
    b = peak_positions(x, iters, p1 + dp)
    assert len(b) <= len(a)
    assert set(b.tolist()) <= set(a.tolist())
    assert np.all(np.diff(a) > 0)
    for r in a:
        # a plateau midpoint may fall between samples; use the nearest sample at or left of it
        i = int(np.searchsorted(x, r, side="right") - 1)
        assert iters[i] >= iters[i - 1] and iters[i] >= iters[i + 1]


def test_finer_sampling_resolves_more_peaks():
    lo, hi = default_scan_window()
    counts = [len(extract_peaks(radial_profile(lo, hi, n), 1)) for n in (5000, 10000, 20000, 40000)]
    assert counts == sorted(counts)
    assert counts[0] > 10
