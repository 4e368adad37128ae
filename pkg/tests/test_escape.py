import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quatnoise.escape import (OVERFLOW_GUARD, EscapeOutcome, MapConfig, escape_counts, escape_time,
                              logistic_step)
from quatnoise.hypercomplex import Hypercomplex, HypercomplexOverflow, cd_mul, quaternion


def scalar_escape(r, threshold=1e10, max_iter=50, x=0.5):
    for k in range(1, max_iter + 1):
        x = r * x * (1 - x)
        if abs(x) > threshold:
            return True, k
    return False, max_iter


def test_defaults():
    cfg = MapConfig()
    assert cfg.z0 == (0.5, 0.0, 0.0, 0.0)
    assert cfg.escape_threshold == 1e10
    assert cfg.max_iter == 50


@pytest.mark.parametrize("kwargs", [
    {"escape_threshold": 1.0}, {"escape_threshold": 0.5}, {"max_iter": 0},
    {"z0": (1, 2, 3)}, {"escape_threshold": math.inf}, {"max_iter": 2.5},
])
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        MapConfig(**kwargs)


def test_step_examples():
    z = quaternion(0.5)
    assert logistic_step(z, quaternion(2)) == quaternion(0.5)
    assert logistic_step(z, quaternion(0, 1)) == quaternion(0, 0.25)
    assert logistic_step(z, quaternion(0, 1, 1)) == quaternion(0, 0.25, 0.25)


def test_step_matches_recursive_product(rng):
    one = quaternion(1)
    for _ in range(200):
        z, r = quaternion(*rng.normal(size=4)), quaternion(*rng.normal(size=4))
        want = cd_mul(r, cd_mul(z, one - z))
        np.testing.assert_allclose(logistic_step(z, r).coords, want.coords, atol=1e-13)


def test_step_overflow():
    with pytest.raises(HypercomplexOverflow):
        logistic_step(quaternion(1e160, 1e160), quaternion(1e10))


def test_fixed_point_is_bounded():
    assert escape_time(quaternion(2), MapConfig(max_iter=50)) == EscapeOutcome(False, 50)


@pytest.mark.parametrize("r", [5.0, 4.5, -2.5, 10.0, 100.0])
def test_real_axis_matches_scalar_map(r):
    escaped, k = scalar_escape(r)
    assert escape_time(quaternion(r)) == EscapeOutcome(escaped, k)


def test_imaginary_axes_agree():
    assert escape_time(quaternion(0, 1.2)) == escape_time(quaternion(0, 0, 1.2))
    assert escape_time(quaternion(0, 1.2)) == escape_time(quaternion(0, 0, 0, 1.2))


def test_outcome_invariants(rng):
    cfg = MapConfig(max_iter=40)
    for r in rng.uniform(-3, 3, size=(300, 4)):
        out = escape_time(quaternion(*r), cfg)
        assert 1 <= out.iterations <= cfg.max_iter
        if not out.escaped:
            assert out.iterations == cfg.max_iter


def test_huge_parameter_is_guarded():
    out = escape_time(quaternion(0, 2 * OVERFLOW_GUARD), MapConfig(escape_threshold=1e300))
    assert out == EscapeOutcome(True, 1)
    out = escape_time(quaternion(1e120), MapConfig(escape_threshold=1e300, max_iter=100))
    assert out.escaped and out.iterations <= 4


def test_vectorised_counts_match_scalar(rng):
    params = rng.uniform(-2, 2, size=(500, 4))
    cfg = MapConfig(max_iter=64)
    got = escape_counts(params, cfg)
    assert got.tolist() == [escape_time(quaternion(*p), cfg).iterations for p in params]


def _orthogonal_part(z, r):
    im_r = r.coords[1:]
    n = im_r / np.linalg.norm(im_r)
    im_z = z.coords[1:]
    return im_z - np.dot(im_z, n) * n


def test_subalgebra_confinement(rng):
    checked = 0
    for _ in range(100):
        r = quaternion(*rng.uniform(-1, 1, size=4))
        z = quaternion(rng.uniform(-1, 1))
        for _ in range(50):
            z = logistic_step(z, r)
            if abs(z) > 4:
                break
            assert np.max(np.abs(_orthogonal_part(z, r))) < 1e-12
            checked += 1
    assert checked > 1000


def test_multiplication_order_immaterial(rng):
    for _ in range(100):
        r = quaternion(*rng.uniform(-1, 1, size=4))
        zl = zr = quaternion(0.5)
        for _ in range(50):
            zl = logistic_step(zl, r)
            zr = logistic_step(zr, r, left=False)
            if abs(zl) > 4:
                break
            np.testing.assert_allclose(zl.coords, zr.coords, atol=1e-12)


coord = st.floats(-2.5, 2.5, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(st.tuples(coord, coord, coord, coord), st.floats(2.0, 1e6), st.floats(1.0, 1e6))
def test_raising_threshold_never_hastens_escape(r, t1, factor):
    lo = escape_time(quaternion(*r), MapConfig(escape_threshold=t1, max_iter=60))
    hi = escape_time(quaternion(*r), MapConfig(escape_threshold=t1 * factor, max_iter=60))
    assert hi.iterations >= lo.iterations


def test_deterministic(rng):
    for r in rng.uniform(-2, 2, size=(50, 4)):
        a = escape_time(quaternion(*r))
        b = escape_time(quaternion(*r))
        assert a == b
