import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from acsf.anisotropy import AnisotropyFn, slab_width
from acsf.errors import OutOfAngularRange
from acsf.translator import (
    build_profile, center_profile, centering_offset, profile_checks, translator_curvature,
)

ONE = AnisotropyFn((1.0,))
COS = AnisotropyFn((2.0, 1.0))


def simpson(f, lo, hi, panels=1_000_000):
    x = np.linspace(lo, hi, panels + 1)
    y = f(x)
    return (hi - lo) / (3 * panels) * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())


def test_tip_curvatures():
    assert translator_curvature(ONE, math.pi / 2, 1.0, 0.0) == 1.0
    assert translator_curvature(COS, math.pi / 2, 1.0, 0.0) == pytest.approx(1 / 3)
    assert translator_curvature(COS, math.pi / 2, 1.0, math.pi / 2 - 1e-9) < 1e-8


def test_curvature_outside_interval():
    with pytest.raises(OutOfAngularRange):
        translator_curvature(ONE, math.pi / 2, 1.0, math.pi / 2)
    with pytest.raises(OutOfAngularRange):
        translator_curvature(ONE, math.pi / 2, 1.0, 2.0)


def test_grim_reaper_recovered():
    p = build_profile(ONE, math.pi / 2, 1.0, 1e-4, 2001)
    assert np.max(np.abs(p.x - p.theta)) < 1e-8
    assert np.max(np.abs(p.y + np.log(np.cos(p.theta)))) < 1e-8
    q = build_profile(ONE, math.pi / 2, 1.0, thetas=[math.pi / 3])
    assert q.y[0] == pytest.approx(math.log(2), abs=1e-10)
    np.testing.assert_allclose(p.y, p.y[::-1], atol=1e-10)


def test_cosine_height_against_simpson(oracles):
    p = build_profile(COS, math.pi / 2, 1.0, thetas=[0.9])
    ref = simpson(lambda u: np.sin(u) * (2 + np.cos(u)) / np.cos(u), 0.0, 0.9)
    assert p.y[0] == pytest.approx(ref, abs=1e-8)
    assert p.y[0] == pytest.approx(oracles["g_2cos_y_at_0.9"], abs=1e-10)
    assert p.x[0] == pytest.approx(oracles["g_2cos_x_at_0.9"], abs=1e-10)


def test_general_direction_against_oracle(oracles):
    g = AnisotropyFn.from_dict(oracles["g"])
    t = oracles["translator"]
    p = build_profile(g, t["psi"], t["speed"], thetas=t["theta"])
    np.testing.assert_allclose(p.x, t["x"], atol=1e-9)
    np.testing.assert_allclose(p.y, t["y"], atol=1e-9)


def test_profile_invariants():
    g = AnisotropyFn((2.0, 0.3), (0.5,))
    p = build_profile(g, 0.7, 1.4, 1e-3, 400)
    assert np.all(p.kappa > 0)
    assert np.all(np.diff(p.theta) > 0)
    # positions integrate dx = cos/kappa, dy = sin/kappa (Simpson per gap, away from the ends)
    a, b = p.theta[:-1], p.theta[1:]
    m = 0.5 * (a + b)
    inner = np.sin(0.7 - a) > 0.3
    inner &= np.sin(0.7 - b) > 0.3

    def gap(f):
        w = lambda t: f(t) / translator_curvature(g, 0.7, 1.4, t)
        return (b - a) / 6 * (w(a) + 4 * w(m) + w(b))

    assert np.max(np.abs(np.diff(p.x) - gap(np.cos))[inner]) < 1e-9
    assert np.max(np.abs(np.diff(p.y) - gap(np.sin))[inner]) < 1e-9


def test_centering_examples():
    p = center_profile(build_profile(ONE, math.pi / 2, thetas=[0.0]), ONE)
    assert p.x[0] == pytest.approx(0.0, abs=1e-14)
    p = center_profile(build_profile(COS, math.pi / 2, thetas=[0.0]), COS)
    assert p.x[0] == pytest.approx(0.0, abs=1e-14)
    g = AnisotropyFn((2.0,), (1.0,))
    p = center_profile(build_profile(g, math.pi / 2, thetas=[0.0]), g)
    f = lambda u: 2 + np.sin(u)
    expected = -0.5 * (simpson(f, 0, np.pi / 2, 10_000) - simpson(f, -np.pi / 2, 0, 10_000))
    assert p.x[0] == pytest.approx(expected, abs=1e-10)


def test_centered_slab_is_balanced():
    g = AnisotropyFn((2.0,), (1.0,))
    p = center_profile(build_profile(g, math.pi / 2, 1.0, 1e-7, 200), g)
    # asymptotic lines of the full curve sit at +-w/2
    c = centering_offset(g, math.pi / 2)
    left = c - g.integral(-np.pi / 2, 0.0)
    right = c + g.integral(0.0, np.pi / 2)
    assert left == pytest.approx(-right, abs=1e-12)
    assert p.x.min() >= left - 1e-10 and p.x.max() <= right + 1e-10


def test_width_gap_small_for_grim_reaper():
    p = center_profile(build_profile(ONE, math.pi / 2, 1.0, 1e-3, 2001), ONE)
    r = profile_checks(p, ONE)
    assert 0 <= r["width_gap"] <= 2e-3
    assert r["asymptote_margin"] >= -1e-9


def test_cosine_extent_close_to_slab():
    p = center_profile(build_profile(COS, math.pi / 2, 1.0, 1e-4, 2001), COS)
    r = profile_checks(p, COS)
    assert 0 <= r["width_gap"] < 1e-3
    assert r["asymptote_margin"] >= 0


def test_grim_reaper_heights_diverge():
    heights = [build_profile(ONE, math.pi / 2, 1.0, eps, 64).y[-1] for eps in (1e-2, 1e-4, 1e-6)]
    assert heights[0] < heights[1] < heights[2]
    assert heights[2] == pytest.approx(-math.log(math.sin(1e-6)), abs=1e-6)


def test_fitted_second_difference_annihilates_g_kappa():
    g = AnisotropyFn((2.0, 1.0, 0.3), (0.2,))
    th = np.linspace(-np.pi + 0.1, -0.1, 300)
    h = th[1] - th[0]
    u = g(th) * translator_curvature(g, 0.0, 1.0, th)
    standard = (u[2:] - 2 * u[1:-1] + u[:-2]) / h ** 2 + u[1:-1]
    fitted = (u[2:] - 2 * u[1:-1] + u[:-2]) / (4 * math.sin(h / 2) ** 2) + u[1:-1]
    assert np.max(np.abs(standard)) <= h ** 2
    assert np.max(np.abs(fitted)) < 1e-10


@settings(max_examples=20, deadline=None)
@given(st.floats(-math.pi, math.pi), st.floats(0.3, 3.0))
def test_width_scales_inversely_with_speed(psi, speed):
    g = AnisotropyFn((2.0, 0.5), (0.3,))
    p = center_profile(build_profile(g, psi, speed, 1e-6, 32), g)
    r = profile_checks(p, g)
    assert 0 <= r["width_gap"] <= 2e-6 * 2.8 / speed + 1e-9
    along = p.x * p.direction[0] + p.y * p.direction[1]
    tip = int(np.argmin(np.abs(p.theta - (p.psi - math.pi / 2))))
    k = int(np.argmin(along))
    assert abs(k - tip) <= 1
    assert np.all(np.diff(along[: k + 1]) <= 1e-12) and np.all(np.diff(along[k:]) >= -1e-12)


@settings(max_examples=20, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5))
def test_translation_moves_anchor(dx, dy):
    p = build_profile(ONE, math.pi / 2, 1.0, 1e-2, 16)
    q = p.translated(dx, dy)
    np.testing.assert_allclose(q.points - p.points, np.broadcast_to([dx, dy], p.points.shape), atol=1e-12)
    assert (q.x0, q.y0) == pytest.approx((p.x0 + dx, p.y0 + dy))
