"""Translating solutions sampled in the tangent angle.

A translator moving with velocity ``speed * (cos psi, sin psi)`` has
curvature ``speed * sin(psi - theta) / g(theta)`` on ``theta in (psi - pi, psi)``.
Positions follow by integrating ``(cos, sin)(theta) / kappa`` from the tip
angle ``psi - pi/2``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .anisotropy import AnisotropyFn, slab_width, stats, wrap_angle
from .errors import OutOfAngularRange, QuadratureFailure

QUAD_TOL = 1e-10
QUAD_LIMIT = 10_000


def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TranslatorProfile:
    psi: float
    speed: float
    eps: float
    theta: np.ndarray
    x: np.ndarray
    y: np.ndarray
    kappa: np.ndarray
    x0: float
    y0: float

    @property
    def direction(self):
        return np.array([math.cos(self.psi), math.sin(self.psi)])

    @property
    def normal_direction(self):
        """v_perp = (sin psi, -cos psi)."""
        return np.array([math.sin(self.psi), -math.cos(self.psi)])

    @property
    def points(self):
        return np.column_stack([self.x, self.y])

    def translated(self, dx, dy) -> "TranslatorProfile":
        return TranslatorProfile(
            self.psi, self.speed, self.eps, self.theta,
            _frozen(self.x + dx), _frozen(self.y + dy), self.kappa,
            self.x0 + dx, self.y0 + dy,
        )


def translator_curvature(g: AnisotropyFn, psi, speed, theta):
    gap = wrap_angle(psi - theta)
    if np.any((gap <= 0) | (gap >= np.pi)):
        raise OutOfAngularRange(f"theta must lie in (psi - pi, psi), got psi - theta = {gap}")
    return speed * np.sin(gap) / g(theta)


def _scalar_g(g: AnisotropyFn):
    ks = np.arange(1, g.order + 1)
    a0, a, b = g.a[0], np.array(g.a[1:]), np.array(g.b)
    if g.order == 0:
        return lambda u: a0
    return lambda u: a0 + float(a @ np.cos(ks * u) + b @ np.sin(ks * u))


def _integrate(f, lo, hi):
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, err, info = quad(f, lo, hi, epsabs=QUAD_TOL, epsrel=0.0,
                                  limit=QUAD_LIMIT, full_output=1)[:3]
        except IntegrationWarning as exc:
            raise QuadratureFailure(str(exc)) from exc
    if err > QUAD_TOL:
        raise QuadratureFailure(f"quadrature error estimate {err:.3g} on [{lo}, {hi}]")
    return val


def build_profile(g: AnisotropyFn, psi=np.pi / 2, speed=1.0, eps=1e-4, n=2001,
                  anchor=(0.0, 0.0), thetas=None) -> TranslatorProfile:
    """Sample the translator on ``n`` uniform angles in ``[psi - pi + eps, psi - eps]``.

    ``thetas`` overrides the uniform grid; values are taken modulo 2 pi into
    the open interval ``(psi - pi, psi)``. The anchor is the point with
    tangent angle ``psi - pi/2``. Positions are accumulated from the anchor
    outwards with one adaptive Gauss-Kronrod integral per sample gap.
    """
    psi = wrap_angle(psi)
    if thetas is None:
        if not 0 < eps < np.pi / 2:
            raise ValueError("eps must lie in (0, pi/2)")
        if n < 16:
            raise ValueError("need at least 16 samples")
        theta = np.linspace(psi - np.pi + eps, psi - eps, n)
    else:
        theta = psi - np.mod(psi - np.asarray(thetas, dtype=float), 2 * np.pi)
        theta = np.unique(theta)
        if np.any(theta <= psi - np.pi) or np.any(theta >= psi):
            raise OutOfAngularRange("sample angles must avoid psi and psi - pi")
    tip = psi - np.pi / 2
    gs = _scalar_g(g)

    def fx(u):
        return math.cos(u) * gs(u) / (speed * math.sin(psi - u))

    def fy(u):
        return math.sin(u) * gs(u) / (speed * math.sin(psi - u))

    x = np.empty_like(theta)
    y = np.empty_like(theta)
    right = np.searchsorted(theta, tip)
    # integrate outward from the tip so errors do not cross it
    for idx in (range(right, len(theta)), range(right - 1, -1, -1)):
        prev, cx, cy = tip, anchor[0], anchor[1]
        for i in idx:
            cx += _integrate(fx, prev, theta[i])
            cy += _integrate(fy, prev, theta[i])
            x[i], y[i] = cx, cy
            prev = theta[i]
    kappa = speed * np.sin(psi - theta) / g(theta)
    return TranslatorProfile(psi, float(speed), float(eps), _frozen(theta), _frozen(x),
                             _frozen(y), _frozen(kappa), float(anchor[0]), float(anchor[1]))


def centering_offset(g: AnisotropyFn, psi, speed=1.0):
    """Anchor coordinate along v_perp that balances the two asymptotic lines."""
    psi = wrap_angle(psi)
    tip = psi - np.pi / 2
    return -0.5 * (g.integral(tip, psi) - g.integral(psi - np.pi, tip)) / speed


def center_profile(p: TranslatorProfile, g: AnisotropyFn) -> TranslatorProfile:
    """Shift ``p`` along v_perp so its limiting slab is symmetric about the origin line."""
    vp = p.normal_direction
    shift = centering_offset(g, p.psi, p.speed) - (p.x0 * vp[0] + p.y0 * vp[1])
    return p.translated(shift * vp[0], shift * vp[1])


def profile_checks(p: TranslatorProfile, g: AnisotropyFn) -> dict:
    vp, v = p.normal_direction, p.direction
    across = p.x * vp[0] + p.y * vp[1]
    along = p.x * v[0] + p.y * v[1]
    width_gap = slab_width(g, p.psi) / p.speed - (across.max() - across.min())
    base = p.x0 * v[0] + p.y0 * v[1]
    gmin = stats(g).g_min
    margins = []
    for i in (0, len(p.theta) - 1):
        bound = base - gmin / p.speed * math.log(math.sin(p.psi - p.theta[i]))
        margins.append(along[i] - bound)
    return {"width_gap": float(width_gap), "asymptote_margin": float(min(margins))}
