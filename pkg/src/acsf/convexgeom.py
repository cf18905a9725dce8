"""Convex curves encoded by support functions on a uniform tangent-angle grid.

Conventions: grid angles ``theta_i = -pi + 2 pi i / n``, tangent
``T = (cos, sin)``, outward normal ``N = (sin, -cos)``. The support value
``eta_i = max <p, N(theta_i)>`` over the convex body.

Second differences use the trigonometrically fitted denominator
``4 sin^2(h/2)`` instead of ``h^2``. It is still second order, and it makes
``sin`` and ``cos`` (translations) exact null vectors of ``eta'' + eta``, so
the discrete radius of curvature of any sampled support function is
nonnegative and translations commute with the flow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from .errors import DegenerateInput, NonConvexState

_TOL = 1e-12


def grid_angles(n):
    return -np.pi + 2 * np.pi * np.arange(n) / n


def fitted_h2(n):
    """Denominator of the fitted second difference on an n-point grid."""
    return 4.0 * np.sin(np.pi / n) ** 2


def radius_operator(u, h2):
    """Discrete ``u'' + u`` on a periodic grid (works for 1-D or stacked rows)."""
    return (np.roll(u, 1, axis=-1) - 2.0 * u + np.roll(u, -1, axis=-1)) / h2 + u


@dataclass(frozen=True)
class SupportCurve:
    eta: np.ndarray

    def __post_init__(self):
        eta = np.array(self.eta, dtype=float)
        if eta.ndim != 1 or eta.size < 64 or eta.size % 2:
            raise ValueError("support grid must be one-dimensional, even and at least 64 long")
        eta.setflags(write=False)
        object.__setattr__(self, "eta", eta)

    @property
    def n(self) -> int:
        return self.eta.size

    @property
    def theta(self):
        return grid_angles(self.n)

    @property
    def dtheta(self) -> float:
        return 2 * np.pi / self.n

    @property
    def radius(self):
        """Discrete radius of curvature ``eta'' + eta`` at every grid angle."""
        return radius_operator(self.eta, fitted_h2(self.n))

    @property
    def curvature(self):
        rho = self.radius
        if np.any(rho <= 0):
            raise NonConvexState(f"nonpositive radius of curvature {rho.min():.3g}")
        return 1.0 / rho

    def convexity_margin(self) -> float:
        return float(self.radius.min())

    def index_of(self, theta) -> int:
        """Grid index nearest to the tangent angle ``theta``."""
        return int(np.round((np.mod(theta + np.pi, 2 * np.pi)) / self.dtheta)) % self.n

    def boundary(self):
        """Boundary points ``eta N + eta_theta T``, shape (n, 2)."""
        th = self.theta
        d = (np.roll(self.eta, -1) - np.roll(self.eta, 1)) / (2 * np.sin(self.dtheta))
        x = self.eta * np.sin(th) + d * np.cos(th)
        y = -self.eta * np.cos(th) + d * np.sin(th)
        return np.column_stack([x, y])

    def translated(self, w) -> "SupportCurve":
        th = self.theta
        return SupportCurve(self.eta + w[0] * np.sin(th) - w[1] * np.cos(th))

    @classmethod
    def circle(cls, r=1.0, n=512, center=(0.0, 0.0)) -> "SupportCurve":
        return cls(np.full(n, float(r))).translated(center)

    @classmethod
    def from_function(cls, fn, n=512) -> "SupportCurve":
        return cls(fn(grid_angles(n)))


@dataclass(frozen=True)
class HullPolygon:
    vertices: np.ndarray  # (m, 2), counterclockwise

    def area(self) -> float:
        x, y = self.vertices.T
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _strip_flat(v):
    changed = True
    while changed and len(v) > 3:
        prev, nxt = np.roll(v, 1, axis=0), np.roll(v, -1, axis=0)
        e1, e2 = v - prev, nxt - v
        cross = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
        scale = np.linalg.norm(e1, axis=1) * np.linalg.norm(e2, axis=1)
        keep = (cross > _TOL * np.maximum(scale, _TOL)) & (np.linalg.norm(e1, axis=1) > _TOL)
        changed = not keep.all()
        v = v[keep]
    return v


def hull(points) -> HullPolygon:
    """Counterclockwise convex hull with collinear and duplicate vertices dropped."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise DegenerateInput("need at least three planar points")
    centred = pts - pts.mean(axis=0)
    _, _, vt = np.linalg.svd(centred, full_matrices=False)
    if np.max(np.abs(centred @ vt[1])) <= _TOL:
        raise DegenerateInput("points are collinear")
    h = ConvexHull(pts)
    return HullPolygon(_strip_flat(pts[h.vertices]))


def support_of_hull(h: HullPolygon, n=512) -> SupportCurve:
    th = grid_angles(n)
    normals = np.column_stack([np.sin(th), -np.cos(th)])
    return SupportCurve(np.max(normals @ h.vertices.T, axis=1))


def support_of_points(points, n=512) -> SupportCurve:
    return support_of_hull(hull(points), n)


def bump_weights(n, window):
    """Normalised smooth bump exp(-1/(1-s^2)) of full angular width ``window``."""
    h = 2 * np.pi / n
    half = window / 2
    m = int(np.floor(half / h))
    offsets = h * np.arange(-m, m + 1)
    s = offsets / half
    w = np.where(np.abs(s) < 1, np.exp(-1.0 / np.maximum(1 - s * s, 1e-300)), 0.0)
    return offsets, w / w.sum()


def mollify(c: SupportCurve, window) -> SupportCurve:
    """Periodic convolution of eta with a smooth bump, then a convexity repair.

    Convolution averages rotated copies of the body, so the result is a
    support function. If the discrete radius of curvature still falls below
    ``1e-6 * mean(eta)`` the curve is dilated by the shortfall, which lifts
    the radius uniformly.
    """
    if window < 2 * c.dtheta - 1e-15:
        raise ValueError("window must span at least two grid cells")
    _, w = bump_weights(c.n, window)
    m = (len(w) - 1) // 2
    eta = np.zeros(c.n)
    for j, wj in enumerate(w):
        eta += wj * np.roll(c.eta, m - j)
    out = SupportCurve(eta)
    need = 1e-6 * abs(float(np.mean(eta)))
    short = need - out.convexity_margin()
    if short > 0:
        out = SupportCurve(eta + 2 * short)
    return out


def area(c: SupportCurve) -> float:
    """Enclosed area ``sum eta_i (eta'' + eta)_i h / 2``.

    Equal to the trapezoid sum of ``(eta^2 - eta_theta^2)/2`` with eta_theta
    taken as midpoint differences over the fitted step ``2 sin(h/2)``; the
    discrete flow loses exactly ``sum g_i h`` of it per unit time.
    """
    return 0.5 * float(np.dot(c.eta, c.radius)) * c.dtheta


def reach(c: SupportCurve, psi) -> float:
    """Width of ``c`` measured along the direction (cos psi, sin psi)."""
    i = c.index_of(psi + np.pi / 2)
    return float(c.eta[i] + c.eta[(i + c.n // 2) % c.n])


def horizontal_reach(c: SupportCurve) -> float:
    return reach(c, 0.0)


def vertical_reach(c: SupportCurve) -> float:
    return reach(c, np.pi / 2)


def curvature_from_support(c: SupportCurve, i) -> float:
    rho = c.radius[i]
    if rho <= 0:
        raise NonConvexState(f"nonpositive radius of curvature at index {i}")
    return float(1.0 / rho)
