"""Anisotropy factor g on the circle, stored as a finite Fourier series.

All downstream quantities (slab widths, speed ratio, area slope) are
integrals of g, so the series form gives them in closed form.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import PositivityViolation

POSITIVITY_GRID = 4096


def wrap_angle(theta):
    """Map angles to (-pi, pi]."""
    w = np.pi - np.mod(np.pi - np.asarray(theta, dtype=float), 2 * np.pi)
    return float(w) if np.ndim(w) == 0 else w


@dataclass(frozen=True)
class AnisotropyStats:
    g_min: float
    g_max: float
    total_integral: float

    @property
    def sup_norm(self) -> float:
        return self.g_max


@dataclass(frozen=True)
class AnisotropyFn:
    """g(theta) = a0 + sum_k a_k cos(k theta) + b_k sin(k theta).

    ``b`` may be shorter than ``a[1:]``; missing entries are zero.
    Construction fails with :class:`PositivityViolation` unless g is strictly
    positive on a 4096-point grid.
    """

    a: tuple[float, ...]
    b: tuple[float, ...] = ()

    def __post_init__(self):
        a = tuple(float(v) for v in self.a) or (0.0,)
        b = tuple(float(v) for v in self.b)
        order = max(len(a) - 1, len(b))
        a = a + (0.0,) * (order + 1 - len(a))
        b = b + (0.0,) * (order - len(b))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        grid = np.linspace(-np.pi, np.pi, POSITIVITY_GRID, endpoint=False)
        gmin = float(np.min(self(grid)))
        if not gmin > 0:
            raise PositivityViolation(f"g is not positive: grid minimum {gmin:.6g}")

    @property
    def order(self) -> int:
        return len(self.b)

    @classmethod
    def constant(cls, c=1.0) -> "AnisotropyFn":
        return cls((c,))

    @classmethod
    def from_dict(cls, d) -> "AnisotropyFn":
        return cls(tuple(d.get("a", ())), tuple(d.get("b", ())))

    @classmethod
    def from_json(cls, text) -> "AnisotropyFn":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {"a": list(self.a), "b": list(self.b)}

    @property
    def is_even(self) -> bool:
        return not any(self.b)

    def __call__(self, theta, order=0):
        return eval_g(self, theta, order)

    def antiderivative(self, theta):
        """Primitive G with G(0) = -sum b_k/k (no constant shift)."""
        th = np.asarray(theta, dtype=float)
        out = self.a[0] * th
        for k in range(1, self.order + 1):
            out = out + (self.a[k] * np.sin(k * th) - self.b[k - 1] * np.cos(k * th)) / k
        return out

    def integral(self, lo, hi):
        """Exact integral of g over [lo, hi]."""
        return self.antiderivative(hi) - self.antiderivative(lo)


def eval_g(g: AnisotropyFn, theta, order=0):
    """Value of g or of its first/second derivative at ``theta``."""
    if order not in (0, 1, 2):
        raise ValueError("derivative order must be 0, 1 or 2")
    th = np.asarray(theta, dtype=float)
    out = np.full(th.shape, g.a[0] if order == 0 else 0.0)
    for k in range(1, g.order + 1):
        ak, bk = g.a[k], g.b[k - 1]
        c, s = np.cos(k * th), np.sin(k * th)
        if order == 0:
            out = out + ak * c + bk * s
        elif order == 1:
            out = out + k * (-ak * s + bk * c)
        else:
            out = out - k * k * (ak * c + bk * s)
    return float(out) if out.ndim == 0 else out


def stats(g: AnisotropyFn) -> AnisotropyStats:
    grid = np.linspace(-np.pi, np.pi, POSITIVITY_GRID, endpoint=False)
    vals = g(grid)
    if not np.min(vals) > 0:
        raise PositivityViolation("g is not positive")
    step = grid[1] - grid[0]

    def refine(sign):
        i = int(np.argmin(sign * vals))
        res = minimize_scalar(
            lambda t: sign * g(t),
            bounds=(grid[i] - step, grid[i] + step),
            method="bounded",
            options={"xatol": 1e-12},
        )
        return min(sign * vals[i], res.fun) * sign

    return AnisotropyStats(
        g_min=float(refine(1.0)),
        g_max=float(refine(-1.0)),
        total_integral=2 * math.pi * g.a[0],
    )


def slab_width(g: AnisotropyFn, psi: float) -> float:
    """Width of the slab parallel to (cos psi, sin psi) holding the unit-speed translator."""
    psi = wrap_angle(psi)
    return float(g.integral(psi - np.pi, psi))


def speed_sigma(g: AnisotropyFn) -> float:
    """Speed of the downward translator whose slab width matches the upward one."""
    up = g.integral(-np.pi / 2, np.pi / 2)
    down = g.integral(np.pi / 2, 3 * np.pi / 2)
    return float(down / up)
