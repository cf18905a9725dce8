"""Explicit RK4 time stepping of anisotropic curve shortening flow.

Compact curves evolve through their support function,
``eta_t = -g / (eta'' + eta)``; noncompact graphs through the curvature,
``kappa_t = kappa^2 ((g kappa)'' + g kappa)``. Both use the fitted second
difference from :mod:`acsf.convexgeom`, under which every translator is an
exact discrete fixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .anisotropy import AnisotropyFn
from .convexgeom import SupportCurve, area, fitted_h2, grid_angles, radius_operator
from .errors import ConvexityLoss, PositivityLoss

EXTINCTION_FRACTION = 1e-3

# kernel status codes
_REACHED, _EXTINCT, _NONCONVEX, _BUDGET = 0, 1, 2, 3


@dataclass(frozen=True)
class FlowState:
    curve: SupportCurve
    tau: float
    g: AnisotropyFn

    @property
    def g_grid(self):
        return self.g(self.curve.theta)


@dataclass
class FlowTrace:
    times: np.ndarray
    etas: np.ndarray
    area: np.ndarray
    h_reach: np.ndarray
    v_reach: np.ndarray
    kappa_bottom: np.ndarray
    kappa_top: np.ndarray
    start_time: float
    extinction_time: float
    truncated: bool = False
    final_eta: np.ndarray | None = None
    final_time: float | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    def curve(self, k) -> SupportCurve:
        return SupportCurve(self.etas[k])

    def shifted(self, dt) -> "FlowTrace":
        return FlowTrace(
            self.times + dt, self.etas, self.area, self.h_reach, self.v_reach,
            self.kappa_bottom, self.kappa_top, self.start_time + dt,
            self.extinction_time + dt, self.truncated, self.final_eta,
            None if self.final_time is None else self.final_time + dt, dict(self.meta),
        )


@njit(cache=True)
def _support_rhs(eta, gv, h2, out):
    """Write -g/rho into ``out``; return (min rho, max g kappa^2, sum eta*rho)."""
    n = eta.size
    rmin = np.inf
    dmax = 0.0
    s = 0.0
    for i in range(n):
        rho = (eta[i - 1] - 2.0 * eta[i] + eta[(i + 1) % n]) / h2 + eta[i]
        if rho < rmin:
            rmin = rho
        if rho > 0.0:
            k = 1.0 / rho
            out[i] = -gv[i] * k
            d = gv[i] * k * k
            if d > dmax:
                dmax = d
        else:
            out[i] = 0.0
        s += eta[i] * rho
    return rmin, dmax, s


@njit(cache=True)
def _rk4_support(eta, gv, h2, dt, k1, out):
    """One RK4 step from ``eta`` with first stage ``k1``; returns min rho seen."""
    n = eta.size
    tmp = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    for i in range(n):
        tmp[i] = eta[i] + 0.5 * dt * k1[i]
    r2, _, _ = _support_rhs(tmp, gv, h2, k2)
    for i in range(n):
        tmp[i] = eta[i] + 0.5 * dt * k2[i]
    r3, _, _ = _support_rhs(tmp, gv, h2, k3)
    for i in range(n):
        tmp[i] = eta[i] + dt * k3[i]
    r4, _, _ = _support_rhs(tmp, gv, h2, k4)
    for i in range(n):
        out[i] = eta[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return min(r2, r3, r4)


@njit(cache=True)
def _advance(eta, t, gv, h, h2, safety, t_stop, area_stop, max_steps, prev):
    """Step until ``t >= t_stop`` or area drops below ``area_stop``.

    ``eta`` is advanced in place and ``prev`` receives the state before the
    last accepted step. Returns (status, t_prev, t, area at t).
    """
    n = eta.size
    k1 = np.empty(n)
    nxt = np.empty(n)
    t_prev = t
    steps = 0
    while True:
        rmin, dmax, s = _support_rhs(eta, gv, h2, k1)
        a = 0.5 * s * h
        if rmin <= 0.0:
            return _NONCONVEX, t_prev, t, a
        if a < area_stop:
            return _EXTINCT, t_prev, t, a
        if t >= t_stop:
            return _REACHED, t_prev, t, a
        if steps >= max_steps:
            return _BUDGET, t_prev, t, a
        dt = safety * h * h / (2.0 * dmax)
        r = _rk4_support(eta, gv, h2, dt, k1, nxt)
        if r <= 0.0:
            return _NONCONVEX, t_prev, t, a
        for i in range(n):
            prev[i] = eta[i]
            eta[i] = nxt[i]
        t_prev = t
        t += dt
        steps += 1


def cfl_dt(s: FlowState, safety=0.5) -> float:
    """Explicit step limit ``safety * h^2 / (2 max g kappa^2)``."""
    kappa = s.curve.curvature
    return safety * s.curve.dtheta ** 2 / (2.0 * float(np.max(s.g_grid * kappa * kappa)))


def step_compact(s: FlowState, dt) -> FlowState:
    eta = np.array(s.curve.eta)
    gv = np.ascontiguousarray(s.g_grid, dtype=float)
    h2 = fitted_h2(s.curve.n)
    k1 = np.empty_like(eta)
    rmin, _, _ = _support_rhs(eta, gv, h2, k1)
    if rmin <= 0:
        raise ConvexityLoss("state is not strictly convex", time=s.tau)
    out = np.empty_like(eta)
    r = _rk4_support(eta, gv, h2, float(dt), k1, out)
    if r <= 0 or SupportCurve(out).convexity_margin() <= 0:
        raise ConvexityLoss("radius of curvature lost positivity", time=s.tau + dt)
    return FlowState(SupportCurve(out), s.tau + dt, s.g)


def harnack_field(curve: SupportCurve, g: AnisotropyFn):
    """``Q = kappa ((g kappa)'' + g kappa)`` at every grid angle."""
    kappa = curve.curvature
    gk = g(curve.theta) * kappa
    return kappa * radius_operator(gk, fitted_h2(curve.n))


def harnack_Q(s: FlowState, i) -> float:
    return float(harnack_field(s.curve, s.g)[i])


def _diagnostics(etas):
    n = etas.shape[1]
    h2 = fitted_h2(n)
    rho = radius_operator(etas, h2)
    i0, ipi, ih = n // 2, 0, 3 * n // 4
    return dict(
        area=0.5 * np.sum(etas * rho, axis=1) * (2 * np.pi / n),
        h_reach=etas[:, ih] + etas[:, ih - n // 2],
        v_reach=etas[:, i0] + etas[:, ipi],
        kappa_bottom=1.0 / rho[:, i0],
        kappa_top=1.0 / rho[:, ipi],
    )


def evolve(s: FlowState, snapshot_times, extinction_area=None, safety=0.5,
           max_steps=50_000_000) -> FlowTrace:
    """Run the compact flow, recording linearly interpolated snapshots.

    Stops once the area falls below ``extinction_area`` (default
    ``1e-3 * A0``); the extinction time is then extrapolated with the exact
    linear area law. Snapshots requested after extinction are dropped and
    ``truncated`` is set.
    """
    times = np.asarray(sorted(snapshot_times), dtype=float)
    if times.size and times[0] < s.tau:
        raise ValueError("snapshot times precede the initial time")
    eta = np.array(s.curve.eta, dtype=float)
    n = eta.size
    gv = np.ascontiguousarray(s.g_grid, dtype=float)
    slope = float(np.sum(gv)) * (2 * np.pi / n)
    a0 = area(s.curve)
    if extinction_area is None:
        extinction_area = EXTINCTION_FRACTION * a0
    h, h2 = 2 * np.pi / n, fitted_h2(n)
    prev = eta.copy()
    t = float(s.tau)
    t_prev = t
    snaps, kept = [], []
    status = _REACHED
    a = a0
    for ts in times:
        if ts <= t:
            w = 0.0 if t == t_prev else (ts - t_prev) / (t - t_prev)
            snaps.append(prev + w * (eta - prev) if t > ts else eta.copy())
            kept.append(ts)
            continue
        status, t_prev, t, a = _advance(eta, t, gv, h, h2, safety, ts, extinction_area,
                                        max_steps, prev)
        if status == _NONCONVEX:
            raise ConvexityLoss(f"convexity lost near t = {t:.6g}", time=t)
        if status == _BUDGET:
            raise RuntimeError("step budget exhausted")
        if status == _EXTINCT:
            break
        w = (ts - t_prev) / (t - t_prev) if t > t_prev else 1.0
        snaps.append(prev + w * (eta - prev))
        kept.append(ts)
    truncated = len(kept) < len(times)
    if status != _EXTINCT:
        status, t_prev, t, a = _advance(eta, t, gv, h, h2, safety, np.inf, extinction_area,
                                        max_steps, prev)
        if status == _NONCONVEX:
            raise ConvexityLoss(f"convexity lost near t = {t:.6g}", time=t)
    etas = np.array(snaps).reshape(len(snaps), n)
    diag = _diagnostics(etas)
    return FlowTrace(
        times=np.array(kept), etas=etas, start_time=float(s.tau),
        extinction_time=t + a / slope, truncated=truncated,
        final_eta=eta.copy(), final_time=t, **diag,
    )


def area_law_residual(tr: FlowTrace, g: AnisotropyFn) -> float:
    if len(tr) < 2:
        raise ValueError("area law needs at least two snapshots")
    total = 2 * np.pi * g.a[0]
    t, a = tr.times, tr.area
    i, j = np.triu_indices(len(t), k=1)
    return float(np.max(np.abs((a[j] - a[i]) / (t[j] - t[i]) + total)))


# graph mode -----------------------------------------------------------------

@njit(cache=True)
def _graph_rhs(kappa, gv, h2, out):
    n = kappa.size
    out[0] = 0.0
    out[n - 1] = 0.0
    dmax = 0.0
    for i in range(1, n - 1):
        lap = (gv[i - 1] * kappa[i - 1] - 2.0 * gv[i] * kappa[i] + gv[i + 1] * kappa[i + 1]) / h2
        out[i] = kappa[i] * kappa[i] * (lap + gv[i] * kappa[i])
        d = gv[i] * kappa[i] * kappa[i]
        if d > dmax:
            dmax = d
    return dmax


@njit(cache=True)
def _graph_rk4(kappa, gv, h2, dt):
    n = kappa.size
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    _graph_rhs(kappa, gv, h2, k1)
    _graph_rhs(kappa + 0.5 * dt * k1, gv, h2, k2)
    _graph_rhs(kappa + 0.5 * dt * k2, gv, h2, k3)
    _graph_rhs(kappa + dt * k3, gv, h2, k4)
    return kappa + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@njit(cache=True)
def _graph_run(kappa, gv, h, h2, safety, duration):
    k1 = np.empty(kappa.size)
    t = 0.0
    while t < duration:
        dmax = _graph_rhs(kappa, gv, h2, k1)
        dt = min(safety * h * h / (2.0 * dmax), duration - t)
        kappa = _graph_rk4(kappa, gv, h2, dt)
        for i in range(kappa.size):
            if kappa[i] <= 0.0:
                return kappa, t, False
        t += dt
    return kappa, t, True


def graph_grid(psi, eps, n):
    """Uniform tangent angles on ``[psi - pi + eps, psi - eps]``."""
    return np.linspace(psi - np.pi + eps, psi - eps, n)


def _graph_h(theta):
    h = float(theta[1] - theta[0])
    return h, 4.0 * math.sin(h / 2) ** 2


def graph_rhs(kappa, theta, g: AnisotropyFn):
    """Right side ``kappa^2 ((g kappa)'' + g kappa)``; zero at the fixed ends."""
    _, h2 = _graph_h(theta)
    out = np.empty(len(kappa))
    _graph_rhs(np.asarray(kappa, dtype=float), np.asarray(g(theta), dtype=float), h2, out)
    return out


def step_graph(kappa, theta, g: AnisotropyFn, dt, boundary=None):
    """One RK4 step of the curvature equation with Dirichlet ends.

    ``boundary`` overrides the end values (defaults to the current ones).
    """
    kappa = np.array(kappa, dtype=float)
    if boundary is not None:
        kappa[0], kappa[-1] = boundary
    if np.any(kappa <= 0):
        raise PositivityLoss("curvature must be positive")
    _, h2 = _graph_h(theta)
    out = _graph_rk4(kappa, np.asarray(g(theta), dtype=float), h2, float(dt))
    if np.any(out <= 0):
        raise PositivityLoss("curvature lost positivity")
    return out


def evolve_graph(kappa, theta, g: AnisotropyFn, duration, safety=0.5):
    kappa = np.array(kappa, dtype=float)
    if np.any(kappa <= 0):
        raise PositivityLoss("curvature must be positive")
    h, h2 = _graph_h(theta)
    out, t, ok = _graph_run(kappa, np.asarray(g(theta), dtype=float), h, h2,
                            float(safety), float(duration))
    if not ok:
        raise PositivityLoss(f"curvature lost positivity near t = {t:.6g}")
    return out
