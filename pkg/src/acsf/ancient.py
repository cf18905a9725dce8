"""Compact ancient solutions built from glued translators.

For depth ``R`` the upward unit-speed translator shifted down by ``R`` and
the downward translator of speed ``sigma`` shifted up by ``sigma R`` bound a
convex region. Flowing it to extinction, with time shifted so extinction
happens at 0, gives an old-but-not-ancient solution; ``R -> inf`` limits
approximate the compact ancient solution of the slab.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .anisotropy import AnisotropyFn, slab_width, speed_sigma, stats
from .convexgeom import (SupportCurve, area, grid_angles, hull, horizontal_reach, mollify,
                         support_of_hull, vertical_reach)
from .errors import GluingFailure, WindowMismatch
from .flow import FlowState, FlowTrace, evolve, harnack_field
from .translator import build_profile, center_profile

HARNACK_TOL = 1e-4
MONOTONE_REL = 1e-6
AREA_LAW_REL = 1e-4
CURVATURE_REL = 1e-3
SPAN_REL = 1e-5
# hull corners are left alone unless they resolve below this fraction of the
# smallest translator radius of curvature
CORNER_FRACTION = 1e-2


@dataclass(frozen=True)
class Constants:
    w_g: float
    sigma: float
    g_sup: float
    g_min: float
    c_area: float
    c_reach: float

    @classmethod
    def of(cls, g: AnisotropyFn) -> "Constants":
        st = stats(g)
        sigma = speed_sigma(g)
        return cls(
            w_g=slab_width(g, np.pi / 2), sigma=sigma, g_sup=st.g_max, g_min=st.g_min,
            c_area=st.g_max ** 2 * (1 + sigma ** -2) * math.pi * math.log(2),
            c_reach=max(st.g_max, st.g_max / sigma),
        )


@dataclass(frozen=True)
class GluedInitial:
    R: float
    sigma: float
    curve: SupportCurve
    eps: float
    window: float
    mollified: bool
    closed_sides: tuple[bool, bool]
    sample_counts: tuple[int, int]
    points: np.ndarray = field(repr=False)


@dataclass
class AncientRun:
    g: AnisotropyFn
    initial: GluedInitial
    trace: FlowTrace
    t_R: float
    extinction_point: np.ndarray
    report: dict | None = None

    @property
    def R(self):
        return self.initial.R

    @property
    def sigma(self):
        return self.initial.sigma

    def index_at(self, t, tol=1e-6) -> int:
        k = int(np.argmin(np.abs(self.trace.times - t)))
        if abs(self.trace.times[k] - t) > tol:
            raise WindowMismatch(f"run R={self.R} has no snapshot at t={t}")
        return k


def _arc_angles(theta, lo, hi):
    """Grid angles strictly inside (lo, hi) after unwrapping, plus the ends."""
    shifted = lo + np.mod(theta - lo, 2 * np.pi)
    inner = shifted[(shifted > lo) & (shifted < hi)]
    return np.concatenate([[lo], np.sort(inner), [hi]])


def build_initial(g: AnisotropyFn, R, n=512, eps=1e-4, window=None) -> GluedInitial:
    """Glue the two translator timeslices at depth ``R`` into a convex curve.

    Arcs are sampled at the grid tangent angles so support values are exact
    there. When the truncated arcs do not reach each other, each side is
    closed along the slab line ``x = +-w_g/2`` (the tails lie within
    ``eps * max g`` of it); where they do cross, the parts beyond the
    crossings are discarded.
    """
    if window is None:
        window = 4 * 2 * np.pi / n
    C = Constants.of(g)
    sigma = C.sigma
    theta = grid_angles(n)
    up_t = _arc_angles(theta, -np.pi / 2 + eps, np.pi / 2 - eps)
    dn_t = _arc_angles(theta, -3 * np.pi / 2 + eps, -np.pi / 2 - eps)
    up = center_profile(build_profile(g, np.pi / 2, 1.0, eps, thetas=up_t), g).translated(0.0, -R)
    dn = center_profile(build_profile(g, -np.pi / 2, sigma, eps, thetas=dn_t), g).translated(0.0, sigma * R)
    if not -R < sigma * R:
        raise GluingFailure("depth must be positive")

    # G- runs right -> left across the top, G+ left -> right across the bottom
    xu, yu = up.x, up.y
    xd, yd = dn.x[::-1], dn.y[::-1]
    keep_u = yu <= np.interp(xu, xd, yd)
    keep_d = yd >= np.interp(xd, xu, yu)
    if keep_u.sum() < 3 or keep_d.sum() < 3:
        raise GluingFailure(f"arcs do not enclose a region at R={R} (eps={eps})")
    pts = [np.column_stack([xu[keep_u], yu[keep_u]]), np.column_stack([xd[keep_d], yd[keep_d]])]
    half = C.w_g / 2
    closed = []
    for side, iu, idn in ((1.0, -1, 0), (-1.0, 0, -1)):
        low, high = yu[iu], dn.y[idn]
        gap = low < high
        closed.append(bool(gap))
        if gap:
            pts.append(np.array([[side * half, low], [side * half, high]]))
    points = np.vstack(pts)
    curve = support_of_hull(hull(points), n)
    rho_floor = CORNER_FRACTION * C.g_min / max(1.0, sigma)
    smoothed = curve.convexity_margin() < rho_floor
    if smoothed:
        curve = mollify(curve, window)
    return GluedInitial(float(R), sigma, curve, eps, float(window), smoothed, tuple(closed),
                        (int(keep_u.sum()), int(keep_d.sum())), points)


def default_snapshots(t_R, step=0.5, start=-1.0):
    """Common snapshot grid: ``start, start - step, ...`` down to just after ``t_R``."""
    k = np.arange(0, int(math.floor((start - t_R) / step)) + 1)
    times = start - step * k
    times = times[times > t_R + 1e-9]
    return np.unique(np.concatenate([[t_R, 0.75 * t_R], times]))


def _steiner_point(eta):
    th = grid_angles(eta.size)
    h = 2 * np.pi / eta.size
    return np.array([np.sum(eta * np.sin(th)), -np.sum(eta * np.cos(th))]) * h / np.pi


def extinction_point(tr: FlowTrace, g: AnisotropyFn):
    """Steiner point of the last state, advanced by its drift to the extinction time."""
    eta = tr.final_eta
    c = SupportCurve(eta)
    th = c.theta
    speed = -g(th) * c.curvature
    drift = np.array([np.sum(speed * np.sin(th)), -np.sum(speed * np.cos(th))]) * c.dtheta / np.pi
    return _steiner_point(eta) + drift * (tr.extinction_time - tr.final_time)


def run_obna(g: AnisotropyFn, R, n=512, snapshot_times=None, eps=1e-4, window=None,
             safety=0.5, initial=None) -> AncientRun:
    """Flow the glued curve at depth ``R`` to extinction and normalise time.

    The start time is ``-A0 / int g`` (exact by the area law); the trace is
    then shifted by the extrapolated extinction time so extinction sits at 0.
    """
    init = initial or build_initial(g, R, n, eps, window)
    total = float(np.sum(g(init.curve.theta))) * init.curve.dtheta
    t0 = -area(init.curve) / total
    if snapshot_times is None:
        snapshot_times = default_snapshots(t0)
    times = [t for t in snapshot_times if t >= t0 - 1e-12]
    if not times:
        raise WindowMismatch(f"every snapshot time precedes the start time {t0:.6g} at R={R}")
    times = [max(t, t0) for t in times]
    trace = evolve(FlowState(init.curve, t0, g), times, safety=safety)
    shift = -trace.extinction_time
    tr = trace.shifted(shift)
    tr.meta.update(R=float(R), n=n, eps=eps, window=init.window, safety=safety,
                   time_shift=shift)
    p = extinction_point(trace, g)
    return AncientRun(g, init, tr, t0 + shift, p)


# bound checks -----------------------------------------------------------------

def _check(name, anchor, margin, informational=False):
    margin = float(margin)
    return {"name": name, "anchor": anchor, "passed": bool(margin >= 0),
            "margin": margin, "informational": informational}


def verify_bounds(run: AncientRun, g: AnisotropyFn, width_slack=None) -> dict:
    """Evaluate the area, reach and curvature bounds on every snapshot.

    Margins are ``bound - value`` oriented so that a nonnegative margin
    passes. The displayed curvature bound of part (v) is reported but not
    asserted.
    """
    C = Constants.of(g)
    tr, R, s, w = run.trace, run.R, C.sigma, C.w_g
    if width_slack is None:
        width_slack = 10 * run.initial.window
    t = tr.times
    late = t > 1e-12 + t.min()
    wl = w * (1 + s)
    checks = []
    a0 = area(run.initial.curve)
    checks.append(_check("Prop 3.2 lower", "w_g(R+sigma R)-C <= A_R(0)", a0 - (wl * R - C.c_area)))
    checks.append(_check("Prop 3.2 upper", "A_R(0) <= w_g(R+sigma R)", wl * R - a0))
    h0 = horizontal_reach(run.initial.curve)
    checks.append(_check("Prop 3.3", "h_R >= w_g - 2C arcsin(C/R)",
                         h0 - (w - 2 * C.c_reach * math.asin(min(1.0, C.c_reach / R)))))
    total = 2 * math.pi * g.a[0]
    i, j = np.triu_indices(len(t), k=1)
    slope = (tr.area[j] - tr.area[i]) / (t[j] - t[i])
    checks.append(_check("Prop 3.4(i)", "A_R(t) = -t w_g(1+sigma)",
                         AREA_LAW_REL * total - np.max(np.abs(slope + total))))
    ub = -R + C.c_area / wl
    checks.append(_check("Prop 3.4(ii)", "-R <= t_R <= -R + C/(w_g(sigma+1))",
                         min(run.t_R + R, ub - run.t_R)))
    ell = tr.v_reach
    checks.append(_check("Prop 3.4(iii) lower", "-t(1+sigma) <= l_R(t)",
                         np.min(ell + t * (1 + s))))
    checks.append(_check("Prop 3.4(iii) upper", "l_R(t) <= -t(1+sigma) + 2C/(w_g(1+sigma))",
                         np.min(-t * (1 + s) + 2 * C.c_area / wl - ell)))
    hr = tr.h_reach
    checks.append(_check("Prop 3.4(iv) upper", "h_R(t) <= w_g", np.min(w + width_slack - hr)))
    checks.append(_check("Prop 3.4(iv) lower", "w_g - C/(-t(1+sigma)+C/w_g) <= h_R(t)",
                         np.min(hr - (w - C.c_area / (-t * (1 + s) + C.c_area / w)))))

    # curvature bounds after (3/4) t_R, support measured from the extinction point
    sel = t > 0.75 * run.t_R - 1e-9
    sel &= t < 0
    th = grid_angles(tr.etas.shape[1])
    gv = g(th)
    shift = run.extinction_point[0] * np.sin(th) - run.extinction_point[1] * np.cos(th)
    proof_margin, shown_margin = np.inf, np.inf
    c_kappa = w + 2 * C.c_area / wl
    for k in np.flatnonzero(sel):
        kap = tr.curve(k).curvature
        eta = tr.etas[k] - shift
        bound = -2 * eta / (gv * t[k])
        proof_margin = min(proof_margin, np.min(bound * (1 + CURVATURE_REL) - kap))
        shown = 2 * C.g_min * ((1 + s) - c_kappa / t[k])
        shown_margin = min(shown_margin, np.min(shown - kap))
    checks.append(_check("Prop 3.4(v) proof", "kappa <= -2 eta/(g t), t > (3/4) t_R", proof_margin))
    checks.append(_check("Prop 3.4(v) displayed",
                         "kappa <= 2 min g [(1+sigma) - C_kappa/t]", shown_margin, True))

    checks.extend(harnack_checks(tr, g, run.t_R))
    diag = tip_diagnostics(run, g)
    checks.append(_check("span monotonicity", "d/dt (L(t) + t(1+sigma)) <= 0",
                         _monotone_margin(diag["span_defect"], SPAN_REL * w)))
    checks.append(_check("tip ratio monotonicity", "r_-(t), r_+(t) nonincreasing",
                         tip_ratio_margin(run, g)))
    report = {"R": R, "t_R": run.t_R, "g": g.to_dict(), "checks": checks,
              "passed": all(c["passed"] for c in checks if not c["informational"])}
    run.report = report
    return report


def _monotone_margin(values, slack):
    """Smallest ``slack - (v_j - v_i)`` over i < j: nonnegative iff nonincreasing."""
    v = np.asarray(values)
    if len(v) < 2:
        return slack
    best = np.maximum.accumulate(-v)[:-1]  # -min previous value
    return float(np.min(slack - (v[1:] + best)))


def harnack_checks(tr: FlowTrace, g: AnisotropyFn, alpha):
    """Differential Harnack bound and monotonicity of kappa sqrt(tau - alpha)."""
    t = tr.times
    q_margin = np.inf
    scaled = []
    for k in range(len(t)):
        dt = t[k] - alpha
        if dt <= 1e-12:
            continue
        c = tr.curve(k)
        q = harnack_field(c, g)
        q_margin = min(q_margin, float(np.min(q + 1 / (2 * dt))) + HARNACK_TOL)
        scaled.append(c.curvature * math.sqrt(dt))
    mono = np.inf
    for a, b in zip(scaled[:-1], scaled[1:]):
        mono = min(mono, float(np.min(b - a * (1 - MONOTONE_REL))))
    return [
        _check("Prop 1.2(i)", "kappa((g kappa)_tt + g kappa) + 1/(2(tau-alpha)) >= 0", q_margin),
        _check("Prop 1.2(ii)", "kappa sqrt(tau-alpha) increasing", mono if scaled else 0.0),
    ]


def tip_diagnostics(run: AncientRun, g: AnisotropyFn) -> dict:
    tr, s = run.trace, run.sigma
    r_minus = 1.0 / (g(0.0) * tr.kappa_bottom)
    r_plus = s / (g(np.pi) * tr.kappa_top)
    L = tr.v_reach
    return {"t": tr.times, "r_minus": r_minus, "r_plus": r_plus, "L": L,
            "span_defect": L + tr.times * (1 + s)}


def tip_ratio_margin(run: AncientRun, g: AnisotropyFn) -> float:
    """Nonincreasing tip ratios, allowing the finite-age Harnack factor."""
    d = tip_diagnostics(run, g)
    age = d["t"] - run.t_R
    ok = age > 1e-12
    margin = np.inf
    for r in (d["r_minus"][ok], d["r_plus"][ok]):
        a = age[ok]
        allowed = r[:-1] * np.sqrt(a[1:] / a[:-1]) * (1 + MONOTONE_REL)
        if len(allowed):
            margin = min(margin, float(np.min(allowed - r[1:])))
    return margin


def converge_sequence(g: AnisotropyFn, R_list, times, n=512, runs=None, **kw) -> dict:
    """Sup-norm distances between support functions of consecutive depths."""
    R_list = sorted(R_list)
    if len(R_list) < 3:
        raise ValueError("need at least three depths")
    runs = dict(runs or {})
    for R in R_list:
        if R not in runs:
            runs[R] = run_obna(g, R, n, **kw)
    for R in R_list:
        if min(times) <= runs[R].t_R:
            raise WindowMismatch(f"time {min(times)} precedes t_R={runs[R].t_R} for R={R}")
    dist = {}
    for a, b in zip(R_list[:-1], R_list[1:]):
        dist[(a, b)] = np.array([
            np.max(np.abs(runs[a].trace.etas[runs[a].index_at(t)] -
                          runs[b].trace.etas[runs[b].index_at(t)])) for t in times])
    finest = runs[R_list[-1]]
    limit = np.array([finest.trace.etas[finest.index_at(t)] for t in times])
    return {"R": R_list, "times": np.asarray(times, dtype=float), "distances": dist,
            "limit": limit, "runs": runs}
