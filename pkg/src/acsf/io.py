"""CSV, JSON and SVG writers with deterministic 17-significant-digit output."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .convexgeom import SupportCurve
from .errors import EmptyGeometry
from .flow import FlowTrace
from .translator import TranslatorProfile


def fmt(x) -> str:
    return format(float(x), ".17g")


def _json_value(v, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json_value(x, indent, level + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        if len(v) == 0:
            return "[]"
        items = [f"{pad}{_json_value(x, indent, level + 1)}" for x in v]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt(v) if math.isfinite(v) else "null"
    return json.dumps(str(v))


def dumps(obj, indent=2) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _json_value(obj, indent, 0) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def write_csv(path, header, columns):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = [np.asarray(c, dtype=float) for c in columns]
    lines = [",".join(header)]
    lines += [",".join(fmt(c[i]) for c in cols) for i in range(len(cols[0]))]
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path) -> dict:
    text = Path(path).read_text().strip().splitlines()
    header = text[0].split(",")
    data = np.array([[float(v) for v in row.split(",")] for row in text[1:]]).reshape(-1, len(header))
    return {h: data[:, k] for k, h in enumerate(header)}


def write_profile(path, p: TranslatorProfile):
    return write_csv(path, ["theta", "x", "y", "kappa"], [p.theta, p.x, p.y, p.kappa])


def write_trace(path, tr: FlowTrace):
    return write_csv(path, ["t", "area", "h_reach", "v_reach", "kappa_tip_bottom", "kappa_tip_top"],
                     [tr.times, tr.area, tr.h_reach, tr.v_reach, tr.kappa_bottom, tr.kappa_top])


def snapshot_name(t) -> str:
    return f"t_{float(t):+.6f}.csv"


def write_snapshot(path, c: SupportCurve):
    pts = c.boundary()
    with np.errstate(divide="ignore"):
        kappa = 1.0 / c.radius
    return write_csv(path, ["theta", "eta", "kappa", "x", "y"], [c.theta, c.eta, kappa, pts[:, 0], pts[:, 1]])


def write_run_dir(root, tr: FlowTrace, manifest: dict, report: dict | None = None):
    """Lay out ``manifest.json``, ``trace.csv``, ``snapshots/`` and optionally ``report.json``."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    write_json(root / "manifest.json", manifest)
    write_trace(root / "trace.csv", tr)
    for k, t in enumerate(tr.times):
        write_snapshot(root / "snapshots" / snapshot_name(t), tr.curve(k))
    if report is not None:
        write_json(root / "report.json", report)
    return root


# SVG ---------------------------------------------------------------------------

def _ramp(k, m):
    """Blue (oldest) to red (newest)."""
    s = 0.0 if m <= 1 else k / (m - 1)
    a, b = np.array([33, 102, 172]), np.array([178, 24, 43])
    r, g, bl = np.rint(a + s * (b - a)).astype(int)
    return f"#{r:02x}{g:02x}{bl:02x}"


def _polylines(obj):
    if isinstance(obj, SupportCurve):
        pts = obj.boundary()
        return [np.vstack([pts, pts[:1]])]
    if isinstance(obj, TranslatorProfile):
        return [obj.points]
    if isinstance(obj, FlowTrace):
        return [_polylines(obj.curve(k))[0] for k in range(len(obj))]
    if isinstance(obj, (list, tuple)):
        return [line for item in obj for line in _polylines(item)]
    raise TypeError(f"cannot render {type(obj).__name__}")


def export_svg(obj, stroke_width=None, margin=0.05) -> str:
    """Render curves as one polyline each, with +y pointing up."""
    lines = [np.asarray(p, dtype=float) for p in _polylines(obj)]
    lines = [p for p in lines if p.size]
    if not lines:
        raise EmptyGeometry("nothing to draw")
    allp = np.vstack(lines)
    if not np.all(np.isfinite(allp)):
        raise EmptyGeometry("non-finite coordinates")
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    pad = margin * span
    x0, y0 = lo[0] - pad[0], -(hi[1] + pad[1])
    w, h = span + 2 * pad
    sw = stroke_width if stroke_width is not None else 0.003 * max(w, h)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0:.6g} {y0:.6g} {w:.6g} {h:.6g}">']
    for k, p in enumerate(lines):
        coords = " ".join(f"{x:.6g},{-y:.6g}" for x, y in p)
        out.append(f'<polyline fill="none" stroke="{_ramp(k, len(lines))}" '
                   f'stroke-width="{sw:.4g}" points="{coords}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, obj, **kw):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(export_svg(obj, **kw))
    return path
