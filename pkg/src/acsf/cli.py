"""Command-line front end.

Every subcommand accepts ``--config file.json``; explicit flags override the
file, which overrides built-in defaults. Output directories default to
``$ACSF_OUTPUT_ROOT/<command>`` (``./runs`` when the variable is unset).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import io
from .ancient import (
    Constants, build_initial, converge_sequence, default_snapshots, run_obna,
    tip_diagnostics, verify_bounds,
)
from .anisotropy import AnisotropyFn, slab_width, speed_sigma
from .convexgeom import SupportCurve, area
from .errors import AcsfError, ConfigError, PositivityViolation
from .flow import FlowState, evolve, evolve_graph, graph_grid
from .translator import build_profile, center_profile, translator_curvature

OUTPUT_ENV = "ACSF_OUTPUT_ROOT"
COMMANDS = ("translator", "width", "sigma", "evolve", "ancient", "converge", "verify")


@dataclass
class RunConfig:
    g: dict
    psi: float = math.pi / 2
    speed: float = 1.0
    eps: float = 1e-4
    n: int = 512
    R: float = 10.0
    R_list: tuple = (10.0, 20.0, 40.0)
    R_alt: tuple = (15.0, 30.0, 60.0)
    times: tuple | None = None
    window: float | None = None
    safety: float = 0.5
    radius: float = 1.0
    start: float = -0.5
    initial: str = "circle"
    out: str | None = None
    area_fault: float = 0.0

    def anisotropy(self) -> AnisotropyFn:
        try:
            return AnisotropyFn.from_dict(self.g)
        except PositivityViolation:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid g: {exc}") from exc

    def validate(self, command):
        checks = [
            (self.speed > 0, "speed must be positive"),
            (0 < self.eps < 0.5, "eps must lie in (0, 0.5)"),
            (0 < self.safety <= 1, "safety must lie in (0, 1]"),
            (self.R > 0, "R must be positive"),
            (all(r > 0 for r in self.R_list), "R_list entries must be positive"),
            (self.radius > 0, "radius must be positive"),
            (self.initial in ("circle", "glued"), "initial must be 'circle' or 'glued'"),
            (self.window is None or self.window > 0, "window must be positive"),
        ]
        if command in ("ancient", "evolve", "converge", "verify"):
            checks.append((self.n >= 64 and self.n & (self.n - 1) == 0,
                           "n must be a power of two, at least 64"))
        if command == "translator":
            checks.append((self.n >= 3, "n must be at least 3"))
        for ok, msg in checks:
            if not ok:
                raise ConfigError(msg)

    def output_dir(self, command) -> Path:
        if self.out:
            return Path(self.out)
        return Path(os.environ.get(OUTPUT_ENV, "runs")) / command


def _floats(text):
    return tuple(float(v) for v in str(text).replace(",", " ").split())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="acsf", description="Anisotropic curve shortening flow experiments")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with parameters; flags override it")
        sp.add_argument("--g", help='Fourier coefficients as JSON, e.g. {"a":[2,1]}')
        sp.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV}/<command>)")
        return sp

    sp = common(sub.add_parser("translator", help="build a translator profile"))
    sp.add_argument("--psi", type=float)
    sp.add_argument("--speed", type=float)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--n", type=int)

    sp = common(sub.add_parser("width", help="print the slab width"))
    sp.add_argument("--psi", type=float)

    common(sub.add_parser("sigma", help="print the speed ratio"))

    sp = common(sub.add_parser("evolve", help="compact flow from a circle or glued curve"))
    sp.add_argument("--initial", choices=["circle", "glued"])
    sp.add_argument("--radius", type=float)
    sp.add_argument("--start", type=float, help="start time for the circle")
    sp.add_argument("--R", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--times", type=_floats, help="snapshot times")
    sp.add_argument("--safety", type=float)

    for name, text in (("ancient", "flow a glued curve and check the bounds"),
                       ("verify", "run the full property suite")):
        sp = common(sub.add_parser(name, help=text))
        sp.add_argument("--R", type=float)
        sp.add_argument("--R-list", dest="R_list", type=_floats)
        sp.add_argument("--n", type=int)
        sp.add_argument("--eps", type=float)
        sp.add_argument("--window", type=float)
        sp.add_argument("--safety", type=float)
        sp.add_argument("--times", type=_floats)
        if name == "verify":
            sp.add_argument("--area-fault", dest="area_fault", type=float, help=argparse.SUPPRESS)

    sp = common(sub.add_parser("converge", help="R -> infinity convergence study"))
    sp.add_argument("--R-list", dest="R_list", type=_floats)
    sp.add_argument("--R-alt", dest="R_alt", type=_floats)
    sp.add_argument("--n", type=int)
    sp.add_argument("--times", type=_floats)
    sp.add_argument("--safety", type=float)
    return p


def resolve_config(args) -> RunConfig:
    base = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(base, dict):
            raise ConfigError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(base) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    for k in known:
        v = getattr(args, k, None)
        if v is not None:
            base[k] = v
    if isinstance(base.get("g"), str):
        try:
            base["g"] = json.loads(base["g"])
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--g is not valid JSON: {exc}") from exc
    if "g" not in base:
        raise ConfigError("missing field 'g'")
    for k in ("R_list", "R_alt", "times"):
        if base.get(k) is not None:
            base[k] = tuple(float(v) for v in base[k])
    try:
        cfg = RunConfig(**base)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    cfg.validate(args.command)
    return cfg


# commands ----------------------------------------------------------------------

def _manifest(command, cfg: RunConfig, g: AnisotropyFn, **extra):
    m = {"command": command, "g": g.to_dict(), "config": {k: v for k, v in asdict(cfg).items() if k != "out"}}
    m.update(extra)
    return m


def _flow_manifest(cfg, g, window=None):
    return {"n": cfg.n, "dt_policy": f"safety*h^2/(2 max g kappa^2), safety={cfg.safety}",
            "mollification_window": window,
            "stop": "area < 1e-3 * initial area; extinction by the linear area law"}


def cmd_translator(cfg, g):
    p = center_profile(build_profile(g, cfg.psi, cfg.speed, cfg.eps, cfg.n), g)
    out = cfg.output_dir("translator")
    io.write_profile(out / "profile.csv", p)
    io.write_svg(out / "profile.svg", p)
    io.write_json(out / "manifest.json", _manifest("translator", cfg, g))
    print(out / "profile.csv")


def cmd_width(cfg, g):
    print(format(slab_width(g, cfg.psi), ".17g"))


def cmd_sigma(cfg, g):
    print(f"{speed_sigma(g):.5f}")


def cmd_evolve(cfg, g):
    if cfg.initial == "circle":
        c = SupportCurve.circle(cfg.radius, cfg.n)
        t0 = cfg.start
        window = None
    else:
        init = build_initial(g, cfg.R, cfg.n, cfg.eps, cfg.window)
        c, window = init.curve, init.window
        t0 = -area(c) / (2 * math.pi * g.a[0])
    times = cfg.times or tuple(t0 + k * (-t0) / 8 for k in range(8))
    tr = evolve(FlowState(c, t0, g), [t for t in times if t >= t0], safety=cfg.safety)
    out = cfg.output_dir("evolve")
    man = _manifest("evolve", cfg, g, start_time=t0, extinction_time=tr.extinction_time,
                    **_flow_manifest(cfg, g, window))
    io.write_run_dir(out, tr, man)
    io.write_svg(out / "trace.svg", tr)
    print(f"extinction_time {tr.extinction_time:.10g}")


def _ancient_run(cfg, g, R):
    times = cfg.times
    if times is not None:
        times = list(times)
    run = run_obna(g, R, cfg.n, times, cfg.eps, cfg.window, cfg.safety)
    return run


def _write_ancient(out, cfg, g, run, report):
    man = _manifest("ancient", cfg, g, R=run.R, t_R=run.t_R, sigma=run.sigma,
                    time_shift=run.trace.meta.get("time_shift"),
                    mollified=run.initial.mollified, **_flow_manifest(cfg, g, run.initial.window))
    io.write_run_dir(out, run.trace, man, report)
    d = tip_diagnostics(run, g)
    io.write_csv(out / "tips.csv", ["t", "r_minus", "r_plus", "L", "span_defect"],
                 [d["t"], d["r_minus"], d["r_plus"], d["L"], d["span_defect"]])
    io.write_svg(out / "trace.svg", run.trace)


def _print_report(report):
    for c in report["checks"]:
        tag = "info" if c["informational"] else ("PASS" if c["passed"] else "FAIL")
        print(f"{tag:4s}  {c['name']:<24s} margin {c['margin']:+.3e}")


def cmd_ancient(cfg, g):
    run = _ancient_run(cfg, g, cfg.R)
    report = verify_bounds(run, g)
    _write_ancient(cfg.output_dir("ancient"), cfg, g, run, report)
    _print_report(report)
    return 0 if report["passed"] else 1


def cmd_converge(cfg, g):
    times = list(cfg.times or (-5.0,))
    out = cfg.output_dir("converge")
    rows, limits = [], []
    for seq in (cfg.R_list, cfg.R_alt):
        res = converge_sequence(g, seq, times, cfg.n, safety=cfg.safety)
        limits.append(res["limit"])
        for (a, b), d in res["distances"].items():
            for t, v in zip(times, d):
                rows.append((a, b, t, v))
    gap = np.max(np.abs(limits[0] - limits[1]), axis=1)
    io.write_csv(out / "convergence.csv", ["R_a", "R_b", "t", "sup_distance"], list(zip(*rows)))
    io.write_csv(out / "limits.csv", ["t", "limit_gap"], [times, gap])
    io.write_json(out / "manifest.json", _manifest("converge", cfg, g))
    for a, b, t, v in rows:
        print(f"d({a:g},{b:g}) at t={t:g}: {v:.6e}")
    for t, v in zip(times, gap):
        print(f"limit gap at t={t:g}: {v:.6e}")


def _stationarity_check(g):
    """Graph-mode drift of a translator over unit time."""
    th = graph_grid(math.pi / 2, 1e-2, 512)
    k0 = translator_curvature(g, math.pi / 2, 1.0, th)
    k1 = evolve_graph(k0, th, g, 1.0)
    drift = float(np.max(np.abs(k1 - k0)))
    return {"name": "translator stationarity", "anchor": "(g kappa)_tt + g kappa = 0",
            "passed": drift <= 1e-6, "margin": 1e-6 - drift, "informational": False}


def verify_all(cfg: RunConfig, g: AnisotropyFn) -> dict:
    """Every bound check on every configured depth plus translator stationarity."""
    runs = []
    R_list = cfg.R_list if cfg.R_list else (cfg.R,)
    for R in R_list:
        run = _ancient_run(cfg, g, R)
        if cfg.area_fault:
            run.trace.area = run.trace.area * (1 + cfg.area_fault)
        runs.append(verify_bounds(run, g))
    checks = [_stationarity_check(g)]
    for rep in runs:
        for c in rep["checks"]:
            checks.append(dict(c, name=c["name"], R=rep["R"]))
    passed = all(c["passed"] for c in checks if not c["informational"])
    return {"g": g.to_dict(), "passed": passed, "runs": [{"R": r["R"], "t_R": r["t_R"]} for r in runs],
            "checks": checks}


def cmd_verify(cfg, g):
    report = verify_all(cfg, g)
    io.write_json(cfg.output_dir("verify") / "report.json", report)
    for c in report["checks"]:
        tag = "info" if c["informational"] else ("PASS" if c["passed"] else "FAIL")
        where = f"R={c['R']:g}" if "R" in c else ""
        print(f"{tag:4s}  {c['name']:<24s} {where:<7s} margin {c['margin']:+.3e}")
    return 0 if report["passed"] else 1


HANDLERS = {"translator": cmd_translator, "width": cmd_width, "sigma": cmd_sigma,
            "evolve": cmd_evolve, "ancient": cmd_ancient, "converge": cmd_converge,
            "verify": cmd_verify}


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        cfg = resolve_config(args)
        g = cfg.anisotropy()
    except (ConfigError, PositivityViolation) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    try:
        code = HANDLERS[args.command](cfg, g)
    except AcsfError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return int(code or 0)


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
