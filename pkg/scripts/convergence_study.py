"""Sup-norm distances between glued runs of increasing depth at fixed times.

Two interleaved depth sequences give two limit estimates; their gap is
compared with the finest consecutive distance.

    python scripts/convergence_study.py --times -5 -3 --main 10 20 40 --alt 15 30 60
"""
import argparse
from dataclasses import dataclass, field

import numpy as np

from acsf.ancient import converge_sequence, run_obna
from acsf.anisotropy import AnisotropyFn


@dataclass
class Config:
    a: list = field(default_factory=lambda: [1.0])
    main: list = field(default_factory=lambda: [10.0, 20.0, 40.0])
    alt: list = field(default_factory=lambda: [15.0, 30.0, 60.0])
    times: list = field(default_factory=lambda: [-5.0])
    n: int = 512


def study(cfg: Config):
    g = AnisotropyFn(tuple(cfg.a))
    earliest = min(cfg.times)
    # snapshots on a 0.5 grid from -1 reach every requested time
    runs = {R: run_obna(g, R, cfg.n) for R in sorted(set(cfg.main) | set(cfg.alt))}
    for R, run in runs.items():
        if earliest <= run.t_R:
            raise SystemExit(f"time {earliest} precedes t_R={run.t_R:.3f} at R={R}")
    a = converge_sequence(g, cfg.main, cfg.times, cfg.n, runs=runs)
    b = converge_sequence(g, cfg.alt, cfg.times, cfg.n, runs=runs)
    return a, b


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--a", type=float, nargs="+", default=[1.0])
    p.add_argument("--main", type=float, nargs="+", default=[10.0, 20.0, 40.0])
    p.add_argument("--alt", type=float, nargs="+", default=[15.0, 30.0, 60.0])
    p.add_argument("--times", type=float, nargs="+", default=[-5.0])
    p.add_argument("--n", type=int, default=512)
    cfg = Config(**vars(p.parse_args()))
    a, b = study(cfg)
    for seq in (a, b):
        for (r0, r1), d in seq["distances"].items():
            print(f"d({r0:g},{r1:g}):", " ".join(f"{v:.4e}" for v in d))
    gap = np.max(np.abs(a["limit"] - b["limit"]), axis=1)
    for t, v in zip(cfg.times, gap):
        print(f"limit gap at t={t:g}: {v:.4e}")


if __name__ == "__main__":
    main()
