"""Independent high-precision reference values, frozen into tests/data/oracles.json.

Uses mpmath tanh-sinh quadrature at 30 digits; nothing here touches the
package's own integrators.
"""
import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 30

G_A = [2.0, 0.3, 0.2]
G_B = [0.0, 0.4]


def g(u):
    s = mp.mpf(G_A[0])
    for k, a in enumerate(G_A[1:], 1):
        s += a * mp.cos(k * u)
    for k, b in enumerate(G_B, 1):
        s += b * mp.sin(k * u)
    return s


def translator_point(psi, speed, theta):
    tip = psi - mp.pi / 2
    fx = lambda u: mp.cos(u) * g(u) / (speed * mp.sin(psi - u))
    fy = lambda u: mp.sin(u) * g(u) / (speed * mp.sin(psi - u))
    return mp.quad(fx, [tip, theta]), mp.quad(fy, [tip, theta])


def main():
    psi, speed = mp.mpf(1), mp.mpf("1.3")
    thetas = [psi - mp.pi + mp.mpf("0.3"), psi - mp.pi / 2 - mp.mpf("0.7"), psi - mp.pi / 2 + mp.mpf("0.4"),
              psi - mp.mpf("0.2")]
    pts = [translator_point(psi, speed, th) for th in thetas]
    widths = {str(p): float(mp.quad(g, [p - mp.pi, p])) for p in (0.0, 0.7, 1.5707963267948966, -2.0)}
    sigma = mp.quad(g, [mp.pi / 2, 3 * mp.pi / 2]) / mp.quad(g, [-mp.pi / 2, mp.pi / 2])
    out = {
        "g": {"a": G_A, "b": G_B},
        "translator": {"psi": float(psi), "speed": float(speed),
                       "theta": [float(t) for t in thetas],
                       "x": [float(p[0]) for p in pts], "y": [float(p[1]) for p in pts]},
        "slab_width": widths,
        "sigma": float(sigma),
        "g_2cos_y_at_0.9": float(-2 * mp.log(mp.cos(0.9)) + 1 - mp.cos(0.9)),
        "g_2cos_x_at_0.9": float(2 * mp.mpf(0.9) + mp.sin(0.9)),
    }
    path = Path(__file__).resolve().parents[1] / "tests" / "data" / "oracles.json"
    path.write_text(json.dumps(out, indent=2) + "\n")
    print(path)


if __name__ == "__main__":
    main()
