import json
from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from acsf.ancient import run_obna, verify_bounds
from acsf.anisotropy import AnisotropyFn

DATA = Path(__file__).parent / "data"

G_FORMS = {"one": (1.0,), "two_plus_cos": (2.0, 1.0)}


def anisotropy(key) -> AnisotropyFn:
    return AnisotropyFn(G_FORMS[key])


@lru_cache(maxsize=None)
def cached_run(key, R, n=512):
    """Glued-curve runs are shared across test modules; each takes seconds."""
    g = anisotropy(key)
    run = run_obna(g, float(R), n)
    verify_bounds(run, g)
    return run


@pytest.fixture(scope="session")
def oracles():
    return json.loads((DATA / "oracles.json").read_text())


@pytest.fixture
def ellipse_eta():
    def make(a=2.0, b=1.0, n=512):
        th = -np.pi + 2 * np.pi * np.arange(n) / n
        return np.sqrt(a * a * np.sin(th) ** 2 + b * b * np.cos(th) ** 2)
    return make


# acceptance summary lines, filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def record(label, passed, detail=""):
    ACCEPTANCE[label] = (bool(passed), detail)
    print(f"{label}: {'PASS' if passed else 'FAIL'} {detail}")
    return bool(passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE, key=lambda s: (int(s.split()[1].rstrip("ab:")), s)):
        ok, detail = ACCEPTANCE[label]
        terminalreporter.write_line(f"{label:<16s} {'PASS' if ok else 'FAIL'}  {detail}")
