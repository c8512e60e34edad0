import numpy as np
import pytest

from zcwell.core import PiecewiseLinearWave, WellDomain


def random_wave(rng, n_knots=None, width=1.0, positive=False):
    """Dirichlet wave with ``n_knots`` interior knots, none of them at psi == 0."""
    n = int(rng.integers(5, 21)) if n_knots is None else n_knots
    xs = np.sort(rng.uniform(0.02, 0.98, n)) * width
    while np.any(np.diff(xs) < 1e-3 * width):
        xs = np.sort(rng.uniform(0.02, 0.98, n)) * width
    mags = rng.uniform(0.2, 1.5, n)
    signs = np.ones(n) if positive else rng.choice([-1.0, 1.0], n)
    knots = [(0.0, 0.0)] + list(zip(xs, mags * signs)) + [(width, 0.0)]
    return PiecewiseLinearWave(WellDomain(width), knots)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance bookkeeping: criterion -> list of (check, ok, detail)
ACCEPTANCE = {}


def record(criterion, check, ok, detail=""):
    ACCEPTANCE.setdefault(criterion, []).append((check, bool(ok), detail))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[crit]
        ok = all(c[1] for c in checks)
        parts = "; ".join(f"{name}: {'pass' if good else 'FAIL'}{f' ({d})' if d else ''}"
                          for name, good, d in checks)
        tr.write_line(f"criterion {crit}: {'PASS' if ok else 'FAIL'} -- {parts}")
