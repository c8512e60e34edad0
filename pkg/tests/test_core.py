import math

import numpy as np
import pytest

from zcwell.core import (Boundary, PiecewiseLinearWave, UnitSystem, WellDomain, eval_wave,
                         norm_squared, normalize)
from zcwell.errors import ZcDomainError


def tri(c=0.5):
    return PiecewiseLinearWave(WellDomain(1.0), [(0, 0), (c, 1.0), (1, 0)])


def test_units_validate():
    assert UnitSystem().kinetic_prefactor == 0.5
    assert UnitSystem(2.0, 0.5).kinetic_prefactor == 4.0
    with pytest.raises(ZcDomainError):
        UnitSystem(0.0, 1.0)
    with pytest.raises(ZcDomainError):
        WellDomain(-1.0)


def test_boundary_from_string():
    assert WellDomain(1.0, "periodic").boundary is Boundary.PERIODIC


@pytest.mark.parametrize("knots", [
    [(0, 0), (0.5, 1), (0.5, 2), (1, 0)],
    [(0, 0), (0.6, 1), (0.4, 2), (1, 0)],
    [(0, 0), (0.5, 1), (0.9, 0)],
    [(0.1, 0), (0.5, 1), (1, 0)],
    [(0, 0.1), (0.5, 1), (1, 0)],
    [(0, 0), (0.5, float("nan")), (1, 0)],
])
def test_bad_knots_rejected(knots):
    with pytest.raises(ZcDomainError):
        PiecewiseLinearWave(WellDomain(1.0), knots)


def test_periodic_needs_matching_ends():
    dom = WellDomain(1.0, Boundary.PERIODIC)
    PiecewiseLinearWave(dom, [(0, 1), (0.5, 2), (1, 1)])
    with pytest.raises(ZcDomainError):
        PiecewiseLinearWave(dom, [(0, 1), (0.5, 2), (1, 1.5)])


def test_wave_is_immutable():
    w = tri()
    with pytest.raises((AttributeError, ValueError)):
        w.psi[1] = 3.0
    with pytest.raises(AttributeError):
        w.x = np.zeros(3)


def test_eval_and_domain():
    w = tri(0.25)
    assert eval_wave(w, 0.125) == pytest.approx(0.5)
    assert np.allclose(w([0.0, 0.25, 0.625, 1.0]), [0, 1, 0.5, 0])
    with pytest.raises(ZcDomainError):
        eval_wave(w, 1.5)


def test_norm_matches_quadrature():
    from scipy.integrate import quad
    w = PiecewiseLinearWave(WellDomain(2.0), [(0, 0), (0.3, 1.2), (1.1, -0.4), (2, 0)])
    ref = sum(quad(lambda x: w(x) ** 2, a, b)[0] for a, b in zip(w.x[:-1], w.x[1:]))
    assert norm_squared(w) == pytest.approx(ref, rel=1e-13)
    assert norm_squared(normalize(w)) == pytest.approx(1.0, rel=1e-15)


def test_normalize_zero_wave():
    w = PiecewiseLinearWave(WellDomain(1.0), [(0, 0), (0.5, 0), (1, 0)])
    with pytest.raises(ZcDomainError):
        normalize(w)


def test_triangle_normalization_amplitude():
    w = normalize(tri(0.3))
    assert w.psi[1] == pytest.approx(math.sqrt(3.0), rel=1e-15)


def test_scaled_reflected():
    w = tri(0.3)
    assert np.array_equal(w.scaled(-2).psi, -2 * w.psi)
    r = w.reflected()
    assert np.allclose(r.x, [0, 0.7, 1])
    assert np.allclose(r.reflected().x, w.x, rtol=0, atol=1e-15)
