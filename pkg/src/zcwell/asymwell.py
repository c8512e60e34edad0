"""Asymmetric infinite well: a flat floor of width ``a`` next to a step ``V0`` of width ``b``.

Coordinates run over ``[0, a + b]`` with the step edge at ``x = a``.
Eigenvalue conditions are evaluated in pole-free sine/cosine form and scaled
so that they join continuously at ``E = V0``, where both reduce to
``sin(chi a) + chi b cos(chi a)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .core import UnitSystem
from .errors import BracketExhausted, UntunedWell, ZcDomainError

THRESHOLD_RTOL = 1e-9
TUNING_TOL = 1e-9


class Regime(str, enum.Enum):
    ABOVE_STEP = "AboveStep"
    BELOW_STEP = "BelowStep"
    THRESHOLD = "Threshold"


@dataclass(frozen=True)
class AsymmetricWell:
    a: float
    b: float
    V0: float = 0.0
    units: UnitSystem = field(default_factory=UnitSystem)

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ZcDomainError(f"region widths must be positive, got a={self.a}, b={self.b}")
        if not self.V0 >= 0:
            raise ZcDomainError(f"step height must be non-negative, got V0={self.V0}")

    @property
    def width(self) -> float:
        return self.a + self.b

    def wavenumber(self, energy: float) -> float:
        """``sqrt(2m|energy|)/hbar``."""
        return math.sqrt(2.0 * self.units.mass * abs(energy)) / self.units.hbar

    @property
    def chi(self) -> float:
        return self.wavenumber(self.V0)

    def energy(self, wavenumber: float) -> float:
        return (self.units.hbar * wavenumber) ** 2 / (2.0 * self.units.mass)

    @property
    def threshold_tolerance(self) -> float:
        return THRESHOLD_RTOL * max(self.V0, self.energy(1.0 / self.a))


@dataclass(frozen=True)
class EnergyLevel:
    index: int
    energy: float
    regime: Regime


def _sin_over(q: float, b: float) -> float:
    # sin(q b)/q, smooth through q = 0
    z = q * b
    if abs(z) < 1e-4:
        return b * (1.0 - z * z / 6.0)
    return math.sin(z) / q


def _tanh_over(kappa: float, b: float) -> float:
    # tanh(kappa b)/kappa, smooth through kappa = 0
    z = kappa * b
    if abs(z) < 1e-4:
        return b * (1.0 - z * z / 3.0)
    return math.tanh(z) / kappa


def above_step_residual(well: AsymmetricWell, E: float) -> float:
    """``q sin(ka) cos(qb) + k cos(ka) sin(qb)`` divided by ``q`` (valid for E >= V0)."""
    k = well.wavenumber(E)
    q = well.wavenumber(E - well.V0)
    return math.sin(k * well.a) * math.cos(q * well.b) + k * math.cos(k * well.a) * _sin_over(q, well.b)


def below_step_residual(well: AsymmetricWell, E: float) -> float:
    """``kappa sin(ka) cosh(kappa b) + k cos(ka) sinh(kappa b)`` divided by ``kappa cosh(kappa b)``."""
    k = well.wavenumber(E)
    kappa = well.wavenumber(well.V0 - E)
    return math.sin(k * well.a) + k * math.cos(k * well.a) * _tanh_over(kappa, well.b)


def threshold_residual(well: AsymmetricWell) -> float:
    chi = well.chi
    return math.sin(chi * well.a) + chi * well.b * math.cos(chi * well.a)


def residual(well: AsymmetricWell, E: float) -> float:
    """Eigenvalue condition; its zeros in ``E > 0`` are the bound-state energies."""
    if not E > 0:
        raise ZcDomainError(f"energy must be positive, got {E}")
    if abs(E - well.V0) <= well.threshold_tolerance:
        k = well.wavenumber(E)
        return math.sin(k * well.a) + k * well.b * math.cos(k * well.a)
    if E > well.V0:
        return above_step_residual(well, E)
    return below_step_residual(well, E)


def _bisect(f, lo: float, hi: float, flo: float, rtol: float = 1e-12) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * abs(hi) or not lo < mid < hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan_energies(well: AsymmetricWell, q_max: float) -> np.ndarray:
    # uniform in k below the step and uniform in q above it; either way the
    # phase advances by at most pi/16 per step
    step = math.pi / (16.0 * well.width)
    chi = well.chi
    ks = np.arange(1, int(math.ceil(chi / step)) + 1) * step
    ks = ks[ks < chi]
    qs = np.arange(0, int(math.ceil(q_max / step)) + 1) * step
    below = [well.energy(k) for k in ks]
    above = [well.V0 + well.energy(q) for q in qs]
    if well.V0 == 0.0:
        above = above[1:]
    return np.array(below + above)


def solve_levels(well: AsymmetricWell, count: int) -> list[EnergyLevel]:
    """The lowest ``count`` eigenvalues, bracketed on a phase-resolved scan then bisected.

    Raises:
        BracketExhausted: fewer than ``count`` roots below the scan ceiling.
    """
    if count < 1:
        raise ZcDomainError("count must be at least 1")
    # ka + qb >= q (a + b), so this ceiling holds at least count + 2 levels above the step
    q_max = (count + 3) * math.pi / well.width
    grid = _scan_energies(well, q_max)
    f = lambda E: residual(well, E)  # noqa: E731
    values = [f(E) for E in grid]
    roots = []
    prev_E, prev_f = None, None
    for E, fv in zip(grid, values):
        if fv == 0.0:
            roots.append(float(E))
        elif prev_f is not None and (prev_f > 0) != (fv > 0):
            roots.append(_bisect(f, prev_E, float(E), prev_f))
        if fv != 0.0:
            prev_E, prev_f = float(E), fv
        if len(roots) >= count:
            break
    if len(roots) < count:
        raise BracketExhausted(
            f"found {len(roots)} of {count} levels below the scan ceiling E={grid[-1]:.6g}"
        )
    tol = well.threshold_tolerance
    levels = []
    for n, E in enumerate(roots, start=1):
        if abs(E - well.V0) <= tol:
            regime = Regime.THRESHOLD
        elif E > well.V0:
            regime = Regime.ABOVE_STEP
        else:
            regime = Regime.BELOW_STEP
        levels.append(EnergyLevel(n, E, regime))
    return levels


def zc_bracket(a: float, b: float, branch: int) -> tuple[float, float]:
    """Interval holding the ``branch``-th root of ``sin(chi a) + chi b cos(chi a)``."""
    return (2 * branch + 1) * math.pi / (2.0 * a), (branch + 1) * math.pi / a


def solve_zc_chi(a: float, b: float, branch: int = 0) -> float:
    if not (a > 0 and b > 0):
        raise ZcDomainError(f"region widths must be positive, got a={a}, b={b}")
    if branch < 0:
        raise ZcDomainError("branch index must be non-negative")
    lo, hi = zc_bracket(a, b, branch)
    g = lambda chi: math.sin(chi * a) + chi * b * math.cos(chi * a)  # noqa: E731
    return _bisect(g, lo, hi, g(lo), rtol=4 * np.finfo(float).eps)


def solve_zc_V0(a: float, b: float, branch: int = 0, units: UnitSystem | None = None) -> float:
    """Step height giving a straight-line (zero-curvature) state at ``E = V0``."""
    units = units or UnitSystem()
    chi = solve_zc_chi(a, b, branch)
    return (units.hbar * chi) ** 2 / (2.0 * units.mass)


def tuned_well(a: float, b: float, branch: int = 0, units: UnitSystem | None = None) -> AsymmetricWell:
    units = units or UnitSystem()
    return AsymmetricWell(a, b, solve_zc_V0(a, b, branch, units), units)


@dataclass(frozen=True)
class ZcWave:
    """``A sin(chi x)`` on ``[0, a]`` joined to ``C (1 - (x - a)/b)`` on ``[a, a + b]``."""

    well: AsymmetricWell
    A: float
    C: float
    chi: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        a, b = self.well.a, self.well.b
        if np.any(x < 0) or np.any(x > a + b):
            raise ZcDomainError(f"x must lie in [0, {a + b}]")
        out = np.where(x <= a, self.A * np.sin(self.chi * x), self.C * (1.0 - (x - a) / b))
        return float(out) if out.ndim == 0 else out

    def step_mismatch(self) -> tuple[float, float]:
        """(value gap, slope gap) between the two pieces at the step edge."""
        a, b = self.well.a, self.well.b
        value = self.A * math.sin(self.chi * a) - self.C
        slope = self.A * self.chi * math.cos(self.chi * a) + self.C / b
        return value, slope


def zc_wave(well: AsymmetricWell) -> ZcWave:
    if well.V0 <= 0:
        raise UntunedWell("a zero-curvature state needs a positive step height")
    scale = max(1.0, well.chi * well.b)
    if abs(threshold_residual(well)) > TUNING_TOL * scale:
        raise UntunedWell(
            f"well is not tuned: sin(chi a) + chi b cos(chi a) = {threshold_residual(well):.3g}; "
            "use solve_zc_V0 for the step height"
        )
    chi, a, b = well.chi, well.a, well.b
    s = math.sin(chi * a)
    left = 0.5 * a - math.sin(2.0 * chi * a) / (4.0 * chi)
    right = s * s * b / 3.0
    A = 1.0 / math.sqrt(left + right)
    return ZcWave(well, A, A * s, chi)


def region_probabilities(wave: ZcWave) -> tuple[float, float]:
    """Probability on the flat floor and on the step, in closed form."""
    chi, a, b = wave.chi, wave.well.a, wave.well.b
    p1 = wave.A**2 * (0.5 * a - math.sin(2.0 * chi * a) / (4.0 * chi))
    p2 = wave.C**2 * b / 3.0
    return p1, p2
