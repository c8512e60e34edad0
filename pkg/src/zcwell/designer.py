"""Critical delta strengths for zero-energy straight-line eigenstates.

A kink in a straight-line wave is an exact zero-energy solution once a delta
spike of strength ``g = (hbar^2/2m) * (slope_right - slope_left) / psi(c)``
sits on it. Everything here is closed-form segment algebra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import Boundary, PiecewiseLinearWave, UnitSystem, WellDomain, normalize
from .errors import CuspAtNode, PeriodicInfeasible, ZcDomainError

# relative size below which a slope jump counts as float noise
SLOPE_JUMP_RTOL = 1e-12


@dataclass(frozen=True)
class DeltaSpike:
    position: float
    strength: float


@dataclass(frozen=True)
class DeltaArrayPotential:
    domain: WellDomain
    spikes: tuple[DeltaSpike, ...] = ()

    def __post_init__(self):
        spikes = tuple(self.spikes)
        object.__setattr__(self, "spikes", spikes)
        pos = [s.position for s in spikes]
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise ZcDomainError("spike positions must be strictly increasing")
        lo_ok = (lambda x: x > 0) if self.domain.boundary is Boundary.DIRICHLET else (lambda x: x >= 0)
        for x in pos:
            if not (lo_ok(x) and x < self.domain.width):
                raise ZcDomainError(f"spike at x={x} lies outside the well interior")

    @property
    def positions(self) -> np.ndarray:
        return np.array([s.position for s in self.spikes], dtype=float)

    @property
    def strengths(self) -> np.ndarray:
        return np.array([s.strength for s in self.spikes], dtype=float)


@dataclass(frozen=True)
class ZcDesign:
    """A normalized straight-line wave and the spike array that makes it a zero mode."""

    wave: PiecewiseLinearWave
    potential: DeltaArrayPotential
    units: UnitSystem = field(default_factory=UnitSystem)

    @property
    def spikes(self) -> tuple[DeltaSpike, ...]:
        return self.potential.spikes


@dataclass(frozen=True)
class Cusp:
    index: int  # knot index; 0 means the periodic seam
    position: float
    jump: float  # slope_right - slope_left
    psi: float


@dataclass(frozen=True)
class FeasibilityReport:
    ok: bool
    boundary: Boundary
    n_cusps: int
    seam_jump: float
    reasons: tuple[str, ...] = ()


def _slope_tolerance(slopes: np.ndarray) -> float:
    return SLOPE_JUMP_RTOL * float(np.max(np.abs(slopes))) if slopes.size else 0.0


def find_cusps(wave: PiecewiseLinearWave, include_seam: bool | None = None) -> list[Cusp]:
    """List every knot where the slope jumps by more than float noise.

    The seam ``x = 0 == width`` is included for periodic waves (or when
    ``include_seam`` is forced), using slope(first) - slope(last).
    """
    s = wave.slopes
    tol = _slope_tolerance(s)
    cusps = []
    if include_seam is None:
        include_seam = wave.domain.boundary is Boundary.PERIODIC
    if include_seam:
        jump = float(s[0] - s[-1])
        if abs(jump) > tol:
            cusps.append(Cusp(0, 0.0, jump, float(wave.psi[0])))
    for i in range(1, len(wave.x) - 1):
        jump = float(s[i] - s[i - 1])
        if abs(jump) > tol:
            cusps.append(Cusp(i, float(wave.x[i]), jump, float(wave.psi[i])))
    return cusps


def validate_bc(wave: PiecewiseLinearWave, boundary: Boundary | str,
                allow_seam_spike: bool = True) -> FeasibilityReport:
    """Check whether ``wave`` can be a zero mode under ``boundary``.

    Never raises; problems are collected in ``reasons``.
    """
    boundary = Boundary(boundary)
    reasons = []
    s = wave.slopes
    seam_jump = float(s[0] - s[-1])
    if boundary is Boundary.DIRICHLET:
        if wave.psi[0] != 0.0 or wave.psi[-1] != 0.0:
            reasons.append("wave does not vanish at the walls")
        n_cusps = len(find_cusps(wave, include_seam=False))
        return FeasibilityReport(not reasons, boundary, n_cusps, seam_jump, tuple(reasons))

    cusps = find_cusps(wave, include_seam=True)
    if wave.psi[0] != wave.psi[-1]:
        reasons.append("psi(0) != psi(width): wave is not continuous around the ring")
    seam = [c for c in cusps if c.index == 0]
    if seam:
        if not allow_seam_spike:
            reasons.append("slopes differ across the seam and no seam spike is allowed")
        elif seam[0].psi == 0.0:
            reasons.append("slopes differ across the seam where psi vanishes")
    if len(cusps) == 1:
        reasons.append("a single cusp cannot close continuously under periodic boundaries")
    return FeasibilityReport(not reasons, boundary, len(cusps), seam_jump, tuple(reasons))


def critical_strengths(wave: PiecewiseLinearWave, units: UnitSystem | None = None,
                       allow_seam_spike: bool = True) -> ZcDesign:
    """Spike strengths that turn ``wave`` into an exact zero-energy eigenstate.

    Strengths depend only on the wave's shape. The returned design carries the
    normalized wave.

    Raises:
        CuspAtNode: a slope jump sits on a knot with psi == 0.
        PeriodicInfeasible: the periodic seam cannot be closed.
    """
    units = units or UnitSystem()
    if wave.domain.boundary is Boundary.PERIODIC:
        report = validate_bc(wave, Boundary.PERIODIC, allow_seam_spike)
        if not report.ok:
            raise PeriodicInfeasible("; ".join(report.reasons))
    spikes = []
    k = units.kinetic_prefactor
    for c in find_cusps(wave):
        if c.psi == 0.0:
            raise CuspAtNode(
                f"slope jumps by {c.jump:.6g} at x={c.position} where psi = 0; "
                "no finite delta strength matches it"
            )
        spikes.append(DeltaSpike(c.position, k * c.jump / c.psi))
    return ZcDesign(normalize(wave), DeltaArrayPotential(wave.domain, tuple(spikes)), units)


def triangle_strength(c: float, width: float = 1.0, units: UnitSystem | None = None) -> float:
    """Closed-form strength for a single kink at ``c``: -hbar^2 a / (2m c (a - c))."""
    units = units or UnitSystem()
    return -units.kinetic_prefactor * width / (c * (width - c))


def triangle_design(c: float, width: float = 1.0, units: UnitSystem | None = None) -> ZcDesign:
    if not 0.0 < c < width:
        raise ZcDomainError(
            f"kink position c={c} must lie strictly inside (0, {width}); "
            "the critical strength diverges as c approaches either wall"
        )
    amp = math.sqrt(3.0 / width)
    wave = PiecewiseLinearWave(WellDomain(width), [(0.0, 0.0), (c, amp), (width, 0.0)])
    return critical_strengths(wave, units)


def twin_waves(width: float = 1.0, boundary: Boundary = Boundary.DIRICHLET):
    """Symmetric plateau and antisymmetric zig-zag waves with kinks at a/3, 2a/3."""
    dom = WellDomain(width, boundary)
    A = math.sqrt(9.0 / (5.0 * width))
    B = math.sqrt(3.0 / width)
    x1, x2 = width / 3.0, 2.0 * width / 3.0
    sym = PiecewiseLinearWave(dom, [(0.0, 0.0), (x1, A), (x2, A), (width, 0.0)])
    anti = PiecewiseLinearWave(dom, [(0.0, 0.0), (x1, B), (x2, -B), (width, 0.0)])
    return sym, anti


def twin_designs(width: float = 1.0, units: UnitSystem | None = None) -> tuple[ZcDesign, ZcDesign]:
    sym, anti = twin_waves(width)
    return critical_strengths(sym, units), critical_strengths(anti, units)


def discretize_smooth(samples: Sequence[Sequence[float]], width: float = 1.0,
                      units: UnitSystem | None = None) -> ZcDesign:
    """Approximate a smooth zero mode by a chain of straight segments.

    ``samples`` are ``(x, psi0(x))`` pairs on a uniform interior grid
    ``x_i = i * width / (N + 1)``. The walls are added as zero knots and every
    kink gets its exact critical strength; per unit length these approach
    ``(hbar^2/2m) psi0''/psi0`` as N grows.
    """
    pts = np.asarray(samples, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise ZcDomainError("need at least two (x, psi) interior samples")
    n = len(pts)
    h = width / (n + 1)
    expected = h * np.arange(1, n + 1)
    if not np.allclose(pts[:, 0], expected, rtol=0, atol=1e-9 * width):
        raise ZcDomainError(f"samples must sit on the uniform interior grid with spacing {h}")
    knots = [(0.0, 0.0)] + [tuple(p) for p in pts] + [(width, 0.0)]
    return critical_strengths(PiecewiseLinearWave(WellDomain(width), knots), units)
