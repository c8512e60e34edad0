"""Units, well domains and piecewise-linear waveforms."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ZcDomainError


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ZcDomainError(f"hbar and mass must be positive, got {self.hbar}, {self.mass}")

    @property
    def kinetic_prefactor(self) -> float:
        """hbar^2 / 2m, the factor linking curvature to energy."""
        return self.hbar**2 / (2.0 * self.mass)


class Boundary(str, enum.Enum):
    DIRICHLET = "dirichlet"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class WellDomain:
    width: float = 1.0
    boundary: Boundary = Boundary.DIRICHLET

    def __post_init__(self):
        if not self.width > 0:
            raise ZcDomainError(f"well width must be positive, got {self.width}")
        object.__setattr__(self, "boundary", Boundary(self.boundary))


class Knot(NamedTuple):
    x: float
    psi: float


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.flags.writeable = False
    return arr


class PiecewiseLinearWave:
    """Continuous straight-line waveform through an ordered list of knots.

    The first knot sits at ``x = 0`` and the last at ``x = width``. Values
    between knots are defined by linear interpolation.
    """

    __slots__ = ("domain", "x", "psi")

    def __init__(self, domain: WellDomain, knots: Iterable[Sequence[float]]):
        pts = [(float(k[0]), float(k[1])) for k in knots]
        if len(pts) < 2:
            raise ZcDomainError("a wave needs at least the two endpoint knots")
        xs = np.array([p[0] for p in pts])
        ps = np.array([p[1] for p in pts])
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ps))):
            raise ZcDomainError("knot coordinates must be finite")
        if xs[0] != 0.0 or xs[-1] != domain.width:
            raise ZcDomainError(
                f"knots must start at x=0 and end at x=width={domain.width}, "
                f"got {xs[0]} and {xs[-1]}"
            )
        steps = np.diff(xs)
        if np.any(steps <= 0):
            bad = int(np.argmin(steps))
            raise ZcDomainError(
                f"knot x-values must be strictly increasing (knot {bad + 1} at x={xs[bad + 1]})"
            )
        if domain.boundary is Boundary.DIRICHLET and (ps[0] != 0.0 or ps[-1] != 0.0):
            raise ZcDomainError("Dirichlet waves must vanish at both walls")
        if domain.boundary is Boundary.PERIODIC and ps[0] != ps[-1]:
            raise ZcDomainError("periodic waves need psi(0) == psi(width)")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "x", _frozen(xs))
        object.__setattr__(self, "psi", _frozen(ps))

    def __setattr__(self, name, value):
        raise AttributeError("PiecewiseLinearWave is immutable")

    def __repr__(self):
        return f"PiecewiseLinearWave(domain={self.domain!r}, knots={self.knots!r})"

    def __eq__(self, other):
        if not isinstance(other, PiecewiseLinearWave):
            return NotImplemented
        return (
            self.domain == other.domain
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.psi, other.psi)
        )

    __hash__ = None

    @property
    def width(self) -> float:
        return self.domain.width

    @property
    def knots(self) -> tuple[Knot, ...]:
        return tuple(Knot(float(x), float(p)) for x, p in zip(self.x, self.psi))

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.x)

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.psi) / np.diff(self.x)

    def __call__(self, x):
        return eval_wave(self, x)

    def scaled(self, factor: float) -> "PiecewiseLinearWave":
        return PiecewiseLinearWave(self.domain, zip(self.x, factor * self.psi))

    def reflected(self) -> "PiecewiseLinearWave":
        """Mirror image about the well centre."""
        xs = self.width - self.x[::-1]
        xs[0], xs[-1] = 0.0, self.width
        return PiecewiseLinearWave(self.domain, zip(xs, self.psi[::-1]))

    def with_boundary(self, boundary: Boundary) -> "PiecewiseLinearWave":
        return PiecewiseLinearWave(WellDomain(self.width, boundary), zip(self.x, self.psi))


def eval_wave(wave: PiecewiseLinearWave, x):
    """Evaluate the wave at ``x`` (scalar or array) by linear interpolation.

    Raises:
        ZcDomainError: if any ``x`` lies outside ``[0, width]``.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0) or np.any(xa > wave.width) or np.any(np.isnan(xa)):
        raise ZcDomainError(f"x must lie in [0, {wave.width}]")
    out = np.interp(xa, wave.x, wave.psi)
    return float(out) if out.ndim == 0 else out


def norm_squared(wave: PiecewiseLinearWave) -> float:
    """Exact integral of psi^2 over the well, summed segment by segment."""
    p0, p1 = wave.psi[:-1], wave.psi[1:]
    return math.fsum(wave.lengths * (p0 * p0 + p0 * p1 + p1 * p1) / 3.0)


def normalize(wave: PiecewiseLinearWave) -> PiecewiseLinearWave:
    """Rescale to unit norm, preserving knot positions and amplitude ratios."""
    n2 = norm_squared(wave)
    if not n2 > 0:
        raise ZcDomainError("cannot normalize a wave with zero norm")
    if abs(n2 - 1.0) <= 4 * np.finfo(float).eps:
        return wave
    return wave.scaled(1.0 / math.sqrt(n2))
