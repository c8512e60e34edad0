"""Superpotential and supersymmetric partner of a nodeless zero-energy design.

On every segment the design wave is affine, ``psi = alpha + beta x``, so
``W = -(hbar/sqrt(2m)) beta / (alpha + beta x)`` and both partners are built
from segment data alone: ``V- = W^2 - (hbar/sqrt(2m)) W'`` gives back the spikes,
``V+ = W^2 + (hbar/sqrt(2m)) W'`` flips them and adds ``(hbar^2/m)/(x - x0)^2``
on each sloped segment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Boundary, PiecewiseLinearWave, UnitSystem, WellDomain
from .designer import DeltaArrayPotential, DeltaSpike, ZcDesign, _slope_tolerance
from .errors import NodeInInterior, ZcDomainError


@dataclass(frozen=True)
class SuperpotentialSegment:
    x_lo: float
    x_hi: float
    alpha: float
    beta: float
    pole: Optional[float]  # zero of the affine extension of psi; None when beta == 0

    def value(self, x, units: UnitSystem):
        x = np.asarray(x, dtype=float)
        return -units.hbar / math.sqrt(2.0 * units.mass) * self.beta / (self.alpha + self.beta * x)


@dataclass(frozen=True)
class SmoothSegment:
    """``K / (x - pole)^2`` on ``[x_lo, x_hi]``, or zero when ``pole`` is None."""

    x_lo: float
    x_hi: float
    pole: Optional[float] = None
    K: float = 0.0

    @property
    def zero(self) -> bool:
        return self.pole is None or self.K == 0.0

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if self.zero:
            return np.zeros_like(x)
        return self.K / (x - self.pole) ** 2


@dataclass(frozen=True)
class PartnerPotential:
    domain: WellDomain
    spikes: tuple[DeltaSpike, ...]
    smooth: tuple[SmoothSegment, ...]

    def smooth_at(self, x):
        """Smooth part at ``x``; at a segment boundary the two one-sided limits are averaged."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(xs)
        hits = np.zeros_like(xs)
        for seg in self.smooth:
            inside = (xs >= seg.x_lo) & (xs <= seg.x_hi)
            if seg.zero or not inside.any():
                hits += inside
                continue
            with np.errstate(divide="ignore"):
                out[inside] += seg.value(xs[inside])
            hits += inside
        out = np.divide(out, hits, out=np.zeros_like(out), where=hits > 0)
        return out if np.ndim(x) else float(out[0])


@dataclass(frozen=True)
class IsospectralPair:
    original: DeltaArrayPotential
    partner: PartnerPotential
    units: UnitSystem


def _signed_positive(wave: PiecewiseLinearWave) -> np.ndarray:
    if wave.domain.boundary is Boundary.PERIODIC:
        xs, interior = wave.x[:-1], wave.psi[:-1]
    else:
        xs, interior = wave.x[1:-1], wave.psi[1:-1]
    if interior.size == 0 or interior[0] == 0.0:
        raise NodeInInterior("wave vanishes inside the well")
    sign = 1.0 if interior[0] > 0 else -1.0
    bad = np.flatnonzero(sign * interior <= 0)
    if bad.size:
        raise NodeInInterior(
            f"wave vanishes or changes sign inside the well (at or before x={xs[bad[0]]:.6g}); "
            "a superpotential needs a nodeless ground state"
        )
    return sign * wave.psi


def superpotential(design: ZcDesign) -> list[SuperpotentialSegment]:
    wave = design.wave
    psi = _signed_positive(wave)
    segs = []
    for i in range(len(wave.x) - 1):
        x0, x1 = float(wave.x[i]), float(wave.x[i + 1])
        beta = (psi[i + 1] - psi[i]) / (x1 - x0)
        alpha = psi[i] - beta * x0
        pole = None if beta == 0.0 else float(-alpha / beta) + 0.0
        segs.append(SuperpotentialSegment(x0, x1, float(alpha), float(beta), pole))
    return segs


def susy_potentials(segments: list[SuperpotentialSegment], domain: WellDomain,
                    units: UnitSystem, sign: int) -> PartnerPotential:
    """``V = W^2 + sign * (hbar/sqrt(2m)) W'`` assembled from segment data.

    Jumps of ``W`` at interior knots turn ``W'`` into delta spikes; jumps
    below float noise are dropped.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    k = units.kinetic_prefactor
    betas = np.array([s.beta for s in segments])
    tol = _slope_tolerance(betas)
    spikes = []
    # W = -(hbar/sqrt(2m)) psi'/psi; its jump times sign*hbar/sqrt(2m) is -sign*k*dslope/psi
    bounds = list(range(1, len(segments)))
    periodic = domain.boundary is Boundary.PERIODIC
    if periodic:
        bounds = [0] + bounds
    for i in bounds:
        left = segments[i - 1]
        right = segments[i]
        jump = right.beta - left.beta
        if abs(jump) <= tol:
            continue
        x = right.x_lo
        psi_c = right.alpha + right.beta * x
        spikes.append(DeltaSpike(x, -sign * k * jump / psi_c))
    smooth = []
    for seg in segments:
        if seg.beta == 0.0:
            smooth.append(SmoothSegment(seg.x_lo, seg.x_hi))
        else:
            # W^2 and the smooth part of W' both equal k beta^2/psi^2
            smooth.append(SmoothSegment(seg.x_lo, seg.x_hi, seg.pole, (1 + sign) * k))
    return PartnerPotential(domain, tuple(spikes), tuple(smooth))


def partner_potential(design: ZcDesign) -> PartnerPotential:
    return susy_potentials(superpotential(design), design.wave.domain, design.units, +1)


def isospectral_pair(design: ZcDesign) -> IsospectralPair:
    if design.wave.domain.boundary is not Boundary.DIRICHLET:
        raise ZcDomainError("isospectral pairs are only built for Dirichlet wells")
    return IsospectralPair(design.potential, partner_potential(design), design.units)
