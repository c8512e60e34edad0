"""Closed-form observables of a zero-energy design.

Momentum-space amplitudes use the cusp-sum form: since ``psi''`` is a sum of
delta functions at the knots (walls included), its Fourier transform is
``phi(p) = -(hbar^2/p^2) / sqrt(2 pi hbar) * sum_j jump_j exp(-i p x_j / hbar)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import sici

from . import kernels
from .core import Boundary, PiecewiseLinearWave
from .designer import ZcDesign
from .errors import QuadratureError, ZcDomainError

# below this |p| (in units of hbar/a) phi(p) comes from its Taylor series
SMALL_P = 1e-4


@dataclass(frozen=True)
class EnergyBreakdown:
    potential: float
    kinetic_gradient: float
    kinetic_distributional: float
    total: float


@dataclass(frozen=True)
class MomentumSample:
    p: np.ndarray | float
    phi_re: np.ndarray | float
    phi_im: np.ndarray | float
    density: np.ndarray | float


@dataclass(frozen=True)
class MomentumMoments:
    mean_p: float
    p2: float
    delta_p: float
    p2_quadrature: Optional[float] = None
    norm_quadrature: Optional[float] = None
    cutoff: Optional[float] = None
    tail_bound: Optional[float] = None


def potential_expectation(design: ZcDesign) -> float:
    wave = design.wave
    pos = design.potential.positions
    if pos.size == 0:
        return 0.0
    psi_c = np.interp(pos, wave.x, wave.psi)
    return math.fsum(design.potential.strengths * psi_c**2)


def kinetic_expectation(design: ZcDesign) -> EnergyBreakdown:
    """Both kinetic-energy forms plus the potential term and their total.

    ``kinetic_gradient`` integrates ``|psi'|^2``; ``kinetic_distributional``
    contracts ``psi`` with the delta-function curvature at every knot.
    """
    wave = design.wave
    k = design.units.kinetic_prefactor
    s = wave.slopes
    grad = k * math.fsum(s * s * wave.lengths)
    terms = list(np.diff(s) * wave.psi[1:-1])
    if wave.domain.boundary is Boundary.PERIODIC:
        terms.append((s[0] - s[-1]) * wave.psi[0])
    dist = -k * math.fsum(terms)
    pot = potential_expectation(design)
    return EnergyBreakdown(pot, grad, dist, pot + grad)


def _cusp_sum_data(wave: PiecewiseLinearWave):
    if wave.psi[0] != 0.0 or wave.psi[-1] != 0.0:
        raise ZcDomainError("momentum-space formulas need a wave vanishing at both walls")
    s = np.concatenate(([0.0], wave.slopes, [0.0]))
    return wave.x, np.diff(s)


def _moments(wave: PiecewiseLinearWave, order: int) -> np.ndarray:
    # integral of x^n psi(x) dx for n = 0..order, segment by segment
    x0, x1 = wave.x[:-1], wave.x[1:]
    beta = wave.slopes
    alpha = wave.psi[:-1] - beta * x0
    out = np.empty(order + 1)
    for n in range(order + 1):
        seg = alpha * (x1 ** (n + 1) - x0 ** (n + 1)) / (n + 1)
        seg += beta * (x1 ** (n + 2) - x0 ** (n + 2)) / (n + 2)
        out[n] = math.fsum(seg)
    return out


def fourier_transform(wave: PiecewiseLinearWave, k) -> np.ndarray:
    """``integral psi(x) exp(-i k x) dx`` for an array of wavenumbers ``k``."""
    ks = np.atleast_1d(np.asarray(k, dtype=float))
    xs, jumps = _cusp_sum_data(wave)
    out = np.empty(ks.shape, dtype=complex)
    small = np.abs(ks) * wave.width < SMALL_P
    if np.any(~small):
        out[~small] = kernels.ft_cusp_sum(np.ascontiguousarray(ks[~small]), xs, jumps)
    if np.any(small):
        m = _moments(wave, 4)
        kk = ks[small]
        out[small] = sum((-1j * kk) ** n * m[n] / math.factorial(n) for n in range(5))
    return out


def momentum_wavefunction(design: ZcDesign, p) -> MomentumSample:
    hbar = design.units.hbar
    scalar = np.ndim(p) == 0
    pa = np.atleast_1d(np.asarray(p, dtype=float))
    phi = fourier_transform(design.wave, pa / hbar) / math.sqrt(2.0 * math.pi * hbar)
    re, im = phi.real, phi.imag
    dens = re * re + im * im
    if scalar:
        return MomentumSample(float(pa[0]), float(re[0]), float(im[0]), float(dens[0]))
    return MomentumSample(pa, re, im, dens)


def momentum_density(design: ZcDesign, p):
    return momentum_wavefunction(design, p).density


def envelope_constant(design: ZcDesign) -> float:
    """``C`` in the bound ``|phi(p)|^2 p^4 <= C``."""
    _, jumps = _cusp_sum_data(design.wave)
    return design.units.hbar**3 / (2.0 * math.pi) * float(np.sum(np.abs(jumps))) ** 2


def _cos_tail(n: int, omega: np.ndarray, P: float) -> np.ndarray:
    """``integral_P^inf cos(omega p) p^-n dp`` for ``n >= 2`` by integrating by parts."""
    omega = np.asarray(omega, dtype=float)
    pos = omega > 0
    z = omega * P
    si, ci = sici(np.where(pos, z, 1.0))
    c = -ci  # n = 1
    s = math.pi / 2 - si
    for m in range(2, n + 1):
        c, s = (
            np.cos(z) / ((m - 1) * P ** (m - 1)) - omega / (m - 1) * s,
            np.sin(z) / ((m - 1) * P ** (m - 1)) + omega / (m - 1) * c,
        )
    return np.where(pos, c, P ** (1 - n) / (n - 1))


def _tail(design: ZcDesign, n: int, P: float) -> float:
    # exact integral over |p| > P of hbar^3 |S(p)|^2 / (2 pi p^n)
    xs, jumps = _cusp_sum_data(design.wave)
    hbar = design.units.hbar
    omega = np.abs(xs[:, None] - xs[None, :]) / hbar
    weights = jumps[:, None] * jumps[None, :]
    return 2.0 * hbar**3 / (2.0 * math.pi) * math.fsum((weights * _cos_tail(n, omega, P)).ravel())


def adaptive_simpson(f, a: float, b: float, tol: float, panels: int = 16,
                     max_depth: int = 40, max_panels: int = 2_000_000) -> tuple[float, float]:
    """Integrate a vectorised ``f`` over ``[a, b]``; returns (value, error estimate).

    All panels of one refinement level are evaluated in a single call to ``f``.
    """
    edges = np.linspace(a, b, panels + 1)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    flo, fmid, fhi = np.split(f(np.concatenate((lo, mid, hi))), 3)
    whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
    span = b - a
    total, err = [], []
    for depth in range(max_depth):
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = np.split(f(np.concatenate((lm, rm))), 2)
        left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi)
        diff = left + right - whole
        done = np.abs(diff) <= 15.0 * tol * (hi - lo) / span
        total.append(left[done] + right[done] + diff[done] / 15.0)
        err.append(np.abs(diff[done]) / 15.0)
        keep = ~done
        if not keep.any():
            return math.fsum(np.concatenate(total)), math.fsum(np.concatenate(err))
        if depth == max_depth - 1 or 2 * int(keep.sum()) > max_panels:
            pending = float(np.sum(np.abs(diff[keep]))) / 15.0
            raise QuadratureError(
                f"adaptive Simpson did not converge on [{a}, {b}]: "
                f"{int(keep.sum())} panels unresolved, achieved error bound {pending:.3g}"
            )
        lo, mid, hi = lo[keep], mid[keep], hi[keep]
        flo, fmid, fhi = flo[keep], fmid[keep], fhi[keep]
        flm, frm, lm, rm = flm[keep], frm[keep], lm[keep], rm[keep]
        whole = np.concatenate((left[keep], right[keep]))
        lo, mid, hi = np.concatenate((lo, mid)), np.concatenate((lm, rm)), np.concatenate((mid, hi))
        flo, fmid, fhi = np.concatenate((flo, fmid)), np.concatenate((flm, frm)), np.concatenate((fmid, fhi))
    raise AssertionError("unreachable")


def momentum_moments(design: ZcDesign, tail_tolerance: float = 1e-6,
                     quadrature: bool = False, rtol: float = 1e-10) -> MomentumMoments:
    """Momentum mean, second moment and spread.

    ``<p^2>`` comes from ``2m <T>``. With ``quadrature=True`` it is also
    integrated numerically from ``|phi(p)|^2``: adaptive Simpson on
    ``[-P, P]``, with ``P`` chosen so the ``1/p^4`` envelope leaves less than
    ``tail_tolerance`` of probability outside, plus the closed-form tail
    beyond ``P``. The same pass checks the normalisation.
    """
    if not tail_tolerance > 0:
        raise ZcDomainError("tail_tolerance must be positive")
    units = design.units
    p2 = 2.0 * units.mass * kinetic_expectation(design).kinetic_gradient
    if not quadrature:
        return MomentumMoments(0.0, p2, math.sqrt(p2))

    C = envelope_constant(design)
    hbar, width = units.hbar, design.wave.width
    P = max((2.0 * C / (3.0 * tail_tolerance)) ** (1.0 / 3.0), 20.0 * hbar / width)
    panels = max(16, int(math.ceil(4.0 * P * width / (2.0 * math.pi * hbar))))

    def dens(p):
        return momentum_wavefunction(design, p).density

    norm_half, _ = adaptive_simpson(dens, 0.0, P, 0.5 * rtol, panels)
    p2_half, _ = adaptive_simpson(lambda p: p * p * dens(p), 0.0, P, 0.5 * rtol * p2, panels)
    norm = 2.0 * norm_half + _tail(design, 4, P)
    p2_quad = 2.0 * p2_half + _tail(design, 2, P)
    return MomentumMoments(
        mean_p=0.0,
        p2=p2,
        delta_p=math.sqrt(p2),
        p2_quadrature=p2_quad,
        norm_quadrature=norm,
        cutoff=P,
        tail_bound=2.0 * C / (3.0 * P**3),
    )
