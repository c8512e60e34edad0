"""Finite-difference eigensolver used to cross-check designs and partner spectra.

The grid Hamiltonian is symmetric tridiagonal (plus corner couplings for
periodic wells). Eigenvalues come from Sturm-sequence bisection and
eigenvectors from inverse iteration; both live in :mod:`zcwell.kernels`.
A delta spike of strength ``g`` on node ``j`` adds ``g/h`` to the diagonal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence, Union

import numpy as np

from . import kernels
from .asymwell import AsymmetricWell
from .core import Boundary, PiecewiseLinearWave, UnitSystem
from .designer import DeltaArrayPotential, DeltaSpike, ZcDesign
from .errors import EigensolverError, OffGridSpike, ZcDomainError
from .susy import IsospectralPair, PartnerPotential

_EPS = np.finfo(float).eps
MIN_INTERIOR = 15

Potential = Union[DeltaArrayPotential, PartnerPotential, AsymmetricWell]


@dataclass(frozen=True)
class Grid:
    """Uniform grid with spacing ``width / (n_interior + 1)``.

    Dirichlet grids hold the interior nodes ``j = 1..n``; periodic grids also
    keep the seam node ``j = 0``.
    """

    n_interior: int
    width: float = 1.0
    periodic: bool = False

    def __post_init__(self):
        if self.n_interior < MIN_INTERIOR:
            raise ZcDomainError(f"grid needs at least {MIN_INTERIOR} interior nodes")
        if not self.width > 0:
            raise ZcDomainError("grid width must be positive")

    @property
    def h(self) -> float:
        return self.width / (self.n_interior + 1)

    @property
    def nodes(self) -> np.ndarray:
        start = 0 if self.periodic else 1
        return self.h * np.arange(start, self.n_interior + 1)

    def node_index(self, x: float) -> Optional[int]:
        """Index into :attr:`nodes` of the node at ``x``, or None when off-grid."""
        j = x / self.h
        jr = round(j)
        if abs(j - jr) > 1e-8 * max(1.0, abs(j)):
            return None
        return int(jr) - (0 if self.periodic else 1)


@dataclass(frozen=True)
class TridiagonalHamiltonian:
    diag: np.ndarray
    offdiag: float
    grid: Grid
    periodic_corner: Optional[float] = None

    @property
    def size(self) -> int:
        return self.diag.shape[0]

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.diag))) + 2.0 * abs(self.offdiag)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        if self.periodic_corner is not None:
            out[0] += self.periodic_corner * v[-1]
            out[-1] += self.periodic_corner * v[0]
        return out

    def dense(self) -> np.ndarray:
        n = self.size
        m = np.diag(self.diag) + self.offdiag * (np.eye(n, k=1) + np.eye(n, k=-1))
        if self.periodic_corner is not None:
            m[0, -1] += self.periodic_corner
            m[-1, 0] += self.periodic_corner
        return m


def compatible_n_interior(positions: Sequence[float], width: float, minimum: int = MIN_INTERIOR) -> int:
    """Smallest ``n_interior >= minimum`` putting every position on a node."""
    dens = [Fraction(p / width).limit_denominator(10**6).denominator for p in positions]
    step = reduce(lambda a, b: a * b // math.gcd(a, b), dens, 1)
    return step * math.ceil((minimum + 1) / step) - 1


def _spike_diag(spikes: Sequence[DeltaSpike], grid: Grid, diag: np.ndarray) -> None:
    for s in spikes:
        j = grid.node_index(s.position)
        if j is None:
            n_ok = compatible_n_interior([sp.position for sp in spikes], grid.width)
            raise OffGridSpike(
                f"spike at x={s.position} is not on a node of the n_interior={grid.n_interior} grid; "
                f"smallest compatible n_interior is {n_ok}"
            )
        diag[j] += s.strength / grid.h


def build_hamiltonian(potential: Potential, grid: Union[Grid, int],
                      units: UnitSystem | None = None) -> TridiagonalHamiltonian:
    """Assemble the finite-difference Hamiltonian of ``potential`` on ``grid``.

    ``grid`` may be given as an interior node count. Units default to the
    potential's own (asymmetric wells) or to ``hbar = m = 1``.
    """
    if isinstance(potential, AsymmetricWell):
        units = potential.units
        width, periodic = potential.width, False
    else:
        units = units or UnitSystem()
        width = potential.domain.width
        periodic = potential.domain.boundary is Boundary.PERIODIC
    if isinstance(grid, (int, np.integer)):
        grid = Grid(int(grid), width, periodic)
    if abs(grid.width - width) > 1e-12 * width or grid.periodic != periodic:
        raise ZcDomainError("grid does not match the potential's domain")
    h = grid.h
    x = grid.nodes
    kin = units.hbar**2 / units.mass / h**2
    diag = np.full(x.shape, kin)
    if isinstance(potential, AsymmetricWell):
        step = np.where(x > potential.a, potential.V0, 0.0)
        step[np.abs(x - potential.a) <= 1e-12 * width] = 0.5 * potential.V0
        diag += step
    else:
        if isinstance(potential, PartnerPotential):
            diag += potential.smooth_at(x)
        _spike_diag(potential.spikes, grid, diag)
    off = -0.5 * kin
    return TridiagonalHamiltonian(diag, off, grid, off if periodic else None)


def _eigenvalue_bounds(H: TridiagonalHamiltonian) -> tuple[float, float]:
    r = 2.0 * abs(H.offdiag) + (abs(H.periodic_corner) if H.periodic_corner else 0.0)
    return float(np.min(H.diag)) - r, float(np.max(H.diag)) + r


def lowest_eigenvalues(H: TridiagonalHamiltonian, k: int) -> np.ndarray:
    if not 1 <= k <= H.size:
        raise ZcDomainError(f"k must lie in [1, {H.size}]")
    lo, hi = _eigenvalue_bounds(H)
    abstol = 2.0 * _EPS * max(abs(lo), abs(hi))
    periodic = H.periodic_corner is not None
    corner = H.periodic_corner or 0.0
    return kernels.bisect_lowest(H.diag, H.offdiag, periodic, corner, k, lo, hi, abstol)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    big = np.abs(v) > 1e-12 * np.max(np.abs(v))
    first = int(np.argmax(big))
    return -v if v[first] < 0 else v


def lowest_eigenpairs(H: TridiagonalHamiltonian, k: int, max_iter: int = 8,
                      retries: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """The ``k`` smallest eigenvalues (ascending) and eigenvectors (rows).

    Bisection brackets every eigenvalue; each returned value is the Rayleigh
    quotient of its converged vector, which also repairs the slightly looser
    bisection counts of the cyclic (periodic) matrix. Vectors are normalized
    so that ``sum(v**2) * h == 1`` and their first non-negligible component
    is positive.

    Raises:
        EigensolverError: inverse iteration failed to converge after retries
            with a perturbed shift.
    """
    vals = lowest_eigenvalues(H, k)
    n = H.size
    periodic = H.periodic_corner is not None
    corner = H.periodic_corner or 0.0
    norm = H.norm
    tol = 1e3 * _EPS * norm
    # accepted once iteration stops improving: the cyclic solve has a higher floor
    loose = math.sqrt(_EPS) * norm
    cluster = 1e-3 * norm
    rng = np.random.default_rng(12345)
    vecs = np.empty((k, n))
    for j, lam in enumerate(vals):
        partners = [i for i in range(j) if abs(vals[i] - lam) <= cluster]
        v = None
        for attempt in range(retries + 1):
            shift = lam + attempt * 64.0 * _EPS * norm
            x = rng.standard_normal(n)
            x /= np.linalg.norm(x)
            prev = math.inf
            for _ in range(max_iter):
                x = kernels.solve_shifted(H.diag, H.offdiag, periodic, corner, shift, x)
                for i in partners:
                    x -= (vecs[i] @ x) / (vecs[i] @ vecs[i]) * vecs[i]
                nx = np.linalg.norm(x)
                if not np.isfinite(nx) or nx == 0.0:
                    break
                x /= nx
                hx = H.matvec(x)
                mu = float(x @ hx)
                res = float(np.linalg.norm(hx - mu * x))
                if res <= tol or (res <= loose and res > 0.5 * prev):
                    v = x
                    break
                prev = res
            if v is not None:
                break
        if v is None:
            raise EigensolverError(
                f"inverse iteration for eigenvalue {lam:.12g} (index {j}) did not converge"
            )
        vals[j] = mu
        vecs[j] = _fix_sign(v) / math.sqrt(H.grid.h)
    order = np.argsort(vals, kind="stable")
    return vals[order], vecs[order]


def _orders(errors: Sequence[float], hs: Sequence[float]) -> list[float]:
    out = []
    for (e1, h1), (e2, h2) in zip(zip(errors, hs), zip(errors[1:], hs[1:])):
        if e1 == 0.0 or e2 == 0.0:
            out.append(float("nan"))
        else:
            out.append(math.log(abs(e1) / abs(e2)) / math.log(h1 / h2))
    return out


@dataclass
class SpectralReport:
    ladder: list[int]
    eigenvalues: list[list[float]]
    zero_mode: list[float]
    zero_mode_index: list[int]
    overlaps: list[float]
    convergence_orders: list[float]
    roundoff_floor: list[float]
    passed: bool = True
    failures: list[str] = field(default_factory=list)


def verify_potential(potential: Potential, wave: PiecewiseLinearWave, ladder: Sequence[int],
                     k: int = 3, units: UnitSystem | None = None) -> SpectralReport:
    """Solve ``potential`` on each ladder rung and locate the state matching ``wave``.

    The matched state is the eigenvector with the largest overlap with the
    sampled wave; its eigenvalue is the zero-mode estimate. A rung passes
    when that estimate shrinks along the ladder or already sits at the
    round-off floor of the eigensolver.
    """
    ladder = [int(n) for n in ladder]
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ZcDomainError("ladder sizes must be strictly increasing")
    evs, zm, zi, ov, floors, hs = [], [], [], [], [], []
    for n in ladder:
        H = build_hamiltonian(potential, n, units)
        vals, vecs = lowest_eigenpairs(H, min(k, H.size))
        sample = np.interp(H.grid.nodes, wave.x, wave.psi)
        sample = sample / math.sqrt(sample @ sample * H.grid.h)
        overlaps = np.abs(vecs @ sample) * H.grid.h
        j = int(np.argmax(overlaps))
        evs.append([float(v) for v in vals])
        zm.append(float(vals[j]))
        zi.append(j)
        ov.append(float(min(overlaps[j], 1.0)))
        floors.append(64.0 * _EPS * H.norm)
        hs.append(H.grid.h)
    report = SpectralReport(ladder, evs, zm, zi, ov, _orders(zm, hs), floors)
    for i in range(1, len(ladder)):
        if abs(zm[i]) > floors[i] and abs(zm[i]) >= abs(zm[i - 1]):
            report.passed = False
            report.failures.append(
                f"|E0| did not decrease from n={ladder[i - 1]} ({zm[i - 1]:.3e}) "
                f"to n={ladder[i]} ({zm[i]:.3e})"
            )
    return report


def verify_design(design: ZcDesign, ladder: Sequence[int], k: int = 3) -> SpectralReport:
    return verify_potential(design.potential, design.wave, ladder, k, design.units)


def richardson(values: Sequence[float], hs: Sequence[float], nominal_order: float = 2.0,
               floor: float = 0.0) -> tuple[float, float]:
    """Two-point Richardson extrapolation with the order measured from the last three rungs.

    Returns (extrapolated value, order used). Falls back to ``nominal_order``
    when fewer than three rungs are given or the measured order is not
    credible; differences below ``floor`` count as converged.
    """
    if len(values) == 1:
        return float(values[0]), float("nan")
    v1, v2 = values[-2], values[-1]
    if abs(v2 - v1) <= floor:
        return float(v2), float("nan")
    order = nominal_order
    if len(values) >= 3:
        v0 = values[-3]
        d1, d2 = v1 - v0, v2 - v1
        if d1 != 0.0 and d2 != 0.0 and d1 / d2 > 0:
            measured = math.log(d1 / d2) / math.log(hs[-2] / hs[-1])
            if 0.5 <= measured <= 6.0:
                order = measured
    r = hs[-2] / hs[-1]
    return float(v2 + (v2 - v1) / (r**order - 1.0)), float(order)


@dataclass
class IsospectralReport:
    ladder: list[int]
    shift: int
    original_levels: list[float]
    partner_levels: list[float]
    gaps: list[float]
    relative_gaps: list[float]
    orders: list[float]
    level_passed: list[bool]
    zero_mode: Optional[float]
    zero_mode_unmatched: Optional[bool]
    rtol: float

    @property
    def passed(self) -> bool:
        return all(self.level_passed) and self.zero_mode_unmatched is not False


def _extrapolated_levels(potential, ladder, count, units):
    raw, hs, floors = [], [], []
    for n in ladder:
        H = build_hamiltonian(potential, n, units)
        raw.append(lowest_eigenvalues(H, count))
        hs.append(H.grid.h)
        floors.append(64.0 * _EPS * H.norm)
    raw = np.array(raw)
    out, orders = [], []
    for lvl in range(count):
        v, p = richardson(raw[:, lvl], hs, floor=max(floors))
        out.append(v)
        orders.append(p)
    return out, orders


def isospectral_check(pair: IsospectralPair, k: int, ladder: Sequence[int],
                      rtol: float = 0.01, shift: int = 1) -> IsospectralReport:
    """Compare partner level ``n`` with original level ``n + shift`` after extrapolation.

    With ``shift = 1`` the original's lowest level is the zero mode that
    should have no counterpart in the partner spectrum.
    """
    ladder = [int(n) for n in ladder]
    orig, o_orders = _extrapolated_levels(pair.original, ladder, k + shift, pair.units)
    part, p_orders = _extrapolated_levels(pair.partner, ladder, k, pair.units)
    gaps, rel, ok = [], [], []
    for n in range(k):
        gap = abs(part[n] - orig[n + shift])
        scale = max(abs(part[n]), abs(orig[n + shift]))
        r = gap / scale if scale > 0 else 0.0
        gaps.append(gap)
        rel.append(r)
        ok.append(r <= rtol)
    zero_mode, unmatched = None, None
    if shift >= 1:
        zero_mode = orig[0]
        nearest = min(abs(zero_mode - e) for e in part)
        unmatched = nearest > rtol * max(abs(part[0]), 1e-300)
    return IsospectralReport(
        ladder, shift, orig, part, gaps, rel, p_orders, ok, zero_mode, unmatched, rtol
    )
