"""JIT-compiled inner loops. Signatures mirror :mod:`zcwell.kernels._numpy`."""
import math

import numpy as np
from numba import njit

_EPS = np.finfo(np.float64).eps


@njit(cache=True)
def _pivmin(d, e, corner):
    return 1e-290 * max(1.0, e * e, corner * corner)


@njit(cache=True)
def _chain_count(d, e, m, lam, pivmin):
    # negative pivots of the LDL^T factorisation of the leading m x m block minus lam
    e2 = e * e
    count = 0
    q = 1.0
    for i in range(m):
        q = d[i] - lam - (e2 / q if i > 0 else 0.0)
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def _count_one(d, e, periodic, corner, lam, pivmin):
    n = d.shape[0]
    if not periodic:
        return _chain_count(d, e, n, lam, pivmin)
    # cyclic: inertia of the leading block plus the sign of its Schur complement,
    # which comes from a pivoted solve (the bordered LDL^T recurrence is unstable)
    count = _chain_count(d, e, n - 1, lam, pivmin)
    b = np.zeros(n - 1)
    b[0] += corner
    b[n - 2] += e
    off = np.full(n - 2, e)
    scale = np.max(np.abs(d)) + 2.0 * abs(e) + abs(corner)
    y = _tridiag_solve(off.copy(), d[: n - 1] - lam, off.copy(), b, _EPS * scale)
    schur = d[n - 1] - lam - np.dot(y, b)
    if schur <= 0.0:
        count += 1
    return count


@njit(cache=True)
def sturm_count(d, e, periodic, corner, lam):
    """Number of eigenvalues strictly below ``lam``."""
    return _count_one(d, e, periodic, corner, lam, _pivmin(d, e, corner))


@njit(cache=True)
def bisect_lowest(d, e, periodic, corner, k, lo, hi, abstol):
    """The ``k`` smallest eigenvalues by Sturm bisection inside ``[lo, hi]``."""
    pivmin = _pivmin(d, e, corner)
    out = np.empty(k)
    for j in range(k):
        a = lo
        b = hi
        if j > 0 and out[j - 1] > a:
            a = out[j - 1] - 2.0 * abstol
        for _ in range(300):
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            if b - a <= max(abstol, 2.0 * _EPS * max(abs(a), abs(b))):
                break
            if _count_one(d, e, periodic, corner, mid, pivmin) >= j + 1:
                b = mid
            else:
                a = mid
        out[j] = 0.5 * (a + b)
    return out


@njit(cache=True)
def _tridiag_solve(dl, dd, du, b, pivmin):
    # LU with partial pivoting on a general tridiagonal matrix (copies are modified)
    n = dd.shape[0]
    du2 = np.zeros(max(n - 2, 0))
    swap = np.zeros(max(n - 1, 0), dtype=np.bool_)
    for i in range(n - 1):
        if abs(dd[i]) >= abs(dl[i]):
            if abs(dd[i]) < pivmin:
                dd[i] = pivmin
            fact = dl[i] / dd[i]
            dl[i] = fact
            dd[i + 1] -= fact * du[i]
        else:
            fact = dd[i] / dl[i]
            dd[i] = dl[i]
            dl[i] = fact
            tmp = du[i]
            du[i] = dd[i + 1]
            dd[i + 1] = tmp - fact * dd[i + 1]
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du[i + 1]
            swap[i] = True
    if abs(dd[n - 1]) < pivmin:
        dd[n - 1] = pivmin
    x = b.copy()
    for i in range(n - 1):
        if swap[i]:
            tmp = x[i]
            x[i] = x[i + 1]
            x[i + 1] = tmp - dl[i] * x[i + 1]
        else:
            x[i + 1] -= dl[i] * x[i]
    x[n - 1] /= dd[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i]
    return x


@njit(cache=True)
def solve_shifted(d, e, periodic, corner, lam, rhs):
    """Solve ``(H - lam I) x = rhs``; cyclic corners via Sherman-Morrison."""
    n = d.shape[0]
    pivmin = max(_EPS * (np.max(np.abs(d)) + 2.0 * abs(e) + abs(corner)), 1e-290)
    off = np.full(n - 1, e)
    diag = d - lam
    if not periodic or corner == 0.0:
        return _tridiag_solve(off.copy(), diag.copy(), off.copy(), rhs, pivmin)
    gamma = -diag[0] if diag[0] != 0.0 else 1.0
    dmod = diag.copy()
    dmod[0] -= gamma
    dmod[n - 1] -= corner * corner / gamma
    y = _tridiag_solve(off.copy(), dmod.copy(), off.copy(), rhs, pivmin)
    u = np.zeros(n)
    u[0] = gamma
    u[n - 1] = corner
    z = _tridiag_solve(off.copy(), dmod.copy(), off.copy(), u, pivmin)
    vy = y[0] + corner * y[n - 1] / gamma
    vz = z[0] + corner * z[n - 1] / gamma
    denom = 1.0 + vz
    if abs(denom) < pivmin:
        denom = pivmin
    return y - (vy / denom) * z


@njit(cache=True)
def _theta_minus_sin(t):
    if abs(t) < 1.0:
        t2 = t * t
        term = t * t2 / 6.0
        total = term
        for m in range(2, 12):
            term *= -t2 / ((2 * m) * (2 * m + 1))
            total += term
        return total
    return t - math.sin(t)


@njit(cache=True)
def ft_cusp_sum(ks, xs, jumps):
    """Fourier transform of a compactly supported piecewise-linear function.

    ``xs``/``jumps`` list every slope discontinuity (walls included); the
    result is ``-(1/k^2) * sum_j jumps_j exp(-i k x_j)``. For small ``|k|``
    the two vanishing moment sums are subtracted analytically.
    """
    out = np.empty(ks.shape[0], dtype=np.complex128)
    xmax = 0.0
    for j in range(xs.shape[0]):
        xmax = max(xmax, abs(xs[j]))
    for i in range(ks.shape[0]):
        k = ks[i]
        re = 0.0
        im = 0.0
        if abs(k) * xmax <= 2.0:
            for j in range(xs.shape[0]):
                t = k * xs[j]
                s = math.sin(0.5 * t)
                re += jumps[j] * (-2.0 * s * s)
                im += jumps[j] * _theta_minus_sin(t)
        else:
            for j in range(xs.shape[0]):
                t = k * xs[j]
                re += jumps[j] * math.cos(t)
                im -= jumps[j] * math.sin(t)
        inv = -1.0 / (k * k)
        out[i] = complex(re * inv, im * inv)
    return out
