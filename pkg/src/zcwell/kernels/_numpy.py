"""Pure-numpy kernels, used when numba is unavailable or disabled.

Sturm counts are vectorised across shifts so that all wanted eigenvalues are
bisected together; the row recurrence itself stays sequential.
"""
import numpy as np

_EPS = np.finfo(np.float64).eps


def _pivmin(e, corner):
    return 1e-290 * max(1.0, e * e, corner * corner)


def _chain_counts(d, e, lams, pivmin):
    # negative pivots of the LDL^T factorisation of tridiag(e, d, e) - lam
    e2 = e * e
    count = np.zeros(lams.shape, dtype=np.int64)
    q = np.ones_like(lams)
    for i in range(d.shape[0]):
        q = d[i] - lams - (e2 / q if i else 0.0)
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def _solve_batch(diag, e, rhs, pivmin):
    """Solve ``tridiag(e, diag[m], e) y[m] = rhs`` for every row ``m`` with partial pivoting."""
    m, n = diag.shape
    dd = diag.copy()
    dl = np.full((m, n - 1), e)
    du = np.full((m, n - 1), e)
    du2 = np.zeros((m, max(n - 2, 0)))
    x = np.tile(np.asarray(rhs, dtype=float), (m, 1))
    for i in range(n - 1):
        swap = np.abs(dd[:, i]) < np.abs(dl[:, i])
        piv = np.where(swap, dl[:, i], dd[:, i])
        piv = np.where(np.abs(piv) < pivmin, pivmin, piv)
        other = np.where(swap, dd[:, i], dl[:, i])
        fact = other / piv
        # rows i and i + 1 after an optional swap
        r_i1 = np.where(swap, dd[:, i + 1], du[:, i])
        r_i2 = np.where(swap, du[:, i + 1], 0.0) if i < n - 2 else None
        low1 = np.where(swap, du[:, i], dd[:, i + 1])
        low2 = np.where(swap, 0.0, du[:, i + 1]) if i < n - 2 else None
        dd[:, i] = piv
        du[:, i] = r_i1
        dd[:, i + 1] = low1 - fact * r_i1
        if i < n - 2:
            du2[:, i] = r_i2
            du[:, i + 1] = low2 - fact * r_i2
        xi, xi1 = x[:, i].copy(), x[:, i + 1].copy()
        x[:, i] = np.where(swap, xi1, xi)
        x[:, i + 1] = np.where(swap, xi, xi1) - fact * x[:, i]
    dd[:, n - 1] = np.where(np.abs(dd[:, n - 1]) < pivmin, pivmin, dd[:, n - 1])
    x[:, n - 1] /= dd[:, n - 1]
    if n > 1:
        x[:, n - 2] = (x[:, n - 2] - du[:, n - 2] * x[:, n - 1]) / dd[:, n - 2]
    for i in range(n - 3, -1, -1):
        x[:, i] = (x[:, i] - du[:, i] * x[:, i + 1] - du2[:, i] * x[:, i + 2]) / dd[:, i]
    return x


def _counts(d, e, periodic, corner, lams, pivmin):
    lams = np.asarray(lams, dtype=float)
    n = d.shape[0]
    if not periodic:
        return _chain_counts(d, e, lams, pivmin)
    # cyclic: inertia of the leading block plus the sign of its Schur complement,
    # which comes from a pivoted solve (the bordered LDL^T recurrence is unstable)
    count = _chain_counts(d[: n - 1], e, lams, pivmin)
    b = np.zeros(n - 1)
    b[0] += corner
    b[n - 2] += e
    scale = np.max(np.abs(d)) + 2.0 * abs(e) + abs(corner)
    y = _solve_batch(d[None, : n - 1] - lams[:, None], e, b, _EPS * scale)
    schur = d[n - 1] - lams - y @ b
    count += schur <= 0
    return count


def sturm_count(d, e, periodic, corner, lam):
    return int(_counts(d, e, periodic, corner, np.array([lam]), _pivmin(e, corner))[0])


def bisect_lowest(d, e, periodic, corner, k, lo, hi, abstol):
    pivmin = _pivmin(e, corner)
    target = np.arange(1, k + 1)
    a = np.full(k, float(lo))
    b = np.full(k, float(hi))
    for _ in range(300):
        width = b - a
        tol = np.maximum(abstol, 2.0 * _EPS * np.maximum(np.abs(a), np.abs(b)))
        mid = 0.5 * (a + b)
        active = (width > tol) & (mid > a) & (mid < b)
        if not active.any():
            break
        c = _counts(d, e, periodic, corner, mid[active], pivmin)
        upper = c >= target[active]
        idx = np.flatnonzero(active)
        b[idx[upper]] = mid[active][upper]
        a[idx[~upper]] = mid[active][~upper]
    return 0.5 * (a + b)


def _tridiag_solve(dl, dd, du, b, pivmin):
    n = dd.shape[0]
    du2 = np.zeros(max(n - 2, 0))
    swap = np.zeros(max(n - 1, 0), dtype=bool)
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
            du[i], dd[i + 1] = dd[i + 1], du[i] - fact * dd[i + 1]
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du[i + 1]
            swap[i] = True
    if abs(dd[n - 1]) < pivmin:
        dd[n - 1] = pivmin
    x = np.array(b, dtype=float)
    for i in range(n - 1):
        if swap[i]:
            x[i], x[i + 1] = x[i + 1], x[i] - dl[i] * x[i + 1]
        else:
            x[i + 1] -= dl[i] * x[i]
    x[n - 1] /= dd[n - 1]
    if n > 1:
        x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i]
    return x


def solve_shifted(d, e, periodic, corner, lam, rhs):
    n = d.shape[0]
    pivmin = max(_EPS * (np.max(np.abs(d)) + 2.0 * abs(e) + abs(corner)), 1e-290)
    off = np.full(n - 1, e)
    diag = d - lam
    if not periodic or corner == 0.0:
        return _tridiag_solve(off.copy(), diag.copy(), off.copy(), rhs, pivmin)
    gamma = -diag[0] if diag[0] != 0.0 else 1.0
    dmod = diag.copy()
    dmod[0] -= gamma
    dmod[-1] -= corner * corner / gamma
    y = _tridiag_solve(off.copy(), dmod.copy(), off.copy(), rhs, pivmin)
    u = np.zeros(n)
    u[0], u[-1] = gamma, corner
    z = _tridiag_solve(off.copy(), dmod.copy(), off.copy(), u, pivmin)
    vy = y[0] + corner * y[-1] / gamma
    vz = z[0] + corner * z[-1] / gamma
    denom = 1.0 + vz
    if abs(denom) < pivmin:
        denom = pivmin
    return y - (vy / denom) * z


def _theta_minus_sin(t):
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < 1.0
    ts = np.where(small, t, 0.0)
    t2 = ts * ts
    term = ts * t2 / 6.0
    series = term.copy()
    for m in range(2, 12):
        term = term * (-t2 / ((2 * m) * (2 * m + 1)))
        series += term
    return np.where(small, series, t - np.sin(t))


def ft_cusp_sum(ks, xs, jumps):
    """``-(1/k^2) sum_j jumps_j exp(-i k xs_j)`` for each k.

    Small ``|k|`` uses a cancellation-free form that assumes ``sum(jumps) == 0``
    and ``sum(jumps * xs) == 0``, which holds for any wave vanishing at both walls.
    """
    ks = np.asarray(ks, dtype=float)
    xs = np.asarray(xs, dtype=float)
    jumps = np.asarray(jumps, dtype=float)
    theta = np.outer(ks, xs)
    xmax = np.max(np.abs(xs)) if xs.size else 0.0
    near = np.abs(ks) * xmax <= 2.0
    s = np.sin(0.5 * theta)
    re = np.where(near, (-2.0 * s * s) @ jumps, np.cos(theta) @ jumps)
    im = np.where(near, _theta_minus_sin(theta) @ jumps, -(np.sin(theta) @ jumps))
    inv = -1.0 / (ks * ks)
    return (re + 1j * im) * inv
