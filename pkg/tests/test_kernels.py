import os
import subprocess
import sys

import numpy as np
import pytest

from zcwell import kernels

nb = kernels.numba_kernels
np_k = kernels.numpy_kernels
needs_numba = pytest.mark.skipif(nb is None, reason="numba unavailable")


def random_tridiagonal(rng, n):
    return rng.normal(size=n) * 3.0, float(rng.normal())


@needs_numba
@pytest.mark.parametrize("periodic", [False, True])
def test_backends_agree(periodic):
    rng = np.random.default_rng(3)
    for n in (16, 57, 300):
        d, e = random_tridiagonal(rng, n)
        corner = e if periodic else 0.0
        lo, hi = d.min() - 3 * abs(e), d.max() + 3 * abs(e)
        for lam in rng.uniform(lo, hi, 5):
            assert nb.sturm_count(d, e, periodic, corner, lam) == np_k.sturm_count(d, e, periodic, corner, lam)
        a = nb.bisect_lowest(d, e, periodic, corner, 4, lo, hi, 1e-13)
        b = np_k.bisect_lowest(d, e, periodic, corner, 4, lo, hi, 1e-13)
        assert np.allclose(a, b, atol=1e-12)
        rhs = rng.normal(size=n)
        x1 = nb.solve_shifted(d, e, periodic, corner, 0.1234, rhs)
        x2 = np_k.solve_shifted(d, e, periodic, corner, 0.1234, rhs)
        assert np.allclose(x1, x2, rtol=1e-9)


@pytest.mark.parametrize("mod", [m for m in (np_k, nb) if m is not None])
@pytest.mark.parametrize("periodic", [False, True])
def test_bisection_against_lapack(mod, periodic):
    rng = np.random.default_rng(11)
    n = 40
    d, e = random_tridiagonal(rng, n)
    corner = e if periodic else 0.0
    m = np.diag(d) + e * (np.eye(n, k=1) + np.eye(n, k=-1))
    if periodic:
        m[0, -1] = m[-1, 0] = e
    ref = np.linalg.eigvalsh(m)[:6]
    got = mod.bisect_lowest(d, e, periodic, corner, 6, d.min() - 3 * abs(e), d.max() + 3 * abs(e), 1e-13)
    assert np.allclose(got, ref, atol=1e-11)


@pytest.mark.parametrize("mod", [m for m in (np_k, nb) if m is not None])
@pytest.mark.parametrize("periodic", [False, True])
def test_shifted_solve_residual(mod, periodic):
    rng = np.random.default_rng(5)
    n = 50
    d, e = random_tridiagonal(rng, n)
    m = np.diag(d) + e * (np.eye(n, k=1) + np.eye(n, k=-1))
    if periodic:
        m[0, -1] = m[-1, 0] = e
    rhs = rng.normal(size=n)
    x = mod.solve_shifted(d, e, periodic, e if periodic else 0.0, 0.37, rhs)
    assert np.allclose((m - 0.37 * np.eye(n)) @ x, rhs, atol=1e-9)


@pytest.mark.parametrize("mod", [m for m in (np_k, nb) if m is not None])
def test_cusp_sum(mod):
    # triangle peaked at 0.3: jumps sum to zero and carry no first moment
    xs = np.array([0.0, 0.3, 1.0])
    jumps = np.array([1 / 0.3, -1 / 0.3 - 1 / 0.7, 1 / 0.7])
    ks = np.array([0.5, -4.0, 17.0, 1e-3])
    ref = np.array([np.sum(-jumps * np.exp(-1j * k * xs)) / k**2 for k in ks])
    assert np.allclose(mod.ft_cusp_sum(ks, xs, jumps), ref, rtol=1e-12)


def test_env_flag_selects_numpy():
    env = dict(os.environ, ZCWELL_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from zcwell import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_batched_pivoted_solve():
    rng = np.random.default_rng(21)
    n, e = 30, 1.0
    diag = rng.normal(scale=0.3, size=(6, n))  # small diagonals force row swaps
    rhs = rng.normal(size=n)
    x = np_k._solve_batch(diag, e, rhs, 1e-300)
    for row, sol in zip(diag, x):
        m = np.diag(row) + e * (np.eye(n, k=1) + np.eye(n, k=-1))
        assert np.allclose(m @ sol, rhs, atol=1e-9)


@pytest.mark.parametrize("mod", [m for m in (np_k, nb) if m is not None])
def test_cyclic_counts_at_degenerate_pairs(mod):
    from zcwell.core import Boundary, WellDomain
    from zcwell.designer import DeltaArrayPotential
    from zcwell.oracle import build_hamiltonian
    H = build_hamiltonian(DeltaArrayPotential(WellDomain(1.0, Boundary.PERIODIC)), 600)
    ref = np.linalg.eigvalsh(H.dense())[:7]
    lo, hi = H.diag.min() - 4 * abs(H.offdiag), H.diag.max() + 4 * abs(H.offdiag)
    got = mod.bisect_lowest(H.diag, H.offdiag, True, H.offdiag, 7, lo, hi, 4 * np.finfo(float).eps * hi)
    assert np.allclose(got, ref, rtol=0, atol=64 * np.finfo(float).eps * H.norm)
