import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from lorentzkit import _kernels_py, kernels
from lorentzkit.lie_algebra import builtin

try:
    from lorentzkit import _kernels
except ImportError:
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")


def brute_jacobi(c):
    d = c.shape[0]
    worst = 0.0
    for i in range(d):
        for j in range(d):
            for k in range(d):
                jk = c[j, k]
                ki = c[k, i]
                ij = c[i, j]
                # [e_i, [e_j, e_k]] = sum_l c[j,k,l] [e_i, e_l]
                v = jk @ c[i] + ki @ c[j] + ij @ c[k]
                worst = max(worst, float(np.max(np.abs(v))))
    return worst


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_env_forces_fallback():
    env = dict(os.environ, LORENTZKIT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from lorentzkit import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("name", ["so(1,3)", "sl(3,R)", "so(2,3)"])
def test_jacobi_reference_matches_brute_force(name):
    c = builtin(name).algebra.c
    assert abs(_kernels_py.jacobi_residual(c)[0] - brute_jacobi(c)) < 1e-12


def test_jacobi_detects_violation():
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
    c[1, 2, 1], c[2, 1, 1] = 1.0, -1.0
    r, triple = _kernels_py.jacobi_residual(c)
    assert r == pytest.approx(brute_jacobi(c))
    assert r > 0.5
    assert len(triple) == 3


@needs_ext
@given(arrays(np.float64, (4, 4, 4), elements=st.floats(-2, 2)))
def test_jacobi_backends_agree(c):
    c = c - c.transpose(1, 0, 2)
    a = _kernels_py.jacobi_residual(c)
    b = _kernels.jacobi_residual(c)
    assert abs(a[0] - b[0]) <= 1e-12 * max(1.0, a[0])


@needs_ext
@given(st.integers(0, 2**16), st.integers(1, 3))
def test_nearest_backends_agree(seed, d):
    rng = np.random.default_rng(seed)
    q = rng.standard_normal((17, d))
    g = rng.standard_normal((203, d))
    i1, d1 = _kernels_py.nearest_points(q, g)
    i2, d2 = _kernels.nearest_points(q, g)
    assert np.array_equal(i1, i2)
    assert np.allclose(d1, d2, atol=1e-12)


def test_nearest_reference_brute_force(rng):
    q = rng.standard_normal((9, 2))
    g = rng.standard_normal((50, 2))
    idx, dist = _kernels_py.nearest_points(q, g, chunk=4)
    full = np.linalg.norm(q[:, None, :] - g[None, :, :], axis=2)
    assert np.array_equal(idx, np.argmin(full, axis=1))
    assert np.allclose(dist, np.min(full, axis=1))
