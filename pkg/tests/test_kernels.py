import os
import subprocess
import sys

import numpy as np
import pytest

from fusedglrt import _backend
from fusedglrt import _kernels_py as py_k

c_k = pytest.importorskip("fusedglrt._kernels")


def test_backend_selected():
    assert _backend.BACKEND in ("compiled", "python")


def test_pure_python_switch():
    env = dict(os.environ, FUSEDGLRT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c",
                          "from fusedglrt import _backend, dist; print(_backend.BACKEND);"
                          "print(dist.cdf_h0_single(2.0, 2, 2))"],
                         env=env, capture_output=True, text=True, check=True).stdout.split()
    assert out[0] == "python"
    assert float(out[1]) == pytest.approx(0.5, abs=1e-14)


def test_lgamma_real_parity():
    x = np.concatenate([np.linspace(-30.3, 40.1, 997), -np.arange(6.0)])
    a, b = c_k.lgamma_real(x), py_k.lgamma_real(x)
    np.testing.assert_array_equal(a[1], b[1])
    fin = np.isfinite(b[0])
    np.testing.assert_allclose(a[0][fin], b[0][fin], rtol=1e-14, atol=1e-14)
    assert np.all(np.isinf(a[0][~fin]))


def test_lgamma_shift_parity():
    k = np.arange(-50, 50)
    for base in (-3.0000001, 0.25, 7.0):
        a, b = c_k.lgamma_shift(base, k), py_k.lgamma_shift(base, k)
        np.testing.assert_array_equal(a[1], b[1])
        np.testing.assert_allclose(a[0], b[0], rtol=1e-14)


def test_log_gamma_complex_parity():
    rng = np.random.default_rng(0)
    z = rng.uniform(-20, 20, 500) + 1j * rng.uniform(-20, 20, 500)
    np.testing.assert_allclose(c_k.log_gamma_complex(z), py_k.log_gamma_complex(z),
                               rtol=1e-13, atol=1e-13)
    with pytest.raises(ValueError):
        c_k.log_gamma_complex(np.array([-2.0 + 0j]))


def test_series_sum_parity():
    K = 200
    lc = -np.cumsum(np.log(np.arange(1, K + 1)))
    sign = np.where(np.arange(K) % 5 == 2, 0.0, np.where(np.arange(K) % 2, 1.0, -1.0))
    lc = np.concatenate([lc, lc[:30], lc[:10]])
    sign = np.concatenate([sign, sign[:30], np.zeros(10)])
    expo = np.concatenate([np.arange(K), 0.5 * np.arange(30), np.arange(10)]).astype(float)
    rel = np.full(lc.size, 1e-15)
    off = np.array([0, K, K + 30, K + 40])
    closed = np.array([False, True, False])
    lx = np.linspace(-2, 3, 301)
    a = c_k.series_sum(lc, sign, expo, rel, off, closed, lx, 1e-16, 20)
    b = py_k.series_sum(lc, sign, expo, rel, off, closed, lx, 1e-16, 20)
    va, vb = a[0] * np.exp(a[1]), b[0] * np.exp(b[1])
    np.testing.assert_allclose(va, vb, rtol=1e-11)
    np.testing.assert_allclose(a[2] * np.exp(a[1]), b[2] * np.exp(b[1]), rtol=1e-10)
    np.testing.assert_array_equal(a[3], b[3])
    # the all-zero open family can never be declared converged
    assert not a[3].any()
