import math

import numpy as np
import pytest

from fusedglrt import dist, verify
from fusedglrt.dist import FusedDistParams
from fusedglrt.model import make_fused_model
from fusedglrt.verify import McConfig


@pytest.fixture(scope="module")
def fused():
    return make_fused_model(6, 2, 16, 3, 5.0, 5.0)


def test_config_validation():
    assert McConfig(50).chunk == 50
    assert McConfig(10 ** 6).chunk == 10_000
    with pytest.raises(ValueError):
        McConfig(0)
    with pytest.raises(ValueError):
        McConfig(10, chunk=11)
    with pytest.raises(ValueError):
        McConfig(10, seed=-1)
    assert McConfig(25, chunk=10).n_chunks == 3


def test_single_trial_reproducible(fused):
    a = verify.mc_statistic_samples(fused, "H0", McConfig(1, seed=99))
    b = verify.mc_statistic_samples(fused, "H0", McConfig(1, seed=99))
    c = verify.mc_statistic_samples(fused, "H0", McConfig(1, seed=100))
    assert a.shape == (1,) and a[0] == b[0] and a[0] != c[0]


def test_threads_do_not_change_samples(fused):
    cfg = McConfig(20_000, seed=5, chunk=3_000)
    serial = verify.mc_statistic_samples(fused, "H1", cfg, workers=1)
    parallel = verify.mc_statistic_samples(fused, "H1", cfg, workers=4)
    np.testing.assert_array_equal(serial, parallel)
    assert np.all(np.diff(serial) >= 0)


def test_scale_invariance_of_null_law():
    n = 20_000
    runs = []
    for s2 in (0.1, 1.0, 10.0):
        f = make_fused_model(6, 2, 16, 3, 0.0, 0.0, sigma2_x=s2, sigma2_y=1 / s2)
        runs.append(verify.mc_statistic_samples(f, "H0", McConfig(n, seed=3)))
    # same streams, so the scale drops out exactly
    for r in runs[1:]:
        np.testing.assert_allclose(r, runs[0], rtol=1e-9)


def test_large_signal_separates(fused):
    strong = make_fused_model(6, 2, 16, 3, 400.0, 400.0)
    h0 = verify.mc_statistic_samples(fused, "H0", McConfig(2000, seed=1))
    h1 = verify.mc_statistic_samples(strong, "H1", McConfig(2000, seed=2))
    assert h1[0] > 10 * np.median(h0)


def test_noise_energy_is_chi_square(fused):
    s = verify.mc_sensor_samples(fused, "H0", McConfig(50_000, seed=4))
    assert s.degenerate == 0 and s.log_zx.size == 50_000


def test_ks_trivial_cases():
    n = 1000
    x = (np.arange(1, n + 1) - 0.5) / n
    assert verify.ks_statistic(x, lambda t: t) <= 1 / n
    assert verify.ks_statistic(x, lambda t: np.zeros_like(t)) == 1.0
    with pytest.raises(ValueError):
        verify.ks_statistic([], lambda t: t)


def test_ks_uniforms_over_seeds():
    n = 10 ** 5
    crit = verify.ks_critical(n)
    fails = 0
    for seed in range(20):
        u = np.sort(np.random.Generator(np.random.Philox(seed)).random(n))
        fails += verify.ks_statistic(u, lambda t: t) > crit
    assert fails <= 1


def test_interpolated_cdf_accuracy(fused):
    p = verify.dist_params(fused).central()
    s = verify.mc_statistic_samples(fused, "H0", McConfig(30_000, seed=8))
    F, check = verify.interpolated_cdf(lambda z: dist.cdf_h0_fused(z, p), s)
    idx = np.linspace(0, s.size - 1, 200).astype(int)
    np.testing.assert_allclose(F(s[idx]), dist.cdf_h0_fused(s[idx], p), atol=1e-4)
    assert check < 1e-4
    assert F(np.array([0.5, 1.0]))[0] == 0.0


def test_oracle_closed_form():
    p = FusedDistParams(4, 4, 2, 2, 2, 2)
    assert verify.oracle_cdf_fused(1.0, p, "H0") == 0.0
    t = 0.5
    assert verify.oracle_cdf_fused(4.0, p, "H0") == pytest.approx(1 - (t - t * math.log(t)), abs=1e-10)
    assert verify.oracle_cdf_fused(np.array([4.0, 4.0]), p, "H0").shape == (2,)
    with pytest.raises(ValueError):
        verify.oracle_cdf_fused(4.0, p, "H2")


@pytest.mark.slow
def test_oracle_against_monte_carlo(base):
    n = 10 ** 6
    f = make_fused_model(6, 2, 16, 3, 0.0, 0.0)
    s = verify.mc_statistic_samples(f, "H0", McConfig(n, seed=0))
    F, check = verify.interpolated_cdf(lambda z: verify.oracle_cdf_fused(z, base, "H0"), s,
                                       nodes=300)
    assert check < 1e-4
    assert verify.ks_statistic(s, F) <= verify.ks_critical(n)


def test_rates_extremes(fused):
    r = verify.mc_rates(fused, 1.0, McConfig(2000, seed=0))
    assert r.pfa_hat == 1.0 and r.pd_hat == 1.0
    r = verify.mc_rates(fused, 1e200, McConfig(2000, seed=0))
    assert r.pfa_hat == 0.0 and r.pd_hat == 0.0
    with pytest.raises(ValueError):
        verify.mc_rates(fused, 0.5, McConfig(10))


def test_dist_params(fused):
    p = verify.dist_params(fused)
    assert (p.N, p.M, p.c_x, p.d_x, p.c_y, p.d_y) == (6, 16, 4, 2, 13, 3)
    assert p.lambda_x == pytest.approx(5.0)
