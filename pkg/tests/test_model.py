import json

import numpy as np
import pytest
from scipy import linalg

from fusedglrt.errors import ModelError
from fusedglrt.model import (FusedModel, SensorModel, chisq_params, load_fused_model,
                             make_fused_model, mle_sigma2, mle_theta, projector, simulate)


def random_sensor(rng, n=7, k=3, sigma2=1.0):
    H = rng.standard_normal((n, k))
    A = rng.standard_normal((n, n))
    R = A @ A.T + n * np.eye(n)
    return SensorModel(H, R, rng.standard_normal(k), sigma2)


def test_invariants_enforced(rng):
    with pytest.raises(ModelError):
        SensorModel(np.ones((3, 1)), np.diag([1.0, -1.0, 1.0]), [1.0])
    with pytest.raises(ModelError):
        SensorModel(np.ones((3, 2)), np.eye(3), [1.0, 1.0])  # rank 1
    with pytest.raises(ModelError):
        SensorModel(np.eye(3), np.eye(3), np.ones(3))  # no noise subspace
    with pytest.raises(ModelError):
        SensorModel(np.ones((3, 1)), np.eye(4), [1.0])
    with pytest.raises(ModelError):
        SensorModel(np.ones((3, 1)), np.eye(3), [1.0], sigma2=0.0)
    A = rng.standard_normal((3, 3))
    with pytest.raises(ModelError):
        SensorModel(np.ones((3, 1)), A, [1.0])


def test_projector_basis_column():
    m = SensorModel(np.array([[1.0], [0.0], [0.0]]), np.eye(3), [1.0])
    P, Pp = projector(m)
    np.testing.assert_allclose(P, np.diag([1.0, 0, 0]), atol=1e-15)
    np.testing.assert_allclose(Pp, np.diag([0.0, 1, 1]), atol=1e-15)


def test_projector_algebra(rng):
    m = random_sensor(rng)
    P, Pp = projector(m)
    for X in (P, Pp):
        np.testing.assert_allclose(X @ X, X, atol=1e-10)
        np.testing.assert_allclose(X, X.T, atol=1e-14)
    np.testing.assert_allclose(P @ Pp, 0, atol=1e-10)
    np.testing.assert_allclose(P + Pp, np.eye(m.samples), atol=1e-14)
    assert round(np.trace(P)) == m.params


def test_projector_closed_form(rng):
    m = random_sensor(rng)
    Rih = linalg.inv(linalg.sqrtm(m.R).real)
    # a symmetric square root gives a different (orthogonally similar) P;
    # compare the invariant quadratic forms instead
    P, _ = projector(m)
    Ps = Rih @ m.H @ linalg.inv(m.H.T @ linalg.inv(m.R) @ m.H) @ m.H.T @ Rih
    obs = rng.standard_normal(m.samples)
    w = m.whiten(obs)
    assert w @ P @ w == pytest.approx(obs @ Rih @ Ps @ Rih @ obs, rel=1e-10)


def test_mle_theta_mean():
    m = SensorModel(np.ones((4, 1)), np.eye(4), [0.0])
    assert mle_theta(m, [1.0, 2.0, 3.0, 4.0])[0] == pytest.approx(2.5)


def test_mle_theta_noiseless_and_normal_equations(rng):
    m = random_sensor(rng)
    t = rng.standard_normal(m.params)
    np.testing.assert_allclose(mle_theta(m, m.H @ t), t, rtol=1e-10)
    obs = rng.standard_normal(m.samples)
    th = mle_theta(m, obs)
    Ri = linalg.inv(m.R)
    np.testing.assert_allclose(m.H.T @ Ri @ (obs - m.H @ th), 0, atol=1e-10)
    ref = linalg.lstsq(linalg.cholesky(Ri) @ m.H, linalg.cholesky(Ri) @ obs)[0]
    np.testing.assert_allclose(th, ref, rtol=1e-10)


def test_mle_sigma2(rng):
    m = random_sensor(rng)
    zero = np.zeros(m.samples)
    assert mle_sigma2(m, zero, "H0") == 0.0 and mle_sigma2(m, zero, "H1") == 0.0
    obs = rng.standard_normal(m.samples)
    s0, s1 = mle_sigma2(m, obs, "H0"), mle_sigma2(m, obs, "H1")
    P, _ = projector(m)
    w = m.whiten(obs)
    assert s0 - s1 == pytest.approx(w @ P @ w / m.samples, rel=1e-10)
    assert s1 <= s0
    # observation orthogonal to the signal subspace
    m2 = SensorModel(np.array([[1.0], [0.0], [0.0]]), np.eye(3), [1.0])
    o = np.array([0.0, 2.0, -1.0])
    assert mle_sigma2(m2, o, "H0") == pytest.approx(mle_sigma2(m2, o, "H1"))
    with pytest.raises(ValueError):
        mle_sigma2(m2, o, "H2")


def test_chisq_params():
    m = SensorModel(np.ones((4, 1)), np.eye(4), [1.5])
    p = chisq_params(m, "H1")
    assert (p.c, p.d, p.lam) == (3, 1, pytest.approx(9.0))
    assert chisq_params(m, "H0").lam == 0.0


def test_chisq_lambda_quadratic_form(rng):
    m = random_sensor(rng, sigma2=2.5)
    ref = m.theta @ m.H.T @ linalg.inv(m.R) @ m.H @ m.theta / m.sigma2
    assert chisq_params(m, "H1").lam == pytest.approx(ref, rel=1e-10)


def test_chisq_lambda_reparameterization(rng):
    m = random_sensor(rng)
    A = rng.standard_normal((m.params, m.params)) + 3 * np.eye(m.params)
    m2 = SensorModel(m.H @ A, m.R, linalg.solve(A, m.theta), m.sigma2)
    assert chisq_params(m2, "H1").lam == pytest.approx(chisq_params(m, "H1").lam, rel=1e-10)


def test_make_fused_model_lambda():
    f = make_fused_model(6, 2, 16, 3, 5.0, 15.0, sigma2_x=0.3)
    assert (f.N, f.M) == (6, 16)
    assert chisq_params(f.sensor_x, "H1").lam == pytest.approx(5.0, rel=1e-12)
    assert chisq_params(f.sensor_y, "H1").lam == pytest.approx(15.0, rel=1e-12)
    assert (chisq_params(f.sensor_x, "H0").c, chisq_params(f.sensor_y, "H0").c) == (4, 13)


def test_simulate_noiseless_limit(rng):
    m = SensorModel(np.ones((4, 1)), np.eye(4), [2.0], sigma2=1e-30)
    x = simulate(m, "H1", rng, 3)
    np.testing.assert_allclose(x, 2.0, atol=1e-12)


def test_simulate_covariance(rng):
    n = 10 ** 5
    m = random_sensor(rng, n=4, k=1, sigma2=2.0)
    x = simulate(m, "H0", rng, n)
    C = x.T @ x / n
    target = m.sigma2 * m.R
    sd = np.sqrt((target ** 2 + np.outer(np.diag(target), np.diag(target))) / n)
    assert np.all(np.abs(C - target) < 4 * sd)


def test_simulate_noise_energy_mean(rng):
    from fusedglrt.detector import sr_decomposition
    n = 10 ** 5
    m = random_sensor(rng, n=9, k=2)
    S, _ = sr_decomposition(simulate(m, "H0", rng, n), m)
    c = m.samples - m.params
    assert abs(S.mean() - c) < 3 * np.sqrt(2 * c / n)


def test_config_round_trip(tmp_path):
    cfg = {
        "sensor_x": {"H": [[1.0], [1.0], [1.0]], "R": "identity", "theta": [0.5], "sigma2": 2.0},
        "sensor_y": {"H": [[1, 0], [0, 1], [1, 1], [0, 0]], "R": np.eye(4).tolist(),
                     "theta": [1.0, -1.0]},
    }
    path = tmp_path / "m.json"
    path.write_text(json.dumps(cfg))
    f = load_fused_model(path)
    assert isinstance(f, FusedModel)
    assert (f.N, f.M, f.sensor_x.sigma2, f.sensor_y.params) == (3, 4, 2.0, 2)
    bad = dict(cfg, sensor_x=dict(cfg["sensor_x"], extra=1))
    with pytest.raises(ModelError):
        FusedModel.from_dict(bad)
    with pytest.raises(ModelError):
        FusedModel.from_dict(dict(cfg, sensor_x=dict(cfg["sensor_x"], R="diagonal")))
