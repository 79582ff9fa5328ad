import math

import numpy as np
import pytest
from scipy import linalg

from fusedglrt.detector import (TestStatistic, decide, log_statistic_fused_batch,
                                sr_decomposition, statistic_fused, statistic_single)
from fusedglrt.errors import DegenerateSampleError
from fusedglrt.model import FusedModel, SensorModel, projector

E1 = SensorModel(np.array([[1.0], [0.0], [0.0]]), np.eye(3), [1.0])


def random_sensor(rng, n=6, k=2):
    A = rng.standard_normal((n, n))
    return SensorModel(rng.standard_normal((n, k)), A @ A.T + n * np.eye(n), np.ones(k))


def test_sr_hand_computed():
    S, R = sr_decomposition(np.array([2.0, 1.0, 1.0]), E1)
    assert (S, R) == (pytest.approx(2.0), pytest.approx(4.0))
    assert statistic_single([2.0, 1.0, 1.0], E1).value == pytest.approx(3.0)


def test_sr_signal_subspace_sample(rng):
    m = random_sensor(rng)
    obs = m.H @ rng.standard_normal(m.params)
    S, R = sr_decomposition(obs, m)
    assert S <= 1e-12 * R


def test_sr_total_quadratic_form(rng):
    m = random_sensor(rng)
    obs = rng.standard_normal(m.samples)
    S, R = sr_decomposition(obs, m)
    assert S + R == pytest.approx(obs @ linalg.solve(m.R, obs), rel=1e-10)
    rows = rng.standard_normal((5, m.samples))
    Sb, Rb = sr_decomposition(rows, m)
    assert Sb.shape == (5,) and Sb[2] == pytest.approx(sr_decomposition(rows[2], m)[0])


def test_statistic_single_noise_subspace_sample():
    assert statistic_single([0.0, 1.0, -2.0], E1).value == pytest.approx(1.0)


def test_statistic_single_degenerate():
    with pytest.raises(DegenerateSampleError):
        statistic_single([1.0, 0.0, 0.0], E1)


@pytest.mark.parametrize("alpha", [1e-6, 1.0, 1e6])
def test_scale_invariance(rng, alpha):
    m = random_sensor(rng)
    obs = rng.standard_normal(m.samples)
    ref = statistic_single(obs, m).value
    assert statistic_single(alpha * obs, m).value == pytest.approx(ref, rel=1e-10)


def test_fused_exponents():
    # Z_x = 3 with N = 2, Z_y = 2 with M = 4 gives 3 * 2**2
    mx = SensorModel(np.array([[1.0], [0.0]]), np.eye(2), [1.0])
    my = SensorModel(np.array([[1.0], [0.0], [0.0], [0.0]]), np.eye(4), [1.0])
    f = FusedModel(mx, my)
    st = statistic_fused([math.sqrt(2.0), 1.0], [1.0, 1.0, 0.0, 0.0], f)
    assert st.value == pytest.approx(12.0, rel=1e-12)
    assert (st.exponent_n, st.exponent_m) == (1.0, 2.0)
    assert statistic_fused([0.0, 1.0], [0.0, 0.0, 1.0, 1.0], f).value == pytest.approx(1.0)


def test_fused_paths_agree(rng):
    mx, my = random_sensor(rng, 6, 2), random_sensor(rng, 9, 3)
    f = FusedModel(mx, my)
    x, y = rng.standard_normal(6), rng.standard_normal(9)
    st = statistic_fused(x, y, f)
    zx = statistic_single(x, mx).value
    zy = statistic_single(y, my).value
    assert st.log_value == pytest.approx(3 * math.log(zx) + 4.5 * math.log(zy), rel=1e-12)
    # direct ratio of quadratic forms
    def ratio(o, m):
        P, Pp = projector(m)
        w = m.whiten(o)
        return (w @ w) / (w @ Pp @ w)
    assert st.value == pytest.approx(ratio(x, mx) ** 3 * ratio(y, my) ** 4.5, rel=1e-10)
    batch = log_statistic_fused_batch(np.vstack([x, x]), np.vstack([y, y]), f)
    np.testing.assert_allclose(batch, st.log_value, rtol=1e-12)
    for a, b in [(1e-6, 1e3), (7.0, 0.01)]:
        assert statistic_fused(a * x, b * y, f).value == pytest.approx(st.value, rel=1e-10)


def test_fused_monotone(rng):
    mx, my = random_sensor(rng, 6, 2), random_sensor(rng, 9, 3)
    f = FusedModel(mx, my)
    y = rng.standard_normal(9)
    # growing the signal component of x raises Z_x and the fused value
    base = rng.standard_normal(6)
    vals = [statistic_fused(base + t * mx.H[:, 0], y, f).value for t in (0, 2, 4, 8)]
    zx = [statistic_single(base + t * mx.H[:, 0], mx).value for t in (0, 2, 4, 8)]
    assert np.all(np.diff(np.argsort(zx)) == np.diff(np.argsort(vals)))


def test_batch_degenerate_rows_are_infinite():
    f = FusedModel(E1, E1)
    out = log_statistic_fused_batch([[1.0, 0, 0], [1.0, 1.0, 0]], [[1.0, 1.0, 0], [1.0, 1.0, 0]], f)
    assert math.isinf(out[0]) and math.isfinite(out[1])


def test_decide():
    assert decide(TestStatistic(3.0, 1.0), 2.0) == "H1"
    assert decide(TestStatistic(1.0, 1.0), 1.0) == "H0"
    assert decide(1.0, 1.5) == "H0"
    assert decide(math.inf, 1e300) == "H1"
    with pytest.raises(ValueError):
        decide(2.0, 0.5)


def test_decision_invariant_under_root_transform(rng):
    N, M = 6, 16
    e = N / 2 + M / 2
    for v, g in zip(np.exp(rng.uniform(0, 20, 500)), np.exp(rng.uniform(0, 20, 500))):
        assert decide(v, g) == decide(v ** (1 / e), g ** (1 / e))
