import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from fusedglrt import dist
from fusedglrt.detector import statistic_fused
from fusedglrt.model import FusedModel, SensorModel
from fusedglrt.specfun import GParams, delta_expand, eval_g, invert_argument, power_shift
from fusedglrt.specfun.classical import reg_inc_beta

reals = st.floats(-5, 5, allow_nan=False)
settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")


@given(st.integers(1, 40), reals)
def test_delta_expand_shape(k, a):
    d = delta_expand(k, a)
    assert len(d) == k
    assert np.allclose(np.diff(d), 1 / k)
    assert math.isclose(np.mean(d), (a + (k - 1) / 2) / k, abs_tol=1e-12)


@given(st.lists(reals, min_size=0, max_size=3), st.lists(reals, min_size=1, max_size=3), reals)
def test_identity_algebra(a, b, t):
    try:
        p = GParams(len(b), 0, tuple(a), tuple(b))
    except ValueError:
        return
    twice = invert_argument(invert_argument(p))
    assert np.allclose(twice.a, p.a, atol=1e-12) and np.allclose(twice.b, p.b, atol=1e-12)
    back = power_shift(power_shift(p, t), -t)
    assert np.allclose(back.a, p.a) and np.allclose(back.b, p.b)


@given(st.floats(1.2, 6), st.floats(-0.9, 0.9), st.floats(0.02, 0.98))
def test_beta_kernel_power_shift(a, b, x):
    p = GParams(1, 0, (a + b,), (b,))
    lhs = x ** 0.3 * eval_g(p, x)
    assert math.isclose(eval_g(power_shift(p, 0.3), x), lhs, rel_tol=1e-8)


@given(st.floats(0.1, 30), st.floats(0.1, 30), st.floats(0, 1))
def test_inc_beta_reflection(a, b, x):
    assert math.isclose(reg_inc_beta(a, b, x), 1 - reg_inc_beta(b, a, 1 - x), abs_tol=1e-13)


@given(st.integers(1, 12), st.integers(1, 12),
       st.lists(st.floats(1.0, 1e4), min_size=2, max_size=10))
def test_single_null_cdf_monotone(c, d, zs):
    z = np.sort(np.asarray(zs))
    F = dist.cdf_h0_single(z, c, d)
    assert np.all(np.diff(F) >= 0) and np.all((F >= 0) & (F <= 1))


@given(st.integers(0, 2 ** 32 - 1), st.floats(1e-8, 1e8), st.floats(1e-8, 1e8))
def test_fused_statistic_scale_invariance(seed, ax, ay):
    rng = np.random.default_rng(seed)
    mx = SensorModel(rng.standard_normal((5, 2)), np.eye(5), np.zeros(2))
    my = SensorModel(rng.standard_normal((7, 1)), np.eye(7), np.zeros(1))
    f = FusedModel(mx, my)
    x, y = rng.standard_normal(5), rng.standard_normal(7)
    ref = statistic_fused(x, y, f).value
    assert math.isclose(statistic_fused(ax * x, ay * y, f).value, ref, rel_tol=1e-10)
    assert ref >= 1.0


@given(st.integers(2, 12), st.integers(2, 12), st.integers(1, 11), st.integers(1, 11))
def test_resonance_matches_brute_force(N, M, cx, cy):
    if cx >= N or cy >= M:
        return
    p = dist.FusedDistParams(N, M, cx, N - cx, cy, M - cy)
    brute = any(M * (2 * k + cx) == N * (2 * m + cy)
                for k in range(4 * N * M) for m in range(4 * N * M))
    assert dist.resonance_check(p) == brute
