"""Exact laws of the single-sensor and fused GLRT statistics.

Under H0 each ``1/Z`` is Beta(c/2, d/2) and the fused statistic has a
G^{0,M+N}_{M+N,M+N} density in ``z**2``. Under H1 the CDF is a pair of
descending power series in ``z**(-2/N)`` and ``z**(-2/M)`` whose
coefficients are products of G^{2,1}_{3,4} and G^{1,2}_{3,4} values at
``lambda/2``. Coefficients are independent of ``z`` and are cached.

Where a series cannot reach its tolerance (near ``z = 1`` or for strongly
cancelling coefficients) the value is recomputed by one-dimensional
quadrature over the single-sensor laws of this module.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np
from scipy import integrate, optimize

from . import _backend
from .errors import BracketError, NonConvergenceError, ResonanceError
from .specfun import (EvalPolicy, GParams, SeriesEvaluator, cdf_transform,
                      delta_expand, lgamma_sign, log_eval_g)
from .specfun.classical import beta_pdf, reg_inc_beta

Mode = Literal["fused", "single_x", "single_y"]

SERIES_ABS_TOL = 1e-8
MIN_TERMS = 20
# coefficient cost grows with k, and near z = 1 quadrature is cheaper
H1_MAX_TERMS = 1024
_QUAD_TOL = 1e-11
_POLICY = EvalPolicy()


@dataclass(frozen=True)
class FusedDistParams:
    """Sample sizes, degrees of freedom and noncentralities of both sensors."""

    N: int
    M: int
    c_x: int
    d_x: int
    c_y: int
    d_y: int
    lambda_x: float = 0.0
    lambda_y: float = 0.0

    def __post_init__(self):
        for name in ("N", "M", "c_x", "d_x", "c_y", "d_y"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.c_x + self.d_x != self.N or self.c_y + self.d_y != self.M:
            raise ValueError("need c_x + d_x = N and c_y + d_y = M")
        for name in ("lambda_x", "lambda_y"):
            v = float(getattr(self, name))
            if not v >= 0:
                raise ValueError(f"{name} must be nonnegative")
            object.__setattr__(self, name, v)

    @classmethod
    def default(cls, lambda_x=0.0, lambda_y=0.0, dof_literal=False):
        """N=6, M=16 with two and three unknown parameters.

        ``dof_literal`` swaps to c_x=2, c_y=3 (the other reading of the
        degrees of freedom).
        """
        if dof_literal:
            return cls(6, 16, 2, 4, 3, 13, lambda_x, lambda_y)
        return cls(6, 16, 4, 2, 13, 3, lambda_x, lambda_y)

    def with_lambdas(self, lambda_x, lambda_y):
        return FusedDistParams(self.N, self.M, self.c_x, self.d_x, self.c_y,
                               self.d_y, lambda_x, lambda_y)

    def central(self):
        return self.with_lambdas(0.0, 0.0)


def resonance_check(params: FusedDistParams) -> bool:
    """True when ``M(2k + c_x) = N(2m + c_y)`` has a solution with k, m >= 0.

    Solutions repeat with period ``N/g`` in ``k`` (``g = gcd(N, M)``), so a
    search over ``k < N*M`` is exhaustive.
    """
    N, M = params.N, params.M
    for k in range(N * M + 1):
        num = M * (2 * k + params.c_x) - N * params.c_y
        if num >= 0 and num % (2 * N) == 0:
            return True
    return False


def _as_array(z):
    """Flattened float copy of ``z`` plus its original shape (None for scalars)."""
    shape = None if np.ndim(z) == 0 else np.shape(z)
    return shape, np.asarray(z, dtype=float).ravel()


def _out(shape, arr):
    return float(arr[0]) if shape is None else arr.reshape(shape)


def _lgamma(x):
    return math.lgamma(x)


# ----------------------------------------------------------------------------
# single sensor, H0
# ----------------------------------------------------------------------------


@lru_cache(maxsize=256)
def _h0_single_parts(c, d):
    G = GParams(0, 1, (-c / 2,), (-c / 2 - d / 2,))
    logk = _lgamma((c + d) / 2) - _lgamma(c / 2)
    return logk, SeriesEvaluator(G, "right", _POLICY)


def pdf_h0_single(z, c: int, d: int):
    """Density of ``Z = (S+R)/S`` when ``1/Z`` is Beta(c/2, d/2)."""
    _check_dof(c, d)
    shape, z = _as_array(z)
    out = np.zeros_like(z)
    sel = (z > 1) & np.isfinite(z)
    if sel.any():
        logk, ev = _h0_single_parts(c, d)
        zs = z[sel]
        mant, scale, rel = _safe_series(ev, zs)
        vals = mant * np.exp(scale + logk)
        # close to z = 1 the descending series stalls; use the Beta image there
        bad = ~(rel < 1e-10)
        if bad.any():
            vals[bad] = beta_pdf(1.0 / zs[bad], c / 2, d / 2) / zs[bad] ** 2
        out[sel] = vals
    return _out(shape, out)


def cdf_h0_single(z, c: int, d: int):
    """``P(Z <= z) = 1 - I_{1/z}(c/2, d/2)`` for ``z >= 1``."""
    _check_dof(c, d)
    shape, z = _as_array(z)
    out = np.zeros_like(z)
    sel = z > 1
    if sel.any():
        with np.errstate(divide="ignore"):
            out[sel] = 1.0 - reg_inc_beta(c / 2, d / 2, 1.0 / z[sel])
    return _out(shape, out)


def sf_h0_single(z, c: int, d: int):
    """Upper tail ``I_{1/z}(c/2, d/2)``; accurate for small false-alarm rates."""
    _check_dof(c, d)
    shape, z = _as_array(z)
    out = np.ones_like(z)
    sel = z > 1
    if sel.any():
        with np.errstate(divide="ignore"):
            out[sel] = reg_inc_beta(c / 2, d / 2, 1.0 / z[sel])
    return _out(shape, out)


def _check_dof(c, d):
    if c < 1 or d < 1:
        raise ValueError("degrees of freedom must be >= 1")


def _check_lambda(lam):
    if not lam > 0:
        raise ValueError("H1 laws need a positive noncentrality; use the H0 family for lambda = 0")


# ----------------------------------------------------------------------------
# single sensor, H1
# ----------------------------------------------------------------------------


def _log_c_const(c, d, lam):
    """log of ``pi 2^{d/2-1} e^{-lam/2} / (Gamma(c/2) lam^{d/2-1})``."""
    return (math.log(math.pi) + (d / 2 - 1) * math.log(2.0) - lam / 2
            - _lgamma(c / 2) - (d / 2 - 1) * math.log(lam))


def _log_g(params, x):
    mant, scale, err = log_eval_g(params, x, _POLICY)
    m = float(mant[0])
    if m == 0.0:
        return -math.inf, 0.0, 0.0
    return math.log(abs(m)) + float(scale[0]), math.copysign(1.0, m), float(err[0]) / abs(m)


def _g21(k, c, d, lam):
    return _log_g(GParams(2, 1, (-c / 2, (d - 1) / 2, 0.0),
                          (float(k), d / 2 - 1, 0.0, (d - 1) / 2)), lam / 2)


def _g12(kp, c, d, lam):
    return _log_g(GParams(1, 2, (0.0, -c / 2, (d - 1) / 2),
                          (d / 2 - 1, 0.0, (d - 1) / 2, kp)), lam / 2)


class _CoefficientFamily:
    """Lazily extended arrays ``(log|coef|, sign, exponent, rel_err)``.

    Term ``k`` of the family contributes ``sign * exp(logc) * z**(-expo)``.
    Extension is guarded by a lock so that shared instances stay safe when
    evaluated from several threads.
    """

    def __init__(self, term):
        self._term = term
        self._lock = threading.Lock()
        self.limit = H1_MAX_TERMS
        self.logc = np.zeros(0)
        self.sign = np.zeros(0)
        self.expo = np.zeros(0)
        self.rel_err = np.zeros(0)

    def ensure(self, K):
        with self._lock:
            n = self.logc.size
            K = min(K, self.limit)
            if n >= K:
                return
            rows = []
            for k in range(n, K):
                try:
                    rows.append(self._term(k))
                except NonConvergenceError:
                    # coefficient not computable: the family ends here
                    self.limit = k
                    break
            if not rows:
                return
            lc, sg, ex, re = (np.array(v, dtype=float) for v in zip(*rows))
            self.logc = np.concatenate([self.logc, lc])
            self.sign = np.concatenate([self.sign, sg])
            self.expo = np.concatenate([self.expo, ex])
            self.rel_err = np.concatenate([self.rel_err, re])

    def arrays(self, K, derivative=False):
        self.ensure(K)
        K = min(K, self.logc.size)
        lc, sg, ex, re = self.logc[:K], self.sign[:K], self.expo[:K], self.rel_err[:K]
        if derivative:
            # d/dz z^{-e} = -e z^{-e-1}
            with np.errstate(divide="ignore"):
                return lc + np.log(ex), -sg, ex + 1.0, re
        return lc, sg, ex, re


def _tail_sum(families, z, derivative=False):
    """``sum_f sum_k sign exp(logc) z^{-expo}`` with an absolute error bound.

    Returns ``(value, err)``; ``err`` is ``inf`` where the series could not
    be truncated within the available coefficients.
    """
    log_z = np.log(z)
    K = 64
    val = np.zeros(z.size)
    err = np.full(z.size, np.inf)
    todo = np.arange(z.size)
    while todo.size:
        parts = [fam.arrays(K, derivative) for fam in families]
        lens = [len(p[0]) for p in parts]
        offsets = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
        cat = [np.concatenate([p[i] for p in parts]) for i in range(4)]
        mant, scale, e, conv = _backend.kernels.series_sum(
            cat[0], cat[1], -cat[2], cat[3], offsets,
            np.zeros(len(families), dtype=np.uint8), log_z[todo],
            1e-16, MIN_TERMS)
        with np.errstate(over="ignore"):
            val[todo] = mant * np.exp(scale)
            err[todo] = e * np.exp(scale)
        err[todo[~conv]] = np.inf
        todo = todo[~conv]
        if all(K >= fam.limit for fam in families):
            break
        K *= 2
    return val, err


@lru_cache(maxsize=256)
def _h1_single_family(c, d, lam):
    logc0 = _log_c_const(c, d, lam)

    def term(k):
        lg, sg, re = _g21(k, c, d, lam)
        return (logc0 + lg - _lgamma(k + 1.0) - math.log(c / 2 + k), sg,
                c / 2 + k, re + 1e-15 * (abs(lg) + k))

    return _CoefficientFamily(term)


@lru_cache(maxsize=256)
def _h1_inverse_parts(c, d, lam):
    G = GParams(1, 1, (-c / 2, (d - 1) / 2), (d / 2 - 1, 0.0, (d - 1) / 2))
    return _log_c_const(c, d, lam), SeriesEvaluator(G, "left", _POLICY)


def pdf_h1_single_inverse(v, c: int, d: int, lam: float):
    """Density of ``1/Z = S/(S+R)`` when ``R`` carries noncentrality ``lam``."""
    _check_dof(c, d)
    _check_lambda(lam)
    shape, v = _as_array(v)
    out = np.zeros_like(v)
    sel = (v > 0) & (v < 1)
    if sel.any():
        logc, ev = _h1_inverse_parts(c, d, lam)
        mant, scale, _ = ev.log_evaluate(lam * (1.0 - v[sel]) / 2)
        out[sel] = mant * np.exp(scale + logc + (c / 2 - 1) * np.log(v[sel]))
    return _out(shape, out)


def _integrate(f, lo, hi, args=()):
    """Vectorised tanh-sinh quadrature; endpoint singularities are allowed."""
    res = integrate.tanhsinh(f, lo, hi, args=args, atol=_QUAD_TOL, rtol=_QUAD_TOL,
                             maxlevel=12)
    return np.asarray(res.integral, dtype=float)


def _single_h1_quad(z, c, d, lam):
    """``P(Z <= z)`` as the integral of the inverse density over [1/z, 1]."""
    f = lambda v: pdf_h1_single_inverse(v, c, d, lam)
    return np.clip(_integrate(f, 1.0 / z, np.ones_like(z)), 0.0, 1.0)


def cdf_h1_single(z, c: int, d: int, lam: float):
    """``P(Z <= z)`` for one sensor with noncentrality ``lam``."""
    _check_dof(c, d)
    _check_lambda(lam)
    shape, z = _as_array(z)
    out = np.zeros_like(z)
    out[np.isinf(z)] = 1.0
    sel = np.flatnonzero((z > 1) & np.isfinite(z))
    if sel.size:
        tail, err = _tail_sum([_h1_single_family(c, d, lam)], z[sel])
        out[sel] = 1.0 - tail
        bad = sel[~(err <= SERIES_ABS_TOL)]
        if bad.size:
            out[bad] = _single_h1_quad(z[bad], c, d, lam)
    return _out(shape, np.clip(out, 0.0, 1.0))


def pdf_h1_single(z, c: int, d: int, lam: float):
    """Density of the single-sensor statistic under H1."""
    _check_dof(c, d)
    _check_lambda(lam)
    shape, z = _as_array(z)
    out = np.zeros_like(z)
    sel = np.flatnonzero((z > 1) & np.isfinite(z))
    if sel.size:
        val, err = _tail_sum([_h1_single_family(c, d, lam)], z[sel], derivative=True)
        # -d/dz of the tail
        out[sel] = -val
        bad = sel[err > SERIES_ABS_TOL]
        if bad.size:
            out[bad] = pdf_h1_single_inverse(1.0 / z[bad], c, d, lam) / z[bad] ** 2
    return _out(shape, np.maximum(out, 0.0))


# ----------------------------------------------------------------------------
# fused, H0
# ----------------------------------------------------------------------------


def _h0_rows(p: FusedDistParams):
    N, M = p.N, p.M
    a = delta_expand(N, -p.c_x / 2) + delta_expand(M, 1 - p.c_y / 2 - M / N)
    b = (delta_expand(N, -p.c_x / 2 - p.d_x / 2)
         + delta_expand(M, 1 - p.c_y / 2 - p.d_y / 2 - M / N))
    return GParams(0, N + M, a, b)


def _h0_log_const(p: FusedDistParams):
    return (_lgamma(p.N / 2) + _lgamma(p.M / 2) - _lgamma(p.c_x / 2) - _lgamma(p.c_y / 2)
            - p.d_x / 2 * math.log(p.N) - p.d_y / 2 * math.log(p.M))


@lru_cache(maxsize=128)
def _h0_fused_parts(p: FusedDistParams):
    G = _h0_rows(p)
    pdf_ev = SeriesEvaluator(G, "right", _POLICY)
    cdf_ev = SeriesEvaluator(cdf_transform(G, 1.0 / p.N), "right", _POLICY)
    return _h0_log_const(p), pdf_ev, cdf_ev


def _safe_series(ev, x):
    """Series values with a relative error estimate (inf where it failed)."""
    mant, scale, err = ev.log_evaluate(x, strict=False)
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(mant != 0, err / np.abs(mant), np.inf)
    return mant, scale, rel


def _fused_quad(z, p: FusedDistParams, hypothesis, density=False):
    """CDF (or density) of ``Z_x^{N/2} Z_y^{M/2}`` by quadrature over ``v = 1/Z_y``.

    ``P(Z <= z) = int_{z^{-2/M}}^1 F_x((z v^{M/2})^{2/N}) f_v(v) dv``, built
    from the single-sensor laws of this module.
    """
    N, M = p.N, p.M
    if hypothesis == "H0":
        law_x = ((lambda w: pdf_h0_single(w, p.c_x, p.d_x)) if density
                 else (lambda w: cdf_h0_single(w, p.c_x, p.d_x)))
        pdf_v = lambda v: pdf_h0_single(1.0 / v, p.c_y, p.d_y) / (v * v)
    else:
        law_x = ((lambda w: pdf_h1_single(w, p.c_x, p.d_x, p.lambda_x)) if density
                 else (lambda w: cdf_h1_single(w, p.c_x, p.d_x, p.lambda_x)))
        pdf_v = lambda v: pdf_h1_single_inverse(v, p.c_y, p.d_y, p.lambda_y)

    def f(v, lz):
        w = np.exp(2.0 / N * (lz + M / 2 * np.log(v)))
        val = law_x(w) * pdf_v(v)
        if density:
            val = val * (2.0 / N) * w / np.exp(lz)
        return val

    lz = np.log(z)
    out = _integrate(f, np.exp(-2.0 / M * lz), np.ones_like(z), args=(lz,))
    return np.maximum(out, 0.0) if density else np.clip(out, 0.0, 1.0)


def pdf_h0_fused(z, params: FusedDistParams):
    """Density of the fused statistic under H0."""
    p = params.central()
    shape, z = _as_array(z)
    out = np.zeros_like(z)
    sel = np.flatnonzero((z > 1) & np.isfinite(z))
    if sel.size:
        logk, ev, _ = _h0_fused_parts(p)
        zs = z[sel]
        mant, scale, rel = _safe_series(ev, zs * zs)
        with np.errstate(invalid="ignore", over="ignore"):
            out[sel] = 2.0 * mant * np.exp(scale + logk + (2.0 / p.N - 1) * np.log(zs))
        bad = sel[~(rel < 1e-9)]
        if bad.size:
            out[bad] = _fused_quad(z[bad], p, "H0", density=True)
    return _out(shape, np.maximum(out, 0.0))


def cdf_h0_fused(z, params: FusedDistParams):
    """``P(Z <= z)`` for the fused statistic under H0 (the false-alarm complement)."""
    p = params.central()
    shape, z = _as_array(z)
    out = np.zeros_like(z)
    out[np.isinf(z)] = 1.0
    sel = np.flatnonzero((z > 1) & np.isfinite(z))
    if sel.size:
        logk, _, ev = _h0_fused_parts(p)
        zs = z[sel]
        mant, scale, rel = _safe_series(ev, zs * zs)
        with np.errstate(invalid="ignore", over="ignore"):
            vals = mant * np.exp(scale + logk + 2.0 / p.N * np.log(zs))
        out[sel] = vals
        bad = sel[~(rel * np.abs(vals) < SERIES_ABS_TOL)]
        if bad.size:
            out[bad] = _fused_quad(z[bad], p, "H0")
    return _out(shape, np.clip(out, 0.0, 1.0))


# ----------------------------------------------------------------------------
# fused, H1
# ----------------------------------------------------------------------------


def _resonance_guard(p: FusedDistParams):
    if resonance_check(p):
        raise ResonanceError(
            f"resonant parameters (N={p.N}, M={p.M}, c_x={p.c_x}, c_y={p.c_y}): "
            "the H1 series has a Gamma pole; use Monte Carlo instead")


def _fused_family(N, M, cx, dx, cy, dy, lx, ly):
    """Family of terms in ``z**(-(cx + 2k)/N)`` (swap roles for the other one)."""
    logc0 = _log_c_const(cx, dx, lx) + _log_c_const(cy, dy, ly)

    def term(k):
        kp = k * M / N + cx * M / (2 * N) - cy / 2
        l1, s1, r1 = _g21(k, cx, dx, lx)
        l2, s2, r2 = _g12(kp, cy, dy, ly)
        lg, sg = lgamma_sign(-kp)
        if sg == 0:
            raise ResonanceError(f"Gamma(-k') pole at k'={kp}")
        lc = logc0 + l1 + l2 + lg - _lgamma(k + 1.0) - math.log(cx / 2 + k)
        return lc, s1 * s2 * sg, (cx + 2 * k) / N, r1 + r2 + 1e-15 * (abs(lg) + k + 1)

    return _CoefficientFamily(term)


@lru_cache(maxsize=128)
def _h1_fused_families(p: FusedDistParams):
    _resonance_guard(p)
    fa = _fused_family(p.N, p.M, p.c_x, p.d_x, p.c_y, p.d_y, p.lambda_x, p.lambda_y)
    fb = _fused_family(p.M, p.N, p.c_y, p.d_y, p.c_x, p.d_x, p.lambda_y, p.lambda_x)
    return fa, fb


def _check_h1(p: FusedDistParams):
    _check_lambda(p.lambda_x)
    _check_lambda(p.lambda_y)
    _resonance_guard(p)


def cdf_h1_fused(z, params: FusedDistParams):
    """``P(Z <= z)`` for the fused statistic under H1 (one minus detection probability)."""
    _check_h1(params)
    shape, z = _as_array(z)
    out = np.zeros_like(z)
    out[np.isinf(z)] = 1.0
    sel = np.flatnonzero((z > 1) & np.isfinite(z))
    if sel.size:
        tail, err = _tail_sum(_h1_fused_families(params), z[sel])
        out[sel] = 1.0 - tail
        bad = sel[~(err <= SERIES_ABS_TOL)]
        if bad.size:
            out[bad] = _fused_quad(z[bad], params, "H1")
    return _out(shape, np.clip(out, 0.0, 1.0))


def pdf_h1_fused(z, params: FusedDistParams):
    """Density of the fused statistic under H1."""
    _check_h1(params)
    shape, z = _as_array(z)
    out = np.zeros_like(z)
    sel = np.flatnonzero((z > 1) & np.isfinite(z))
    if sel.size:
        val, err = _tail_sum(_h1_fused_families(params), z[sel], derivative=True)
        out[sel] = -val
        bad = sel[~(err <= SERIES_ABS_TOL)]
        if bad.size:
            out[bad] = _fused_quad(z[bad], params, "H1", density=True)
    return _out(shape, np.maximum(out, 0.0))


# ----------------------------------------------------------------------------
# Neyman-Pearson
# ----------------------------------------------------------------------------


def _mode_check(mode):
    if mode not in ("fused", "single_x", "single_y"):
        raise ValueError(f"mode must be fused, single_x or single_y, got {mode!r}")


def sf_h0(z, params: FusedDistParams, mode: Mode = "fused"):
    """False-alarm probability ``P(Z > z | H0)``."""
    _mode_check(mode)
    if mode == "single_x":
        return sf_h0_single(z, params.c_x, params.d_x)
    if mode == "single_y":
        return sf_h0_single(z, params.c_y, params.d_y)
    return 1.0 - cdf_h0_fused(z, params)


def sf_h1(z, params: FusedDistParams, mode: Mode = "fused"):
    """Detection probability ``P(Z > z | H1)``."""
    _mode_check(mode)
    if mode == "single_x":
        return 1.0 - cdf_h1_single(z, params.c_x, params.d_x, params.lambda_x)
    if mode == "single_y":
        return 1.0 - cdf_h1_single(z, params.c_y, params.d_y, params.lambda_y)
    return 1.0 - cdf_h1_fused(z, params)


def threshold_for_pfa(alpha: float, params: FusedDistParams, mode: Mode = "fused") -> float:
    """Threshold ``gamma`` with ``P(Z > gamma | H0) = alpha``.

    The bracket starts at [1, 2] and its upper end doubles until the tail
    drops below ``alpha``; the root is then polished in ``log gamma``.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    _mode_check(mode)
    f = lambda u: float(sf_h0(math.exp(u), params, mode)) - alpha
    lo, hi = 0.0, math.log(2.0)
    while f(hi) > 0:
        lo, hi = hi, 2.0 * hi
        if hi > 690.0:
            raise BracketError(f"false-alarm rate stays above {alpha} up to z = 1e300")
    u = optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    return math.exp(u)


def pd_at_pfa(alpha: float, params: FusedDistParams, mode: Mode = "fused") -> float:
    """Detection probability of the Neyman-Pearson test at false-alarm rate ``alpha``."""
    gamma = threshold_for_pfa(alpha, params, mode)
    return float(sf_h1(gamma, params, mode))


__all__ = [
    "FusedDistParams", "resonance_check", "pdf_h0_single", "cdf_h0_single",
    "sf_h0_single", "pdf_h1_single", "cdf_h1_single", "pdf_h1_single_inverse",
    "pdf_h0_fused", "cdf_h0_fused", "pdf_h1_fused", "cdf_h1_fused",
    "sf_h0", "sf_h1", "threshold_for_pfa", "pd_at_pfa",
]
