"""Monte Carlo harness and an independent quadrature oracle.

Random draws come from counter-based Philox streams keyed by
``(seed, chunk index)``, so a run is a pure function of
``(trials, seed, chunk)`` whatever the number of worker threads.

The oracle integrates classical Beta / noncentral-Beta laws (Poisson
mixtures of incomplete-beta terms) and shares no code with the G-function
machinery in :mod:`fusedglrt.dist`.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from .detector import sr_decomposition
from .dist import FusedDistParams
from .model import FusedModel, chisq_params, simulate
from .specfun.classical import noncentral_beta_pdf, noncentral_beta_sf_lower

KS_CRITICAL_1PCT = 1.63


@dataclass(frozen=True)
class McConfig:
    """Trial count, master seed and trials per independent stream."""

    trials: int
    seed: int = 0
    chunk: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        chunk = min(self.trials, 10_000) if self.chunk is None else self.chunk
        if not 1 <= chunk <= self.trials:
            raise ValueError("chunk must lie in [1, trials]")
        object.__setattr__(self, "chunk", int(chunk))

    @property
    def n_chunks(self) -> int:
        return -(-self.trials // self.chunk)

    def stream(self, index: int, purpose: int = 0) -> np.random.Generator:
        """Generator for chunk ``index``; ``purpose`` separates H0/H1 draws."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(purpose, index))
        return np.random.Generator(np.random.Philox(ss))


class SensorSamples(NamedTuple):
    """Per-trial log statistics of both sensors (same order as the draws)."""

    log_zx: np.ndarray
    log_zy: np.ndarray
    degenerate: int


_PURPOSE = {"H0": 0, "H1": 1}


def _log_z(S, R):
    with np.errstate(divide="ignore"):
        return np.log1p(np.where(S > 0, R / np.where(S > 0, S, 1.0), np.inf))


def _chunk_samples(fused: FusedModel, hypothesis, cfg: McConfig, index: int):
    n = min(cfg.chunk, cfg.trials - index * cfg.chunk)
    rng = cfg.stream(index, _PURPOSE[hypothesis])
    x = simulate(fused.sensor_x, hypothesis, rng, n)
    y = simulate(fused.sensor_y, hypothesis, rng, n)
    Sx, Rx = sr_decomposition(x, fused.sensor_x)
    Sy, Ry = sr_decomposition(y, fused.sensor_y)
    return _log_z(Sx, Rx), _log_z(Sy, Ry), int(np.sum(Sx <= 0) + np.sum(Sy <= 0))


def mc_sensor_samples(fused: FusedModel, hypothesis, cfg: McConfig,
                      workers: int = 1) -> SensorSamples:
    """Simulate ``cfg.trials`` draws and return both single-sensor statistics."""
    if hypothesis not in _PURPOSE:
        raise ValueError("hypothesis must be 'H0' or 'H1'")
    job = lambda i: _chunk_samples(fused, hypothesis, cfg, i)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(job, range(cfg.n_chunks)))
    else:
        parts = [job(i) for i in range(cfg.n_chunks)]
    lx = np.concatenate([p[0] for p in parts])
    ly = np.concatenate([p[1] for p in parts])
    bad = sum(p[2] for p in parts)
    if bad:
        warnings.warn(f"{bad} degenerate samples (zero noise energy)", RuntimeWarning)
    return SensorSamples(lx, ly, bad)


def mc_statistic_samples(fused: FusedModel, hypothesis, cfg: McConfig,
                         workers: int = 1, log: bool = False) -> np.ndarray:
    """Sorted fused-statistic values (or their logs) over ``cfg.trials`` draws."""
    s = mc_sensor_samples(fused, hypothesis, cfg, workers)
    logz = fused.N / 2 * s.log_zx + fused.M / 2 * s.log_zy
    logz.sort()
    if log:
        return logz
    with np.errstate(over="ignore"):
        return np.exp(logz)


def ks_statistic(sorted_samples, cdf) -> float:
    """Kolmogorov-Smirnov distance between the empirical CDF and ``cdf``.

    ``cdf`` is called once on the whole sample array.
    """
    x = np.asarray(sorted_samples, dtype=float)
    n = x.size
    if n == 0:
        raise ValueError("ks_statistic needs at least one sample")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(i / n - F)), np.max(np.abs((i - 1) / n - F))))


def ks_critical(n: int) -> float:
    """Asymptotic 1% critical value of the one-sample KS statistic."""
    return KS_CRITICAL_1PCT / math.sqrt(n)


def interpolated_cdf(cdf, sorted_samples, nodes: int = 600):
    """Monotone interpolant of ``cdf`` in ``log z``.

    Nodes are the sample quantiles merged with a uniform grid in ``log z``,
    so both the bulk and the sparse upper tail are resolved.

    Returns ``(F, check)`` where ``F`` is vectorised and ``check`` is the
    largest deviation from ``cdf`` at the midpoints between nodes.
    """
    x = np.asarray(sorted_samples, dtype=float)
    x = x[np.isfinite(x) & (x > 1)]
    lx = np.log(x)
    q = np.concatenate([[0.0], np.quantile(lx, np.linspace(0, 1, nodes)),
                        np.linspace(0.0, lx[-1], nodes)])
    q = np.unique(q)
    vals = np.asarray(cdf(np.exp(q)), dtype=float)
    interp = PchipInterpolator(q, vals, extrapolate=True)
    mids = 0.5 * (q[1:] + q[:-1])
    check = float(np.max(np.abs(interp(mids) - np.asarray(cdf(np.exp(mids))))))

    def F(z):
        z = np.asarray(z, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            lz = np.log(np.maximum(z, 1.0))
        out = np.clip(interp(np.minimum(lz, q[-1])), 0.0, 1.0)
        out[lz > q[-1]] = np.clip(np.asarray(cdf(z[lz > q[-1]])), 0.0, 1.0)
        return np.where(z <= 1, 0.0, out)

    return F, check


def oracle_cdf_fused(z, params: FusedDistParams, hypothesis) -> float:
    """``P(Z_x^{N/2} Z_y^{M/2} <= z)`` by adaptive quadrature over ``v = 1/Z_y``.

    The integrand multiplies the (noncentral) Beta law of ``1/Z_x`` with the
    (noncentral) Beta density of ``v``. Noncentralities are ignored under H0.
    """
    if hypothesis not in _PURPOSE:
        raise ValueError("hypothesis must be 'H0' or 'H1'")
    if np.ndim(z):
        return np.array([oracle_cdf_fused(zi, params, hypothesis) for zi in np.ravel(z)]
                        ).reshape(np.shape(z))
    z = float(z)
    if z <= 1:
        return 0.0
    if math.isinf(z):
        return 1.0
    p = params
    lx, ly = (p.lambda_x, p.lambda_y) if hypothesis == "H1" else (0.0, 0.0)
    N, M = p.N, p.M
    lz = math.log(z)

    def f(v):
        # Z_x <= w  <=>  1/Z_x >= 1/w
        inv_w = math.exp(-2.0 / N * (lz + M / 2 * math.log(v)))
        return (float(noncentral_beta_sf_lower(min(inv_w, 1.0), p.c_x / 2, p.d_x / 2, lx))
                * float(noncentral_beta_pdf(v, p.c_y / 2, p.d_y / 2, ly)))

    lo = math.exp(-2.0 / M * lz)
    val, err = integrate.quad(f, lo, 1.0, epsabs=1e-13, epsrel=1e-10, limit=400)
    if err > 1e-8:
        raise ArithmeticError(f"oracle quadrature did not converge (error {err:.2e})")
    return min(max(val, 0.0), 1.0)


def binomial_se(p_hat: float, n: int) -> float:
    return math.sqrt(max(p_hat * (1 - p_hat), 0.0) / n)


@dataclass(frozen=True)
class Rates:
    pfa_hat: float
    pfa_se: float
    pd_hat: float
    pd_se: float
    trials: int


def mc_rates(fused: FusedModel, gamma: float, cfg: McConfig, workers: int = 1) -> Rates:
    """Empirical false-alarm and detection rates of the test ``Z > gamma``."""
    if not gamma >= 1:
        raise ValueError("threshold gamma must be >= 1")
    lg = math.log(gamma)
    h0 = mc_statistic_samples(fused, "H0", cfg, workers, log=True)
    h1 = mc_statistic_samples(fused, "H1", cfg, workers, log=True)
    pfa = float(np.mean(h0 > lg))
    pd = float(np.mean(h1 > lg))
    n = cfg.trials
    return Rates(pfa, binomial_se(pfa, n), pd, binomial_se(pd, n), n)


def dist_params(fused: FusedModel) -> FusedDistParams:
    """Analytic parameters (degrees of freedom and H1 noncentralities) of a model."""
    px = chisq_params(fused.sensor_x, "H1")
    py = chisq_params(fused.sensor_y, "H1")
    return FusedDistParams(fused.N, fused.M, px.c, px.d, py.c, py.d, px.lam, py.lam)
