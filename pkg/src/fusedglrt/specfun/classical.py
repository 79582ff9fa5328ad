"""Classical distribution functions used as independent oracles.

These are deliberately built on elementary algorithms (a continued fraction
and Poisson mixtures) that share no code with the G-function evaluator.
"""

import math

import numpy as np

_TINY = 1e-300
_EPS = np.finfo(float).eps
POISSON_TAIL = 1e-14


def _log_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _betacf(a, b, x, max_iter=2000):
    """Modified Lentz evaluation of the incomplete-beta continued fraction."""
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _TINY, _TINY, d)
    d = 1.0 / d
    h = d.copy()
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        h = h * d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = d * c
        h = h * delta
        if np.all(np.abs(delta - 1.0) < 4 * _EPS):
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def reg_inc_beta(a, b, x):
    """Regularized incomplete beta function ``I_x(a, b)``.

    Vectorised in ``x``. Uses the continued fraction on whichever of
    ``I_x(a, b)`` and ``1 - I_{1-x}(b, a)`` converges faster.
    """
    if not (a > 0 and b > 0):
        raise ValueError("reg_inc_beta: a and b must be positive")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((x < 0) | (x > 1)) or np.any(np.isnan(x)):
        raise ValueError("reg_inc_beta: x must lie in [0, 1]")
    out = np.where(x >= 1.0, 1.0, 0.0)
    inner = (x > 0) & (x < 1)
    if inner.any():
        xi = x[inner]
        with np.errstate(divide="ignore"):
            lfront = a * np.log(xi) + b * np.log1p(-xi) - _log_beta(a, b)
        direct = xi < (a + 1.0) / (a + b + 2.0)
        res = np.empty_like(xi)
        if direct.any():
            xd = xi[direct]
            res[direct] = np.exp(lfront[direct]) * _betacf(a, b, xd) / a
        if (~direct).any():
            xs = 1.0 - xi[~direct]
            res[~direct] = 1.0 - np.exp(lfront[~direct]) * _betacf(b, a, xs) / b
        out[inner] = np.clip(res, 0.0, 1.0)
    return float(out[0]) if scalar else out


def inc_beta_series(a, b, x, rel_tol=1e-16, max_terms=100000):
    """``I_x(a, b)`` from the hypergeometric power series.

    ``I_x(a,b) = x^a (1-x)^b / (a B(a,b)) * sum_n (a+b)_n / (a+1)_n x^n``.
    Slow for ``x`` near 1; kept as a second algorithm for cross-checks.
    """
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    term, total = 1.0, 1.0
    for n in range(max_terms):
        term *= (a + b + n) / (a + 1.0 + n) * x
        total += term
        if term < rel_tol * total:
            break
    lfront = a * math.log(x) + b * math.log1p(-x) - _log_beta(a, b)
    return math.exp(lfront) * total / a


def poisson_weights(mean, tail=POISSON_TAIL):
    """Poisson(mean) probabilities over an index window missing < ``tail`` mass.

    Returns ``(j0, w)`` with ``w[i] = P(J = j0 + i)``.
    """
    if mean < 0:
        raise ValueError("poisson_weights: mean must be nonnegative")
    if mean == 0:
        return 0, np.ones(1)
    spread = 12.0 * math.sqrt(mean) + 40.0
    j0 = max(0, int(math.floor(mean - spread)))
    j1 = int(math.ceil(mean + spread))
    while True:
        j = np.arange(j0, j1 + 1, dtype=float)
        logw = j * math.log(mean) - mean - np.array([math.lgamma(v + 1.0) for v in j])
        w = np.exp(logw)
        if 1.0 - w.sum() < tail or j1 > mean + 1e6:
            return j0, w
        j0 = max(0, j0 - int(spread))
        j1 += int(spread)


def noncentral_f_cdf(d1, d2, lam, x):
    """CDF of the noncentral F law with ``d1``, ``d2`` d.o.f. and noncentrality ``lam``.

    Poisson mixture of central incomplete-beta terms, truncated once the
    neglected Poisson mass is below 1e-14.
    """
    if not (d1 > 0 and d2 > 0):
        raise ValueError("noncentral_f_cdf: degrees of freedom must be positive")
    if lam < 0:
        raise ValueError("noncentral_f_cdf: noncentrality must be nonnegative")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0):
        raise ValueError("noncentral_f_cdf: x must be nonnegative")
    with np.errstate(over="ignore", invalid="ignore"):
        y = np.where(np.isinf(x), 1.0, d1 * x / (d1 * x + d2))
    j0, w = poisson_weights(lam / 2.0)
    out = np.zeros_like(x)
    for i, wi in enumerate(w):
        out += wi * reg_inc_beta(d1 / 2.0 + j0 + i, d2 / 2.0, y)
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out


def beta_pdf(v, a, b):
    """Density of Beta(a, b) on (0, 1), vectorised in ``v``."""
    v = np.asarray(v, dtype=float)
    inside = (v > 0) & (v < 1)
    vi = np.where(inside, v, 0.5)
    with np.errstate(divide="ignore"):
        logp = (a - 1.0) * np.log(vi) + (b - 1.0) * np.log1p(-vi) - _log_beta(a, b)
    return np.where(inside, np.exp(logp), 0.0)


def noncentral_beta_pdf(v, a, b, lam):
    """Density of ``S/(S+R)`` with ``S ~ chi2(2a)`` and ``R ~ chi2(2b, lam)``.

    Poisson(lam/2) mixture of Beta(a, b + j) densities.
    """
    j0, w = poisson_weights(lam / 2.0)
    out = np.zeros(np.shape(v))
    for i, wi in enumerate(w):
        out = out + wi * beta_pdf(v, a, b + j0 + i)
    return out


def noncentral_beta_sf_lower(v, a, b, lam):
    """``P(S/(S+R) >= v)`` for the same construction as ``noncentral_beta_pdf``."""
    v = np.clip(np.asarray(v, dtype=float), 0.0, 1.0)
    j0, w = poisson_weights(lam / 2.0)
    out = np.zeros(np.shape(v))
    for i, wi in enumerate(w):
        # P(Beta(a, b+j) >= v) = I_{1-v}(b+j, a)
        out = out + wi * reg_inc_beta(b + j0 + i, a, 1.0 - v)
    return np.clip(out, 0.0, 1.0)
