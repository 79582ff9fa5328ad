"""Pure numpy implementations of the numerical kernels.

This module mirrors ``_kernels.pyx`` function for function and is used when
the compiled extension is unavailable (or when ``FUSEDGLRT_PURE_PYTHON`` is
set). Both versions must agree to rounding.
"""

import math

import numpy as np

# Lanczos approximation, g = 671/128, 14 terms (Numerical Recipes, 3rd ed.).
LANCZOS_G = 5.24218750000000000
LANCZOS_C0 = 0.999999999999997092
LANCZOS_COEF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
SQRT_2PI = 2.5066282746310005
LOG_PI = 1.1447298858494002

EPS = np.finfo(float).eps


def _lanczos_log(z):
    """log Gamma(z) for Re z >= 0.5 (real or complex arrays)."""
    tmp = z + LANCZOS_G
    tmp = (z + 0.5) * np.log(tmp) - tmp
    ser = np.full_like(z, LANCZOS_C0)
    y = z
    for c in LANCZOS_COEF:
        y = y + 1.0
        ser = ser + c / y
    return tmp + np.log(SQRT_2PI * ser / z)


def _sinpi(x):
    # sin(pi x) with the argument reduced exactly to [-1/2, 1/2]
    n = np.round(x)
    r = x - n
    out = np.sin(np.pi * r)
    return np.where(np.remainder(n, 2.0) == 0, out, -out)


def lgamma_real(x):
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))`` for a float array.

    Poles (nonpositive integers) give ``(inf, 0)``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    logabs = np.empty_like(x)
    sign = np.ones_like(x)
    right = x >= 0.5
    if right.any():
        logabs[right] = _lanczos_log(x[right])
    left = ~right
    if left.any():
        xl = x[left]
        s = _sinpi(xl)
        with np.errstate(divide="ignore"):
            la = LOG_PI - np.log(np.abs(s)) - _lanczos_log(1.0 - xl)
        sg = np.sign(s)
        la[s == 0.0] = np.inf
        logabs[left] = la
        sign[left] = sg
    return logabs, sign


def lgamma_shift(base, k):
    """``lgamma_real(base + k)`` for a float ``base`` and integer array ``k``.

    Near a pole the reflection uses ``sin(pi*base)`` directly, so the
    distance to the pole is not lost when ``base + k`` is rounded.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    x = base + k
    logabs = np.empty_like(x)
    sign = np.ones_like(x)
    right = x >= 0.5
    if right.any():
        logabs[right] = _lanczos_log(x[right])
    left = ~right
    if left.any():
        s0 = _sinpi(np.float64(base))
        s = np.where(np.remainder(k[left], 2.0) == 0, s0, -s0)
        with np.errstate(divide="ignore"):
            la = LOG_PI - np.log(np.abs(s)) - _lanczos_log(1.0 - x[left])
        la[s == 0.0] = np.inf
        logabs[left] = la
        sign[left] = np.sign(s)
    return logabs, sign


def log_gamma_complex(z):
    """Analytic continuation of log Gamma for a complex array.

    Branch cut along the negative real axis, matching ``scipy.special.loggamma``.
    Raises ``ValueError`` at a pole.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty_like(z)
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.floor(z.real))
    if pole.any():
        raise ValueError("log-gamma pole at a nonpositive integer")
    right = z.real >= 0.5
    if right.any():
        out[right] = _lanczos_log(z[right])
    left = ~right
    if left.any():
        zl = z[left]
        shift = np.ceil(0.5 - zl.real).astype(int)
        acc = _lanczos_log(zl + shift)
        nmax = int(shift.max())
        for k in range(nmax):
            active = k < shift
            w = zl + k
            # principal log of (z + k); imaginary -0 keeps the cut on the lower side
            acc = acc - np.where(active, np.log(np.where(active, w, 1.0)), 0.0)
        out[left] = acc
    return out


def series_sum(log_coef, sign, expo, rel_err, offsets, closed, log_x,
               rel_tol, min_terms, patience=5):
    """Sum the families ``sum_k sign_k exp(log_coef_k + expo_k * log x)``.

    Families are the slices ``offsets[f]:offsets[f+1]``. Each family is cut
    once ``patience`` consecutive nonincreasing terms fall below
    ``rel_tol`` times the family's partial sum (after ``min_terms`` terms).
    Families flagged in ``closed`` are finite and always summed in full.

    Returns ``(mantissa, log_scale, abserr, converged)`` arrays so that the
    value is ``mantissa * exp(log_scale)`` and ``abserr`` is on the same scale.
    """
    log_x = np.atleast_1d(np.asarray(log_x, dtype=float))
    n = log_x.size
    width = max(int(offsets[-1]), 1)
    step = max(1, 2_000_000 // width)
    out = [np.empty(n), np.empty(n), np.empty(n), np.empty(n, dtype=bool)]
    for i0 in range(0, n, step):
        part = _series_sum_block(log_coef, sign, expo, rel_err, offsets,
                                 closed, log_x[i0:i0 + step], rel_tol,
                                 min_terms,
                                 patience)
        for dst, src in zip(out, part):
            dst[i0:i0 + step] = src
    return tuple(out)


def _series_sum_block(log_coef, sign, expo, rel_err, offsets, closed, log_x,
                      rel_tol, min_terms, patience):
    n = log_x.size
    mant = np.zeros(n)
    scale = np.full(n, -np.inf)
    err = np.zeros(n)
    conv = np.ones(n, dtype=bool)
    for f in range(len(offsets) - 1):
        lo, hi = int(offsets[f]), int(offsets[f + 1])
        if hi <= lo:
            continue
        sg = sign[lo:hi]
        nz = sg != 0
        if not nz.any():
            # an all-zero prefix says nothing about the tail
            if not closed[f]:
                conv[:] = False
            continue
        first = int(np.flatnonzero(nz)[0])
        K = hi - lo
        L = log_coef[lo:hi][None, :] + expo[lo:hi][None, :] * log_x[:, None]
        L[:, ~nz] = -np.inf
        ref = L.max(axis=1)
        t = np.where(nz[None, :], sg[None, :] * np.exp(L - ref[:, None]), 0.0)
        absT = np.abs(t)
        partial = np.cumsum(t, axis=1)
        small = absT < rel_tol * np.abs(partial)
        nonincr = np.ones_like(small)
        nonincr[:, 1:] = absT[:, 1:] <= absT[:, :-1] * (1 + 1e-12)
        hit = small & nonincr
        stop = np.full(n, K)
        done = np.zeros(n, dtype=bool)
        if closed[f]:
            done[:] = True
        else:
            run = np.zeros(n, dtype=int)
            for j in np.flatnonzero(nz):
                run = np.where(hit[:, j], run + 1, 0)
                newly = (~done) & (run >= patience) & (j - first + 1 >= min_terms)
                stop[newly] = j + 1
                done |= newly
                if done.all():
                    break
        conv &= done
        keep = np.arange(K)[None, :] < stop[:, None]
        fsum = np.where(keep, t, 0.0).sum(axis=1)
        re = rel_err[lo:hi][None, :] + 4 * EPS
        ferr = np.where(keep, absT * re, 0.0).sum(axis=1)
        lastcol = np.where(keep & nz[None, :], np.arange(K)[None, :], -1).max(axis=1)
        lastterm = np.where(lastcol >= 0,
                            absT[np.arange(n), np.maximum(lastcol, 0)], 0.0)
        ferr = ferr + np.where(stop < K, lastterm, 0.0)
        grow = ref > scale
        with np.errstate(invalid="ignore", over="ignore"):
            f_old = np.where(grow, np.exp(scale - ref), 1.0)
            f_new = np.where(grow, 1.0, np.exp(ref - scale))
        f_old[~np.isfinite(scale)] = 0.0
        mant = mant * f_old + fsum * f_new
        err = err * f_old + ferr * f_new
        scale = np.maximum(scale, ref)
    scale[~np.isfinite(scale)] = 0.0
    return mant, scale, err, conv
