# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the numerical kernels in ``_kernels_py``.

Same signatures and return conventions; results agree to rounding.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport (log, exp, sin, fabs, floor, ceil, round as cround, INFINITY,
                        isfinite, fmod)

cnp.import_array()

cdef double LANCZOS_G = 5.24218750000000000
cdef double LANCZOS_C0 = 0.999999999999997092
cdef double[14] LANCZOS_COEF = [
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
]
cdef double SQRT_2PI = 2.5066282746310005
cdef double LOG_PI = 1.1447298858494002
cdef double PI = 3.141592653589793
cdef double EPS = 2.220446049250313e-16


cdef inline double _lanczos_log(double z) nogil:
    cdef double tmp = z + LANCZOS_G
    cdef double ser = LANCZOS_C0
    cdef double y = z
    cdef int i
    tmp = (z + 0.5) * log(tmp) - tmp
    for i in range(14):
        y += 1.0
        ser += LANCZOS_COEF[i] / y
    return tmp + log(SQRT_2PI * ser / z)


cdef inline double _sinpi(double x) nogil:
    cdef double n = cround(x)
    cdef double out = sin(PI * (x - n))
    if fmod(n, 2.0) != 0.0:
        out = -out
    return out


cdef inline double _sign(double s) nogil:
    if s > 0:
        return 1.0
    if s < 0:
        return -1.0
    return 0.0


def lgamma_real(x):
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))`` for a float array."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xa = np.ascontiguousarray(
        np.atleast_1d(np.asarray(x, dtype=float)).ravel())
    cdef Py_ssize_t n = xa.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] la = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sg = np.ones(n)
    cdef double v, s
    with nogil:
        for i in range(n):
            v = xa[i]
            if v >= 0.5:
                la[i] = _lanczos_log(v)
            else:
                s = _sinpi(v)
                if s == 0.0:
                    la[i] = INFINITY
                else:
                    la[i] = LOG_PI - log(fabs(s)) - _lanczos_log(1.0 - v)
                sg[i] = _sign(s)
    return la, sg


def lgamma_shift(double base, k):
    """``lgamma_real(base + k)`` keeping the exact distance to a pole."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ka = np.ascontiguousarray(
        np.atleast_1d(np.asarray(k, dtype=float)).ravel())
    cdef Py_ssize_t n = ka.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] la = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sg = np.ones(n)
    cdef double s0 = _sinpi(base)
    cdef double v, s
    with nogil:
        for i in range(n):
            v = base + ka[i]
            if v >= 0.5:
                la[i] = _lanczos_log(v)
            else:
                s = s0 if fmod(ka[i], 2.0) == 0.0 else -s0
                if s == 0.0:
                    la[i] = INFINITY
                else:
                    la[i] = LOG_PI - log(fabs(s)) - _lanczos_log(1.0 - v)
                sg[i] = _sign(s)
    return la, sg


cdef inline double complex _lanczos_log_c(double complex z):
    cdef double complex tmp = z + LANCZOS_G
    cdef double complex ser = LANCZOS_C0
    cdef double complex y = z
    cdef int i
    tmp = (z + 0.5) * _clog(tmp) - tmp
    for i in range(14):
        y = y + 1.0
        ser = ser + LANCZOS_COEF[i] / y
    return tmp + _clog(SQRT_2PI * ser / z)


cdef extern from "complex.h" nogil:
    double complex clog(double complex)


cdef inline double complex _clog(double complex z):
    return clog(z)


def log_gamma_complex(z):
    """Analytic continuation of log Gamma for a complex array."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] za = np.ascontiguousarray(
        np.atleast_1d(np.asarray(z, dtype=complex)).ravel())
    cdef Py_ssize_t n = za.shape[0], i
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=complex)
    cdef double complex w, acc
    cdef int shift, k
    for i in range(n):
        w = za[i]
        if w.imag == 0 and w.real <= 0 and w.real == floor(w.real):
            raise ValueError("log-gamma pole at a nonpositive integer")
    for i in range(n):
        w = za[i]
        if w.real >= 0.5:
            out[i] = _lanczos_log_c(w)
        else:
            shift = <int>ceil(0.5 - w.real)
            acc = _lanczos_log_c(w + shift)
            for k in range(shift):
                acc = acc - _clog(w + k)
            out[i] = acc
    return out


def series_sum(log_coef, sign, expo, rel_err, offsets, closed, log_x,
               double rel_tol, int min_terms, int patience=5):
    """Sum term families at each ``log x``; see ``_kernels_py.series_sum``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lc = np.ascontiguousarray(log_coef, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sgn = np.ascontiguousarray(sign, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ex = np.ascontiguousarray(expo, dtype=float)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] re = np.ascontiguousarray(rel_err, dtype=float)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] cl = np.ascontiguousarray(closed, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lx = np.ascontiguousarray(
        np.atleast_1d(np.asarray(log_x, dtype=float)).ravel())
    cdef Py_ssize_t n = lx.shape[0]
    cdef Py_ssize_t nf = off.shape[0] - 1
    cdef Py_ssize_t width = off[nf] if nf >= 0 else 0
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mant = np.zeros(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] scale = np.full(n, -np.inf)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] err = np.zeros(n)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] conv = np.ones(n, dtype=np.uint8)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] buf = np.empty(max(width, 1))
    cdef Py_ssize_t i, f, j, lo, hi, first, stop, lastnz
    cdef double x, ref, t, a, prev, partial, fsum, ferr, f_old, f_new, L
    cdef int run
    cdef bint done, anynz
    with nogil:
        for i in range(n):
            x = lx[i]
            for f in range(nf):
                lo = off[f]
                hi = off[f + 1]
                if hi <= lo:
                    continue
                first = -1
                ref = -INFINITY
                for j in range(lo, hi):
                    if sgn[j] != 0:
                        if first < 0:
                            first = j - lo
                        L = lc[j] + ex[j] * x
                        if L > ref:
                            ref = L
                if first < 0:
                    if not cl[f]:
                        conv[i] = 0
                    continue
                for j in range(lo, hi):
                    if sgn[j] != 0:
                        buf[j - lo] = sgn[j] * exp(lc[j] + ex[j] * x - ref)
                    else:
                        buf[j - lo] = 0.0
                stop = hi - lo
                done = cl[f] != 0
                partial = 0.0
                prev = INFINITY
                run = 0
                for j in range(hi - lo):
                    t = buf[j]
                    a = fabs(t)
                    partial += t
                    if not done and sgn[lo + j] != 0:
                        if a < rel_tol * fabs(partial) and (j == 0 or a <= prev * (1 + 1e-12)):
                            run += 1
                        else:
                            run = 0
                        if run >= patience and j - first + 1 >= min_terms:
                            stop = j + 1
                            done = True
                    prev = a
                    if done and not cl[f] and stop == j + 1:
                        break
                if not done:
                    conv[i] = 0
                fsum = 0.0
                ferr = 0.0
                lastnz = -1
                for j in range(stop):
                    t = buf[j]
                    fsum += t
                    ferr += fabs(t) * (re[lo + j] + 4 * EPS)
                    if sgn[lo + j] != 0:
                        lastnz = j
                if stop < hi - lo and lastnz >= 0:
                    ferr += fabs(buf[lastnz])
                if ref > scale[i]:
                    f_old = exp(scale[i] - ref) if isfinite(scale[i]) else 0.0
                    f_new = 1.0
                    scale[i] = ref
                else:
                    f_old = 1.0
                    f_new = exp(ref - scale[i])
                mant[i] = mant[i] * f_old + fsum * f_new
                err[i] = err[i] * f_old + ferr * f_new
            if not isfinite(scale[i]):
                scale[i] = 0.0
    return mant, scale, err, conv.astype(bool)
