"""Log-gamma in the real and complex domains."""

import numpy as np

from .._backend import kernels
from ..errors import PoleError


def log_gamma_complex(z):
    """Principal branch of ``log Gamma(z)`` (cut along the negative real axis).

    Accepts a scalar or an array; returns the same shape.
    """
    scalar = np.ndim(z) == 0
    try:
        out = kernels.log_gamma_complex(np.atleast_1d(np.asarray(z, dtype=complex)))
    except ValueError as exc:
        raise PoleError(f"log_gamma_complex: pole at {z!r}") from exc
    return complex(out[0]) if scalar else out.reshape(np.shape(z))


def lgamma_sign(x):
    """``(log|Gamma(x)|, sign Gamma(x))`` for real ``x``; poles give ``(inf, 0)``."""
    scalar = np.ndim(x) == 0
    la, sg = kernels.lgamma_real(np.atleast_1d(np.asarray(x, dtype=float)))
    if scalar:
        return float(la[0]), float(sg[0])
    return la.reshape(np.shape(x)), sg.reshape(np.shape(x))


def gamma_ratio_sign(num, den):
    """log-magnitude and sign of ``prod Gamma(num) / prod Gamma(den)``."""
    la_n, s_n = lgamma_sign(np.asarray(num, dtype=float))
    la_d, s_d = lgamma_sign(np.asarray(den, dtype=float))
    if np.any(s_n == 0):
        raise PoleError("gamma_ratio_sign: pole in the numerator")
    if np.any(s_d == 0):
        return -np.inf, 0.0
    return float(np.sum(la_n) - np.sum(la_d)), float(np.prod(s_n) * np.prod(s_d))
