"""Special functions: log-gamma, Meijer G, incomplete beta, noncentral F."""

from .gamma import lgamma_sign, log_gamma_complex
from .meijer import (
    DEFAULT_POLICY,
    EvalPolicy,
    GParams,
    SeriesEvaluator,
    cdf_transform,
    delta_expand,
    eval_g,
    invert_argument,
    log_eval_g,
    mb_kernel,
    power_shift,
)
