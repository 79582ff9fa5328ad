"""GLRT statistics for one sensor and for the fused pair."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSampleError
from .model import FusedModel, SensorModel


@dataclass(frozen=True)
class TestStatistic:
    """A statistic value together with the exponents it was built from.

    For a single sensor ``exponent_m`` is 0.
    """

    __test__ = False  # not a pytest class

    value: float
    exponent_n: float
    exponent_m: float = 0.0

    @property
    def log_value(self) -> float:
        return float(np.log(self.value))


def sr_decomposition(obs, model: SensorModel):
    """Noise-subspace energy ``S`` and signal-subspace energy ``R``.

    Works on a single vector or row-wise on a 2-D array.
    """
    w = model.whiten(obs)
    proj = w @ model._q
    resid = w - proj @ model._q.T
    S = np.sum(resid * resid, axis=-1)
    R = np.sum(proj * proj, axis=-1)
    if np.ndim(S) == 0:
        return float(S), float(R)
    return S, R


def _ratio(S, R):
    S = np.asarray(S, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(S > 0, 1.0 + R / np.where(S > 0, S, 1.0), np.inf)
    return z


def statistic_single(obs, model: SensorModel) -> TestStatistic:
    """``Z = (S + R) / S``; raises on an exactly zero noise energy."""
    S, R = sr_decomposition(obs, model)
    if S == 0.0:
        raise DegenerateSampleError("noise-subspace energy is exactly zero")
    return TestStatistic(1.0 + R / S, model.samples / 2)


def log_statistic_fused_batch(obs_x, obs_y, fused: FusedModel):
    """Row-wise log of the fused statistic; degenerate rows give ``inf``."""
    Sx, Rx = sr_decomposition(np.atleast_2d(obs_x), fused.sensor_x)
    Sy, Ry = sr_decomposition(np.atleast_2d(obs_y), fused.sensor_y)
    with np.errstate(divide="ignore"):
        lx = np.log1p(np.where(Sx > 0, Rx / np.where(Sx > 0, Sx, 1.0), np.inf))
        ly = np.log1p(np.where(Sy > 0, Ry / np.where(Sy > 0, Sy, 1.0), np.inf))
    return fused.N / 2 * lx + fused.M / 2 * ly


def statistic_fused(obs_x, obs_y, fused: FusedModel) -> TestStatistic:
    """``Z_x^{N/2} Z_y^{M/2}``, combined in the log domain."""
    Sx, Rx = sr_decomposition(obs_x, fused.sensor_x)
    Sy, Ry = sr_decomposition(obs_y, fused.sensor_y)
    if Sx == 0.0 or Sy == 0.0:
        raise DegenerateSampleError("noise-subspace energy is exactly zero")
    logz = fused.N / 2 * np.log1p(Rx / Sx) + fused.M / 2 * np.log1p(Ry / Sy)
    return TestStatistic(float(np.exp(logz)), fused.N / 2, fused.M / 2)


def decide(stat, gamma: float) -> str:
    """Return ``"H1"`` when the statistic strictly exceeds ``gamma``.

    ``stat`` may be a :class:`TestStatistic` or a plain number.
    """
    if not gamma >= 1:
        raise ValueError("threshold gamma must be >= 1")
    value = stat.value if isinstance(stat, TestStatistic) else float(stat)
    return "H1" if value > gamma else "H0"
