"""Linear Gaussian observation model ``obs = H theta + noise`` for each sensor.

Noise has covariance ``sigma2 * R``. Whitening uses the triangular factor
``W = L^{-1}`` of the Cholesky decomposition ``R = L L^T`` (so ``W^T W = R^{-1}``);
every quadratic form below is computed from ``W @ obs``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
from scipy import linalg

from .errors import ModelError

Hypothesis = Literal["H0", "H1"]


def _check_hypothesis(h):
    if h not in ("H0", "H1"):
        raise ValueError(f"hypothesis must be 'H0' or 'H1', got {h!r}")


@dataclass(frozen=True)
class ChiSqParams:
    """Degrees of freedom and noncentrality of one sensor's quadratic forms."""

    c: int
    d: int
    lam: float = 0.0

    def __post_init__(self):
        if self.c < 0 or self.d < 1:
            raise ModelError("need c >= 0 and d >= 1")
        if self.lam < 0:
            raise ModelError("noncentrality must be nonnegative")


@dataclass(frozen=True, eq=False)
class SensorModel:
    """One modality: observation matrix, noise shape, parameters, noise scale.

    ``sigma2`` is only used by :meth:`simulate`; the detector never sees it.
    """

    H: np.ndarray
    R: np.ndarray
    theta: np.ndarray
    sigma2: float = 1.0
    _chol: np.ndarray = field(init=False, repr=False)
    _q: np.ndarray = field(init=False, repr=False)
    _r: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        H = np.atleast_2d(np.asarray(self.H, dtype=float))
        if H.shape[0] == 1 and np.ndim(self.H) == 1:
            H = H.T
        n, k = H.shape
        R = np.asarray(self.R, dtype=float)
        if R.shape != (n, n):
            raise ModelError(f"R must be {n}x{n}, got {R.shape}")
        if not np.allclose(R, R.T, rtol=1e-12, atol=1e-14 * np.abs(R).max()):
            raise ModelError("R must be symmetric")
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        if theta.shape != (k,):
            raise ModelError(f"theta must have length {k}, got {theta.shape}")
        if n < k + 1:
            raise ModelError("need at least one more sample than parameters")
        if not self.sigma2 > 0:
            raise ModelError("sigma2 must be positive")
        try:
            L = linalg.cholesky(R, lower=True)
        except linalg.LinAlgError as exc:
            raise ModelError("R is not positive definite") from exc
        A = linalg.solve_triangular(L, H, lower=True)
        q, r = linalg.qr(A, mode="economic")
        diag = np.abs(np.diag(r))
        if diag.min() <= 1e-12 * max(diag.max(), 1.0) * n:
            raise ModelError("H does not have full column rank")
        for name, val in (("H", H), ("R", R), ("theta", theta)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)
        object.__setattr__(self, "sigma2", float(self.sigma2))
        object.__setattr__(self, "_chol", L)
        object.__setattr__(self, "_q", q)
        object.__setattr__(self, "_r", r)

    @property
    def samples(self) -> int:
        return self.H.shape[0]

    @property
    def params(self) -> int:
        return self.H.shape[1]

    def whiten(self, obs):
        """``W @ obs`` for a vector or for rows of a 2-D array."""
        obs = np.asarray(obs, dtype=float)
        if obs.ndim == 1:
            return linalg.solve_triangular(self._chol, obs, lower=True)
        return linalg.solve_triangular(self._chol, obs.T, lower=True).T

    @classmethod
    def from_dict(cls, cfg: dict) -> "SensorModel":
        extra = set(cfg) - {"H", "R", "theta", "sigma2"}
        if extra:
            raise ModelError(f"unknown sensor keys: {sorted(extra)}")
        H = np.asarray(cfg["H"], dtype=float)
        if H.ndim == 1:
            H = H[:, None]
        R = cfg.get("R", "identity")
        if isinstance(R, str):
            if R != "identity":
                raise ModelError("R must be a matrix or the string 'identity'")
            R = np.eye(H.shape[0])
        return cls(H=H, R=np.asarray(R, dtype=float),
                   theta=np.asarray(cfg["theta"], dtype=float),
                   sigma2=float(cfg.get("sigma2", 1.0)))


@dataclass(frozen=True, eq=False)
class FusedModel:
    """Two independent sensors observing separate parameter vectors."""

    sensor_x: SensorModel
    sensor_y: SensorModel

    @property
    def N(self) -> int:
        return self.sensor_x.samples

    @property
    def M(self) -> int:
        return self.sensor_y.samples

    @classmethod
    def from_dict(cls, cfg: dict) -> "FusedModel":
        return cls(SensorModel.from_dict(cfg["sensor_x"]),
                   SensorModel.from_dict(cfg["sensor_y"]))


def load_fused_model(path) -> FusedModel:
    """Read a ``{"sensor_x": ..., "sensor_y": ...}`` JSON file."""
    cfg = json.loads(Path(path).read_text())
    return FusedModel.from_dict(cfg)


def projector(model: SensorModel):
    """Signal-subspace projector and its complement in whitened coordinates."""
    q = model._q
    P = q @ q.T
    P = 0.5 * (P + P.T)
    return P, np.eye(model.samples) - P


def mle_theta(model: SensorModel, obs):
    """Weighted least-squares estimate of theta."""
    w = model.whiten(obs)
    return linalg.solve_triangular(model._r, model._q.T @ w)


def mle_sigma2(model: SensorModel, obs, hypothesis: Hypothesis) -> float:
    """Maximum-likelihood noise scale under the given hypothesis."""
    _check_hypothesis(hypothesis)
    w = model.whiten(obs)
    total = float(w @ w)
    if hypothesis == "H0":
        return total / model.samples
    proj = model._q.T @ w
    resid = w - model._q @ proj
    return float(resid @ resid) / model.samples


def chisq_params(model: SensorModel, hypothesis: Hypothesis) -> ChiSqParams:
    """``(c, d, lambda)`` of the whitened noise/signal energies.

    ``lambda = theta^T H^T R^{-1} H theta / sigma2`` under H1 and 0 under H0.
    """
    _check_hypothesis(hypothesis)
    d = model.params
    c = model.samples - d
    if hypothesis == "H0":
        return ChiSqParams(c, d, 0.0)
    mean = model._r @ model.theta
    return ChiSqParams(c, d, float(mean @ mean) / model.sigma2)


def simulate(model: SensorModel, hypothesis: Hypothesis, rng: np.random.Generator, n: int):
    """Draw ``n`` observation vectors as rows of an ``(n, samples)`` array."""
    _check_hypothesis(hypothesis)
    z = rng.standard_normal((n, model.samples))
    noise = np.sqrt(model.sigma2) * (z @ model._chol.T)
    if hypothesis == "H1":
        noise += model.H @ model.theta
    return noise


def _cosine_basis(n, k):
    # orthogonal DCT-II columns: always full rank for k <= n
    i = np.arange(n)[:, None] + 0.5
    j = np.arange(k)[None, :]
    return np.cos(np.pi * i * j / n)


def make_sensor(samples: int, params: int, lam: float, sigma2: float = 1.0) -> SensorModel:
    """Sensor with ``R = I``, a cosine basis for ``H`` and noncentrality ``lam``.

    ``theta`` points along the all-ones direction, scaled so that
    ``theta^T H^T H theta / sigma2 = lam``.
    """
    H = _cosine_basis(samples, params)
    direction = np.ones(params)
    energy = float(np.sum((H @ direction) ** 2))
    theta = direction * np.sqrt(lam * sigma2 / energy)
    return SensorModel(H=H, R=np.eye(samples), theta=theta, sigma2=sigma2)


def make_fused_model(N: int, d_x: int, M: int, d_y: int, lambda_x: float,
                     lambda_y: float, sigma2_x: float = 1.0,
                     sigma2_y: float = 1.0) -> FusedModel:
    """Fused model whose analytic parameters are ``(N, M, N-d_x, d_x, M-d_y, d_y)``."""
    return FusedModel(make_sensor(N, d_x, lambda_x, sigma2_x),
                      make_sensor(M, d_y, lambda_y, sigma2_y))
