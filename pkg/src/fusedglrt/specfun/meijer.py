"""Meijer G-function evaluation and parameter identities.

The G-function is

    G^{m,n}_{p,q}(x | a; b) = 1/(2 pi i) * int_L g(s) x^{-s} ds,

    g(s) = prod_{j<=m} Gamma(b_j + s) prod_{j<=n} Gamma(1 - a_j - s)
           / (prod_{j>n} Gamma(a_j + s) prod_{j>m} Gamma(1 - b_j - s)).

Evaluation is by residue series (left poles for p < q, or p == q and x < 1;
right poles for p == q and x > 1) or by trapezoidal quadrature along a
vertical contour when the integrand decays exponentially.

Before summing residues, gamma pairs whose arguments differ by a nonnegative
integer are collapsed into Pochhammer polynomials. This removes the spurious
pole collisions that the H1 kernels of the fused detector produce (e.g. a
``Gamma(k + s) / Gamma(s)`` pair). Genuine higher-order poles that survive are
split by a symmetric parameter perturbation and the two results averaged.
"""

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy import optimize

from .._backend import kernels
from ..errors import (
    DivergentIntegralError,
    NonConvergenceError,
    PoleError,
    SeparabilityError,
    UnsupportedClassError,
)
from .gamma import log_gamma_complex

_INT_TOL = 1e-10
_EPS = np.finfo(float).eps
_LOG_MAX = 709.0
_CANCEL_FACTOR = 100.0

Strategy = Literal["residue-series", "contour-quadrature", "auto"]


def _is_int(v):
    return abs(v - round(v)) < _INT_TOL


@dataclass(frozen=True)
class GParams:
    """Order indices and parameter rows of ``G^{m,n}_{p,q}``."""

    m: int
    n: int
    a: tuple = ()
    b: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if not 0 <= self.m <= self.q:
            raise ValueError(f"need 0 <= m <= q, got m={self.m}, q={self.q}")
        if not 0 <= self.n <= self.p:
            raise ValueError(f"need 0 <= n <= p, got n={self.n}, p={self.p}")
        for i in range(self.n):
            for j in range(self.m):
                d = self.a[i] - self.b[j]
                if d > 1 - _INT_TOL and _is_int(d):
                    raise SeparabilityError(
                        f"a[{i}] - b[{j}] = {d:g} is a positive integer: the poles of "
                        f"Gamma(b_{j + 1}+s) and Gamma(1-a_{i + 1}-s) coincide"
                    )

    @property
    def p(self):
        return len(self.a)

    @property
    def q(self):
        return len(self.b)

    def __str__(self):
        return (f"G^{{{self.m},{self.n}}}_{{{self.p},{self.q}}}"
                f"(a={list(self.a)}; b={list(self.b)})")


@dataclass(frozen=True)
class EvalPolicy:
    strategy: Strategy = "auto"
    rel_tol: float = 1e-12
    max_terms: int = 10000
    pole_epsilon: float = 2e-3

    def __post_init__(self):
        if self.strategy not in ("residue-series", "contour-quadrature", "auto"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not 0 < self.pole_epsilon <= 0.01:
            raise ValueError("pole_epsilon must lie in (0, 0.01]")


DEFAULT_POLICY = EvalPolicy()


def delta_expand(k: int, a: float) -> list:
    """``[a/k, (a+1)/k, ..., (a+k-1)/k]``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return [(a + i) / k for i in range(k)]


# ---------------------------------------------------------------------------
# Mellin-Barnes kernel and contour quadrature

def _log_kernel(params: GParams, s):
    s = np.asarray(s, dtype=complex)
    acc = np.zeros_like(s)
    m, n = params.m, params.n
    for j, bj in enumerate(params.b):
        if j < m:
            acc = acc + log_gamma_complex(bj + s)
        else:
            acc = acc - log_gamma_complex(1.0 - bj - s)
    for j, aj in enumerate(params.a):
        if j < n:
            acc = acc + log_gamma_complex(1.0 - aj - s)
        else:
            acc = acc - log_gamma_complex(aj + s)
    return acc


def mb_kernel(params: GParams, eta: complex) -> complex:
    """The gamma-ratio integrand ``g(a, b, eta)``, evaluated in log space."""
    lg = complex(np.atleast_1d(_log_kernel(params, np.atleast_1d(complex(eta))))[0])
    if lg.real > _LOG_MAX:
        raise OverflowError(f"|g| = exp({lg.real:.1f}) overflows")
    return complex(np.exp(lg))


def _contour_line(params: GParams, logx: float = 0.0):
    """Abscissa ``gamma`` of the contour, its distance to the nearest pole and
    the log-magnitude of the numerator gammas times ``x^{-gamma}`` there.

    The line sits at the saddle of that (convex) magnitude inside the strip
    separating the pole families, so the integrand carries no large
    oscillating mass that would cancel.
    """
    bp = np.array(params.b[:params.m], dtype=float)
    am = np.array(params.a[:params.n], dtype=float)
    lo = float(np.max(-bp)) if bp.size else -np.inf
    hi = float(np.min(1.0 - am)) if am.size else np.inf
    if not lo < hi:
        raise UnsupportedClassError(
            "contour quadrature: no vertical line separates the pole families "
            f"(max(-b_j) = {lo:g} >= min(1-a_i) = {hi:g})")
    if np.isfinite(lo) and np.isfinite(hi):
        margin = 0.25 * (hi - lo)
    else:
        margin = 0.5
    reach = 10.0 + 2.0 * np.exp(min(abs(logx), 600.0) / max(params.m + params.n, 1))
    left = lo + margin if np.isfinite(lo) else hi - margin - reach
    right = hi - margin if np.isfinite(hi) else lo + margin + reach

    def phi(g):
        return (sum(math.lgamma(b + g) for b in bp)
                + sum(math.lgamma(1.0 - a - g) for a in am) - g * logx)

    if right > left:
        g = optimize.minimize_scalar(phi, bounds=(left, right), method="bounded",
                                     options={"xatol": 1e-6}).x
    else:
        g = 0.5 * (left + right)
    return g, min(g - lo, hi - g), phi(g)


def _contour_quadrature(params: GParams, x: float, policy: EvalPolicy):
    cstar = params.m + params.n - 0.5 * (params.p + params.q)
    if cstar <= 0:
        raise UnsupportedClassError(
            "contour quadrature needs m + n > (p + q)/2 for an exponentially "
            f"decaying integrand (m + n - (p + q)/2 = {cstar:g})")
    logx = np.log(x)
    gam, dist, scale = _contour_line(params, logx)
    dist = min(dist, 1.0 + np.sqrt(abs(gam)))
    tol = policy.rel_tol

    def f(t):
        s = gam + 1j * t
        return np.exp(_log_kernel(params, s) - s * logx - scale).real / np.pi

    h = 2 * np.pi * dist / (np.log(1.0 / tol) + 8.0)
    # length of the integration range: the integrand decays like exp(-pi c* t)
    block = 256

    def trapezoid(h, offset):
        total, peak, j0 = 0.0, 0.0, 0
        while True:
            t = (np.arange(j0, j0 + block) + offset) * h
            vals = f(t)
            if offset == 0.0 and j0 == 0:
                vals[0] *= 0.5
            total += vals.sum()
            peak = max(peak, np.abs(vals).max())
            j0 += block
            tail = np.abs(vals[-16:]).max()
            if tail <= 1e-3 * tol * max(abs(total), 1e-300) or tail <= 1e-300 * peak:
                return total
            if j0 * h * np.pi * cstar > 800 or j0 > 2_000_000:
                return total

    s_h = trapezoid(h, 0.0)
    est = h * s_h
    for _ in range(12):
        s_mid = trapezoid(h, 0.5)
        new = 0.5 * h * (s_h + s_mid)
        if abs(new - est) <= tol * abs(new):
            return new, abs(new - est) + 10 * _EPS * abs(new), scale
        s_h = s_h + s_mid
        h *= 0.5
        est = new
    raise NonConvergenceError("contour quadrature did not converge",
                              achieved=abs(new - est) / max(abs(new), 1e-300))


# ---------------------------------------------------------------------------
# Residue series

@dataclass
class _Reduced:
    """Integrand after collapsing integer-spaced gamma pairs.

    g(s) = prod Gamma(plus + s) prod Gamma(minus - s) prod (u + s)_r
           prod (v - s)_r / (prod Gamma(dplus + s) prod Gamma(dminus - s))
    """

    plus: list
    minus: list
    dplus: list
    dminus: list
    poly_plus: list = field(default_factory=list)
    poly_minus: list = field(default_factory=list)


def _reduce(params: GParams) -> _Reduced:
    m, n = params.m, params.n
    plus = list(params.b[:m])
    dminus = [1.0 - bj for bj in params.b[m:]]
    minus = [1.0 - aj for aj in params.a[:n]]
    dplus = list(params.a[n:])
    red = _Reduced(plus=[], minus=[], dplus=dplus, dminus=dminus)
    for beta in plus:
        # Gamma(beta+s)/Gamma(a+s) = (a+s)_{beta-a} when beta-a is a nonnegative integer
        best = None
        for i, av in enumerate(red.dplus):
            r = beta - av
            if r > -_INT_TOL and _is_int(r) and (best is None or r < best[1]):
                best = (i, r)
        if best is None:
            red.plus.append(beta)
        else:
            av = red.dplus.pop(best[0])
            if round(best[1]) > 0:
                red.poly_plus.append((av, int(round(best[1]))))
    for alpha in minus:
        best = None
        for i, dv in enumerate(red.dminus):
            r = alpha - dv
            if r > -_INT_TOL and _is_int(r) and (best is None or r < best[1]):
                best = (i, r)
        if best is None:
            red.minus.append(alpha)
        else:
            dv = red.dminus.pop(best[0])
            if round(best[1]) > 0:
                red.poly_minus.append((dv, int(round(best[1]))))
    return red


def _clusters(values):
    """Groups of indices whose values differ pairwise by integers."""
    groups = []
    for i, v in enumerate(values):
        for g in groups:
            if _is_int(v - values[g[0]]):
                g.append(i)
                break
        else:
            groups.append([i])
    return [g for g in groups if len(g) > 1]


def _perturbations(values, eps):
    """Shifted copies of ``values`` that split integer clusters.

    Cluster members are moved apart by ``rank * delta`` for the signed steps
    ``delta`` in ``_RICHARDSON_STEPS * eps``. Returns ``None`` when no
    cluster exists.
    """
    groups = _clusters(values)
    if not groups:
        return None
    out = []
    for step in _RICHARDSON_STEPS:
        for sgn in (1.0, -1.0):
            shifted = list(values)
            for g in groups:
                # larger clusters cancel harder, so they get a wider step
                e = eps * _CLUSTER_SCALE.get(len(g), 5.0)
                for rank, idx in enumerate(sorted(g, key=lambda i: values[i])):
                    shifted[idx] = values[idx] + sgn * rank * step * e
            out.append(shifted)
    return out


# The G-function is analytic in the shift, so the symmetric averages form an
# even series in the step and Richardson extrapolation in step**2 applies.
_RICHARDSON_STEPS = (1.0, 2.0, 3.0)
_CLUSTER_SCALE = {2: 1.0, 3: 2.5}
_RICHARDSON_WEIGHTS = (1.5, -0.6, 0.1)
_RICHARDSON_LOWER = (4.0 / 3.0, -1.0 / 3.0)


def _poch_log(base, k, r):
    """log|(w)_r| and sign for ``w = base + k`` with integer array ``k``.

    Zero-valued symbols get sign 0. When both ``w`` and ``w + r`` sit at
    poles the ratio is finite and taken from the reflected form.
    """
    la_hi, s_hi = kernels.lgamma_shift(base + r, k)
    la_lo, s_lo = kernels.lgamma_shift(base, k)
    with np.errstate(invalid="ignore"):
        la = np.where(s_lo == 0, 0.0, la_hi - la_lo)
    sg = np.where(s_lo == 0, 0.0, s_hi * s_lo)
    both = (s_lo == 0) & (s_hi == 0)
    if both.any():
        # (w)_r = (-1)^r Gamma(1-w) / Gamma(1-w-r) for w, w+r nonpositive integers
        w = base + k[both]
        la[both] = kernels.lgamma_real(1.0 - w)[0] - kernels.lgamma_real(1.0 - w - r)[0]
        sg[both] = -1.0 if r % 2 else 1.0
    return la, sg


def _family_terms(red: _Reduced, side: str, h: int, K: int):
    """Log-coefficients of the residue series of pole family ``h``.

    Term k multiplies ``x**expo[k]``. Returns (log_coef, sign, expo, rel_err,
    closed) where ``closed`` flags a family that terminates structurally.
    """
    k = np.arange(K, dtype=float)
    if side == "left":
        pole = red.plus[h]
        s0 = -pole - k
        others_plus = [v for i, v in enumerate(red.plus) if i != h]
        others_minus = red.minus
        # finite family: Gamma(dplus + s0) hits its poles for every k >= a - beta
        length = K
        closed = False
        for av in red.dplus:
            r = av - pole
            if r > -_INT_TOL and _is_int(r):
                length = min(length, int(round(r)))
                closed = True
    else:
        pole = red.minus[h]
        s0 = pole + k
        others_plus = red.plus
        others_minus = [v for i, v in enumerate(red.minus) if i != h]
        length = K
        closed = False
        for dv in red.dminus:
            r = dv - pole
            if r > -_INT_TOL and _is_int(r):
                length = min(length, int(round(r)))
                closed = True
    if closed and length <= K:
        k = k[:length]
        s0 = s0[:length]
    else:
        closed = False
    # gamma arguments are split as base + integer so that the distance to a
    # pole stays exact (matters after perturbation)
    sgn = -1.0 if side == "left" else 1.0  # s0 = sgn * k + (+-pole)
    shift = -pole if side == "left" else pole

    def lg_plus(v):
        return kernels.lgamma_shift(v + shift, sgn * k)

    def lg_minus(v):
        return kernels.lgamma_shift(v - shift, -sgn * k)

    la, sg = kernels.lgamma_real(k + 1.0)
    logc = -la
    sign = np.where(np.remainder(k, 2) == 0, 1.0, -1.0)
    magsum = np.abs(la)
    for v in others_plus:
        l, s = lg_plus(v)
        if np.any(s == 0):
            raise PoleError("coincident poles survived perturbation")
        logc += l
        sign *= s
        magsum += np.abs(l)
    for v in others_minus:
        l, s = lg_minus(v)
        if np.any(s == 0):
            raise SeparabilityError("left and right pole families intersect")
        logc += l
        sign *= s
        magsum += np.abs(l)
    for v in red.dplus:
        l, s = lg_plus(v)
        zero = s == 0
        logc -= np.where(zero, 0.0, l)
        sign = np.where(zero, 0.0, sign * s)
        magsum += np.where(zero, 0.0, np.abs(l))
    for v in red.dminus:
        l, s = lg_minus(v)
        zero = s == 0
        logc -= np.where(zero, 0.0, l)
        sign = np.where(zero, 0.0, sign * s)
        magsum += np.where(zero, 0.0, np.abs(l))
    for u, r in red.poly_plus:
        l, s = _poch_log(u + shift, sgn * k, r)
        logc += np.where(s == 0, 0.0, l)
        sign = sign * s
        magsum += np.where(s == 0, 0.0, np.abs(l))
    for u, r in red.poly_minus:
        l, s = _poch_log(u - shift, -sgn * k, r)
        logc += np.where(s == 0, 0.0, l)
        sign = sign * s
        magsum += np.where(s == 0, 0.0, np.abs(l))
    logc = np.where(sign == 0, -np.inf, logc)
    rel_err = 2 * _EPS * (magsum + 1.0)
    return logc, sign, -s0, rel_err, closed


class _Plan:
    """Residue series for one side of one (possibly perturbed) integrand."""

    def __init__(self, red: _Reduced, side: str):
        self.red = red
        self.side = side
        self.nfam = len(red.plus) if side == "left" else len(red.minus)
        self._K = 0
        self._arrays = None

    def arrays(self, K):
        if K != self._K:
            parts = [_family_terms(self.red, self.side, h, K) for h in range(self.nfam)]
            lens = [len(p[0]) for p in parts]
            offsets = np.concatenate([[0], np.cumsum(lens)]).astype(np.int64)
            cat = lambda i: (np.concatenate([p[i] for p in parts])
                             if parts else np.zeros(0))
            self._arrays = (cat(0), cat(1), cat(2), cat(3), offsets,
                            np.array([p[4] for p in parts], dtype=np.uint8))
            self._K = K
        return self._arrays

    def evaluate(self, log_x, policy: EvalPolicy, min_terms=1, strict=True):
        n = log_x.size
        mant = np.zeros(n)
        scale = np.zeros(n)
        err = np.zeros(n)
        if self.nfam == 0:
            return mant, scale, err
        todo = np.arange(n)
        K = min(64, policy.max_terms)
        while True:
            lc, sg, ex, re, off, closed = self.arrays(K)
            res = kernels.series_sum(lc, sg, ex, re, off, closed, log_x[todo],
                                     policy.rel_tol, min_terms)
            mant[todo], scale[todo], err[todo] = res[0], res[1], res[2]
            bad = ~res[3]
            if not bad.any():
                break
            todo = todo[bad]
            if K >= policy.max_terms:
                if not strict:
                    err[todo] = np.inf
                    break
                rel = np.abs(err[todo] / np.where(mant[todo] == 0, 1.0, mant[todo]))
                raise NonConvergenceError(
                    f"residue series did not converge within max_terms={policy.max_terms}",
                    achieved=float(np.max(rel)))
            K = min(2 * K, policy.max_terms)
        return mant, scale, err


def _combine(parts, weights):
    """Weighted sum of (mantissa, scale, err) triples."""
    scale = np.max([p[1] for p in parts], axis=0)
    mant = sum(w * p[0] * np.exp(p[1] - scale) for p, w in zip(parts, weights))
    err = sum(abs(w) * p[2] * np.exp(p[1] - scale) for p, w in zip(parts, weights))
    return mant, scale, err


class SeriesEvaluator:
    """Residue-series evaluation of a fixed G-function at many arguments.

    Coefficients depend only on the parameters, so they are computed once and
    reused for every ``x``.
    """

    def __init__(self, params: GParams, side: str, policy: EvalPolicy = DEFAULT_POLICY):
        self.params = params
        self.side = side
        self.policy = policy
        red = _reduce(params)
        poles = red.plus if side == "left" else red.minus
        shifted = _perturbations(poles, policy.pole_epsilon)
        if shifted is None:
            self.plans = [_Plan(red, side)]
        else:
            self.plans = []
            for vals in shifted:
                r2 = _Reduced(plus=list(red.plus), minus=list(red.minus),
                              dplus=red.dplus, dminus=red.dminus,
                              poly_plus=red.poly_plus, poly_minus=red.poly_minus)
                if side == "left":
                    r2.plus = vals
                else:
                    r2.minus = vals
                self.plans.append(_Plan(r2, side))

    @property
    def perturbed(self):
        return len(self.plans) > 1

    def log_evaluate(self, x, min_terms=1, strict=True):
        """Return ``(mantissa, log_scale, abserr)`` arrays for positive ``x``.

        With ``strict=False`` arguments whose series hit ``max_terms`` get an
        infinite error instead of raising :class:`NonConvergenceError`.
        """
        log_x = np.log(np.atleast_1d(np.asarray(x, dtype=float)))
        parts = [plan.evaluate(log_x, self.policy, min_terms, strict)
                 for plan in self.plans]
        if len(parts) == 1:
            return parts[0]
        half = lambda ws: [w / 2 for w in ws for _ in (0, 1)]
        mant, scale, err = _combine(parts, half(_RICHARDSON_WEIGHTS))
        # truncation error estimated against the next-lower extrapolant
        low = _combine(parts[:4], half(_RICHARDSON_LOWER))
        diff = np.abs(mant - low[0] * np.exp(low[1] - scale))
        return mant, scale, err + diff


def _check_x(x):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~(x > 0)) or np.any(~np.isfinite(x)):
        raise ValueError("eval_g: x must be positive and finite")
    return x


def _series_side(params: GParams, x: float):
    p, q = params.p, params.q
    if p < q:
        return "left"
    if p == q:
        if x < 1:
            return "left"
        if x > 1:
            return "right"
        raise UnsupportedClassError("residue series: p == q requires x != 1")
    raise UnsupportedClassError(
        f"residue series: p > q (p={p}, q={q}) is not a supported class; "
        "apply invert_argument first")


def log_eval_g(params: GParams, x, policy: EvalPolicy = DEFAULT_POLICY):
    """Vectorised evaluation returning ``(mantissa, log_scale, abserr)``.

    ``G(x) = mantissa * exp(log_scale)``; useful when callers fold large or
    tiny prefactors into the result without overflow.
    """
    x = _check_x(x)
    mant = np.empty(x.size)
    scale = np.empty(x.size)
    err = np.empty(x.size)
    if policy.strategy == "contour-quadrature":
        sides = np.array(["contour"] * x.size, dtype=object)
    else:
        sides = np.empty(x.size, dtype=object)
        for i, xi in enumerate(x):
            try:
                sides[i] = _series_side(params, xi)
            except UnsupportedClassError:
                if policy.strategy == "residue-series":
                    raise
                sides[i] = "contour"
    for side in ("left", "right"):
        sel = sides == side
        if sel.any():
            ev = SeriesEvaluator(params, side, policy)
            mant[sel], scale[sel], err[sel] = ev.log_evaluate(x[sel])
    sel = np.flatnonzero(sides == "contour")
    for i in sel:
        mant[i], err[i], scale[i] = _contour_quadrature(params, float(x[i]), policy)
    if policy.strategy == "auto":
        # series summed through heavy cancellation: retry on the contour
        lossy = np.flatnonzero((sides != "contour")
                               & (err > _CANCEL_FACTOR * policy.rel_tol * np.abs(mant)))
        for i in lossy:
            try:
                v, e, sc = _contour_quadrature(params, float(x[i]), policy)
            except (UnsupportedClassError, NonConvergenceError):
                continue
            if e * np.exp(sc - scale[i]) < err[i]:
                mant[i], err[i], scale[i] = v, e, sc
    return mant, scale, err


def eval_g(params: GParams, x, policy: EvalPolicy = None, full_output=False):
    """Evaluate ``G^{m,n}_{p,q}(x | a; b)`` for real ``x > 0``.

    Supported classes: p < q (any x), p == q with x != 1, and any parameter
    set whose Mellin-Barnes integrand decays exponentially along a separating
    vertical line (contour quadrature). ``x`` may be a scalar or an array.
    With ``full_output`` an absolute error estimate is returned as well.
    """
    policy = policy or DEFAULT_POLICY
    scalar = np.ndim(x) == 0
    mant, scale, err = log_eval_g(params, x, policy)
    with np.errstate(over="raise"):
        try:
            val = mant * np.exp(scale)
            abserr = err * np.exp(scale)
        except FloatingPointError as exc:
            raise OverflowError("G-function value overflows a double") from exc
    if scalar:
        val, abserr = float(val[0]), float(abserr[0])
    else:
        val = val.reshape(np.shape(x))
        abserr = abserr.reshape(np.shape(x))
    if full_output:
        return val, abserr
    return val


# ---------------------------------------------------------------------------
# Parameter identities

def power_shift(params: GParams, t: float) -> GParams:
    """Parameters of ``x**t * G(x)``: every a_j and b_j shifted by ``t``."""
    return GParams(params.m, params.n,
                   tuple(v + t for v in params.a), tuple(v + t for v in params.b))


def invert_argument(params: GParams) -> GParams:
    """Parameters ``H`` with ``G(1/x) = H(x)``."""
    return GParams(params.n, params.m,
                   tuple(1.0 - v for v in params.b), tuple(1.0 - v for v in params.a))


def cdf_transform(params: GParams, alpha: float) -> GParams:
    """Parameters ``H`` with ``int_0^y x**(alpha-1) G(w x) dx = y**alpha H(w y)``."""
    m, n = params.m, params.n
    bad = [bj for bj in params.b[:m] if not alpha + bj > 0]
    if bad:
        raise DivergentIntegralError(
            f"cdf_transform: integral diverges at 0 (alpha + b_j <= 0 for b_j in {bad})")
    a = params.a[:n] + (1.0 - alpha,) + params.a[n:]
    b = params.b[:m] + (-alpha,) + params.b[m:]
    return GParams(m, n + 1, a, b)


def concat_rows(*rows: Sequence[float]) -> tuple:
    """Flatten parameter sub-rows (e.g. several ``delta_expand`` blocks)."""
    return tuple(v for row in rows for v in row)
