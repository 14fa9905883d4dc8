"""Betting-wealth evaluation and maximization.

A sample stream X_1..X_t and a candidate mean m define a continuous coin
c_i = X_i - m in [-m, 1-m]; betting a signed fraction beta of current wealth
on each outcome multiplies the wealth by 1 + beta * c_i.  The feasible
fractions keeping wealth nonnegative are beta in [-1/(1-m), 1/m].  This
module computes

  * the coin <-> two-stock market reduction,
  * H(m) = max over feasible beta of sum_i ln(1 + beta (X_i - m)),
  * the prior-mixture log wealth ln int prod_i (1 + beta (X_i - m)) dF(beta),
    by adaptive quadrature (test oracle; never on the runtime path).

H is strictly concave in beta, quasiconvex in m with its floor at the sample
mean, and equals t * D(mean, m) exactly on binary data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .moments import SampleStore
from .special import kl_bernoulli

__all__ = [
    "CoinOutcome",
    "WealthMax",
    "MixturePrior",
    "QuadratureError",
    "coin_to_market",
    "max_log_wealth",
    "h_profile",
    "mixture_log_wealth",
]

_BRACKET_EPS = 1e-12
_DERIV_TOL = 1e-10


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


@dataclass(frozen=True)
class CoinOutcome:
    """A centered sample c = x - m together with its centering point m."""

    c: float
    m: float


@dataclass(frozen=True)
class WealthMax:
    """Result of the inner concave maximization over betting fractions."""

    beta_star: float
    log_wealth: float
    at_boundary: bool


class MixturePrior(Enum):
    """Prior over betting strategies defining the mixture wealth."""

    DIRICHLET = "dirichlet"  # Beta(1/2,1/2) over the two-stock allocation b
    ROBBINS = "robbins"  # heavy-near-zero density over fractions in [-1,1]
    HALF_HALF = "half_half"  # equal initial wealth on each of the above


def coin_to_market(outcome: CoinOutcome) -> tuple[float, float]:
    """Market gains (1 + c/m, 1 - c/(1-m)) of the equivalent two-stock round.

    For any allocation b in [0,1], b*w1 + (1-b)*w2 = 1 + c*beta with
    beta = -1/(1-m) + (1/(1-m) + 1/m) * b, so a two-stock portfolio play is
    exactly a coin bet.
    """
    c, m = outcome.c, outcome.m
    if not (0.0 < m < 1.0):
        raise ValueError(f"coin_to_market requires m in (0, 1), got {m!r}")
    if not (-m - 1e-12 <= c <= 1.0 - m + 1e-12):
        raise ValueError(f"coin outcome {c!r} outside [-m, 1-m] for m={m!r}")
    return 1.0 + c / m, 1.0 - c / (1.0 - m)


def _binary_log_wealth(k: int, t: int, beta: float, m: float) -> float:
    """sum of logs for a binary stream with k ones, evaluated at beta."""
    val = 0.0
    if k > 0:
        val += k * math.log1p(beta * (1.0 - m))
    if k < t:
        val += (t - k) * math.log1p(-beta * m)
    return val


def max_log_wealth(
    store: SampleStore,
    m: float,
    beta_min: float | None = None,
    beta_max: float | None = None,
    beta0: float | None = None,
) -> WealthMax:
    """Maximize sum_i ln(1 + beta (X_i - m)) over feasible beta.

    ``beta_min`` / ``beta_max`` optionally restrict the feasible range (the
    Robbins-mixture path uses [-1, 1]).  Extended-real contract: with the
    unrestricted range, m = 0 diverges to +inf as soon as some sample is
    strictly positive, m = 1 as soon as some sample is strictly below one;
    a degenerate all-equal stream yields log wealth 0.

    ``beta0`` is a warm start for the inner root-finding; it never changes
    the result, only the iteration count.
    """
    t = store.t
    if t < 1:
        raise ValueError("max_log_wealth requires at least one sample")
    if beta_min is not None and beta_min > 0.0:
        raise ValueError("beta_min must not exclude the idle bet beta = 0")
    if beta_max is not None and beta_max < 0.0:
        raise ValueError("beta_max must not exclude the idle bet beta = 0")
    mo = store.moments

    plo = -math.inf if m >= 1.0 else -1.0 / (1.0 - m)
    phi = math.inf if m <= 0.0 else 1.0 / m
    lo, lo_closed = (plo, False)
    hi, hi_closed = (phi, False)
    if beta_min is not None and beta_min > lo:
        lo, lo_closed = beta_min, True
    if beta_max is not None and beta_max < hi:
        hi, hi_closed = beta_max, True

    if hi == math.inf:
        if store.n_positive > 0:
            return WealthMax(math.inf, math.inf, True)
        return WealthMax(0.0, 0.0, False)
    if lo == -math.inf:
        if store.n_at_one < t:
            return WealthMax(-math.inf, math.inf, True)
        return WealthMax(0.0, 0.0, False)

    if store.is_binary and 0.0 < m < 1.0:
        k = store.ones
        mu = mo.mean
        b_kl = (mu - m) / (m * (1.0 - m))
        if lo < b_kl < hi:
            return WealthMax(b_kl, t * kl_bernoulli(mu, m), False)
        beta = hi if b_kl >= hi else lo
        lw = _binary_log_wealth(k, t, beta, m)
        return WealthMax(beta, max(lw, 0.0), True)

    c = store.values - m
    cmax = float(c.max())
    cmin = float(c.min())
    if cmax == 0.0 and cmin == 0.0:
        return WealthMax(0.0, 0.0, False)

    # Finite-objective domain implied by the data, on top of the feasible
    # range; open endpoints are shrunk so every log argument stays positive.
    flo = -1.0 / cmax if cmax > 0.0 else -math.inf
    fhi = -1.0 / cmin if cmin < 0.0 else math.inf
    lo_eff = lo
    if not lo_closed or flo >= lo:
        base = max(lo, flo)
        lo_eff = base + _BRACKET_EPS * (1.0 + abs(base))
    hi_eff = hi
    if not hi_closed or fhi <= hi:
        base = min(hi, fhi)
        hi_eff = base - _BRACKET_EPS * (1.0 + abs(base))

    def deriv(beta: float) -> tuple[float, float]:
        d = 1.0 + beta * c
        if np.any(d <= 0.0):
            # objective is -inf here; point back toward the feasible side
            return (-math.inf if beta > 0.0 else math.inf), math.inf
        r = c / d
        return float(r.sum()), float(r @ r)

    def value(beta: float) -> float:
        d = beta * c
        if np.any(d <= -1.0):
            return -math.inf
        return float(np.log1p(d).sum())

    s_lo, _ = deriv(lo_eff)
    if s_lo <= 0.0:
        return WealthMax(lo_eff, max(value(lo_eff), 0.0), True)
    s_hi, _ = deriv(hi_eff)
    if s_hi >= 0.0:
        return WealthMax(hi_eff, max(value(hi_eff), 0.0), True)

    blo, bhi = lo_eff, hi_eff
    beta = beta0 if beta0 is not None and blo < beta0 < bhi else 0.5 * (blo + bhi)
    for _ in range(120):
        s, ss = deriv(beta)
        if abs(s) < _DERIV_TOL:
            break
        if s > 0.0:
            blo = beta
        else:
            bhi = beta
        if bhi - blo < _BRACKET_EPS:
            break
        if math.isfinite(s) and math.isfinite(ss) and ss > 0.0:
            nxt = beta + s / ss
        else:
            nxt = 0.5 * (blo + bhi)
        if not (blo < nxt < bhi):
            nxt = 0.5 * (blo + bhi)
        beta = nxt
    return WealthMax(beta, max(value(beta), 0.0), False)


def h_profile(store: SampleStore, m_grid) -> np.ndarray:
    """H(m) on a sorted grid of candidate means (extended reals)."""
    out = np.empty(len(m_grid), dtype=np.float64)
    beta = None
    for i, m in enumerate(m_grid):
        wm = max_log_wealth(store, float(m), beta0=beta)
        out[i] = wm.log_wealth
        beta = wm.beta_star if math.isfinite(wm.beta_star) else None
    return out


def _adaptive_simpson(f, a: float, b: float, tol: float, max_depth: int = 48) -> float:
    """Classic adaptive Simpson with an absolute tolerance."""
    fa, fb = f(a), f(b)
    mid = 0.5 * (a + b)
    fm = f(mid)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, fa, b, fb, mid, fm, whole, tol, depth):
        lmid = 0.5 * (a + mid)
        rmid = 0.5 * (mid + b)
        flm, frm = f(lmid), f(rmid)
        left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb)
        if depth >= max_depth:
            raise QuadratureError("adaptive quadrature exceeded maximum depth")
        if abs(left + right - whole) <= 15.0 * tol:
            return left + right + (left + right - whole) / 15.0
        half = 0.5 * tol
        return recurse(a, fa, mid, fm, lmid, flm, left, half, depth + 1) + recurse(
            mid, fm, b, fb, rmid, frm, right, half, depth + 1
        )

    return recurse(a, fa, b, fb, mid, fm, whole, tol, 0)


def _log_integral(log_f, a: float, b: float, rel_tol: float) -> float:
    """ln of int_a^b exp(log_f), with the integrand rescaled by its coarse max."""
    grid = np.linspace(a, b, 65)
    samples = np.array([log_f(x) for x in grid])
    scale = float(samples.max())
    if not math.isfinite(scale):
        raise QuadratureError("mixture integrand is not finite on the domain")

    def f(x: float) -> float:
        return math.exp(log_f(x) - scale)

    rough = float(np.trapezoid(np.exp(samples - scale), grid))
    tol = rel_tol * max(rough, 1e-12)
    val = _adaptive_simpson(f, a, b, tol)
    if val <= 0.0:
        raise QuadratureError("mixture integral evaluated to a nonpositive value")
    return math.log(val) + scale


_ROBBINS_C = 6.6 * math.e
_LNLN_C = math.log(math.log(_ROBBINS_C))


def _robbins_beta_of_s(s: float) -> float:
    # inverse of s = 1 / ln ln(c/beta); double-exponentially small near s=0
    if s <= 0.0:
        return 0.0
    e = 1.0 / s
    if e > 700.0:
        return 0.0
    return _ROBBINS_C * math.exp(-math.exp(e))


def mixture_log_wealth(
    store: SampleStore, m: float, prior: MixturePrior, rel_tol: float = 1e-8
) -> float:
    """ln of the prior-mixture wealth at candidate mean m (quadrature oracle).

    Dirichlet integrates over the two-stock allocation b with the endpoint
    singularity removed by b = sin^2(theta); the Robbins prior integrates
    each sign of beta in the coordinate s = 1/ln ln(c/|beta|), in which the
    prior mass is exactly uniform.  Only used by tests; t is expected small
    enough that the wealth products stay within double range.
    """
    t = store.t
    if t == 0:
        return 0.0
    if prior is MixturePrior.HALF_HALF:
        d = mixture_log_wealth(store, m, MixturePrior.DIRICHLET, rel_tol)
        r = mixture_log_wealth(store, m, MixturePrior.ROBBINS, rel_tol)
        return float(np.logaddexp(math.log(0.5) + d, math.log(0.5) + r))

    x = store.values

    if prior is MixturePrior.DIRICHLET:
        if not (0.0 < m < 1.0):
            raise ValueError("Dirichlet mixture wealth requires m in (0, 1)")
        w1 = x / m
        w2 = (1.0 - x) / (1.0 - m)

        def log_f(theta: float) -> float:
            b = math.sin(theta) ** 2
            gains = b * w1 + (1.0 - b) * w2
            if np.any(gains <= 0.0):
                return -math.inf
            return float(np.log(gains).sum())

        return _log_integral(log_f, 0.0, 0.5 * math.pi, rel_tol) + math.log(2.0 / math.pi)

    if prior is MixturePrior.ROBBINS:
        c = x - m
        s1 = 1.0 / _LNLN_C

        def make_side(sign: float):
            def log_f(s: float) -> float:
                beta = sign * _robbins_beta_of_s(s)
                d = beta * c
                if np.any(d <= -1.0):
                    return -math.inf
                return float(np.log1p(d).sum())

            return log_f

        pos = _log_integral(make_side(1.0), 0.0, s1, rel_tol)
        neg = _log_integral(make_side(-1.0), 0.0, s1, rel_tol)
        return float(np.logaddexp(pos, neg)) + math.log(0.5 * _LNLN_C)

    raise ValueError(f"unknown mixture prior: {prior!r}")
