"""O(1)-per-step inversion from closed-form wealth lower bounds.

Instead of maximizing the wealth numerically, each side uses the closed-form
quadratic-type lower bound

    G_lower(beta, m) = beta (mean - m)
                       - (-ln(1 - beta m) - beta m) (vbar + (mean - m)^2) / m^2

(and its mirror image for the upper side), maximized analytically at
beta_tilde, combined with the Bernoulli KL divergence which also lower
bounds the maximal log wealth.  Both pieces are monotone on their side of
the sample mean, so a binary search on the combined bound still yields an
interval.  Only the running mean and variance are consumed, so one update
costs a constant number of arithmetic operations.

Algorithm id: "a_co96".
"""

from __future__ import annotations

import math
from typing import Literal

from ._search import largest_excluded, smallest_excluded
from .moments import RunningMoments
from .regret import worst_case_regret
from .special import kl_bernoulli

__all__ = ["g_lower", "g_upper", "beta_tilde", "ApproxPortfolioTracker"]

_BETA_CLAMP = 1.0 - 1e-12

Side = Literal["lower", "upper"]


def g_lower(beta: float, m: float, mean: float, vbar: float) -> float:
    """Closed-form lower bound on (1/t) * max log wealth, for m <= mean.

    Valid for beta in [0, 1/m); returns -inf once beta*m reaches 1.
    """
    if not (0.0 < m <= 1.0):
        raise ValueError(f"g_lower requires m in (0, 1], got {m!r}")
    if beta < 0.0:
        raise ValueError(f"g_lower requires beta >= 0, got {beta!r}")
    q = beta * m
    if q >= 1.0:
        return -math.inf
    gap = mean - m
    return beta * gap - (-math.log1p(-q) - q) * (vbar + gap * gap) / (m * m)


def g_upper(beta: float, m: float, mean: float, vbar: float) -> float:
    """Mirror bound for the upper side, beta in (-1/(1-m), 0], m >= mean."""
    if not (0.0 <= m < 1.0):
        raise ValueError(f"g_upper requires m in [0, 1), got {m!r}")
    if beta > 0.0:
        raise ValueError(f"g_upper requires beta <= 0, got {beta!r}")
    q = (1.0 - m) * beta
    if q <= -1.0:
        return -math.inf
    gap = m - mean
    one_m = 1.0 - m
    return -beta * gap - (-math.log1p(q) + q) * (vbar + gap * gap) / (one_m * one_m)


def beta_tilde(side: Side, m: float, mean: float, vbar: float) -> float:
    """Closed-form maximizer of the matching side bound.

    Lower side: (mean - m) / (m (mean - m) + vbar + (mean - m)^2), which lies
    in [0, 1/m); upper side is the sign-flipped mirror in (-1/(1-m), 0].
    Returns 0 in the degenerate 0/0 case m = mean with zero variance.
    """
    if side == "lower":
        num = mean - m
        den = m * num + vbar + num * num
        if den <= 0.0:
            return 0.0
        return num / den
    if side == "upper":
        num = m - mean
        den = (1.0 - m) * num + vbar + num * num
        if den <= 0.0:
            return 0.0
        return -num / den
    raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")


class ApproxPortfolioTracker:
    """Constant-work-per-step confidence sequence (id "a_co96").

    ``use_sample_range`` tightens the KL piece by conditioning on the
    observed sample range [x_min, x_max] instead of [0, 1]; off by default.
    """

    def __init__(
        self,
        delta: float,
        precision: float = 1e-4,
        use_sample_range: bool = False,
    ) -> None:
        if not (0.0 < delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
        if not (0.0 < precision < 1.0):
            raise ValueError(f"precision must lie in (0, 1), got {precision!r}")
        self.delta = delta
        self.precision = precision
        self.use_sample_range = use_sample_range
        self.moments = RunningMoments()
        self.lower = 0.0
        self.upper = 1.0
        self._ln_inv_delta = math.log(1.0 / delta)

    @property
    def t(self) -> int:
        return self.moments.t

    def interval(self) -> tuple[float, float]:
        return self.lower, self.upper

    def _kl_piece(self, m: float) -> float:
        mo = self.moments
        mean = mo.mean
        if not self.use_sample_range:
            return kl_bernoulli(mean, m)
        x_lo, x_hi = mo.x_min, mo.x_max
        width = x_hi - x_lo
        if width < 1e-12:
            return kl_bernoulli(mean, m)
        # Jensen against the two-point support {x_min, x_max}; the optimal
        # fraction is clamped into the feasible betting range, which keeps
        # the value a valid lower bound on the maximal log wealth.
        p = (mean - x_lo) / width
        ca, cb = x_hi - m, x_lo - m
        if mean >= m:
            if m <= 0.0:
                return math.inf if mean > 0.0 else 0.0
            if ca <= 0.0:
                return 0.0
            beta = (mean - m) / (ca * -cb) if cb < 0.0 else math.inf
            beta = min(beta, _BETA_CLAMP / m)
        else:
            if m >= 1.0:
                return math.inf if mean < 1.0 else 0.0
            if cb >= 0.0:
                return 0.0
            beta = (mean - m) / (ca * -cb) if ca > 0.0 else -math.inf
            beta = max(beta, -_BETA_CLAMP / (1.0 - m))
        val = 0.0
        if p > 0.0:
            val += p * math.log1p(beta * ca)
        if p < 1.0:
            val += (1.0 - p) * math.log1p(beta * cb)
        return max(val, 0.0)

    def _bound_lower(self, m: float) -> float:
        mo = self.moments
        mean = mo.mean
        if m <= 0.0:
            return math.inf if mean > 0.0 else 0.0
        vbar = mo.vbar
        bt = beta_tilde("lower", m, mean, vbar)
        bt = min(max(bt, 0.0), _BETA_CLAMP / m)
        return max(g_lower(bt, m, mean, vbar), self._kl_piece(m))

    def _bound_upper(self, m: float) -> float:
        mo = self.moments
        mean = mo.mean
        if m >= 1.0:
            return math.inf if mean < 1.0 else 0.0
        vbar = mo.vbar
        bt = beta_tilde("upper", m, mean, vbar)
        bt = max(min(bt, 0.0), -_BETA_CLAMP / (1.0 - m))
        return max(g_upper(bt, m, mean, vbar), self._kl_piece(m))

    def update(self, x: float) -> tuple[float, float]:
        mo = self.moments
        mo.push(x)
        t = mo.t
        mu = mo.mean
        threshold = (worst_case_regret(t).value + self._ln_inv_delta) / t

        if self.lower < mu:
            self.lower = largest_excluded(
                lambda m: self._bound_lower(m) > threshold,
                self.lower,
                mu,
                self.precision,
            )
        if mu < self.upper:
            self.upper = smallest_excluded(
                lambda m: self._bound_upper(m) > threshold,
                mu,
                self.upper,
                self.precision,
            )
        return self.lower, self.upper
