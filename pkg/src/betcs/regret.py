"""Regret upper bounds for the Dirichlet(1/2,1/2)-weighted two-stock portfolio.

The core object is

    f(b, k, t) = ln[ pi * b^k (1-b)^(t-k) * Gamma(t+1)
                     / (Gamma(k+1/2) Gamma(t-k+1/2)) ],

the log ratio between the wealth of the constant allocation b on a market
with k "first-stock" rounds out of t and the Dirichlet-mixture moment of the
same product.  Everything is evaluated in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

from .special import ln_gamma

__all__ = [
    "RegretBound",
    "f_regret",
    "argmax_k",
    "worst_case_regret",
    "side_regret",
]

_LN_PI = math.log(math.pi)
_LN_SQRT_PI = 0.5 * _LN_PI

Side = Literal["lower", "upper"]


@dataclass(frozen=True)
class RegretBound:
    """Nonnegative regret bound in nats, tagged with its provenance."""

    value: float
    kind: str  # "worst_case" | "data_dependent_lower_side" | "data_dependent_upper_side"


def f_regret(b: float, k: int, t: int) -> float:
    """f(b, k, t); -inf whenever b^k (1-b)^(t-k) vanishes.

    Convention 0^0 = 1 at the boundaries, so f(0, 0, t) and f(1, t, t) are
    finite and both equal the worst-case bound.
    """
    if t < 1:
        raise ValueError(f"f_regret requires t >= 1, got {t!r}")
    if not (0.0 <= b <= 1.0):
        raise ValueError(f"f_regret requires b in [0, 1], got {b!r}")
    if not (0 <= k <= t):
        raise ValueError(f"f_regret requires 0 <= k <= t, got k={k!r}, t={t!r}")
    if (b == 0.0 and k > 0) or (b == 1.0 and k < t):
        return -math.inf
    val = _LN_PI + ln_gamma(t + 1.0) - ln_gamma(k + 0.5) - ln_gamma(t - k + 0.5)
    if k > 0:
        val += k * math.log(b)
    if k < t:
        val += (t - k) * math.log1p(-b)
    return val


def _guarded_ceil(x: float) -> int:
    # snaps down when floating noise lands just above an integer
    return math.ceil(x - 1e-9)


def _guarded_floor(x: float) -> int:
    return math.floor(x + 1e-9)


def _clip_k(k: int, t: int) -> int:
    return 0 if k < 0 else t if k > t else k


def argmax_k(b: float, t: int) -> tuple[int, ...]:
    """Integers maximizing k -> f(b, k, t): {ceil(tb-0.5), floor(tb+0.5)}.

    One element in general, two at the partition boundaries b = (k+0.5)/t
    where both achieve the same value.
    """
    if t < 1:
        raise ValueError(f"argmax_k requires t >= 1, got {t!r}")
    if not (0.0 <= b <= 1.0):
        raise ValueError(f"argmax_k requires b in [0, 1], got {b!r}")
    k1 = _clip_k(_guarded_ceil(b * t - 0.5), t)
    k2 = _clip_k(_guarded_floor(b * t + 0.5), t)
    if k1 == k2:
        return (k1,)
    return (k1, k2) if k1 < k2 else (k2, k1)


@lru_cache(maxsize=None)
def _worst_case_value(t: int) -> float:
    return _LN_SQRT_PI + ln_gamma(t + 1.0) - ln_gamma(t + 0.5)


def worst_case_regret(t: int) -> RegretBound:
    """ln(sqrt(pi) Gamma(t+1) / Gamma(t+1/2)); strictly increasing in t."""
    if t < 1:
        raise ValueError(f"worst_case_regret requires t >= 1, got {t!r}")
    return RegretBound(_worst_case_value(t), "worst_case")


def _f_at_index(k: int, t: int) -> float:
    return f_regret(k / t, k, t)


def side_regret(side: Side, b_edge: float, mean: float, t: int) -> RegretBound:
    """Data-dependent regret bound for one side of the interval search.

    ``b_edge`` is the two-stock allocation maximizing the wealth at the
    previous interval endpoint (lower endpoint for the lower side, upper for
    the upper side); ``mean`` is the current sample mean.  The bound is the
    larger of f evaluated at the grid indices nearest those two allocations,
    clamped into [0, worst_case_regret(t)].
    """
    if t < 1:
        raise ValueError(f"side_regret requires t >= 1, got {t!r}")
    if not (0.0 <= b_edge <= 1.0) or not (0.0 <= mean <= 1.0):
        raise ValueError("side_regret requires b_edge and mean in [0, 1]")
    if side == "lower":
        k_edge = _clip_k(_guarded_ceil(b_edge * t - 0.5), t)
        k_mean = _clip_k(_guarded_floor(mean * t + 0.5), t)
        kind = "data_dependent_lower_side"
    elif side == "upper":
        k_edge = _clip_k(_guarded_floor(b_edge * t + 0.5), t)
        k_mean = _clip_k(_guarded_ceil(mean * t - 0.5), t)
        kind = "data_dependent_upper_side"
    else:
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    val = max(_f_at_index(k_edge, t), _f_at_index(k_mean, t))
    val = min(max(val, 0.0), _worst_case_value(t))
    return RegretBound(val, kind)
