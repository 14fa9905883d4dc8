"""Closed-form confidence sequences and the two-prior mixture tracker.

The empirical-Bernstein tracker inverts the symmetric quadratic relaxation
of the wealth bound in closed form:

    eps_i = (4/3 i R_i + sqrt(16/9 i^2 R_i^2 + 8 V_i R_i (i^2 - 2 i R_i)))
            / (2 i^2 - 4 i R_i),          R_i = worst-case regret + ln(1/delta),

valid once i > 2 R_i and vacuous (+inf) before that; the interval is the
running intersection of mean +/- eps clipped to [0, 1].

The mixed tracker splits the initial wealth between the exact-portfolio
wealth bound and the heavy-near-zero mixture bound; their sum is still a
wealth, so excluding m when
    weight * exp(lb_exact(m)) + (1-weight) * exp(lb_mixture(m)) >= 1/delta
remains anytime-valid while inheriting the better width of either prior.

Algorithm ids: "bernstein", "mix".
"""

from __future__ import annotations

import math

import numpy as np

from ._search import largest_excluded, smallest_excluded
from .moments import RunningMoments, SampleStore
from .regret import side_regret, worst_case_regret
from .robbins import regret_ratio
from .wealth import WealthMax, max_log_wealth

__all__ = ["epsilon_bernstein", "EmpiricalBernsteinTracker", "MixedPortfolioTracker"]


def epsilon_bernstein(i: int, v: float, delta: float) -> float:
    """Half width of the closed-form bound at step i with centered css v.

    +inf while i <= 2 R_i (the small-sample regime where the quadratic
    relaxation of the logarithm has no informative root).
    """
    if i < 1:
        raise ValueError(f"epsilon_bernstein requires i >= 1, got {i!r}")
    if v < 0.0:
        raise ValueError(f"epsilon_bernstein requires v >= 0, got {v!r}")
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    r = worst_case_regret(i).value + math.log(1.0 / delta)
    if i <= 2.0 * r:
        return math.inf
    ir = i * r
    num = (4.0 / 3.0) * ir + math.sqrt(
        (16.0 / 9.0) * ir * ir + 8.0 * v * r * (i * i - 2.0 * ir)
    )
    return num / (2.0 * i * i - 4.0 * ir)


class EmpiricalBernsteinTracker:
    """Running intersection of the closed-form intervals (id "bernstein")."""

    def __init__(self, delta: float) -> None:
        if not (0.0 < delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
        self.delta = delta
        self.moments = RunningMoments()
        self.lower = 0.0
        self.upper = 1.0

    @property
    def t(self) -> int:
        return self.moments.t

    def interval(self) -> tuple[float, float]:
        return self.lower, self.upper

    def update(self, x: float) -> tuple[float, float]:
        mo = self.moments
        mo.push(x)
        eps = epsilon_bernstein(mo.t, mo.css, self.delta)
        if math.isfinite(eps):
            self.lower = min(max(self.lower, mo.mean - eps), 1.0)
            self.upper = max(min(self.upper, mo.mean + eps), 0.0)
        return self.lower, self.upper


class MixedPortfolioTracker:
    """Half-and-half wealth split between the two priors (id "mix").

    ``weight`` is the share of initial wealth on the exact-portfolio side;
    1/2 by default, and weight = 1 degenerates to the exact tracker's
    keep-set.
    """

    def __init__(self, delta: float, precision: float = 1e-4, weight: float = 0.5) -> None:
        if not (0.0 < delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
        if not (0.0 < precision < 1.0):
            raise ValueError(f"precision must lie in (0, 1), got {precision!r}")
        if not (0.0 < weight <= 1.0):
            raise ValueError(f"weight must lie in (0, 1], got {weight!r}")
        self.delta = delta
        self.precision = precision
        self.weight = weight
        self.store = SampleStore()
        self.lower = 0.0
        self.upper = 1.0
        self._ln_inv_delta = math.log(1.0 / delta)
        self._ln_w = math.log(weight)
        self._ln_1mw = math.log1p(-weight) if weight < 1.0 else -math.inf
        self._warm = {"lower": None, "upper": None}

    @property
    def t(self) -> int:
        return self.store.t

    def interval(self) -> tuple[float, float]:
        return self.lower, self.upper

    def _restricted(self, wm: WealthMax, m: float) -> WealthMax:
        """Wealth maximum over fractions clipped to [-1, 1]."""
        if math.isfinite(wm.beta_star) and abs(wm.beta_star) <= 1.0:
            return wm
        return max_log_wealth(self.store, m, beta_min=-1.0, beta_max=1.0)

    def _excluded(self, m: float, side: str, regret: float) -> bool:
        wm = max_log_wealth(self.store, m, beta0=self._warm[side])
        if math.isfinite(wm.beta_star):
            self._warm[side] = wm.beta_star
        exact_term = self._ln_w + wm.log_wealth - regret
        if exact_term >= self._ln_inv_delta:
            return True  # the mixture side only adds wealth
        mixture_term = -math.inf
        if self._ln_1mw > -math.inf:
            wm_r = self._restricted(wm, m)
            rho = regret_ratio(self.store, m, wm_r)
            if rho > 0.0:
                mixture_term = self._ln_1mw + wm_r.log_wealth + math.log(rho)
        return float(np.logaddexp(exact_term, mixture_term)) >= self._ln_inv_delta

    def _allocation_at(self, m: float) -> float:
        t = self.store.t
        if m <= 0.0:
            return self.store.n_positive / t
        if m >= 1.0:
            return self.store.n_at_one / t
        wm = max_log_wealth(self.store, m)
        if not math.isfinite(wm.beta_star):
            return 1.0 if wm.beta_star > 0 else 0.0
        return min(max((1.0 - m) * m * wm.beta_star + m, 0.0), 1.0)

    def update(self, x: float) -> tuple[float, float]:
        self.store.push(x)
        t = self.store.t
        mu = self.store.moments.mean

        if self.lower < mu:
            regret = side_regret("lower", self._allocation_at(self.lower), mu, t).value
            self.lower = largest_excluded(
                lambda m: self._excluded(m, "lower", regret),
                self.lower,
                mu,
                self.precision,
            )
        if mu < self.upper:
            regret = side_regret("upper", self._allocation_at(self.upper), mu, t).value
            self.upper = smallest_excluded(
                lambda m: self._excluded(m, "upper", regret),
                mu,
                self.upper,
                self.precision,
            )
        return self.lower, self.upper
