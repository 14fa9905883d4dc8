"""Exact numerical inversion of the wealth-minus-regret condition.

At each step the tracker excludes every candidate mean m whose maximal
betting log wealth exceeds a data-dependent regret bound plus ln(1/delta),
locating the exclusion boundary on each side of the sample mean by binary
search.  The per-side regret bound is built from the wealth-maximizing
two-stock allocations at the previous interval endpoints, which is what
makes the excluded set an interval on each side.

Algorithm id: "co96".
"""

from __future__ import annotations

import math

from ._search import largest_excluded, smallest_excluded
from .moments import SampleStore
from .regret import side_regret
from .wealth import max_log_wealth

__all__ = ["ExactPortfolioTracker", "first_interval_closed_form"]


def first_interval_closed_form(x: float, delta: float) -> tuple[float, float]:
    """Single-sample interval [x*delta/2, 1 - (1-x)*delta/2].

    With one sample the optimal bet sits at the feasible boundary, so the
    inversion solves ln(x/m) = ln 2 + ln(1/delta) in closed form.  Used as an
    oracle against the numerical tracker at t = 1; width is 1 - delta/2 for
    every x.
    """
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"sample must lie in [0, 1], got {x!r}")
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    return x * delta / 2.0, 1.0 - (1.0 - x) * delta / 2.0


class ExactPortfolioTracker:
    """Confidence sequence from exact wealth maximization (id "co96")."""

    def __init__(self, delta: float, precision: float = 1e-4) -> None:
        if not (0.0 < delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
        if not (0.0 < precision < 1.0):
            raise ValueError(f"precision must lie in (0, 1), got {precision!r}")
        self.delta = delta
        self.precision = precision
        self.store = SampleStore()
        self.lower = 0.0
        self.upper = 1.0
        self._ln_inv_delta = math.log(1.0 / delta)
        self._warm = {"lower": None, "upper": None}
        # regret bounds used by the most recent update, for inspection
        self.last_regret: dict[str, float | None] = {"lower": None, "upper": None}

    @property
    def t(self) -> int:
        return self.store.t

    def interval(self) -> tuple[float, float]:
        return self.lower, self.upper

    def _allocation_at(self, m: float) -> float:
        """Two-stock allocation maximizing the wealth at candidate mean m.

        Recovered from the betting fraction as b = (1-m) m beta* + m; at the
        degenerate endpoints the maximizer converges to the fraction of
        samples that can still win there.
        """
        t = self.store.t
        if m <= 0.0:
            return self.store.n_positive / t
        if m >= 1.0:
            return self.store.n_at_one / t
        wm = max_log_wealth(self.store, m)
        if not math.isfinite(wm.beta_star):
            return 1.0 if wm.beta_star > 0 else 0.0
        b = (1.0 - m) * m * wm.beta_star + m
        return min(max(b, 0.0), 1.0)

    def _make_excluded(self, threshold: float, side: str):
        store = self.store
        warm = self._warm

        def excluded(m: float) -> bool:
            wm = max_log_wealth(store, m, beta0=warm[side])
            if math.isfinite(wm.beta_star):
                warm[side] = wm.beta_star
            return wm.log_wealth >= threshold

        return excluded

    def update(self, x: float) -> tuple[float, float]:
        self.store.push(x)
        t = self.store.t
        mu = self.store.moments.mean
        self.last_regret = {"lower": None, "upper": None}

        if self.lower < mu:
            b_edge = self._allocation_at(self.lower)
            regret = side_regret("lower", b_edge, mu, t).value
            self.last_regret["lower"] = regret
            excluded = self._make_excluded(regret + self._ln_inv_delta, "lower")
            self.lower = largest_excluded(excluded, self.lower, mu, self.precision)

        if mu < self.upper:
            b_edge = self._allocation_at(self.upper)
            regret = side_regret("upper", b_edge, mu, t).value
            self.last_regret["upper"] = regret
            excluded = self._make_excluded(regret + self._ln_inv_delta, "upper")
            self.upper = smallest_excluded(excluded, mu, self.upper, self.precision)

        return self.lower, self.upper
