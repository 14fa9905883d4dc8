"""Heavy-near-zero mixture of betting fractions and its confidence sequence.

The prior density on fractions beta in [-1, 1] \\ {0} is

    F(beta) = 1 / (|beta| h(|beta|)),
    h(x) = (2 / ln ln c) * ln(c/x) * (ln ln(c/x))^2,   c = 6.6 e,

which integrates to exactly one and concentrates mass near beta = 0; that
is what buys the ln ln t width rate.  The tracker never integrates the
mixture: a closed-form ratio rho(m) certifies

    mixture wealth at m  >=  W*(m) * rho(m),

where W*(m) is the best fixed fraction's wealth restricted to [-1, 1], and a
candidate mean is excluded once that certified wealth reaches 1/delta.

Algorithm id: "r70".
"""

from __future__ import annotations

import math

from ._search import largest_excluded, smallest_excluded
from .moments import RunningMoments, SampleStore
from .special import lambert_w_m1
from .wealth import WealthMax, max_log_wealth

__all__ = [
    "ROBBINS_C",
    "h_robbins",
    "robbins_density",
    "regret_ratio",
    "RobbinsMixtureTracker",
    "lil_width_bound",
]

ROBBINS_C = 6.6 * math.e
_LNLN_C = math.log(math.log(ROBBINS_C))


def h_robbins(x: float) -> float:
    """h(x) = (2/ln ln c) ln(c/x) (ln ln(c/x))^2; decreasing on (0, 1], > 6."""
    if not (0.0 < x <= 1.0):
        raise ValueError(f"h_robbins requires x in (0, 1], got {x!r}")
    u = math.log(ROBBINS_C / x)
    lu = math.log(u)
    return (2.0 / _LNLN_C) * u * lu * lu


def robbins_density(beta: float) -> float:
    """Prior density 1 / (|beta| h(|beta|)) on [-1, 1], infinite at 0."""
    ab = abs(beta)
    if ab > 1.0:
        raise ValueError(f"robbins_density requires |beta| <= 1, got {beta!r}")
    if ab == 0.0:
        return math.inf
    return 1.0 / (ab * h_robbins(ab))


def regret_ratio(store: SampleStore, m: float, wm: WealthMax | None = None) -> float:
    """rho(m): certified fraction of W*(m) retained by the mixture wealth.

    Combines two lower bounds on mixture/W*: a log-concavity bound
    ((1 - 1/W*) / ln W*) |beta*| and a local Taylor bound
    exp(-Delta^2 / (2 (1 + min(q beta*, 0))^2 V)) Delta, each scaled by the
    prior density at beta*.  Returns 0 when beta* = 0 (W* = 1 there, so the
    candidate mean is kept regardless).
    """
    if wm is None:
        wm = max_log_wealth(store, m, beta_min=-1.0, beta_max=1.0)
    beta = wm.beta_star
    if beta == 0.0 or not math.isfinite(beta):
        return 0.0
    mo = store.moments
    ab = min(abs(beta), 1.0)
    log_w = wm.log_wealth
    if log_w <= 0.0:
        return 0.0

    # (1 - 1/W*) / ln W*, stable for small log wealth
    bound1 = (-math.expm1(-log_w) / log_w) * ab

    q = (mo.x_min - m) if beta > 0.0 else (m - mo.x_max)
    qb = min(q * beta, 0.0)
    v = mo.centered_css(m)
    if ab >= 1.0 or v <= 0.0:
        delta_tilde = 0.0
    else:
        delta_tilde = (1.0 + qb) / math.sqrt(v)
    delta = min(ab, delta_tilde)
    if delta > 0.0:
        denom = 2.0 * (1.0 + qb) * (1.0 + qb) * v
        bound2 = math.exp(-delta * delta / denom) * delta
    else:
        bound2 = 0.0

    return max(bound1, bound2) / (ab * h_robbins(ab))


class RobbinsMixtureTracker:
    """Confidence sequence with law-of-iterated-logarithm widths (id "r70")."""

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

    @property
    def t(self) -> int:
        return self.store.t

    def interval(self) -> tuple[float, float]:
        return self.lower, self.upper

    def _excluded(self, m: float, side: str) -> bool:
        wm = max_log_wealth(
            self.store, m, beta_min=-1.0, beta_max=1.0, beta0=self._warm[side]
        )
        if math.isfinite(wm.beta_star):
            self._warm[side] = wm.beta_star
        rho = regret_ratio(self.store, m, wm)
        if rho <= 0.0:
            return False
        return wm.log_wealth + math.log(rho) >= self._ln_inv_delta

    def update(self, x: float) -> tuple[float, float]:
        self.store.push(x)
        mu = self.store.moments.mean
        if self.lower < mu:
            self.lower = largest_excluded(
                lambda m: self._excluded(m, "lower"), self.lower, mu, self.precision
            )
        if mu < self.upper:
            self.upper = smallest_excluded(
                lambda m: self._excluded(m, "upper"), mu, self.upper, self.precision
            )
        return self.lower, self.upper


def lil_width_bound(moments: RunningMoments, delta: float) -> float:
    """Explicit three-term bound on the half width of the mixture tracker.

        (1/t) sqrt(max(U/(1 - 2U/t), 1) * 2 V)
        + (4/3) U / (t - 2U) + (24/t) ln(7/(6 delta)),

    where V is the centered sum of squares and
    U = -1/2 W_{-1}(-2 / ((20/(3 delta)) h(1/(2 + sqrt(V/2))))^2).
    Returns 1 (vacuous) until t > 2U.  The bound tracks
    sqrt(2 V ln(ln V / delta)) / t as t grows.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    if moments.t < 1:
        raise ValueError("lil_width_bound requires at least one sample")
    t = moments.t
    v = moments.css
    scale = (20.0 / (3.0 * delta)) * h_robbins(1.0 / (2.0 + math.sqrt(v / 2.0)))
    u = -0.5 * lambert_w_m1(-2.0 / (scale * scale))
    if t <= 2.0 * u:
        return 1.0
    shrink = 1.0 - 2.0 * u / t
    term1 = math.sqrt(max(u / shrink, 1.0) * 2.0 * v) / t
    term2 = (4.0 / 3.0) * u / (t - 2.0 * u)
    term3 = (24.0 / t) * math.log(7.0 / (6.0 * delta))
    return term1 + term2 + term3
