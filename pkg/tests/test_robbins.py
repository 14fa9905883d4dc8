"""Heavy-near-zero prior, certified mixture lower bound, and the LIL width."""

import math

import numpy as np
import pytest

from betcs import (
    MixturePrior,
    RobbinsMixtureTracker,
    ROBBINS_C,
    RunningMoments,
    SampleStore,
    h_robbins,
    lambert_w_m1,
    lil_width_bound,
    max_log_wealth,
    mixture_log_wealth,
    regret_ratio,
    robbins_density,
)
from betcs.wealth import _adaptive_simpson


def _store(xs):
    s = SampleStore()
    for x in xs:
        s.push(float(x))
    return s


class TestPriorDensity:
    def test_h_at_one(self):
        # c = 6.6 e: h(1) = (2/ln ln c) ln(c) (ln ln c)^2
        c = ROBBINS_C
        ref = (2.0 / math.log(math.log(c))) * math.log(c) * math.log(math.log(c)) ** 2
        assert h_robbins(1.0) == pytest.approx(ref, rel=1e-14)
        assert h_robbins(1.0) == pytest.approx(6.122, abs=1e-3)

    def test_h_decreasing_and_above_six(self):
        grid = np.exp(np.linspace(math.log(1e-9), 0.0, 400))
        vals = [h_robbins(float(x)) for x in grid]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))
        assert min(vals) > 6.0

    def test_total_mass_one(self):
        """In s = 1/ln ln(c/beta) the density is flat: each sign carries 1/2."""
        lnln_c = math.log(math.log(ROBBINS_C))
        s1 = 1.0 / lnln_c
        per_sign = 0.5 * lnln_c * _adaptive_simpson(lambda s: 1.0, 0.0, s1, 1e-12)
        assert 2.0 * per_sign == pytest.approx(1.0, abs=1e-6)

    def test_partial_mass_in_beta_space(self):
        """Adaptive quadrature of the raw density against the analytic tail."""
        lnln_c = math.log(math.log(ROBBINS_C))
        a = 1e-3
        quad = _adaptive_simpson(lambda b: robbins_density(b), a, 1.0, 1e-12)
        analytic = 0.5 * lnln_c * (1.0 / lnln_c - 1.0 / math.log(math.log(ROBBINS_C / a)))
        assert quad == pytest.approx(analytic, abs=1e-9)

    def test_domain(self):
        with pytest.raises(ValueError):
            h_robbins(0.0)
        with pytest.raises(ValueError):
            h_robbins(1.5)
        with pytest.raises(ValueError):
            robbins_density(1.5)


class TestRegretRatio:
    def test_zero_at_sample_mean(self):
        s = _store([0.4, 0.6])
        assert regret_ratio(s, 0.5) == 0.0

    def test_boundary_fraction_uses_log_concavity_bound_only(self):
        # both samples far above m force beta* to the +1 boundary: Delta = 0
        s = _store([1.0, 1.0])
        m = 0.2
        wm = max_log_wealth(s, m, beta_min=-1.0, beta_max=1.0)
        assert abs(wm.beta_star) == pytest.approx(1.0, abs=1e-12)
        log_w = wm.log_wealth
        expected = (-math.expm1(-log_w) / log_w) * 1.0 / (1.0 * h_robbins(1.0))
        assert regret_ratio(s, m, wm) == pytest.approx(expected, rel=1e-12)

    def test_in_unit_interval_scaled_by_density(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            t = int(rng.integers(1, 25))
            xs = rng.random(t)
            s = _store(xs)
            m = float(rng.uniform(0.05, 0.95))
            wm = max_log_wealth(s, m, beta_min=-1.0, beta_max=1.0)
            rho = regret_ratio(s, m, wm)
            assert rho >= 0.0
            if wm.beta_star != 0.0:
                assert rho <= robbins_density(wm.beta_star) * abs(wm.beta_star) + 1e-12

    def test_certified_bound_below_quadrature(self):
        """ln(W* rho) never exceeds the true mixture log wealth."""
        rng = np.random.default_rng(7)
        for _ in range(50):
            t = int(rng.integers(1, 21))
            if rng.random() < 0.5:
                xs = (rng.random(t) < rng.random()).astype(float)
            else:
                xs = rng.random(t)
            s = _store(xs)
            m = float(rng.uniform(0.02, 0.98))
            wm = max_log_wealth(s, m, beta_min=-1.0, beta_max=1.0)
            rho = regret_ratio(s, m, wm)
            if rho <= 0.0:
                continue
            lb = wm.log_wealth + math.log(rho)
            assert lb <= mixture_log_wealth(s, m, MixturePrior.ROBBINS) + 1e-6


class TestTracker:
    def test_nesting_and_bounds(self):
        rng = np.random.default_rng(42)
        tr = RobbinsMixtureTracker(0.05)
        prev = (0.0, 1.0)
        for x in rng.random(300):
            lo, up = tr.update(float(x))
            assert prev[0] <= lo <= up <= prev[1]
            prev = (lo, up)

    def test_sample_mean_always_kept(self):
        tr = RobbinsMixtureTracker(0.05)
        rng = np.random.default_rng(2)
        for x in (rng.random(200) < 0.3).astype(float):
            lo, up = tr.update(float(x))
            mu = tr.store.moments.mean
            assert lo <= mu <= up


class TestLilWidthBound:
    @staticmethod
    def _reference(t, v, delta):
        # independent re-evaluation of the closed form
        c = 6.6 * math.e
        lnln_c = math.log(math.log(c))
        x = 1.0 / (2.0 + math.sqrt(v / 2.0))
        u_ = math.log(c / x)
        h = (2.0 / lnln_c) * u_ * math.log(u_) ** 2
        a = (20.0 / (3.0 * delta)) * h
        uu = -0.5 * lambert_w_m1(-2.0 / (a * a))
        if t <= 2 * uu:
            return 1.0
        return (
            math.sqrt(max(uu / (1 - 2 * uu / t), 1.0) * 2.0 * v) / t
            + (4.0 / 3.0) * uu / (t - 2 * uu)
            + (24.0 / t) * math.log(7.0 / (6.0 * delta))
        )

    def _moments(self, t, v):
        mo = RunningMoments()
        mo.t = t
        mo.css = v
        mo.mean = 0.5
        return mo

    def test_matches_independent_evaluation(self):
        mo = self._moments(10_000, 2500.0)
        assert lil_width_bound(mo, 0.05) == pytest.approx(
            self._reference(10_000, 2500.0, 0.05), rel=1e-12
        )

    def test_zero_variance_edge_finite_positive(self):
        mo = self._moments(1000, 0.0)
        val = lil_width_bound(mo, 0.05)
        assert 0.0 < val < 1.0
        assert val == pytest.approx(self._reference(1000, 0.0, 0.05), rel=1e-12)

    def test_vacuous_below_two_u(self):
        mo = self._moments(5, 1.0)
        assert lil_width_bound(mo, 0.05) == 1.0

    def test_decreasing_in_t_at_fixed_variance_rate(self):
        vals = []
        for t in (1000, 3162, 10_000, 31_623, 100_000):
            vals.append(lil_width_bound(self._moments(t, 0.25 * t), 0.05))
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(ValueError):
            lil_width_bound(self._moments(100, 1.0), 1.5)
        with pytest.raises(ValueError):
            lil_width_bound(RunningMoments(), 0.05)
