"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s`.  The coverage criterion
replays 400 replications per source distribution and takes a few minutes;
everything else is seconds.
"""

import math
from contextlib import contextmanager

import numpy as np
import pytest

from betcs import (
    ApproxPortfolioTracker,
    EmpiricalBernsteinTracker,
    ExactPortfolioTracker,
    ExperimentSpec,
    MixturePrior,
    RobbinsMixtureTracker,
    SampleStore,
    argmax_k,
    clopper_pearson,
    f_regret,
    first_interval_closed_form,
    generate,
    h_profile,
    kl_bernoulli,
    lil_width_bound,
    max_log_wealth,
    mixture_log_wealth,
    regret_ratio,
    robbins_density,
    run_experiment,
    side_regret,
    worst_case_regret,
)
from betcs.robbins import ROBBINS_C, h_robbins
from betcs.wealth import _adaptive_simpson


@contextmanager
def criterion(n: int, desc: str):
    try:
        yield
    except BaseException:
        print(f"\n[FAIL] criterion {n}: {desc}", flush=True)
        raise
    print(f"\n[PASS] criterion {n}: {desc}", flush=True)


def _store(xs) -> SampleStore:
    s = SampleStore()
    for x in xs:
        s.push(float(x))
    return s


def test_criterion_1_never_vacuous_width():
    with criterion(1, "never-vacuous width at t=1 (endpoints and 1 - delta/2)"):
        for delta in (0.1, 0.05, 0.01):
            for x1 in (0.0, 0.3, 0.5, 1.0):
                tr = ExactPortfolioTracker(delta)
                lo, up = tr.update(x1)
                clo, cup = first_interval_closed_form(x1, delta)
                assert lo == pytest.approx(clo, abs=2e-4)
                assert up == pytest.approx(cup, abs=2e-4)
                assert (up - lo) == pytest.approx(1.0 - delta / 2.0, abs=2e-4)


def test_criterion_2_time_uniform_coverage():
    reps, horizon, delta = 400, 1000, 0.05
    bound = delta + 3.0 * math.sqrt(delta * (1.0 - delta) / reps)
    algos = ("co96", "a_co96", "r70", "bernstein", "mix")
    rates = {}
    with criterion(2, f"time-uniform coverage, miscoverage <= {bound:.4f}"):
        for dist in ("bernoulli:0.1", "bernoulli:0.5", "beta:1,1", "beta:10,30"):
            spec = ExperimentSpec(
                distribution=dist,
                horizon=horizon,
                replications=reps,
                delta=delta,
                algorithms=algos,
                seed=20240 + hash(dist) % 1000,
            )
            result = run_experiment(spec, workers=2)
            for algo in algos:
                s = result.summaries[algo]
                assert s.failures == 0, (dist, algo, s)
                rates[(dist, algo)] = s.miscoverage
                assert s.miscoverage <= bound, (dist, algo, s.miscoverage)
    print("  miscoverage rates:")
    for (dist, algo), rate in rates.items():
        print(f"    {dist:15s} {algo:10s} {rate:.4f}")


def test_criterion_3_wealth_kl_oracle():
    with criterion(3, "max log wealth dominates t*KL; grid oracle on the maximizer"):
        rng = np.random.default_rng(42)
        for _ in range(100):
            t = int(rng.integers(1, 21))
            binary = rng.random() < 0.5
            xs = (rng.random(t) < rng.random()).astype(float) if binary else rng.random(t)
            s = _store(xs)
            m = float(rng.uniform(0.02, 0.98))
            lw = max_log_wealth(s, m).log_wealth
            kl = t * kl_bernoulli(s.moments.mean, m)
            assert lw >= kl - 1e-8
            if binary:
                assert lw == pytest.approx(kl, abs=1e-6)
        for _ in range(50):
            t = int(rng.integers(1, 31))
            xs = rng.random(t)
            s = _store(xs)
            m = float(rng.uniform(0.05, 0.95))
            wm = max_log_wealth(s, m)
            lo = -1.0 / (1.0 - m)
            hi = 1.0 / m
            shrink = 1e-9
            grid_lo = lo + shrink * (1.0 + abs(lo))
            grid_hi = hi - shrink * (1.0 + abs(hi))
            best = -math.inf
            c = xs - m
            for chunk in np.array_split(np.linspace(grid_lo, grid_hi, 1_000_000), 10):
                vals = np.log1p(np.outer(chunk, c)).sum(axis=1)
                best = max(best, float(np.nanmax(vals)))
            assert wm.log_wealth == pytest.approx(best, abs=1e-5)


def test_criterion_4_regret_structure():
    with criterion(4, "worst-case regret values; local maxima of h at tenths"):
        assert worst_case_regret(1).value == pytest.approx(math.log(2.0), abs=1e-10)
        assert worst_case_regret(2).value == pytest.approx(math.log(8.0 / 3.0), abs=1e-10)

        t = 10
        grid = np.linspace(0.0, 1.0, 10_001)
        h = np.array(
            [max(f_regret(float(b), k, t) for k in argmax_k(float(b), t)) for b in grid]
        )
        maxima = set()
        for i in range(len(grid)):
            left_ok = i == 0 or h[i] > h[i - 1]
            right_ok = i == len(grid) - 1 or h[i] > h[i + 1]
            if left_ok and right_ok:
                maxima.add(i)
        assert maxima == {i * 1000 for i in range(11)}

        rng = np.random.default_rng(4)
        for _ in range(300):
            tt = int(rng.integers(1, 150))
            side = "lower" if rng.random() < 0.5 else "upper"
            rb = side_regret(side, float(rng.random()), float(rng.random()), tt)
            assert rb.value <= worst_case_regret(tt).value + 1e-12


def test_criterion_5_dominance_ordering():
    with criterion(5, "interval dominance co96 <= a_co96 <= bernstein on shared streams"):
        rng = np.random.default_rng(55)
        for stream in range(50):
            t_len = 500
            if stream % 2 == 0:
                p = float(rng.uniform(0.05, 0.95))
                xs = (rng.random(t_len) < p).astype(float)
            else:
                a, b = float(rng.uniform(0.5, 10)), float(rng.uniform(0.5, 10))
                xs = rng.beta(a, b, t_len)
            exact = ExactPortfolioTracker(0.05)
            approx = ApproxPortfolioTracker(0.05)
            bern = EmpiricalBernsteinTracker(0.05)
            for x in xs:
                el, eu = exact.update(float(x))
                al, au = approx.update(float(x))
                bl, bu = bern.update(float(x))
                assert al <= el + 2e-4 and eu - 2e-4 <= au, (stream, exact.t)
                assert bl <= al + 2e-4 and au - 2e-4 <= bu, (stream, exact.t)


def test_criterion_6_lil_behavior():
    with criterion(6, "LIL: half-width bound, dominance over co96 at 1e5, asymptote ratio"):
        horizon, delta = 100_000, 0.05
        rng = np.random.Generator(np.random.Philox(key=606))
        xs = (rng.random(horizon) < 0.5).astype(float)
        exact = ExactPortfolioTracker(delta)
        robb = RobbinsMixtureTracker(delta)
        checked = 0
        for x in xs:
            exact.update(float(x))
            robb.update(float(x))
            mo = robb.store.moments
            bound = lil_width_bound(mo, delta)
            if bound < 1.0:  # the bound is vacuous until t > 2 U_t
                half = max(robb.upper - mo.mean, mo.mean - robb.lower)
                assert half <= bound, (mo.t, half, bound)
                checked += 1
        assert checked > 90_000
        w_r70 = robb.upper - robb.lower
        w_co96 = exact.upper - exact.lower
        assert w_r70 < w_co96, (w_r70, w_co96)
        mo = robb.store.moments
        ratio = lil_width_bound(mo, delta) / (
            math.sqrt(2.0 * mo.css * math.log(math.log(mo.css) / delta)) / mo.t
        )
        assert 1.0 <= ratio <= 2.0, ratio
        print(f"  widths at T=1e5: r70={w_r70:.6f} co96={w_co96:.6f} ratio={ratio:.3f}")


def test_criterion_7_robbins_prior_sanity():
    with criterion(7, "prior mass 1, h > 6, certified bound below quadrature wealth"):
        lnln_c = math.log(math.log(ROBBINS_C))
        s1 = 1.0 / lnln_c
        mass = 2.0 * 0.5 * lnln_c * _adaptive_simpson(lambda s: 1.0, 0.0, s1, 1e-10)
        assert mass == pytest.approx(1.0, abs=1e-6)
        # cross-check the raw density against the analytic tail mass
        a = 1e-4
        quad = _adaptive_simpson(lambda b: robbins_density(b), a, 1.0, 1e-11)
        analytic = 0.5 * lnln_c * (1.0 / lnln_c - 1.0 / math.log(math.log(ROBBINS_C / a)))
        assert quad == pytest.approx(analytic, abs=1e-8)

        for x in np.exp(np.linspace(math.log(1e-12), 0.0, 500)):
            assert h_robbins(float(x)) > 6.0

        rng = np.random.default_rng(7)
        done = 0
        while done < 50:
            t = int(rng.integers(1, 21))
            xs = (
                (rng.random(t) < rng.random()).astype(float)
                if rng.random() < 0.5
                else rng.random(t)
            )
            s = _store(xs)
            m = float(rng.uniform(0.02, 0.98))
            wm = max_log_wealth(s, m, beta_min=-1.0, beta_max=1.0)
            rho = regret_ratio(s, m, wm)
            if rho <= 0.0:
                continue
            lb = wm.log_wealth + math.log(rho)
            assert lb <= mixture_log_wealth(s, m, MixturePrior.ROBBINS) + 1e-6
            done += 1


def test_criterion_8_convexity_property_suites():
    with criterion(8, "mixture wealth convex in m; wealth profile quasiconvex"):
        rng = np.random.default_rng(8)
        for trial in range(8):
            t = int(rng.integers(1, 11))
            xs = (
                (rng.random(t) < 0.5).astype(float)
                if trial % 2 == 0
                else rng.random(t)
            )
            grid = np.linspace(0.05, 0.95, 31)
            vals = np.exp(
                [
                    mixture_log_wealth(_store(xs), float(m), MixturePrior.DIRICHLET)
                    for m in grid
                ]
            )
            second = vals[:-2] - 2.0 * vals[1:-1] + vals[2:]
            assert np.all(second >= -1e-7)

        for _ in range(20):
            t = int(rng.integers(2, 26))
            xs = rng.random(t)
            s = _store(xs)
            mu = s.moments.mean
            grid = np.linspace(0.001, 0.999, 2000)
            h = h_profile(s, grid)
            hd = np.diff(h)
            left = grid <= mu
            assert np.all(hd[left[1:]] <= 1e-9)
            assert np.all(hd[~left[:-1]] >= -1e-9)


def test_criterion_9_clopper_pearson_tracking():
    with criterion(9, "exact binomial baseline values and width comparison"):
        lo, up = clopper_pearson(0, 10, 0.05)
        assert up == pytest.approx(0.30850, abs=1e-4)
        # the single-observation exact width 1 - delta needs the whole error
        # budget in the one tail that can fail at k in {0, n}
        for delta in (0.1, 0.05, 0.01):
            lo, up = clopper_pearson(1, 1, delta, extreme_one_sided=True)
            assert (up - lo) == pytest.approx(1.0 - delta, abs=1e-12)

        for dist, seed in (("bernoulli:0.1", 91), ("bernoulli:0.5", 92)):
            spec = ExperimentSpec(
                distribution=dist,
                horizon=1000,
                replications=1,
                delta=0.05,
                algorithms=("co96",),
                seed=seed,
            )
            xs = generate(spec, 0)
            exact = ExactPortfolioTracker(0.05)
            wider = 0
            k = 0
            for i, x in enumerate(xs):
                k += int(x)
                el, eu = exact.update(float(x))
                cl, cu = clopper_pearson(k, i + 1, 0.05)
                if (eu - el) >= (cu - cl) - 1e-12:
                    wider += 1
            assert wider >= 0.95 * len(xs), (dist, wider)
