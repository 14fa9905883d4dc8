"""Simulation and experiment driver.

Generates seeded sample streams, runs any subset of the interval trackers
over replicated streams, accounts time-uniform coverage (the true mean ever
leaving the interval counts the whole replication as miscovered), and emits
per-step records plus a summary of median widths at logarithmic checkpoints.

Reproducibility contract: streams come from the counter-based Philox
generator keyed by the experiment seed, with replication r reading the
stream jumped r times.  Streams are bit-identical across platforms for a
fixed numpy major version; interval values are compared only to tolerances.
"""

from __future__ import annotations

import csv
import multiprocessing
from dataclasses import dataclass, field
from typing import IO, Iterable

import numpy as np

from .approx import ApproxPortfolioTracker
from .exact import ExactPortfolioTracker
from .explicit import EmpiricalBernsteinTracker, MixedPortfolioTracker
from .robbins import RobbinsMixtureTracker
from .special import inc_beta_inv

__all__ = [
    "ALGORITHMS",
    "CHECKPOINTS",
    "ExperimentSpec",
    "ExperimentResult",
    "AlgoSummary",
    "clopper_pearson",
    "ClopperPearsonTracker",
    "generate",
    "true_mean",
    "make_tracker",
    "run_experiment",
    "write_summary_csv",
    "RECORD_COLUMNS",
    "SUMMARY_COLUMNS",
]

CHECKPOINTS = (1, 10, 100, 1000, 10000, 100000)
ALGORITHMS = ("co96", "a_co96", "r70", "bernstein", "mix", "clopper_pearson")

RECORD_COLUMNS = ("run", "t", "x", "algo", "lower", "upper", "covered")
SUMMARY_COLUMNS = (
    "algo",
    "miscoverage",
    "width_t1",
    "width_t10",
    "width_t100",
    "width_t1000",
    "width_t10000",
    "width_t100000",
)

# Continuous sources above this horizon pay O(t) per wealth evaluation in the
# exact trackers; the CLI requires an explicit opt-in there.
SLOW_CONTINUOUS_HORIZON = 10_000


def _parse_distribution(token: str) -> tuple[str, tuple]:
    kind, _, args = token.partition(":")
    if kind == "bernoulli":
        try:
            p = float(args)
        except ValueError:
            raise ValueError(f"bad bernoulli parameter in {token!r}") from None
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"bernoulli p must lie in [0, 1], got {p}")
        return "bernoulli", (p,)
    if kind == "beta":
        parts = args.split(",")
        if len(parts) != 2:
            raise ValueError(f"beta distribution needs two parameters, got {token!r}")
        try:
            a, b = float(parts[0]), float(parts[1])
        except ValueError:
            raise ValueError(f"bad beta parameters in {token!r}") from None
        if a <= 0.0 or b <= 0.0:
            raise ValueError(f"beta parameters must be positive, got {token!r}")
        return "beta", (a, b)
    if kind == "file":
        if not args:
            raise ValueError("file distribution needs a path, e.g. file:data.txt")
        return "file", (args,)
    raise ValueError(f"unknown distribution {token!r}")


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to reproduce one experiment deterministically."""

    distribution: str
    horizon: int
    replications: int
    delta: float
    algorithms: tuple[str, ...]
    seed: int
    precision: float = 1e-4

    def __post_init__(self) -> None:
        _parse_distribution(self.distribution)
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        if not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}; known: {ALGORITHMS}")
        if not (0.0 < self.precision < 1.0):
            raise ValueError(f"precision must lie in (0, 1), got {self.precision}")

    @property
    def is_binary_source(self) -> bool:
        return _parse_distribution(self.distribution)[0] == "bernoulli"


def true_mean(spec: ExperimentSpec) -> float | None:
    """Population mean when the source distribution defines one."""
    kind, args = _parse_distribution(spec.distribution)
    if kind == "bernoulli":
        return args[0]
    if kind == "beta":
        a, b = args
        return a / (a + b)
    return None


def generate(spec: ExperimentSpec, replication: int) -> np.ndarray:
    """Deterministic sample stream for one replication, values in [0, 1]."""
    if not (0 <= replication < spec.replications):
        raise ValueError(f"replication {replication} outside [0, {spec.replications})")
    kind, args = _parse_distribution(spec.distribution)
    if kind == "file":
        data = np.loadtxt(args[0], dtype=np.float64, ndmin=1)
        if data.shape[0] < spec.horizon:
            raise ValueError(
                f"file {args[0]} holds {data.shape[0]} samples, need {spec.horizon}"
            )
        data = data[: spec.horizon]
        if np.any(data < 0.0) or np.any(data > 1.0) or np.any(~np.isfinite(data)):
            raise ValueError(f"file {args[0]} holds samples outside [0, 1]")
        return data
    rng = np.random.Generator(np.random.Philox(key=spec.seed).jumped(replication))
    if kind == "bernoulli":
        return (rng.random(spec.horizon) < args[0]).astype(np.float64)
    a, b = args
    ga = rng.standard_gamma(a, spec.horizon)
    gb = rng.standard_gamma(b, spec.horizon)
    den = ga + gb
    out = np.where(den > 0.0, ga / np.where(den > 0.0, den, 1.0), 0.5)
    return np.clip(out, 0.0, 1.0)


def clopper_pearson(
    k: int, n: int, delta: float, extreme_one_sided: bool = False
) -> tuple[float, float]:
    """Exact binomial interval from the regularized incomplete beta inverse.

    lower = inc_beta_inv(k, n-k+1, delta/2) (0 at k = 0) and
    upper = inc_beta_inv(k+1, n-k, 1-delta/2) (1 at k = n).

    ``extreme_one_sided`` spends the whole error budget in the single active
    tail at k in {0, n} (only one tail can fail there), reproducing the
    one-observation exact width of 1 - delta.
    """
    if n < 1:
        raise ValueError(f"clopper_pearson requires n >= 1, got {n!r}")
    if not (0 <= k <= n):
        raise ValueError(f"clopper_pearson requires 0 <= k <= n, got k={k!r}")
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    lo_tail = delta if (extreme_one_sided and k == n) else delta / 2.0
    hi_tail = delta if (extreme_one_sided and k == 0) else delta / 2.0
    lower = 0.0 if k == 0 else inc_beta_inv(k, n - k + 1, lo_tail)
    upper = 1.0 if k == n else inc_beta_inv(k + 1, n - k, 1.0 - hi_tail)
    return lower, upper


class ClopperPearsonTracker:
    """Pointwise (not time-uniform) exact binomial baseline; binary data only."""

    def __init__(self, delta: float) -> None:
        if not (0.0 < delta < 1.0):
            raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
        self.delta = delta
        self.t = 0
        self.successes = 0
        self.lower = 0.0
        self.upper = 1.0

    def interval(self) -> tuple[float, float]:
        return self.lower, self.upper

    def update(self, x: float) -> tuple[float, float]:
        if x not in (0.0, 1.0):
            raise ValueError("clopper_pearson requires binary samples in {0, 1}")
        self.t += 1
        self.successes += int(x)
        self.lower, self.upper = clopper_pearson(self.successes, self.t, self.delta)
        return self.lower, self.upper


def make_tracker(algo: str, delta: float, precision: float = 1e-4):
    if algo == "co96":
        return ExactPortfolioTracker(delta, precision)
    if algo == "a_co96":
        return ApproxPortfolioTracker(delta, precision)
    if algo == "r70":
        return RobbinsMixtureTracker(delta, precision)
    if algo == "bernstein":
        return EmpiricalBernsteinTracker(delta)
    if algo == "mix":
        return MixedPortfolioTracker(delta, precision)
    if algo == "clopper_pearson":
        return ClopperPearsonTracker(delta)
    raise ValueError(f"unknown algorithm {algo!r}; known: {ALGORITHMS}")


@dataclass
class _RepOutcome:
    miscovered: bool = False
    failed: bool = False
    error: str = ""
    widths: dict[int, float] = field(default_factory=dict)


@dataclass
class AlgoSummary:
    algo: str
    reps_done: int
    failures: int
    miscoverage: float | None
    median_widths: dict[int, float]


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    summaries: dict[str, AlgoSummary]
    filtered: dict[str, AlgoSummary] | None
    failures: int
    per_rep: dict[str, list[_RepOutcome]]


def _run_replication(
    spec: ExperimentSpec,
    replication: int,
    mu: float | None,
    writer=None,
) -> dict[str, _RepOutcome]:
    xs = generate(spec, replication)
    checkpoints = [c for c in CHECKPOINTS if c <= spec.horizon]
    outcomes: dict[str, _RepOutcome] = {}
    trackers = {}
    for algo in spec.algorithms:
        trackers[algo] = make_tracker(algo, spec.delta, spec.precision)
        outcomes[algo] = _RepOutcome()
    live = dict(trackers)
    for i in range(spec.horizon):
        x = float(xs[i])
        t = i + 1
        at_checkpoint = t in checkpoints
        for algo in list(live):
            tracker = live[algo]
            out = outcomes[algo]
            try:
                lower, upper = tracker.update(x)
            except Exception as exc:  # noqa: BLE001 - aggregated per replication
                out.failed = True
                out.error = f"{type(exc).__name__}: {exc}"
                del live[algo]
                continue
            covered = None
            if mu is not None:
                covered = lower <= mu <= upper
                if not covered:
                    out.miscovered = True
            if at_checkpoint:
                out.widths[t] = upper - lower
            if writer is not None:
                writer.writerow(
                    (
                        replication,
                        t,
                        f"{x:.10g}",
                        algo,
                        f"{lower:.10g}",
                        f"{upper:.10g}",
                        "" if covered is None else int(covered),
                    )
                )
    return outcomes


def _replication_task(args: tuple[ExperimentSpec, int, float | None]):
    spec, replication, mu = args
    return replication, _run_replication(spec, replication, mu)


def _summarize(
    spec: ExperimentSpec, per_rep: dict[str, list[_RepOutcome]], reps: Iterable[int]
) -> dict[str, AlgoSummary]:
    reps = list(reps)
    checkpoints = [c for c in CHECKPOINTS if c <= spec.horizon]
    summaries: dict[str, AlgoSummary] = {}
    for algo in spec.algorithms:
        outs = [per_rep[algo][r] for r in reps]
        ok = [o for o in outs if not o.failed]
        failures = len(outs) - len(ok)
        miscoverage = None
        if ok and true_mean(spec) is not None:
            miscoverage = sum(o.miscovered for o in ok) / len(ok)
        med = {}
        for c in checkpoints:
            vals = [o.widths[c] for o in ok if c in o.widths]
            if vals:
                med[c] = float(np.median(vals))
        summaries[algo] = AlgoSummary(algo, len(ok), failures, miscoverage, med)
    return summaries


def run_experiment(
    spec: ExperimentSpec,
    records: IO[str] | None = None,
    workers: int = 1,
    filtered_view: bool = False,
) -> ExperimentResult:
    """Run every algorithm over every replication.

    Per-replication failures are collected, not raised; the batch always
    completes.  ``records`` takes an open text file and receives the
    per-step CSV rows ordered by (run, t); record emission forces serial
    execution.  The filtered view summarizes only the first five
    replications in which no algorithm miscovered or failed (the fairer
    all-replication summary is always produced as well).
    """
    mu = true_mean(spec)
    per_rep: dict[str, list[_RepOutcome]] = {
        algo: [None] * spec.replications for algo in spec.algorithms  # type: ignore[list-item]
    }

    writer = None
    if records is not None:
        writer = csv.writer(records)
        writer.writerow(RECORD_COLUMNS)
        workers = 1

    if workers > 1 and spec.replications > 1:
        ctx = multiprocessing.get_context("fork")
        tasks = [(spec, r, mu) for r in range(spec.replications)]
        with ctx.Pool(workers) as pool:
            for replication, outcomes in pool.imap_unordered(_replication_task, tasks):
                for algo, out in outcomes.items():
                    per_rep[algo][replication] = out
    else:
        for r in range(spec.replications):
            outcomes = _run_replication(spec, r, mu, writer)
            for algo, out in outcomes.items():
                per_rep[algo][r] = out

    all_reps = range(spec.replications)
    summaries = _summarize(spec, per_rep, all_reps)
    failures = sum(s.failures for s in summaries.values())

    filtered = None
    if filtered_view:
        clean = [
            r
            for r in all_reps
            if all(
                not per_rep[a][r].failed and not per_rep[a][r].miscovered
                for a in spec.algorithms
            )
        ][:5]
        filtered = _summarize(spec, per_rep, clean) if clean else {}

    return ExperimentResult(spec, summaries, filtered, failures, per_rep)


def write_summary_csv(f: IO[str], summaries: dict[str, AlgoSummary]) -> None:
    """Fixed-schema summary: one row per algorithm, blank cells beyond horizon."""
    writer = csv.writer(f)
    writer.writerow(SUMMARY_COLUMNS)
    for algo, s in summaries.items():
        row = [algo, "" if s.miscoverage is None else f"{s.miscoverage:.10g}"]
        for c in CHECKPOINTS:
            row.append(f"{s.median_widths[c]:.10g}" if c in s.median_widths else "")
        writer.writerow(row)
