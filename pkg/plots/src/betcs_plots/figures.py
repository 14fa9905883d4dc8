"""Figure rendering from betcs experiment records.

Input is the harness records schema (run,t,x,algo,lower,upper,covered).
Three panels: interval envelopes against a log time axis, width curves, and
a multi-run overlay for comparing against the pointwise exact baseline at
several confidence levels.  Rendering is a pure function of the CSV content
and the figure spec.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

REQUIRED_COLUMNS = ("run", "t", "x", "algo", "lower", "upper", "covered")
PANELS = ("intervals", "widths", "cp_compare")

# pointwise baselines are exempt from the nesting check
_NON_NESTED_ALGOS = {"clopper_pearson"}


class SchemaError(ValueError):
    """Input CSV does not conform to the records schema."""


class DataError(ValueError):
    """Input rows violate an invariant the tracker algorithms guarantee."""


@dataclass(frozen=True)
class FigureSpec:
    inputs: tuple[str, ...]
    output: str
    panel: str
    deltas: tuple[float, ...] = ()
    mu: float | None = None
    algos: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")
        if self.panel not in PANELS:
            raise SchemaError(f"unknown panel {self.panel!r}; known: {PANELS}")


@dataclass
class RecordTable:
    """Per-(algo, run) interval series keyed for plotting."""

    path: str
    series: dict[tuple[str, int], dict[str, np.ndarray]] = field(default_factory=dict)

    @property
    def algos(self) -> list[str]:
        seen: list[str] = []
        for algo, _ in self.series:
            if algo not in seen:
                seen.append(algo)
        return seen

    def runs(self, algo: str) -> list[int]:
        return sorted(run for a, run in self.series if a == algo)


def load_records(path: str) -> RecordTable:
    """Read and validate one records CSV; raises SchemaError on violations."""
    import csv

    table = RecordTable(path=path)
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        missing = set(REQUIRED_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise SchemaError(f"{path}: missing columns {sorted(missing)}")
        rows: dict[tuple[str, int], list[tuple[int, float, float]]] = {}
        for row in reader:
            try:
                key = (row["algo"], int(row["run"]))
                rows.setdefault(key, []).append(
                    (int(row["t"]), float(row["lower"]), float(row["upper"]))
                )
            except (TypeError, ValueError) as exc:
                raise SchemaError(f"{path}: bad row {row!r}: {exc}") from None
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    for key, triples in rows.items():
        triples.sort()
        t = np.array([p[0] for p in triples], dtype=int)
        lower = np.array([p[1] for p in triples])
        upper = np.array([p[2] for p in triples])
        if np.any(lower > upper + 1e-12):
            raise DataError(f"{path}: lower exceeds upper for {key}")
        table.series[key] = {"t": t, "lower": lower, "upper": upper}
    return table


def assert_nested_widths(table: RecordTable) -> None:
    """Width series of tracker algorithms must be nonincreasing per run."""
    for (algo, run), s in table.series.items():
        if algo in _NON_NESTED_ALGOS:
            continue
        width = s["upper"] - s["lower"]
        if np.any(np.diff(width) > 1e-9):
            raise DataError(
                f"{table.path}: width series increases for algo={algo} run={run}"
            )


def _select_algos(table: RecordTable, spec: FigureSpec) -> list[str]:
    algos = list(spec.algos) if spec.algos else table.algos
    unknown = [a for a in algos if not any(k[0] == a for k in table.series)]
    if unknown:
        raise SchemaError(f"{table.path}: no rows for algorithms {unknown}")
    if not algos:
        raise SchemaError(f"{table.path}: no algorithms selected")
    return algos


def _label(base: str, spec: FigureSpec, idx: int) -> str:
    if idx < len(spec.deltas):
        return f"{base} (delta={spec.deltas[idx]:g})"
    return base


def render(spec: FigureSpec) -> str:
    """Render the requested panel and return the output path."""
    tables = [load_records(p) for p in spec.inputs]
    for table in tables:
        assert_nested_widths(table)

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    cmap = plt.get_cmap("tab10")

    if spec.panel == "intervals":
        table = tables[0]
        for ci, algo in enumerate(_select_algos(table, spec)):
            color = cmap(ci % 10)
            for j, run in enumerate(table.runs(algo)):
                s = table.series[(algo, run)]
                ax.plot(s["t"], s["lower"], color=color, alpha=0.8,
                        label=algo if j == 0 else None)
                ax.plot(s["t"], s["upper"], color=color, alpha=0.8)
        if spec.mu is not None:
            ax.axhline(spec.mu, color="black", linestyle=":", linewidth=1,
                       label="true mean")
        ax.set_ylabel("confidence interval")
        ax.set_ylim(-0.02, 1.02)

    elif spec.panel == "widths":
        table = tables[0]
        for ci, algo in enumerate(_select_algos(table, spec)):
            runs = table.runs(algo)
            t = table.series[(algo, runs[0])]["t"]
            widths = np.stack(
                [
                    table.series[(algo, r)]["upper"] - table.series[(algo, r)]["lower"]
                    for r in runs
                ]
            )
            ax.plot(t, np.median(widths, axis=0), color=cmap(ci % 10), label=algo)
        ax.set_ylabel("median interval width")

    else:  # cp_compare
        for fi, table in enumerate(tables):
            for ci, algo in enumerate(_select_algos(table, spec)):
                color = cmap((fi * 2 + ci) % 10)
                style = ":" if algo in _NON_NESTED_ALGOS else "-"
                for j, run in enumerate(table.runs(algo)):
                    s = table.series[(algo, run)]
                    ax.plot(s["t"], s["lower"], style, color=color, alpha=0.8,
                            label=_label(algo, spec, fi) if j == 0 else None)
                    ax.plot(s["t"], s["upper"], style, color=color, alpha=0.8)
        if spec.mu is not None:
            ax.axhline(spec.mu, color="black", linestyle=":", linewidth=1)
        ax.set_ylabel("confidence interval")
        ax.set_ylim(-0.02, 1.02)

    ax.set_xscale("log")
    ax.set_xlabel("samples")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return str(out)
