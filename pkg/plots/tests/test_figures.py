"""Plots package tests: schema validation, invariant checks, render smoke.

The end-to-end test drives the primary package through its CLI, which is the
only interface this package consumes.
"""

import csv
import subprocess
import sys
from pathlib import Path

import pytest

from betcs_plots import (
    DataError,
    FigureSpec,
    SchemaError,
    assert_nested_widths,
    load_records,
    render,
)

HEADER = ["run", "t", "x", "algo", "lower", "upper", "covered"]


def _write_records(path: Path, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(HEADER)
        w.writerows(rows)


def _toy_rows(algo="co96", runs=2, horizon=20):
    rows = []
    for r in range(runs):
        lo, up = 0.0, 1.0
        for t in range(1, horizon + 1):
            lo = min(lo + 0.01, 0.45)
            up = max(up - 0.02, 0.55)
            rows.append([r, t, 0.5, algo, lo, up, 1])
    return rows


class TestLoadRecords:
    def test_missing_columns_fail_loudly(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("run,t,algo\n0,1,co96\n")
        with pytest.raises(SchemaError, match="missing columns"):
            load_records(str(bad))

    def test_empty_input_fails(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text(",".join(HEADER) + "\n")
        with pytest.raises(SchemaError, match="no data rows"):
            load_records(str(empty))

    def test_malformed_row_fails(self, tmp_path):
        bad = tmp_path / "bad.csv"
        _write_records(bad, [[0, 1, 0.5, "co96", "oops", 1.0, 1]])
        with pytest.raises(SchemaError, match="bad row"):
            load_records(str(bad))

    def test_inverted_interval_fails(self, tmp_path):
        bad = tmp_path / "bad.csv"
        _write_records(bad, [[0, 1, 0.5, "co96", 0.9, 0.1, 0]])
        with pytest.raises(DataError):
            load_records(str(bad))

    def test_round_trip(self, tmp_path):
        path = tmp_path / "records.csv"
        _write_records(path, _toy_rows())
        table = load_records(str(path))
        assert table.algos == ["co96"]
        assert table.runs("co96") == [0, 1]
        s = table.series[("co96", 0)]
        assert len(s["t"]) == 20 and s["t"][0] == 1

    def test_data_series_deterministic(self, tmp_path):
        """Identical CSVs yield identical extracted series."""
        path = tmp_path / "records.csv"
        _write_records(path, _toy_rows())
        a = load_records(str(path))
        b = load_records(str(path))
        assert a.series.keys() == b.series.keys()
        for key in a.series:
            for col in ("t", "lower", "upper"):
                assert (a.series[key][col] == b.series[key][col]).all()


class TestNestingAssertion:
    def test_accepts_nested(self, tmp_path):
        path = tmp_path / "ok.csv"
        _write_records(path, _toy_rows())
        assert_nested_widths(load_records(str(path)))

    def test_rejects_widening(self, tmp_path):
        rows = _toy_rows(horizon=5)
        rows.append([0, 6, 0.5, "co96", 0.1, 0.99, 1])  # widens again
        path = tmp_path / "widen.csv"
        _write_records(path, rows)
        with pytest.raises(DataError, match="width series increases"):
            assert_nested_widths(load_records(str(path)))

    def test_pointwise_baseline_exempt(self, tmp_path):
        rows = _toy_rows(algo="clopper_pearson", horizon=5)
        rows.append([0, 6, 0.5, "clopper_pearson", 0.1, 0.99, 1])
        path = tmp_path / "cp.csv"
        _write_records(path, rows)
        assert_nested_widths(load_records(str(path)))  # no complaint


class TestRender:
    def test_intervals_and_widths_panels(self, tmp_path):
        path = tmp_path / "records.csv"
        _write_records(path, _toy_rows())
        for panel in ("intervals", "widths"):
            out = tmp_path / f"{panel}.png"
            got = render(
                FigureSpec(
                    inputs=(str(path),), output=str(out), panel=panel, mu=0.5
                )
            )
            assert Path(got).stat().st_size > 0

    def test_cp_compare_overlay(self, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        _write_records(p1, _toy_rows())
        _write_records(p2, _toy_rows(algo="clopper_pearson"))
        out = tmp_path / "cmp.png"
        render(
            FigureSpec(
                inputs=(str(p1), str(p2)),
                output=str(out),
                panel="cp_compare",
                deltas=(0.1, 0.05),
            )
        )
        assert out.stat().st_size > 0

    def test_unknown_algo_subset_fails(self, tmp_path):
        path = tmp_path / "records.csv"
        _write_records(path, _toy_rows())
        with pytest.raises(SchemaError, match="no rows for algorithms"):
            render(
                FigureSpec(
                    inputs=(str(path),),
                    output=str(tmp_path / "x.png"),
                    panel="widths",
                    algos=("r70",),
                )
            )

    def test_bad_panel_rejected(self, tmp_path):
        with pytest.raises(SchemaError):
            FigureSpec(inputs=("x.csv",), output="y.png", panel="pie")


class TestCli:
    def _plot(self, *args):
        return subprocess.run(
            [sys.executable, "-m", "betcs_plots.cli", *args],
            capture_output=True,
            text=True,
        )

    def test_schema_violation_exits_nonzero(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("a,b\n1,2\n")
        proc = self._plot(
            "--panel", "widths", "--in", str(bad), "--out", str(tmp_path / "f.png")
        )
        assert proc.returncode == 1
        assert "missing columns" in proc.stderr

    def test_empty_algo_subset_is_usage_error(self, tmp_path):
        path = tmp_path / "records.csv"
        _write_records(path, _toy_rows())
        proc = self._plot(
            "--panel", "widths", "--in", str(path),
            "--algos", " ", "--out", str(tmp_path / "f.png"),
        )
        assert proc.returncode == 1
        assert "empty algorithm subset" in proc.stderr

    def test_end_to_end_through_primary_cli(self, tmp_path):
        """Harness output for one Bernoulli(0.5) run renders both panels."""
        sim = subprocess.run(
            [
                sys.executable, "-m", "betcs.cli", "simulate",
                "--dist", "bernoulli:0.5", "--T", "100", "--reps", "1",
                "--delta", "0.05", "--algos", "co96,r70,bernstein",
                "--seed", "10", "--out", str(tmp_path / "run"),
            ],
            capture_output=True,
            text=True,
        )
        assert sim.returncode == 0, sim.stderr
        records = tmp_path / "run" / "records.csv"
        for panel in ("intervals", "widths"):
            out = tmp_path / f"{panel}.png"
            proc = self._plot(
                "--panel", panel, "--in", str(records),
                "--mu", "0.5", "--out", str(out),
            )
            assert proc.returncode == 0, proc.stderr
            assert out.stat().st_size > 0
