"""Checks for the figure renderers.

The end-to-end tests shell out to the simulator CLI (the only interface this
package consumes) at a reduced but trend-preserving scale, then assert on
both the image files and the data actually drawn. Everything is seeded, so
the drawn numbers are exact reruns of calibrated values, not samples.
"""

import csv
import subprocess
import sys

import matplotlib.pyplot as plt
import numpy as np
import pytest
from matplotlib.collections import PolyCollection
from matplotlib.container import ErrorbarContainer

from mpbandit_plots import (
    AGG_COLUMNS,
    SWEEP_COLUMNS,
    FigureSpec,
    SchemaError,
    plot_regret_vs_alpha,
    plot_regret_vs_turns,
)


@pytest.fixture(autouse=True)
def _close_figures():
    yield
    plt.close("all")


def _cli(*args: str) -> None:
    cmd = [sys.executable, "-m", "mpbandit", *args]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, f"{cmd} failed:\n{proc.stdout}{proc.stderr}"


@pytest.fixture(scope="module")
def sim_csvs(tmp_path_factory):
    """Small seeded simulator runs: two aggregate files and one alpha sweep."""
    root = tmp_path_factory.mktemp("simout")
    thompson = root / "thompson_a1.csv"
    asymp = root / "asymp_a1.csv"
    sweep = root / "sweep.csv"
    common = ("--means", "preset:mu1", "--players", "5")
    _cli("run", "--policy", "thompson", "--alpha", "1.0", "--turns", "400",
         "--replications", "3", "--seed", "91", "--out", str(thompson), *common)
    _cli("run", "--policy", "asymp_opt", "--alpha", "1.0", "--turns", "400",
         "--replications", "3", "--seed", "92", "--out", str(asymp), *common)
    # 1500 turns x 4 reps keeps both alpha trends strict at a fraction of the
    # full-scale cost
    _cli("sweep-alpha", "--policy", "thompson,optimal_cycle",
         "--alphas", "0.1,0.5,1.0", "--turns", "1500", "--replications", "4",
         "--seed", "55", "--out", str(sweep), *common)
    return {
        "agg": [str(thompson).removesuffix(".csv") + ".agg.csv",
                str(asymp).removesuffix(".csv") + ".agg.csv"],
        "sweep": str(sweep),
    }


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _agg_row(policy, alpha, turn, regret_mean, regret_std):
    return [policy, alpha, turn, 3.0, 0.1, 3.0, 0.2, regret_mean, regret_std, 0.5, 0.1]


def _sweep_row(policy, alpha, mean, std):
    return [policy, alpha, mean, std, 4, 1500]


def _errorbar_series(ax):
    return {c.get_label(): c for c in ax.containers if isinstance(c, ErrorbarContainer)}


def test_turns_figure_from_simulator_runs(sim_csvs, tmp_path):
    out = tmp_path / "turns.png"
    fig = plot_regret_vs_turns(sim_csvs["agg"], str(out))
    assert out.is_file() and out.stat().st_size > 0
    ax = fig.axes[0]
    assert len(ax.get_lines()) == 2
    bands = [c for c in ax.collections if isinstance(c, PolyCollection)]
    assert len(bands) == 2
    legend = ax.get_legend()
    assert legend is not None
    assert [t.get_text() for t in legend.get_texts()] == ["thompson", "asymp_opt"]
    assert ax.get_xlabel() and ax.get_ylabel()
    print("[PASS] regret-vs-turns renders from simulator output: "
          "2 lines, 2 std bands, legend, labeled axes")


def test_alpha_figure_from_simulator_sweep(sim_csvs, tmp_path):
    out = tmp_path / "alpha.png"
    fig = plot_regret_vs_alpha(sim_csvs["sweep"], str(out))
    assert out.is_file() and out.stat().st_size > 0
    ax = fig.axes[0]
    series = _errorbar_series(ax)
    assert sorted(series) == ["optimal_cycle", "thompson"]
    assert all(c.has_yerr for c in series.values())
    legend = ax.get_legend()
    assert legend is not None and len(legend.get_texts()) == 2
    assert ax.get_xlabel() and ax.get_ylabel()
    print("[PASS] regret-vs-alpha renders from simulator sweep: "
          "2 error-barred lines, legend, labeled axes")


def _drawn_points(container):
    x, y = container.lines[0].get_data()
    return np.asarray(x, dtype=float), np.asarray(y, dtype=float)


def test_drawn_thompson_trend_increases_with_alpha(sim_csvs, tmp_path):
    fig = plot_regret_vs_alpha(sim_csvs["sweep"], str(tmp_path / "alpha.png"))
    alphas, regrets = _drawn_points(_errorbar_series(fig.axes[0])["thompson"])
    slope = np.polyfit(alphas, regrets, 1)[0]
    assert slope > 0
    assert all(a < b for a, b in zip(regrets, regrets[1:]))
    print(f"[PASS] thompson sweep trend increases: fitted slope {slope:.1f} > 0, "
          f"regrets {[round(float(r), 1) for r in regrets]}")


def test_drawn_cycle_trend_decreases_with_alpha(sim_csvs, tmp_path):
    fig = plot_regret_vs_alpha(sim_csvs["sweep"], str(tmp_path / "alpha.png"))
    alphas, regrets = _drawn_points(_errorbar_series(fig.axes[0])["optimal_cycle"])
    slope = np.polyfit(alphas, regrets, 1)[0]
    assert slope < 0
    assert all(a > b for a, b in zip(regrets, regrets[1:]))
    print(f"[PASS] optimal_cycle sweep trend decreases: fitted slope {slope:.1f} < 0, "
          f"regrets {[round(float(r), 1) for r in regrets]}")


def test_three_turn_csv_renders(tmp_path):
    path = tmp_path / "tiny.agg.csv"
    _write_csv(path, AGG_COLUMNS, [_agg_row("ucb1", 0.5, t, t * 1.0, 0.3) for t in (1, 2, 3)])
    out = tmp_path / "tiny.png"
    fig = plot_regret_vs_turns([str(path)], str(out))
    assert out.is_file() and out.stat().st_size > 0
    line = fig.axes[0].get_lines()[0]
    assert list(line.get_xdata()) == [1, 2, 3]


def test_header_only_csv_is_clean_error(tmp_path):
    agg = tmp_path / "empty.agg.csv"
    sweep = tmp_path / "empty.sweep.csv"
    _write_csv(agg, AGG_COLUMNS, [])
    _write_csv(sweep, SWEEP_COLUMNS, [])
    out = tmp_path / "never.png"
    with pytest.raises(SchemaError, match="no data rows"):
        plot_regret_vs_turns([str(agg)], str(out))
    with pytest.raises(SchemaError, match="no data rows"):
        plot_regret_vs_alpha(str(sweep), str(out))
    assert not out.exists()


def test_missing_column_named_in_error(tmp_path):
    header = [c for c in AGG_COLUMNS if c != "cumulative_regret_std"]
    agg = tmp_path / "short.agg.csv"
    _write_csv(agg, header, [["ucb1", 0.5, 1, 3.0, 0.1, 3.0, 0.2, 1.0, 0.5, 0.1]])
    out = tmp_path / "never.png"
    with pytest.raises(SchemaError, match="cumulative_regret_std"):
        plot_regret_vs_turns([str(agg)], str(out))

    sweep = tmp_path / "short.sweep.csv"
    _write_csv(sweep, [c for c in SWEEP_COLUMNS if c != "final_regret_std"],
               [["ucb1", 0.5, 100.0, 4, 1500]])
    with pytest.raises(SchemaError, match="final_regret_std"):
        plot_regret_vs_alpha(str(sweep), str(out))
    assert not out.exists()


def test_non_numeric_cell_named_in_error(tmp_path):
    path = tmp_path / "bad.agg.csv"
    _write_csv(path, AGG_COLUMNS, [_agg_row("ucb1", 0.5, 1, "oops", 0.3)])
    with pytest.raises(SchemaError, match="cumulative_regret_mean"):
        plot_regret_vs_turns([str(path)], str(tmp_path / "never.png"))


def test_missing_file_is_schema_error(tmp_path):
    with pytest.raises(SchemaError, match="no such file"):
        plot_regret_vs_turns([str(tmp_path / "nope.csv")], str(tmp_path / "out.png"))


def test_needs_at_least_one_csv(tmp_path):
    with pytest.raises(ValueError):
        plot_regret_vs_turns([], str(tmp_path / "out.png"))


def test_two_point_single_policy_sweep(tmp_path):
    path = tmp_path / "two.sweep.csv"
    _write_csv(path, SWEEP_COLUMNS,
               [_sweep_row("ucb1", 0.2, 120.0, 8.0), _sweep_row("ucb1", 0.8, 180.0, 9.0)])
    fig = plot_regret_vs_alpha(str(path), str(tmp_path / "two.png"))
    series = _errorbar_series(fig.axes[0])
    assert list(series) == ["ucb1"]
    x, y = series["ucb1"].lines[0].get_data()
    assert list(x) == [0.2, 0.8]
    assert list(y) == [120.0, 180.0]


def test_single_alpha_sweep_rejected(tmp_path):
    path = tmp_path / "one.sweep.csv"
    _write_csv(path, SWEEP_COLUMNS,
               [_sweep_row("ucb1", 0.5, 120.0, 8.0), _sweep_row("thompson", 0.5, 90.0, 7.0)])
    out = tmp_path / "never.png"
    with pytest.raises(SchemaError, match="at least two alpha"):
        plot_regret_vs_alpha(str(path), str(out))
    assert not out.exists()


def test_same_policy_twice_gets_alpha_suffix(tmp_path):
    low = tmp_path / "low.agg.csv"
    high = tmp_path / "high.agg.csv"
    _write_csv(low, AGG_COLUMNS, [_agg_row("thompson", "0.1", t, t * 2.0, 0.3) for t in (1, 2)])
    _write_csv(high, AGG_COLUMNS, [_agg_row("thompson", "1.0", t, t * 3.0, 0.4) for t in (1, 2)])
    fig = plot_regret_vs_turns([str(low), str(high)], str(tmp_path / "both.png"))
    texts = [t.get_text() for t in fig.axes[0].get_legend().get_texts()]
    assert texts == ["thompson, alpha=0.1", "thompson, alpha=1.0"]


def test_labels_override_legend(tmp_path):
    path = tmp_path / "two.sweep.csv"
    _write_csv(path, SWEEP_COLUMNS,
               [_sweep_row("ucb1", 0.2, 120.0, 8.0), _sweep_row("ucb1", 0.8, 180.0, 9.0)])
    fig = plot_regret_vs_alpha(str(path), str(tmp_path / "named.png"), labels=("tuned UCB",))
    assert [t.get_text() for t in fig.axes[0].get_legend().get_texts()] == ["tuned UCB"]
    with pytest.raises(ValueError, match="1 series"):
        plot_regret_vs_alpha(str(path), str(tmp_path / "named.png"), labels=("a", "b"))


def test_figure_spec_validates_inputs(tmp_path):
    agg = tmp_path / "ok.agg.csv"
    _write_csv(agg, AGG_COLUMNS, [_agg_row("ucb1", 0.5, 1, 1.0, 0.1)])
    with pytest.raises(ValueError, match="unknown figure kind"):
        FigureSpec((str(agg),), "pie", str(tmp_path / "o.png"))
    with pytest.raises(ValueError, match="at least one"):
        FigureSpec((), "regret-vs-turns", str(tmp_path / "o.png"))
    with pytest.raises(ValueError, match="exactly one sweep"):
        FigureSpec((str(agg), str(agg)), "regret-vs-alpha", str(tmp_path / "o.png"))
    with pytest.raises(SchemaError, match="no such file"):
        FigureSpec((str(tmp_path / "gone.csv"),), "regret-vs-turns", str(tmp_path / "o.png"))
    # wrong schema for the declared kind is caught at construction
    with pytest.raises(SchemaError, match="final_regret_mean"):
        FigureSpec((str(agg),), "regret-vs-alpha", str(tmp_path / "o.png"))


def test_figure_spec_renders_both_kinds(tmp_path):
    agg = tmp_path / "ok.agg.csv"
    _write_csv(agg, AGG_COLUMNS, [_agg_row("ucb1", 0.5, t, t * 1.0, 0.1) for t in (1, 2, 3)])
    sweep = tmp_path / "ok.sweep.csv"
    _write_csv(sweep, SWEEP_COLUMNS,
               [_sweep_row("ucb1", 0.2, 120.0, 8.0), _sweep_row("ucb1", 0.8, 180.0, 9.0)])
    turns_out = tmp_path / "turns.png"
    alpha_out = tmp_path / "alpha.png"
    FigureSpec((str(agg),), "regret-vs-turns", str(turns_out)).render()
    FigureSpec((str(sweep),), "regret-vs-alpha", str(alpha_out)).render()
    assert turns_out.stat().st_size > 0
    assert alpha_out.stat().st_size > 0


def test_rerender_overwrites_output(tmp_path):
    path = tmp_path / "tiny.agg.csv"
    _write_csv(path, AGG_COLUMNS, [_agg_row("ucb1", 0.5, t, t * 1.0, 0.3) for t in (1, 2, 3)])
    out = tmp_path / "same.png"
    plot_regret_vs_turns([str(path)], str(out))
    first = out.stat().st_size
    plot_regret_vs_turns([str(path)], str(out))
    assert out.stat().st_size > 0 and first > 0
