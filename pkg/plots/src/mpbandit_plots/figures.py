"""Render regret figures from the simulator CLI's CSV files.

Two figure kinds, both static images:

* regret-vs-turns: one line per policy from ``*.agg.csv`` files (mean
  cumulative regret over turns), with a shaded band of one sample standard
  deviation around each line.
* regret-vs-alpha: one line per policy from a sweep CSV (mean final regret
  against connectivity alpha), with std error bars.

Inputs are read-only; the output path is overwritten on every call. All
validation happens before anything is drawn, so a bad CSV never leaves a
fresh image behind.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# Column layouts of the simulator CLI's aggregate and sweep files. These are
# the documented exchange format, duplicated here on purpose: the plots
# package talks to the simulator only through its files.
AGG_COLUMNS = (
    "policy",
    "alpha",
    "turn",
    "expected_gain_mean",
    "expected_gain_std",
    "realized_gain_mean",
    "realized_gain_std",
    "cumulative_regret_mean",
    "cumulative_regret_std",
    "collisions_mean",
    "collisions_std",
)
SWEEP_COLUMNS = (
    "policy",
    "alpha",
    "final_regret_mean",
    "final_regret_std",
    "replications",
    "turns",
)

FIGURE_KINDS = ("regret-vs-turns", "regret-vs-alpha")

BAND_ALPHA = 0.25


class SchemaError(ValueError):
    """An input CSV is missing, malformed, or empty of data rows."""


def _check_header(path: str, columns: tuple[str, ...]) -> None:
    if not os.path.isfile(path):
        raise SchemaError(f"{path}: no such file")
    with open(path, newline="") as fh:
        header = csv.DictReader(fh).fieldnames or []
    for name in columns:
        if name not in header:
            raise SchemaError(f"{path}: missing column '{name}'")


def _read_rows(path: str, columns: tuple[str, ...]) -> list[dict[str, str]]:
    """Read a CSV and check it carries every required column and ≥1 row."""
    _check_header(path, columns)
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _float(row: dict[str, str], key: str, path: str) -> float:
    try:
        return float(row[key])
    except (TypeError, ValueError):
        raise SchemaError(f"{path}: non-numeric value {row[key]!r} in column '{key}'") from None


def _series_labels(keys: list[tuple[str, str]], labels: tuple[str, ...] | None) -> list[str]:
    """One legend entry per series; explicit labels win over derived ones."""
    if labels is not None:
        if len(labels) != len(keys):
            raise ValueError(f"got {len(labels)} labels for {len(keys)} series")
        return list(labels)
    policies = [policy for policy, _ in keys]
    out = []
    for policy, alpha in keys:
        # alpha only disambiguates when one policy shows up more than once
        out.append(policy if policies.count(policy) == 1 else f"{policy}, alpha={alpha}")
    return out


def plot_regret_vs_turns(
    agg_csv_paths: list[str] | tuple[str, ...],
    out_path: str,
    labels: tuple[str, ...] | None = None,
):
    """Draw mean cumulative regret over turns, one banded line per policy.

    Each aggregate CSV contributes one series per (policy, alpha) pair it
    contains, drawn as the mean line with a shaded ±1 std band. Returns the
    figure after saving it to ``out_path``.
    """
    if not agg_csv_paths:
        raise ValueError("need at least one aggregate CSV")
    series: dict[tuple[str, str], list[tuple[int, float, float]]] = {}
    for path in agg_csv_paths:
        for row in _read_rows(path, AGG_COLUMNS):
            key = (row["policy"], row["alpha"])
            turn = int(_float(row, "turn", path))
            mean = _float(row, "cumulative_regret_mean", path)
            std = _float(row, "cumulative_regret_std", path)
            series.setdefault(key, []).append((turn, mean, std))

    keys = list(series)
    names = _series_labels(keys, labels)
    fig, ax = plt.subplots()
    for key, name in zip(keys, names):
        points = sorted(series[key])
        turns = [t for t, _, _ in points]
        means = [m for _, m, _ in points]
        stds = [s for _, _, s in points]
        (line,) = ax.plot(turns, means, label=name)
        ax.fill_between(
            turns,
            [m - s for m, s in zip(means, stds)],
            [m + s for m, s in zip(means, stds)],
            color=line.get_color(),
            alpha=BAND_ALPHA,
            linewidth=0,
        )
    ax.set_xlabel("turn")
    ax.set_ylabel("cumulative regret")
    ax.legend()
    fig.savefig(out_path)
    return fig


def plot_regret_vs_alpha(
    sweep_csv_path: str,
    out_path: str,
    labels: tuple[str, ...] | None = None,
):
    """Draw mean final regret against alpha, one error-barred line per policy.

    The sweep CSV must cover at least two distinct alpha values. Returns the
    figure after saving it to ``out_path``.
    """
    rows = _read_rows(sweep_csv_path, SWEEP_COLUMNS)
    series: dict[str, list[tuple[float, float, float]]] = {}
    for row in rows:
        alpha = _float(row, "alpha", sweep_csv_path)
        mean = _float(row, "final_regret_mean", sweep_csv_path)
        std = _float(row, "final_regret_std", sweep_csv_path)
        series.setdefault(row["policy"], []).append((alpha, mean, std))
    n_alphas = len({a for points in series.values() for a, _, _ in points})
    if n_alphas < 2:
        raise SchemaError(f"{sweep_csv_path}: need at least two alpha values, found {n_alphas}")

    policies = list(series)
    names = _series_labels([(p, "") for p in policies], labels)
    fig, ax = plt.subplots()
    for policy, name in zip(policies, names):
        points = sorted(series[policy])
        ax.errorbar(
            [a for a, _, _ in points],
            [m for _, m, _ in points],
            yerr=[s for _, _, s in points],
            label=name,
            marker="o",
            capsize=3,
        )
    ax.set_xlabel("alpha")
    ax.set_ylabel("final cumulative regret")
    ax.legend()
    fig.savefig(out_path)
    return fig


@dataclass(frozen=True, slots=True)
class FigureSpec:
    """A renderable figure: input CSVs, kind, optional labels, output path."""

    csv_paths: tuple[str, ...]
    kind: str
    out_path: str
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {FIGURE_KINDS}")
        if not self.csv_paths:
            raise ValueError("need at least one input CSV")
        if self.kind == "regret-vs-alpha" and len(self.csv_paths) != 1:
            raise ValueError("regret-vs-alpha takes exactly one sweep CSV")
        columns = AGG_COLUMNS if self.kind == "regret-vs-turns" else SWEEP_COLUMNS
        for path in self.csv_paths:
            _check_header(path, columns)

    def render(self):
        """Produce the image file and return the figure."""
        if self.kind == "regret-vs-turns":
            return plot_regret_vs_turns(self.csv_paths, self.out_path, self.labels)
        return plot_regret_vs_alpha(self.csv_paths[0], self.out_path, self.labels)
