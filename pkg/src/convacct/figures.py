"""Matplotlib rendering of the report's standard figures.

Each function writes one PNG next to the report's delimited output.  The
style is deliberately plain: grouped bars for decomposition changes, lines
for time series.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

_BAR_COLORS = ("#1f77b4", "#d62728", "#2ca02c")


def decomposition_bars(changes, title: str, path) -> None:
    """Grouped bar chart of period changes: total, TFP, k/y, human capital."""
    labels = ["Total", "TFP", "Capital-output", "Human capital"]
    fig, ax = plt.subplots(figsize=(8, 5))
    width = 0.8 / len(changes)
    xs = np.arange(len(labels))
    for j, ch in enumerate(changes):
        vals = [ch.delta_total, ch.delta_tfp, ch.delta_ky, ch.delta_h]
        ax.bar(xs + (j - (len(changes) - 1) / 2) * width, vals, width,
               label=f"{ch.year1}-{ch.year2}",
               color=_BAR_COLORS[j % len(_BAR_COLORS)])
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xticks(xs, labels)
    ax.set_ylabel("Change in log gap")
    ax.set_title(title)
    ax.legend()
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def regional_lines(series: pd.DataFrame, title: str, path) -> None:
    """One line per region of the population-weighted capital-output ratio.

    ``series`` columns: year, region, ky.
    """
    fig, ax = plt.subplots(figsize=(8, 5))
    for region, grp in series.groupby("region"):
        grp = grp.sort_values("year")
        ax.plot(grp["year"], grp["ky"], label=region)
    ax.set_xlabel("Year")
    ax.set_ylabel("Capital-output ratio (population-weighted)")
    ax.set_title(title)
    ax.legend(fontsize=8)
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def variance_bars(rows: pd.DataFrame, title: str, path) -> None:
    """Grouped bars of variance-component changes per period.

    ``rows`` columns: period, d_var_ln_y, d_var_ln_a, d_var_ln_ykh, d_cov_term.
    """
    labels = ["Var ln y", "Var ln A", "Var inputs", "2 Cov"]
    cols = ["d_var_ln_y", "d_var_ln_a", "d_var_ln_ykh", "d_cov_term"]
    fig, ax = plt.subplots(figsize=(8, 5))
    width = 0.8 / len(rows)
    xs = np.arange(len(labels))
    for j, (_, row) in enumerate(rows.iterrows()):
        ax.bar(xs + (j - (len(rows) - 1) / 2) * width,
               [row[c] for c in cols], width, label=str(row["period"]),
               color=_BAR_COLORS[j % len(_BAR_COLORS)])
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xticks(xs, labels)
    ax.set_ylabel("Change over period")
    ax.set_title(title)
    ax.legend()
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def dispersion_lines(table: pd.DataFrame, title: str, path) -> None:
    """Time paths of the dispersion measures (ratios left, variance right)."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.5))
    for col, label in (("p90_p10", "P90/P10"), ("p90_p50", "P90/P50"),
                       ("p50_p10", "P50/P10")):
        ax1.plot(table["year"], table[col], marker="o", label=label)
    ax1.set_xlabel("Year")
    ax1.set_ylabel("Percentile ratio")
    ax1.legend(fontsize=8)
    ax2.plot(table["year"], table["var_log"], marker="o", color="#d62728")
    ax2.set_xlabel("Year")
    ax2.set_ylabel("Variance of log income")
    for ax in (ax1, ax2):
        ax.spines["top"].set_visible(False)
        ax.spines["right"].set_visible(False)
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
