"""Percentile-based accounting of cross-country income gaps.

For a year's income-sorted cross section, the log income gap between two
percentiles splits into three additive pieces:

    ln y(p_hi) - ln y(p_lo) = contrib_tfp + contrib_ky + contrib_h

The capital-output piece integrates alpha/(1-alpha) against the change in
ln(k/y) along the income distribution, evaluated by the trapezoid rule on
the percentile grid:

    contrib_ky = sum_k 1/2 [ w(p_{k+1}) + w(p_k) ] [ ln ky(p_{k+1}) - ln ky(p_k) ],
    w(p) = alpha(p) / (1 - alpha(p)).

The human-capital piece is the endpoint difference of ln h, and the
productivity piece is the residual, so additivity is exact by construction.
With a constant capital share the trapezoid sum telescopes to the familiar
closed form (alpha/(1-alpha)) * [ln ky(p_hi) - ln ky(p_lo)].

Profiles read every variable off the *income-sorted* ordering: at rank
r = (p/100)(N-1) each of ln y, ln ky, ln h, alpha is linearly interpolated
between the two adjacent countries in income order.  Companion variables
are functions of the income percentile, not independently sorted.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .ingest import Panel

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PercentileProfile:
    """ln y, ln ky, ln h and alpha sampled on a percentile grid for one year."""

    year: int
    grid: np.ndarray
    ln_y: np.ndarray
    ln_ky: np.ndarray
    ln_h: np.ndarray
    alpha: np.ndarray
    n: int

    def __post_init__(self):
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("percentile grid must be strictly increasing")
        if np.any(np.diff(self.ln_y) < -1e-12):
            raise ValueError("profile income must be non-decreasing along the grid")
        if np.any(self.alpha <= 0) or np.any(self.alpha >= 1):
            raise ValueError("interpolated capital share outside (0, 1)")


def default_grid(p_lo: float, p_hi: float, step: float = 1.0) -> np.ndarray:
    """Evenly spaced percentile grid from p_lo to p_hi; p_hi must land on it."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    n_int = round((p_hi - p_lo) / step)
    grid = p_lo + step * np.arange(n_int + 1)
    if n_int < 1 or abs(grid[-1] - p_hi) > 1e-9:
        raise ValueError(f"span {p_lo}..{p_hi} is not a whole number of "
                         f"steps of {step}")
    return grid


def percentile_profile(panel: Panel, year: int, grid,
                       min_countries: int = 10) -> PercentileProfile:
    """Interpolate the decomposition variables along the income ordering.

    Uses the year's decomposition sample: countries with y, ky, h present
    and capital share inside (0, 1).  ``min_countries`` guards against
    degenerate samples; lower it only for controlled inputs.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any((grid < 0) | (grid > 100)):
        raise ValueError("grid percentiles must lie in [0, 100]")
    sub = panel.decomposition_slice(year)
    if len(sub) < max(min_countries, 2):
        raise DataError(f"only {len(sub)} decomposition-ready countries in "
                        f"{year}; need at least {max(min_countries, 2)}")

    order = np.argsort(sub["y"].to_numpy(float), kind="stable")
    ln_y = np.log(sub["y"].to_numpy(float)[order])
    ln_ky = np.log(sub["ky"].to_numpy(float)[order])
    ln_h = np.log(sub["h"].to_numpy(float)[order])
    alpha = sub["alpha"].to_numpy(float)[order]

    n = len(order)
    ranks = grid / 100.0 * (n - 1)
    idx = np.arange(n)
    return PercentileProfile(
        year=int(year),
        grid=grid,
        ln_y=np.interp(ranks, idx, ln_y),
        ln_ky=np.interp(ranks, idx, ln_ky),
        ln_h=np.interp(ranks, idx, ln_h),
        alpha=np.interp(ranks, idx, alpha),
        n=n,
    )


@dataclass(frozen=True)
class GapDecomposition:
    """Additive split of one log income gap; TFP is the residual."""

    year: int
    p_lo: float
    p_hi: float
    total: float
    contrib_ky: float
    contrib_h: float
    contrib_tfp: float
    alpha_const: float | None = None

    @property
    def alpha_mode(self) -> str:
        if self.alpha_const is None:
            return "varying"
        return f"constant({self.alpha_const:g})"


def _grid_index(grid: np.ndarray, p: float) -> int:
    hits = np.nonzero(np.abs(grid - p) <= 1e-9)[0]
    if len(hits) == 0:
        raise ValueError(f"percentile {p} is not a grid point")
    return int(hits[0])


def gap_decomposition(profile: PercentileProfile, p_lo: float, p_hi: float,
                      alpha_const: float | None = None) -> GapDecomposition:
    """Trapezoid decomposition of the log gap between two grid percentiles.

    ``alpha_const`` replaces the profile's capital share with a constant
    before integrating (the constant-share closed-form benchmark).
    """
    i_lo = _grid_index(profile.grid, p_lo)
    i_hi = _grid_index(profile.grid, p_hi)
    if i_lo >= i_hi:
        raise ValueError(f"p_lo must lie below p_hi, got {p_lo} >= {p_hi}")

    if alpha_const is None:
        alpha = profile.alpha[i_lo:i_hi + 1]
    else:
        if not 0.0 < alpha_const < 1.0:
            raise ValueError("alpha_const must lie in (0, 1)")
        alpha = np.full(i_hi - i_lo + 1, alpha_const)
    w = alpha / (1.0 - alpha)
    d_ln_ky = np.diff(profile.ln_ky[i_lo:i_hi + 1])

    total = float(profile.ln_y[i_hi] - profile.ln_y[i_lo])
    contrib_ky = float(np.sum(0.5 * (w[1:] + w[:-1]) * d_ln_ky))
    contrib_h = float(profile.ln_h[i_hi] - profile.ln_h[i_lo])
    contrib_tfp = total - contrib_ky - contrib_h
    return GapDecomposition(year=profile.year, p_lo=float(p_lo),
                            p_hi=float(p_hi), total=total,
                            contrib_ky=contrib_ky, contrib_h=contrib_h,
                            contrib_tfp=contrib_tfp, alpha_const=alpha_const)


@dataclass(frozen=True)
class DecompositionChange:
    """Change in a gap decomposition between two years (year2 minus year1)."""

    year1: int
    year2: int
    delta_total: float
    delta_ky: float
    delta_h: float
    delta_tfp: float
    start: GapDecomposition
    end: GapDecomposition


def gap_change(panel: Panel, year1: int, year2: int, p_lo: float, p_hi: float,
               grid=None, alpha_const: float | None = None,
               grid_step: float = 1.0) -> DecompositionChange:
    """Difference of gap decompositions between two years.

    Each year's profile is built from that year's decomposition sample in
    ``panel``; restrict the panel beforehand (see ``balanced_panel``) to
    hold the country set fixed across years.  The default grid runs from
    p_lo to p_hi in steps of ``grid_step``.
    """
    if grid is None:
        grid = default_grid(p_lo, p_hi, grid_step)
    d1 = gap_decomposition(percentile_profile(panel, year1, grid),
                           p_lo, p_hi, alpha_const)
    d2 = gap_decomposition(percentile_profile(panel, year2, grid),
                           p_lo, p_hi, alpha_const)
    return DecompositionChange(
        year1=int(year1), year2=int(year2),
        delta_total=d2.total - d1.total,
        delta_ky=d2.contrib_ky - d1.contrib_ky,
        delta_h=d2.contrib_h - d1.contrib_h,
        delta_tfp=d2.contrib_tfp - d1.contrib_tfp,
        start=d1, end=d2,
    )


@dataclass(frozen=True)
class VarianceDecomposition:
    """Variance split of log income under a constant capital share.

    Per country, ln y_kh = (a/(1-a)) ln ky + ln h and ln A = ln y - ln y_kh,
    so Var(ln y) = Var(ln A) + Var(ln y_kh) + 2 Cov(ln A, ln y_kh).
    """

    year: int
    alpha_const: float
    var_ln_y: float
    var_ln_a: float
    var_ln_ykh: float
    cov_term: float
    n: int


def variance_decomposition(panel: Panel, year: int, alpha_const: float = 0.46,
                           variance_sensitive: bool = False) -> VarianceDecomposition:
    """Split the variance of log income into input, productivity and
    covariance components, with the capital share fixed at ``alpha_const``.

    ``variance_sensitive`` drops the configured outlier countries first.
    """
    if not 0.0 < alpha_const < 1.0:
        raise ValueError("alpha_const must lie in (0, 1)")
    sub_panel = panel.restrict(drop=panel.config.variance_exclusions
                               if variance_sensitive else ())
    sub = sub_panel.decomposition_slice(year)
    if sub.empty:
        raise DataError(f"no decomposition-ready countries in {year}")

    ln_y = np.log(sub["y"].to_numpy(float))
    ln_ykh = (alpha_const / (1.0 - alpha_const)) * np.log(sub["ky"].to_numpy(float)) \
        + np.log(sub["h"].to_numpy(float))
    ln_a = ln_y - ln_ykh

    da = ln_a - ln_a.mean()
    dk = ln_ykh - ln_ykh.mean()
    return VarianceDecomposition(
        year=int(year), alpha_const=alpha_const,
        var_ln_y=float(np.var(ln_y)),
        var_ln_a=float(np.var(ln_a)),
        var_ln_ykh=float(np.var(ln_ykh)),
        cov_term=float(2.0 * np.mean(da * dk)),
        n=len(sub),
    )


def regional_capital_output(panel: Panel, year: int) -> dict[str, float]:
    """Population-weighted mean capital-output ratio per region for one year.

    Regions present in the panel but without any country carrying both ky
    and pop that year are omitted with a warning.
    """
    d = panel.data[panel.data["year"] == year]
    out: dict[str, float] = {}
    for region, grp in d.groupby("region"):
        ok = grp["ky"].notna() & grp["pop"].notna()
        if not ok.any():
            log.warning("region %r has no capital-output coverage in %d; omitted",
                        region, year)
            continue
        g = grp[ok]
        out[str(region)] = float((g["pop"] * g["ky"]).sum() / g["pop"].sum())
    return out
