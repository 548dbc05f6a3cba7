"""Catch-up regressions and cross-sectional dispersion statistics.

The central estimator fits, by nonlinear least squares,

    g_i = b0 - ((1 - exp(b*s)) / s) * ln y_i0 + e_i,

where g_i = (1/s) ln(y_i1 / y_i0) is country i's annualized growth over an
s-year horizon and y_i0 its initial income.  b < 0 means initially poorer
countries grow faster (catch-up); b > 0 means they fall further behind.
The implied number of years to close half the remaining income gap is

    tau = -ln(2) / ln(1 - (1 - exp(b*s)) / s).

Dispersion statistics summarize the cross-country income distribution in a
single year: percentile ratios, the variance of log income, and the ratio
of the mean of the five largest to the mean of the five smallest incomes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, NumericalError
from .ingest import AnalysisSample, Panel

MAX_ITER = 200
SSR_RTOL = 1e-12
STEP_TOL = 1e-10


@dataclass(frozen=True)
class BetaEstimate:
    """Fitted catch-up regression."""

    beta0: float
    beta: float
    se_beta0: float
    se_beta: float
    n: int
    t0: int
    t1: int
    s: float
    ssr: float
    converged: bool

    @property
    def slope(self) -> float:
        """Implied coefficient on initial log income, -(1 - exp(b*s))/s."""
        return math.expm1(self.beta * self.s) / self.s


def _growth_and_loginc(sample: AnalysisSample):
    y0, y1 = sample.y0, sample.y1
    s = sample.s
    return np.log(y1 / y0) / s, np.log(y0)


def beta_convergence(sample: AnalysisSample, robust: bool = True) -> BetaEstimate:
    """Estimate the catch-up rate by damped Gauss-Newton least squares.

    The problem is a reparameterized simple regression, so the starting
    point is taken from the linearized fit (regress g on ln y0, map the
    slope back through b = ln(1 + slope*s)/s) and the Gauss-Newton loop
    polishes it.  Standard errors are sandwich (HC1, scaled by n/(n-2))
    when ``robust`` is set, classical otherwise.

    Raises
    ------
    DataError
        Fewer than 3 countries.
    NumericalError
        All initial incomes identical (slope unidentified), or the
        optimizer fails to converge within the iteration cap.
    """
    if sample.n < 3:
        raise DataError(f"need at least 3 countries, got {sample.n}")
    s = float(sample.s)
    g, x = _growth_and_loginc(sample)
    n = len(g)
    if np.ptp(x) == 0.0:
        raise NumericalError("catch-up rate unidentified: all initial "
                             "incomes are identical")

    # Linearized start: OLS of g on ln y0.
    X = np.column_stack([np.ones(n), x])
    (b0, c), *_ = np.linalg.lstsq(X, g, rcond=None)
    if 1.0 + c * s > 0.0:
        beta = math.log1p(c * s) / s
    else:
        beta = -0.001
    params = np.array([b0, beta])

    def fitted(p):
        return p[0] + (math.expm1(p[1] * s) / s) * x

    def jac(p):
        return np.column_stack([np.ones(n), math.exp(p[1] * s) * x])

    def ssr_at(p):
        # a wild trial step can overflow exp before damping rejects it
        try:
            return float(np.sum((g - fitted(p)) ** 2))
        except OverflowError:
            return math.inf

    ssr = ssr_at(params)
    lam = 1e-3
    converged = False
    for _ in range(MAX_ITER):
        r = g - fitted(params)
        J = jac(params)
        JtJ = J.T @ J
        Jtr = J.T @ r
        step = None
        for _ in range(30):  # grow damping until the step improves SSR
            A = JtJ + lam * np.diag(np.diag(JtJ))
            try:
                step = np.linalg.solve(A, Jtr)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            trial = params + step
            ssr_trial = ssr_at(trial)
            if ssr_trial <= ssr:
                break
            lam *= 10.0
        else:
            break
        params = params + step
        lam = max(lam / 10.0, 1e-12)
        improved = ssr - ssr_trial
        ssr = ssr_trial
        if improved <= SSR_RTOL * max(ssr, 1e-300) or np.max(np.abs(step)) < STEP_TOL:
            converged = True
            break

    if not converged:
        raise NumericalError(f"catch-up estimator did not converge within "
                             f"{MAX_ITER} iterations")

    resid = g - fitted(params)
    J = jac(params)
    JtJ_inv = np.linalg.inv(J.T @ J)
    if robust:
        meat = J.T @ (resid[:, None] ** 2 * J)
        cov = JtJ_inv @ meat @ JtJ_inv * (n / (n - 2))
    else:
        cov = JtJ_inv * (ssr / (n - 2))
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))

    return BetaEstimate(beta0=float(params[0]), beta=float(params[1]),
                        se_beta0=float(se[0]), se_beta=float(se[1]),
                        n=n, t0=sample.t0, t1=sample.t1, s=s,
                        ssr=ssr, converged=True)


def half_life(beta: float, s: float) -> float:
    """Years to close half the income gap at catch-up rate ``beta``.

    Returns +inf when the per-year gap-closure rate underflows (beta
    indistinguishable from zero at double precision).
    """
    if beta >= 0:
        raise NumericalError("half-life undefined: no catch-up (beta >= 0)")
    rate = -math.expm1(beta * s) / s  # (1 - exp(beta*s)) / s
    if not rate < 1.0:
        raise NumericalError(f"gap-closure rate {rate} outside (0, 1)")
    denom = math.log1p(-rate)
    if denom == 0.0:
        return math.inf
    return -math.log(2.0) / denom


def percentile_value(values, p: float) -> float:
    """Linear interpolation on order statistics at rank (p/100)*(N-1).

    ``values`` must be non-empty and sorted ascending.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("empty series")
    if not 0.0 <= p <= 100.0:
        raise ValueError(f"percentile {p} outside [0, 100]")
    if np.any(np.diff(v) < 0):
        raise ValueError("series must be sorted ascending")
    return float(_interp_at_ranks(v, np.asarray(p, dtype=float)))


def _interp_at_ranks(sorted_values: np.ndarray, p) -> np.ndarray:
    """Interpolate already-ordered values at percentile ranks (vectorized)."""
    n = len(sorted_values)
    r = np.asarray(p, dtype=float) / 100.0 * (n - 1)
    return np.interp(r, np.arange(n), sorted_values)


@dataclass(frozen=True)
class DispersionRow:
    """Income dispersion measures for one year."""

    year: int
    p90_p10: float
    p90_p50: float
    p50_p10: float
    var_log: float
    income_ratio: float
    n: int


def dispersion_table(panel: Panel, years, exclude_ssa: bool = False,
                     variance_sensitive: bool = False,
                     ddof: int = 0) -> list[DispersionRow]:
    """Dispersion measures of income per capita for each requested year.

    ``variance_sensitive`` drops the configured outlier countries
    (default Venezuela) from every measure in the affected rows.
    ``ddof=0`` gives the population variance of log income; pass 1 for the
    sample variance.
    """
    sub = panel.restrict(exclude_ssa=exclude_ssa,
                         drop=panel.config.variance_exclusions
                         if variance_sensitive else ())
    rows = []
    for year in years:
        y = sub.year_slice(year, required=("y",))["y"].to_numpy(float)
        if len(y) < 10:
            raise DataError(f"only {len(y)} countries with income in {year}; "
                            "need at least 10")
        y = np.sort(y)
        p10, p50, p90 = _interp_at_ranks(y, np.array([10.0, 50.0, 90.0]))
        rows.append(DispersionRow(
            year=int(year),
            p90_p10=p90 / p10,
            p90_p50=p90 / p50,
            p50_p10=p50 / p10,
            var_log=float(np.var(np.log(y), ddof=ddof)),
            income_ratio=float(np.mean(y[-5:]) / np.mean(y[:5])),
            n=len(y),
        ))
    return rows
