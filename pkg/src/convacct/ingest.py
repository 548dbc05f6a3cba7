"""Raw data ingestion and sample construction.

Reads Penn World Table style CSV extracts plus region and oil-rent lookup
files, applies the standard small-country / oil-economy sample filters, and
derives the per-country-year analysis variables used by every other module:

    y      income per capita   (chosen GDP measure / pop)
    ky     capital-output ratio (rnna / rgdpna)
    h      human capital index  (hc)
    alpha  capital share        (1 - labsh)

Countries are filtered on their full observed history: a country is dropped
if its population never exceeds the threshold in any year, or if oil rents
exceed the cap in any year.  Rows whose labor share falls outside (0, 1)
stay in the panel for income statistics but are flagged (``alpha_ok`` is
False) and barred from decomposition samples.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from .errors import DataError

log = logging.getLogger(__name__)

SSA_REGION = "Sub-Saharan Africa"
UNKNOWN_REGION = "region-unknown"

#: canonical variable -> default column name in the raw file
PWT_SCHEMA = {
    "countrycode": "countrycode",
    "year": "year",
    "rgdpo": "rgdpo",
    "rgdpe": "rgdpe",
    "rgdpna": "rgdpna",
    "rnna": "rnna",
    "pop": "pop",
    "hc": "hc",
    "labsh": "labsh",
}

YEAR_RANGE = (1950, 2025)
_POSITIVE_COLS = ("rgdpo", "rgdpe", "rgdpna", "rnna", "pop")

#: variables usable in `required=` filters -> panel column holding them
PANEL_VARS = {"y": "y", "ky": "ky", "h": "h", "alpha": "alpha"}


def _read_csv(path) -> pd.DataFrame:
    try:
        return pd.read_csv(path)
    except FileNotFoundError as exc:
        raise DataError(f"cannot read {path}: file not found") from exc
    except Exception as exc:  # malformed CSV, permissions, ...
        raise DataError(f"cannot read {path}: {exc}") from exc


def load_pwt(path, schema: dict[str, str] | None = None) -> pd.DataFrame:
    """Load a PWT-style CSV into one observation row per (country, year).

    Parameters
    ----------
    path : str or Path
        CSV file with a header row.
    schema : dict, optional
        Overrides for the default column names, keyed by canonical name
        (e.g. ``{"countrycode": "iso3"}``).

    Returns
    -------
    DataFrame with columns country, year, rgdpo, rgdpe, rgdpna, rnna, pop,
    hc, labsh.  Blank cells become NaN.
    """
    colmap = dict(PWT_SCHEMA)
    if schema:
        unknown = set(schema) - set(colmap)
        if unknown:
            raise ValueError(f"unknown schema keys: {sorted(unknown)}")
        colmap.update(schema)

    raw = _read_csv(path)
    missing = [v for v in colmap.values() if v not in raw.columns]
    if missing:
        raise DataError(f"{path}: missing required columns {missing}")

    df = raw[[colmap[k] for k in colmap]].copy()
    df.columns = list(colmap)
    df = df.rename(columns={"countrycode": "country"})

    if df["year"].isna().any():
        raise DataError(f"{path}: blank year cell in row "
                        f"{int(df.index[df['year'].isna()][0]) + 2}")
    df["year"] = df["year"].astype(int)
    df["country"] = df["country"].astype(str)

    for col in ("rgdpo", "rgdpe", "rgdpna", "rnna", "pop", "hc", "labsh"):
        df[col] = pd.to_numeric(df[col])

    dup = df.duplicated(["country", "year"])
    if dup.any():
        c, y = df.loc[dup, ["country", "year"]].iloc[0]
        raise DataError(f"{path}: duplicate observation for ({c}, {y})")

    lo, hi = YEAR_RANGE
    bad_year = (df["year"] < lo) | (df["year"] > hi)
    if bad_year.any():
        raise DataError(f"{path}: year outside [{lo}, {hi}]: "
                        f"{int(df.loc[bad_year, 'year'].iloc[0])}")

    for col in _POSITIVE_COLS:
        bad = df[col].notna() & (df[col] <= 0)
        if bad.any():
            c, y = df.loc[bad, ["country", "year"]].iloc[0]
            raise DataError(f"{path}: nonpositive {col} for ({c}, {y})")

    bad_labsh = df["labsh"].notna() & ~df["labsh"].between(0, 1, inclusive="neither")
    if bad_labsh.any():
        log.warning("%s: %d rows with labsh outside (0, 1); kept but flagged",
                    path, int(bad_labsh.sum()))

    log.info("%s: %d observation rows, %d countries",
             path, len(df), df["country"].nunique())
    return df


@dataclass(frozen=True)
class RegionMap:
    """Country code -> World Bank region (and optional income group)."""

    regions: dict[str, str]
    income_groups: dict[str, str] = field(default_factory=dict)
    _warned: set = field(default_factory=set, repr=False, compare=False)

    def region(self, code: str) -> str:
        try:
            return self.regions[code]
        except KeyError:
            if code not in self._warned:
                log.warning("no region mapping for %s; using %r", code, UNKNOWN_REGION)
                self._warned.add(code)
            return UNKNOWN_REGION


def load_region_map(path) -> RegionMap:
    """Load a countrycode,region CSV (optional income_group column)."""
    df = _read_csv(path)
    for col in ("countrycode", "region"):
        if col not in df.columns:
            raise DataError(f"{path}: missing required column {col!r}")

    conflicts = (df.groupby("countrycode")["region"].nunique() > 1)
    if conflicts.any():
        code = conflicts.idxmax()
        raise DataError(f"{path}: conflicting regions for {code}")

    dedup = df.drop_duplicates("countrycode")
    regions = dict(zip(dedup["countrycode"].astype(str), dedup["region"].astype(str)))
    groups = {}
    if "income_group" in df.columns:
        groups = dict(zip(dedup["countrycode"].astype(str),
                          dedup["income_group"].astype(str)))
    return RegionMap(regions=regions, income_groups=groups)


@dataclass(frozen=True)
class OilRentSeries:
    """(country, year) -> oil rents as percent of GDP; missing counts as 0."""

    data: pd.DataFrame  # columns country, year, pct
    _warned: set = field(default_factory=set, repr=False, compare=False)

    def max_pct(self, code: str) -> float:
        """Largest observed oil-rent share for a country, 0 if never observed."""
        sub = self.data.loc[self.data["country"] == code, "pct"]
        if sub.empty:
            if code not in self._warned:
                log.warning("no oil-rent data for %s; treating as 0", code)
                self._warned.add(code)
            return 0.0
        return float(sub.max())

    @classmethod
    def empty(cls) -> "OilRentSeries":
        return cls(data=pd.DataFrame(columns=["country", "year", "pct"]))


def load_oil_rents(path) -> OilRentSeries:
    """Load a countrycode,year,oil_rents_pct_gdp CSV."""
    df = _read_csv(path)
    for col in ("countrycode", "year", "oil_rents_pct_gdp"):
        if col not in df.columns:
            raise DataError(f"{path}: missing required column {col!r}")
    out = pd.DataFrame({
        "country": df["countrycode"].astype(str),
        "year": df["year"].astype(int),
        "pct": pd.to_numeric(df["oil_rents_pct_gdp"]),
    })
    out = out.dropna(subset=["pct"])
    if (out["pct"] < 0).any():
        code = out.loc[out["pct"] < 0, "country"].iloc[0]
        raise DataError(f"{path}: negative oil-rent share for {code}")
    return OilRentSeries(data=out)


@dataclass(frozen=True)
class FilterConfig:
    """Sample filters and variable choices applied by build_panel."""

    min_population_millions: float = 0.2
    max_oil_rent_pct: float = 50.0
    variance_exclusions: tuple[str, ...] = ("VEN",)
    income_measure: str = "rgdpo"  # output-side; "rgdpe" for expenditure-side

    def __post_init__(self):
        if self.min_population_millions <= 0 or self.max_oil_rent_pct <= 0:
            raise ValueError("filter thresholds must be positive")
        if self.income_measure not in ("rgdpo", "rgdpe"):
            raise ValueError("income_measure must be 'rgdpo' or 'rgdpe'")
        object.__setattr__(self, "variance_exclusions",
                           tuple(self.variance_exclusions))


@dataclass(frozen=True)
class Panel:
    """Filtered country-year panel of derived analysis variables.

    ``data`` columns: country, year, y, ky, h, alpha, alpha_ok, region, pop.
    ``exclusions``: one row per dropped country (countrycode, reason).
    """

    data: pd.DataFrame
    exclusions: pd.DataFrame
    config: FilterConfig = field(default_factory=FilterConfig)

    @property
    def countries(self) -> list[str]:
        return sorted(self.data["country"].unique())

    @property
    def years(self) -> list[int]:
        return sorted(self.data["year"].unique())

    def restrict(self, exclude_ssa: bool = False,
                 drop: tuple[str, ...] = (),
                 countries: set[str] | None = None) -> "Panel":
        """Sub-panel by region / explicit country list; exclusions carry over."""
        d = self.data
        if exclude_ssa:
            d = d[d["region"] != SSA_REGION]
        if drop:
            d = d[~d["country"].isin(drop)]
        if countries is not None:
            d = d[d["country"].isin(countries)]
        return replace(self, data=d.reset_index(drop=True))

    def year_slice(self, year: int, required=("y",)) -> pd.DataFrame:
        """Rows for one year having all `required` variables present."""
        d = self.data[self.data["year"] == year]
        for var in required:
            if var not in PANEL_VARS:
                raise ValueError(f"unknown panel variable {var!r}")
            col = PANEL_VARS[var]
            d = d[d[col].notna()]
            if var == "alpha":
                d = d[d["alpha_ok"]]
        return d

    def decomposition_slice(self, year: int) -> pd.DataFrame:
        """Rows eligible for decomposition: y, ky, h present and 0 < alpha < 1."""
        return self.year_slice(year, required=("y", "ky", "h", "alpha"))


def build_panel(obs: pd.DataFrame, regions: RegionMap, oil: OilRentSeries,
                cfg: FilterConfig | None = None) -> Panel:
    """Apply sample filters and derive the analysis variables.

    A country is excluded when its population never exceeds
    ``cfg.min_population_millions`` in any observed year
    ("small-population"), or when oil rents exceed ``cfg.max_oil_rent_pct``
    percent of GDP in any year ("oil-rents").  Returns the derived panel
    with an exclusion ledger.
    """
    cfg = cfg or FilterConfig()
    excluded: list[tuple[str, str]] = []
    keep: list[str] = []
    for code, grp in obs.groupby("country"):
        max_pop = grp["pop"].max()
        if pd.notna(max_pop) and max_pop <= cfg.min_population_millions:
            excluded.append((code, "small-population"))
            continue
        if oil.max_pct(code) > cfg.max_oil_rent_pct:
            excluded.append((code, "oil-rents"))
            continue
        keep.append(code)

    retained = obs[obs["country"].isin(keep)].copy()
    if retained.empty:
        raise DataError("no countries retained after sample filters")

    income = retained[cfg.income_measure]
    data = pd.DataFrame({
        "country": retained["country"],
        "year": retained["year"],
        "y": income / retained["pop"],
        "ky": retained["rnna"] / retained["rgdpna"],
        "h": retained["hc"],
        "alpha": 1.0 - retained["labsh"],
        "pop": retained["pop"],
    })
    data["alpha_ok"] = data["alpha"].notna() & (data["alpha"] > 0) & (data["alpha"] < 1)
    n_bad_alpha = int((data["alpha"].notna() & ~data["alpha_ok"]).sum())
    if n_bad_alpha:
        log.warning("%d rows with capital share outside (0, 1); "
                    "kept for income statistics, barred from decompositions",
                    n_bad_alpha)

    bad_h = data["h"].notna() & (data["h"] < 1)
    if bad_h.any():
        log.warning("%d rows with human capital index below 1 set to missing",
                    int(bad_h.sum()))
        data.loc[bad_h, "h"] = np.nan

    data["region"] = [regions.region(c) for c in data["country"]]
    data = data.sort_values(["country", "year"]).reset_index(drop=True)

    ledger = pd.DataFrame(sorted(excluded), columns=["countrycode", "reason"])
    log.info("panel: %d countries retained, %d excluded, %d rows",
             len(keep), len(ledger), len(data))
    return Panel(data=data, exclusions=ledger, config=cfg)


@dataclass(frozen=True)
class AnalysisSample:
    """Balanced two-year sample: one row per country with endpoint values.

    ``data`` has columns country, <var>0, <var>1 for each required variable;
    income endpoints are always present as y0, y1.
    """

    t0: int
    t1: int
    data: pd.DataFrame

    @property
    def n(self) -> int:
        return len(self.data)

    @property
    def s(self) -> int:
        return self.t1 - self.t0

    @property
    def y0(self) -> np.ndarray:
        return self.data["y0"].to_numpy(float)

    @property
    def y1(self) -> np.ndarray:
        return self.data["y1"].to_numpy(float)


def analysis_sample(panel: Panel, t0: int, t1: int, required=("y",),
                    exclude_ssa: bool = False) -> AnalysisSample:
    """Countries with all `required` variables present in both t0 and t1."""
    if t0 >= t1:
        raise ValueError(f"t0 must precede t1, got {t0} >= {t1}")
    if "y" not in required:
        required = ("y", *required)

    sub = panel.restrict(exclude_ssa=exclude_ssa)
    d0 = sub.year_slice(t0, required).set_index("country")
    d1 = sub.year_slice(t1, required).set_index("country")
    common = d0.index.intersection(d1.index).sort_values()
    if len(common) == 0:
        raise DataError(f"no countries with {list(required)} in both {t0} and {t1}")

    cols = {}
    for var in required:
        col = PANEL_VARS[var]
        cols[f"{var}0"] = d0.loc[common, col].to_numpy(float)
        cols[f"{var}1"] = d1.loc[common, col].to_numpy(float)
    data = pd.DataFrame({"country": common.to_numpy(), **cols})
    log.info("analysis sample %d-%d: N = %d%s", t0, t1, len(data),
             " (outside SSA)" if exclude_ssa else "")
    return AnalysisSample(t0=t0, t1=t1, data=data)


def balanced_panel(panel: Panel, years, required=("y", "ky", "h", "alpha"),
                   exclude_ssa: bool = False) -> Panel:
    """Restrict to countries with all `required` variables in every given year.

    This pins one country set across a multi-year exercise so that per-year
    statistics are comparable and period changes telescope over a common
    sample.
    """
    sub = panel.restrict(exclude_ssa=exclude_ssa)
    keep: set[str] | None = None
    for year in years:
        present = set(sub.year_slice(year, required)["country"])
        keep = present if keep is None else keep & present
    if not keep:
        raise DataError(f"no countries with {list(required)} in all of {list(years)}")
    return sub.restrict(countries=keep)
