"""Shared fixtures: toy observation frames and real-data discovery.

The acceptance criteria that reproduce published magnitudes need a local
PWT 10.01 extract plus region and oil-rent files.  Point CONVACCT_DATA_DIR
at a directory holding pwt.csv, regions.csv and oil_rents.csv (or drop the
files into tests/data/); the data-dependent tests skip cleanly otherwise.
"""

import os
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from convacct.decomposition import PercentileProfile
from convacct.ingest import (FilterConfig, OilRentSeries, RegionMap, Panel,
                             build_panel, load_oil_rents, load_pwt,
                             load_region_map)
from convacct.rng import SplitMix64

OBS_COLUMNS = ["countrycode", "year", "rgdpo", "rgdpe", "rgdpna", "rnna",
               "pop", "hc", "labsh"]


def obs_frame(rows):
    """Observation DataFrame from partial dicts; unset fields become NaN."""
    filled = []
    for row in rows:
        base = dict.fromkeys(OBS_COLUMNS, np.nan)
        base.update(row)
        filled.append(base)
    df = pd.DataFrame(filled, columns=OBS_COLUMNS)
    df = df.rename(columns={"countrycode": "country"})
    df["year"] = df["year"].astype(int)
    return df


def simple_obs(code, years, y=1000.0, ky=2.0, h=1.5, labsh=0.6, pop=5.0,
               grow=0.0):
    """One country's observations with income growing at rate ``grow``."""
    rows = []
    for i, year in enumerate(years):
        yy = y * (1.0 + grow) ** i
        rows.append({
            "countrycode": code, "year": year,
            "rgdpo": yy * pop, "rgdpe": yy * pop,
            "rgdpna": yy * pop, "rnna": ky * yy * pop,
            "pop": pop, "hc": h, "labsh": labsh,
        })
    return rows


def toy_panel(rows, regions=None, oil=None, cfg=None):
    regions = regions or {}
    rmap = RegionMap(regions={c: regions.get(c, "Elsewhere")
                              for c in {r["countrycode"] for r in rows}})
    oil = oil if oil is not None else OilRentSeries.empty()
    return build_panel(obs_frame(rows), rmap, oil, cfg or FilterConfig())


@pytest.fixture
def region_map():
    return RegionMap(regions={"KEN": "Sub-Saharan Africa", "USA": "North America",
                              "IND": "South Asia", "VEN": "Latin America"})


def random_profile(seed, n_points=30, year=2000):
    """Arbitrary but valid profile: monotone income, alpha in (0, 1)."""
    rng = SplitMix64(seed)
    grid = np.unique(np.round(np.sort(rng.uniform_range(0, 100, n_points)), 6))
    m = len(grid)
    ln_y = np.cumsum(rng.uniforms(m) * 0.2)
    ln_ky = rng.uniform_range(-1.0, 1.5, m)
    ln_h = rng.uniform_range(0.0, 1.2, m)
    alpha = rng.uniform_range(0.05, 0.95, m)
    return PercentileProfile(year=year, grid=grid, ln_y=ln_y, ln_ky=ln_ky,
                             ln_h=ln_h, alpha=alpha, n=m)


# --------------------------------------------------------------------------
# real-data discovery

DATA_DIR = Path(os.environ.get("CONVACCT_DATA_DIR",
                               Path(__file__).parent / "data"))
DATA_FILES = {"pwt": DATA_DIR / "pwt.csv",
              "regions": DATA_DIR / "regions.csv",
              "oil": DATA_DIR / "oil_rents.csv"}

HAVE_REAL_DATA = all(p.exists() for p in DATA_FILES.values())

needs_real_data = pytest.mark.skipif(
    not HAVE_REAL_DATA,
    reason="PWT 10.01 extract + region + oil-rent files not found "
           "(set CONVACCT_DATA_DIR)")


@pytest.fixture(scope="session")
def real_panel() -> Panel:
    obs = load_pwt(DATA_FILES["pwt"])
    regions = load_region_map(DATA_FILES["regions"])
    oil = load_oil_rents(DATA_FILES["oil"])
    return build_panel(obs, regions, oil, FilterConfig())
