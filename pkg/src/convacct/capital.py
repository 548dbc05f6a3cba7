"""Capital stock construction and the schooling-based human capital index.

Capital stocks follow the perpetual inventory recursion

    K_t = I_t + (1 - delta) * K_{t-1},

seeded either with a caller-supplied stock or with the steady-state value
K_0 = I_0 / (delta + g) for investment growing at rate g.  The
undepreciated-share diagnostic reports how much of a later stock is
carry-over from the base year: (1 - delta)^k * K_base / K_{base+k}.

The human capital index maps average years of schooling s through
hc = exp(phi(s)) with piecewise-linear returns: 0.134 per year for the
first four years, 0.101 for the next four, 0.068 beyond eight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class InvestmentSeries:
    """Contiguous annual investment values starting at base_year."""

    base_year: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.size == 0:
            raise ValueError("investment series is empty")
        if np.any(self.values < 0):
            raise ValueError("negative investment entry")


@dataclass(frozen=True)
class CapitalPath:
    """Annual capital stocks from base_year onward, with depreciation rate."""

    base_year: int
    values: np.ndarray
    delta: float

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def at(self, year: int) -> float:
        k = year - self.base_year
        if not 0 <= k < len(self.values):
            raise ValueError(f"year {year} outside path "
                             f"{self.base_year}..{self.base_year + len(self.values) - 1}")
        return float(self.values[k])


def pim(inv: InvestmentSeries, delta: float, k0: float) -> CapitalPath:
    """Accumulate investment into a capital path, starting from ``k0``.

    The base-year stock is ``k0``; each later year adds that year's
    investment to the depreciated previous stock.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if k0 <= 0:
        raise ValueError("initial stock must be positive")
    k = np.empty(len(inv.values))
    k[0] = k0
    for t in range(1, len(inv.values)):
        k[t] = inv.values[t] + (1.0 - delta) * k[t - 1]
    return CapitalPath(base_year=inv.base_year, values=k, delta=delta)


def k0_steady_state(i0: float, delta: float, g: float) -> float:
    """Initial stock putting investment at its steady-state share: i0/(delta+g)."""
    if delta + g <= 0:
        raise ValueError("delta + g must be positive")
    return i0 / (delta + g)


def undepreciated_share(path: CapitalPath, from_year: int, to_year: int) -> float:
    """Fraction of the ``to_year`` stock that is carry-over from ``from_year``."""
    if from_year > to_year:
        raise ValueError(f"from_year {from_year} after to_year {to_year}")
    k_from = path.at(from_year)
    k_to = path.at(to_year)
    return (1.0 - path.delta) ** (to_year - from_year) * k_from / k_to


def mincer_hc(s):
    """Human capital index from average years of schooling.

    Accepts a scalar or array; returns the same shape.  Piecewise-linear
    log returns with kinks at 4 and 8 years keep the index continuous and
    concave in s.
    """
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0):
        raise ValueError("years of schooling must be non-negative")
    phi = (0.134 * np.minimum(s_arr, 4.0)
           + 0.101 * np.clip(s_arr - 4.0, 0.0, 4.0)
           + 0.068 * np.maximum(s_arr - 8.0, 0.0))
    hc = np.exp(phi)
    return float(hc) if np.isscalar(s) else hc
