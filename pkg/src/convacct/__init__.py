"""Cross-country income convergence and growth-accounting toolkit."""

from .capital import (CapitalPath, InvestmentSeries, k0_steady_state,
                      mincer_hc, pim, undepreciated_share)
from .convergence import (BetaEstimate, DispersionRow, beta_convergence,
                          dispersion_table, half_life, percentile_value)
from .decomposition import (DecompositionChange, GapDecomposition,
                            PercentileProfile, VarianceDecomposition,
                            default_grid, gap_change, gap_decomposition,
                            percentile_profile, regional_capital_output,
                            variance_decomposition)
from .errors import DataError, NumericalError
from .ingest import (AnalysisSample, FilterConfig, OilRentSeries, Panel,
                     RegionMap, analysis_sample, balanced_panel, build_panel,
                     load_oil_rents, load_pwt, load_region_map)
from .oracle import (SyntheticSpec, brute_force_beta, linear_rank, pwt_frame,
                     synth_growth_sample, synth_panel, true_gap_decomposition)

__version__ = "0.1.0"

__all__ = [
    "AnalysisSample", "BetaEstimate", "CapitalPath", "DataError",
    "DecompositionChange", "DispersionRow", "FilterConfig",
    "GapDecomposition", "InvestmentSeries", "NumericalError",
    "OilRentSeries", "Panel", "PercentileProfile", "RegionMap",
    "SyntheticSpec", "VarianceDecomposition", "analysis_sample",
    "balanced_panel", "beta_convergence", "brute_force_beta", "build_panel",
    "default_grid", "dispersion_table", "gap_change", "gap_decomposition",
    "half_life", "k0_steady_state", "linear_rank", "load_oil_rents",
    "load_pwt", "load_region_map", "mincer_hc", "percentile_profile",
    "percentile_value", "pim", "pwt_frame", "regional_capital_output",
    "synth_growth_sample", "synth_panel", "true_gap_decomposition",
    "undepreciated_share", "variance_decomposition",
]
