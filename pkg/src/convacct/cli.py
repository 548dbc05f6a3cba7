"""Command-line front end.

Subcommands: ingest, beta, sigma, decompose, vardecomp, regions,
capital-diagnostics, synth, report.  The ``report`` subcommand runs the
whole pipeline and writes every table as a separate CSV (plus rendered PNG
figures and a manifest with input hashes, the config hash, and row counts).

Option precedence: command-line flags override config-file keys, which
override defaults.  When data paths are not given, files named pwt.csv,
regions.csv and oil_rents.csv are looked up in $CONVACCT_DATA_DIR.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import traceback
from pathlib import Path

import numpy as np
import pandas as pd

from . import capital, figures, oracle
from .convergence import beta_convergence, dispersion_table, half_life
from .decomposition import (gap_change, regional_capital_output,
                            variance_decomposition)
from .errors import DataError, NumericalError
from .ingest import (FilterConfig, OilRentSeries, Panel, analysis_sample,
                     balanced_panel, build_panel, load_oil_rents, load_pwt,
                     load_region_map)

log = logging.getLogger(__name__)

ENV_DATA_DIR = "CONVACCT_DATA_DIR"
DEFAULT_FILES = {"pwt": "pwt.csv", "regions": "regions.csv",
                 "oil": "oil_rents.csv"}
FORMATS = ("csv", "json", "table", "text-table")  # text-table == table

USAGE_EXIT, DATA_EXIT, NUMERIC_EXIT = 2, 3, 4


# ---------------------------------------------------------------------------
# option resolution and output helpers

def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except FileNotFoundError as exc:
        raise DataError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise DataError(f"config file {path} must hold a JSON object")
    return cfg


def _resolve(args, cfg: dict, key: str, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    if key in cfg:
        return cfg[key]
    return default


def _data_path(args, cfg: dict, kind: str, required: bool = True) -> str | None:
    path = _resolve(args, cfg, kind)
    if path is None:
        data_dir = os.environ.get(ENV_DATA_DIR)
        if data_dir:
            candidate = Path(data_dir) / DEFAULT_FILES[kind]
            if candidate.exists():
                path = str(candidate)
    if path is None and required:
        raise DataError(f"no --{kind} file given and none found via "
                        f"${ENV_DATA_DIR}")
    return path


def _filter_config(args, cfg: dict) -> FilterConfig:
    exclusions = _resolve(args, cfg, "variance_exclusions", "VEN")
    if isinstance(exclusions, str):
        exclusions = tuple(x for x in exclusions.split(",") if x)
    return FilterConfig(
        min_population_millions=float(_resolve(args, cfg, "min_population_millions", 0.2)),
        max_oil_rent_pct=float(_resolve(args, cfg, "max_oil_rent_pct", 50.0)),
        variance_exclusions=tuple(exclusions),
        income_measure=_resolve(args, cfg, "income_measure", "rgdpo"),
    )


def _load_panel(args, cfg: dict) -> Panel:
    obs = load_pwt(_data_path(args, cfg, "pwt"))
    regions = load_region_map(_data_path(args, cfg, "regions"))
    oil_path = _data_path(args, cfg, "oil", required=False)
    if oil_path:
        oil = load_oil_rents(oil_path)
    else:
        log.warning("no oil-rents file; treating all oil rents as 0")
        oil = OilRentSeries.empty()
    return build_panel(obs, regions, oil, _filter_config(args, cfg))


def _parse_years(text: str) -> list[int]:
    try:
        years = [int(y) for y in text.split(",") if y]
    except ValueError as exc:
        raise ValueError(f"bad year list {text!r}") from exc
    if not years:
        raise ValueError("empty year list")
    return years


def _parse_pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise ValueError(f"bad percentile pair {text!r}; expected like 90:10") from exc
    if a == b:
        raise ValueError("percentile pair must name two distinct percentiles")
    return (min(a, b), max(a, b))


def _parse_alpha_mode(text: str) -> float | None:
    if text == "varying":
        return None
    if text.startswith("const:"):
        return float(text.split(":", 1)[1])
    raise ValueError(f"bad --alpha {text!r}; use 'varying' or 'const:<value>'")


def _format_table(df: pd.DataFrame) -> str:
    return df.to_string(index=False,
                        float_format=lambda v: f"{v:.6g}")


def emit(df: pd.DataFrame, fmt: str, out: str | None = None) -> None:
    """Print a result frame in the chosen format; optionally write a CSV."""
    if fmt == "csv":
        sys.stdout.write(df.to_csv(index=False))
    elif fmt == "json":
        print(json.dumps(df.to_dict(orient="records")))
    else:
        print(_format_table(df))
    if out:
        df.to_csv(out, index=False)
        log.info("wrote %s (%d rows)", out, len(df))


# ---------------------------------------------------------------------------
# subcommands

def cmd_ingest(args, cfg: dict) -> int:
    panel = _load_panel(args, cfg)
    out_dir = Path(_resolve(args, cfg, "out", "."))
    out_dir.mkdir(parents=True, exist_ok=True)
    panel.data.to_csv(out_dir / "panel.csv", index=False)
    panel.exclusions.to_csv(out_dir / "exclusions.csv", index=False)
    print(f"panel rows: {len(panel.data)}  countries: {len(panel.countries)}  "
          f"excluded: {len(panel.exclusions)}")
    print(f"wrote {out_dir / 'panel.csv'} and {out_dir / 'exclusions.csv'}")
    return 0


def _beta_row(panel: Panel, t0: int, t1: int, exclude_ssa: bool,
              robust: bool = True) -> dict:
    sample = analysis_sample(panel, t0, t1, required=("y",),
                             exclude_ssa=exclude_ssa)
    est = beta_convergence(sample, robust=robust)
    row = {
        "t0": t0, "t1": t1,
        "sample": "outside-ssa" if exclude_ssa else "all",
        "beta": est.beta, "se_beta": est.se_beta,
        "beta0": est.beta0, "se_beta0": est.se_beta0,
        "n": est.n, "ssr": est.ssr,
    }
    row["half_life_years"] = half_life(est.beta, est.s) if est.beta < 0 else np.nan
    return row


def cmd_beta(args, cfg: dict) -> int:
    panel = _load_panel(args, cfg)
    df = pd.DataFrame([_beta_row(panel, args.t0, args.t1, args.exclude_ssa,
                                 robust=not args.classical_se)])
    emit(df, _resolve(args, cfg, "format", "table"), args.out)
    return 0


def cmd_sigma(args, cfg: dict) -> int:
    panel = _load_panel(args, cfg)
    rows = dispersion_table(panel, _parse_years(args.years),
                            exclude_ssa=args.exclude_ssa,
                            variance_sensitive=args.variance_sensitive,
                            ddof=args.ddof)
    df = pd.DataFrame([vars(r) for r in rows])
    emit(df, _resolve(args, cfg, "format", "table"), args.out)
    return 0


def _period_changes(panel: Panel, years: list[int], p_lo: float, p_hi: float,
                    alpha_const: float | None, grid_step: float):
    """Gap-change per consecutive year pair, plus the overall span."""
    periods = list(zip(years[:-1], years[1:]))
    if len(years) > 2:
        periods.append((years[0], years[-1]))
    return [gap_change(panel, y1, y2, p_lo, p_hi,
                       alpha_const=alpha_const, grid_step=grid_step)
            for y1, y2 in periods]


def _changes_frame(changes) -> pd.DataFrame:
    return pd.DataFrame([{
        "year1": ch.year1, "year2": ch.year2, "alpha_mode": ch.end.alpha_mode,
        "delta_total": ch.delta_total, "delta_tfp": ch.delta_tfp,
        "delta_ky": ch.delta_ky, "delta_h": ch.delta_h,
        "gap_start": ch.start.total, "gap_end": ch.end.total,
    } for ch in changes])


def cmd_decompose(args, cfg: dict) -> int:
    years = _parse_years(args.years)
    if sorted(years) != years or len(set(years)) != len(years):
        raise ValueError("--years must be strictly increasing")
    if len(years) < 2:
        raise ValueError("need at least two years to decompose changes")
    p_lo, p_hi = _parse_pair(args.pair)
    alpha_const = _parse_alpha_mode(args.alpha)

    panel = _load_panel(args, cfg)
    panel = balanced_panel(panel, years, exclude_ssa=args.exclude_ssa)
    changes = _period_changes(panel, years, p_lo, p_hi, alpha_const,
                              args.grid_step)
    emit(_changes_frame(changes), _resolve(args, cfg, "format", "table"),
         args.out)
    return 0


def cmd_vardecomp(args, cfg: dict) -> int:
    years = _parse_years(args.years)
    panel = _load_panel(args, cfg)
    panel = balanced_panel(panel, years, exclude_ssa=args.exclude_ssa)
    rows = []
    for year in years:
        v = variance_decomposition(panel, year, alpha_const=args.alpha_const,
                                   variance_sensitive=args.variance_sensitive)
        rows.append(vars(v))
    emit(pd.DataFrame(rows), _resolve(args, cfg, "format", "table"), args.out)
    return 0


def cmd_regions(args, cfg: dict) -> int:
    years = _parse_years(args.years)
    panel = _load_panel(args, cfg)
    rows = []
    for year in years:
        for region, ky in sorted(regional_capital_output(panel, year).items()):
            rows.append({"year": year, "region": region, "ky": ky})
    emit(pd.DataFrame(rows), _resolve(args, cfg, "format", "table"), args.out)
    return 0


def cmd_capital_diagnostics(args, cfg: dict) -> int:
    df = pd.read_csv(args.invest)
    for col in ("countrycode", "year", "investment"):
        if col not in df.columns:
            raise DataError(f"{args.invest}: missing required column {col!r}")
    years = _parse_years(args.years)
    base = args.base

    rows = []
    for code, grp in df.groupby("countrycode"):
        grp = grp.sort_values("year")
        sub = grp[grp["year"] >= base]
        if sub.empty or int(sub["year"].iloc[0]) != base:
            log.warning("%s: no investment at base year %d; skipped", code, base)
            continue
        yr = sub["year"].to_numpy(int)
        if np.any(np.diff(yr) != 1):
            log.warning("%s: investment series has gaps after %d; skipped",
                        code, base)
            continue
        inv = capital.InvestmentSeries(base_year=base,
                                       values=sub["investment"].to_numpy(float))
        i0 = float(inv.values[0])
        if args.k0_growth is not None:
            g = args.k0_growth
        else:
            # average log growth of investment over the observed series
            pos = inv.values > 0
            if pos.sum() < 2:
                log.warning("%s: cannot infer investment growth; skipped", code)
                continue
            lv = np.log(inv.values[pos])
            g = float((lv[-1] - lv[0]) / max(len(lv) - 1, 1))
        if i0 <= 0 or args.delta + g <= 0:
            log.warning("%s: unusable steady-state seed (i0=%g, g=%g); skipped",
                        code, i0, g)
            continue
        path = capital.pim(inv, args.delta,
                           capital.k0_steady_state(i0, args.delta, g))
        row = {"country": code}
        for year in years:
            try:
                row[f"share_{year}"] = capital.undepreciated_share(path, base, year)
            except ValueError:
                row[f"share_{year}"] = np.nan
        rows.append(row)

    if not rows:
        raise DataError("no usable investment series")
    out = pd.DataFrame(rows).sort_values("country").reset_index(drop=True)
    mean_row = {"country": "MEAN"}
    for year in years:
        mean_row[f"share_{year}"] = out[f"share_{year}"].mean()
    out = pd.concat([out, pd.DataFrame([mean_row])], ignore_index=True)
    emit(out, _resolve(args, cfg, "format", "table"), args.out)
    return 0


def _rank_fn_from_json(spec: dict, base_year: int) -> oracle.RankFn:
    return oracle.linear_rank(float(spec.get("intercept", 0.0)),
                              float(spec.get("slope", 0.0)),
                              float(spec.get("trend", 0.0)),
                              base_year)


def _synth_from_json(spec: dict) -> pd.DataFrame:
    if "growth" in spec:
        gr = spec["growth"]
        sample = oracle.synth_growth_sample(
            beta0=float(gr["beta0"]), beta=float(gr["beta"]),
            s=int(gr["s"]), n=int(gr["n"]),
            sigma_eps=float(gr.get("sigma_eps", 0.0)),
            seed=int(spec.get("seed", 0)), t0=int(gr.get("t0", 2000)))
        frames = []
        for year, col in ((sample.t0, "y0"), (sample.t1, "y1")):
            frames.append(pd.DataFrame({
                "countrycode": sample.data["country"], "year": year,
                "rgdpo": sample.data[col], "rgdpe": sample.data[col],
                "rgdpna": np.nan, "rnna": np.nan, "pop": 1.0,
                "hc": np.nan, "labsh": np.nan,
            }))
        return pd.concat(frames, ignore_index=True)

    years = tuple(int(y) for y in spec.get("years", [2019]))
    alpha_spec = spec.get("alpha", 0.46)
    if isinstance(alpha_spec, dict):
        alpha = _rank_fn_from_json(alpha_spec, years[0])
    else:
        alpha = float(alpha_spec)
    synth = oracle.SyntheticSpec(
        n_countries=int(spec.get("n_countries", 101)),
        years=years,
        ln_a=_rank_fn_from_json(spec.get("ln_a", {"slope": 1.5}), years[0]),
        ln_ky=_rank_fn_from_json(spec.get("ln_ky", {"intercept": 0.3, "slope": 0.8}), years[0]),
        ln_h=_rank_fn_from_json(spec.get("ln_h", {"intercept": 0.1, "slope": 0.7}), years[0]),
        alpha=alpha,
        seed=int(spec.get("seed", 0)),
        ssa_every=int(spec.get("ssa_every", 0)),
    )
    panel, _ = oracle.synth_panel(synth)
    return oracle.pwt_frame(panel)


def cmd_synth(args, cfg: dict) -> int:
    try:
        with open(args.spec) as fh:
            spec = json.load(fh)
    except FileNotFoundError as exc:
        raise DataError(f"spec file not found: {args.spec}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"spec file {args.spec} is not valid JSON: {exc}") from exc

    frame = _synth_from_json(spec)
    frame.to_csv(args.out, index=False)
    print(f"wrote {args.out} ({len(frame)} rows)")

    if args.regions_out:
        codes = frame["countrycode"].drop_duplicates().tolist()
        ssa_every = int(spec.get("ssa_every", 0))
        regions = ["Sub-Saharan Africa" if ssa_every and i % ssa_every == 0
                   else "Synthetic" for i in range(len(codes))]
        pd.DataFrame({"countrycode": codes, "region": regions}).to_csv(
            args.regions_out, index=False)
        print(f"wrote {args.regions_out}")
    if args.oil_out:
        codes = frame["countrycode"].drop_duplicates().tolist()
        years = frame["year"].drop_duplicates().tolist()
        rows = [{"countrycode": c, "year": y, "oil_rents_pct_gdp": 0.0}
                for c in codes for y in years]
        pd.DataFrame(rows).to_csv(args.oil_out, index=False)
        print(f"wrote {args.oil_out}")
    return 0


# ---------------------------------------------------------------------------
# report

def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _csv_rows(path) -> int:
    with open(path) as fh:
        return max(sum(1 for _ in fh) - 1, 0)


def cmd_report(args, cfg: dict) -> int:
    out_dir = Path(_resolve(args, cfg, "out", "results"))
    out_dir.mkdir(parents=True, exist_ok=True)
    anchors = _parse_years(args.anchor_years)
    disp_years = _parse_years(args.dispersion_years)
    p_lo, p_hi = _parse_pair(args.pair)
    fcfg = _filter_config(args, cfg)

    inputs = {}
    for kind in ("pwt", "regions", "oil"):
        path = _data_path(args, cfg, kind, required=(kind != "oil"))
        if path:
            inputs[kind] = {"path": str(path), "sha256": _sha256(path)}

    panel = _load_panel(args, cfg)
    artifacts: list[Path] = []

    def write_csv(name: str, df: pd.DataFrame) -> None:
        path = out_dir / name
        df.to_csv(path, index=False)
        artifacts.append(path)
        log.info("wrote %s (%d rows)", path, len(df))

    write_csv("panel_exclusions.csv", panel.exclusions)

    # catch-up regressions for each period x sample
    periods = list(zip(anchors[:-1], anchors[1:]))
    beta_rows = [_beta_row(panel, t0, t1, ssa)
                 for t0, t1 in periods for ssa in (False, True)]
    write_csv("beta_regressions.csv", pd.DataFrame(beta_rows))

    # dispersion panels
    disp_frames = []
    for ssa, label in ((True, "outside-ssa"), (False, "all")):
        rows = dispersion_table(panel, disp_years, exclude_ssa=ssa)
        frame = pd.DataFrame([vars(r) for r in rows])
        frame.insert(0, "sample", label)
        disp_frames.append(frame)
    disp_df = pd.concat(disp_frames, ignore_index=True)
    write_csv("dispersion_measures.csv", disp_df)

    # gap decompositions (varying alpha, and the constant-share benchmark)
    decomp_outputs = []
    for name, ssa, alpha_const in (
            ("decomposition_nonssa", True, None),
            ("decomposition_full", False, None),
            ("decomposition_nonssa_constant_alpha", True, args.alpha_benchmark)):
        bal = balanced_panel(panel, anchors, exclude_ssa=ssa)
        changes = _period_changes(bal, anchors, p_lo, p_hi, alpha_const,
                                  args.grid_step)
        write_csv(f"{name}.csv", _changes_frame(changes))
        decomp_outputs.append((name, changes[:len(periods)]))

    # variance decompositions
    var_outputs = []
    for name, ssa in (("variance_decomposition_nonssa", True),
                      ("variance_decomposition_full", False)):
        bal = balanced_panel(panel, anchors, exclude_ssa=ssa)
        rows = [vars(variance_decomposition(bal, year,
                                            alpha_const=args.vardecomp_alpha,
                                            variance_sensitive=True))
                for year in anchors]
        df = pd.DataFrame(rows)
        write_csv(f"{name}.csv", df)
        var_outputs.append((name, df))

    # regional capital-output ratios for every panel year
    region_rows = []
    for year in panel.years:
        for region, ky in sorted(regional_capital_output(panel, year).items()):
            region_rows.append({"year": year, "region": region, "ky": ky})
    region_df = pd.DataFrame(region_rows)
    write_csv("regional_capital_output.csv", region_df)

    if not args.no_figures:
        for name, changes in decomp_outputs:
            figures.decomposition_bars(changes, name.replace("_", " "),
                                       out_dir / f"{name}.png")
            artifacts.append(out_dir / f"{name}.png")
        for name, df in var_outputs:
            rows = []
            for y1, y2 in periods:
                a = df[df["year"] == y1].iloc[0]
                b = df[df["year"] == y2].iloc[0]
                rows.append({"period": f"{y1}-{y2}",
                             "d_var_ln_y": b["var_ln_y"] - a["var_ln_y"],
                             "d_var_ln_a": b["var_ln_a"] - a["var_ln_a"],
                             "d_var_ln_ykh": b["var_ln_ykh"] - a["var_ln_ykh"],
                             "d_cov_term": b["cov_term"] - a["cov_term"]})
            figures.variance_bars(pd.DataFrame(rows), name.replace("_", " "),
                                  out_dir / f"{name}.png")
            artifacts.append(out_dir / f"{name}.png")
        figures.regional_lines(region_df, "capital-output ratio by region",
                               out_dir / "regional_capital_output.png")
        artifacts.append(out_dir / "regional_capital_output.png")
        figures.dispersion_lines(disp_df[disp_df["sample"] == "outside-ssa"],
                                 "income dispersion outside SSA",
                                 out_dir / "dispersion_nonssa.png")
        artifacts.append(out_dir / "dispersion_nonssa.png")

    config = {
        "anchor_years": anchors, "dispersion_years": disp_years,
        "pair": [p_lo, p_hi], "grid_step": args.grid_step,
        "alpha_benchmark": args.alpha_benchmark,
        "vardecomp_alpha": args.vardecomp_alpha,
        "min_population_millions": fcfg.min_population_millions,
        "max_oil_rent_pct": fcfg.max_oil_rent_pct,
        "variance_exclusions": list(fcfg.variance_exclusions),
        "income_measure": fcfg.income_measure,
    }
    manifest = {
        "inputs": inputs,
        "config": config,
        "config_hash": hashlib.sha256(
            json.dumps(config, sort_keys=True).encode()).hexdigest(),
        "artifacts": [
            {"file": p.name,
             **({"rows": _csv_rows(p), "sha256": _sha256(p)}
                if p.suffix == ".csv" else {})}
            for p in sorted(artifacts)],
    }
    with open(out_dir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"report complete: {len(artifacts)} artifact files + manifest "
          f"in {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# parser and dispatch

def _add_data_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pwt", help="PWT-style CSV extract")
    p.add_argument("--regions", help="countrycode,region CSV")
    p.add_argument("--oil", help="countrycode,year,oil_rents_pct_gdp CSV")
    p.add_argument("--config", help="JSON config file (flags override it)")
    p.add_argument("--min-pop", dest="min_population_millions", type=float,
                   help="exclude countries whose population never exceeds this")
    p.add_argument("--max-oil-rent", dest="max_oil_rent_pct", type=float,
                   help="exclude countries whose oil rents ever exceed this %%")
    p.add_argument("--income-measure", dest="income_measure",
                   choices=("rgdpo", "rgdpe"),
                   help="income concept (output-side or expenditure-side)")
    p.add_argument("--variance-exclusions", dest="variance_exclusions",
                   help="comma-separated outlier codes (default VEN)")


def _add_output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, help="stdout format")
    p.add_argument("--out", help="also write the result as CSV here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convacct",
        description="Cross-country income convergence and growth accounting")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build and save the filtered panel")
    _add_data_options(p)
    p.add_argument("--out", help="output directory (default .)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("beta", help="catch-up regression between two years")
    _add_data_options(p)
    _add_output_options(p)
    p.add_argument("--t0", type=int, required=True)
    p.add_argument("--t1", type=int, required=True)
    p.add_argument("--exclude-ssa", action="store_true")
    p.add_argument("--classical-se", action="store_true",
                   help="classical instead of robust standard errors")
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("sigma", help="income dispersion measures per year")
    _add_data_options(p)
    _add_output_options(p)
    p.add_argument("--years", required=True, help="e.g. 1980,1990,2000")
    p.add_argument("--exclude-ssa", action="store_true")
    p.add_argument("--variance-sensitive", action="store_true",
                   help="drop configured outliers from all measures")
    p.add_argument("--ddof", type=int, choices=(0, 1), default=0,
                   help="variance normalization (0: 1/N, 1: 1/(N-1))")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("decompose", help="percentile gap decomposition changes")
    _add_data_options(p)
    _add_output_options(p)
    p.add_argument("--pair", default="90:10", help="percentile pair, e.g. 90:10")
    p.add_argument("--years", required=True, help="e.g. 1980,2000,2019")
    p.add_argument("--alpha", default="varying",
                   help="'varying' or 'const:<value>'")
    p.add_argument("--exclude-ssa", action="store_true")
    p.add_argument("--grid-step", type=float, default=1.0)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("vardecomp", help="variance decomposition per year")
    _add_data_options(p)
    _add_output_options(p)
    p.add_argument("--years", required=True)
    p.add_argument("--alpha-const", type=float, default=0.46)
    p.add_argument("--variance-sensitive", action="store_true")
    p.add_argument("--exclude-ssa", action="store_true")
    p.set_defaults(func=cmd_vardecomp)

    p = sub.add_parser("regions", help="population-weighted capital-output "
                                       "ratio by region")
    _add_data_options(p)
    _add_output_options(p)
    p.add_argument("--years", required=True)
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("capital-diagnostics",
                       help="undepreciated-capital shares from investment data")
    _add_output_options(p)
    p.add_argument("--invest", required=True,
                   help="countrycode,year,investment CSV")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--base", type=int, default=1970)
    p.add_argument("--years", required=True)
    p.add_argument("--k0-growth", type=float, default=None,
                   help="fixed steady-state investment growth for the seed "
                        "(default: inferred per country)")
    p.set_defaults(func=cmd_capital_diagnostics)

    p = sub.add_parser("synth", help="emit a synthetic PWT-schema panel")
    p.add_argument("--spec", required=True, help="JSON generation spec")
    p.add_argument("--out", required=True, help="output panel CSV")
    p.add_argument("--regions-out", help="also write a region map CSV")
    p.add_argument("--oil-out", help="also write a zero oil-rents CSV")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("report", help="run the full pipeline into a directory")
    _add_data_options(p)
    p.add_argument("--out", help="output directory (default results/)")
    p.add_argument("--anchor-years", default="1980,2000,2019")
    p.add_argument("--dispersion-years", default="1980,1990,2000,2010,2019")
    p.add_argument("--pair", default="90:10")
    p.add_argument("--grid-step", type=float, default=1.0)
    p.add_argument("--alpha-benchmark", type=float, default=1.0 / 3.0,
                   help="constant capital share for the benchmark decomposition")
    p.add_argument("--vardecomp-alpha", type=float, default=0.46)
    p.add_argument("--no-figures", action="store_true",
                   help="skip PNG rendering")
    p.set_defaults(func=cmd_report)

    return parser


def _provenance(exc: BaseException) -> str:
    """Module of the deepest in-package frame that raised ``exc``."""
    module = "convacct"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        name = frame.f_globals.get("__name__", "")
        if name.startswith("convacct"):
            module = name
    return module


def run(argv) -> int:
    """Execute one subcommand; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help and usage errors
        return int(exc.code or 0)

    logging.basicConfig(level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _load_config_file(getattr(args, "config", None))
        return args.func(args, cfg)
    except ValueError as exc:
        print(f"usage error [{_provenance(exc)}]: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except DataError as exc:
        print(f"data error [{_provenance(exc)}]: {exc}", file=sys.stderr)
        return DATA_EXIT
    except NumericalError as exc:
        print(f"numerical failure [{_provenance(exc)}]: {exc}", file=sys.stderr)
        return NUMERIC_EXIT


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
