import json

import numpy as np
import pandas as pd
import pytest

from convacct.cli import run
from convacct.ingest import build_panel, load_oil_rents, load_pwt, load_region_map

SPEC = {
    "n_countries": 90,
    "years": [1980, 1990, 2000, 2010, 2019],
    "seed": 7,
    "ssa_every": 4,
    "ln_a": {"intercept": 6.0, "slope": 1.2, "trend": 0.01},
    "ln_ky": {"intercept": 0.3, "slope": 1.4, "trend": 0.005},
    "ln_h": {"intercept": 0.05, "slope": 0.8, "trend": 0.002},
    "alpha": {"intercept": 0.3, "slope": 0.2},
}


@pytest.fixture(scope="module")
def data_files(tmp_path_factory):
    """Synthetic PWT-schema panel plus region and oil files, via the CLI."""
    root = tmp_path_factory.mktemp("clidata")
    spec_path = root / "spec.json"
    spec_path.write_text(json.dumps(SPEC))
    status = run(["synth", "--spec", str(spec_path),
                  "--out", str(root / "pwt.csv"),
                  "--regions-out", str(root / "regions.csv"),
                  "--oil-out", str(root / "oil.csv")])
    assert status == 0
    return {"pwt": root / "pwt.csv", "regions": root / "regions.csv",
            "oil": root / "oil.csv", "root": root}


def data_args(files):
    return ["--pwt", str(files["pwt"]), "--regions", str(files["regions"]),
            "--oil", str(files["oil"])]


class TestSynthRoundTrip:
    def test_ingest_reads_synth_output(self, data_files):
        obs = load_pwt(data_files["pwt"])
        regions = load_region_map(data_files["regions"])
        oil = load_oil_rents(data_files["oil"])
        panel = build_panel(obs, regions, oil)
        assert len(panel.countries) == SPEC["n_countries"]

    def test_derived_values_survive_the_csv_hop(self, data_files):
        obs = load_pwt(data_files["pwt"])
        regions = load_region_map(data_files["regions"])
        oil = load_oil_rents(data_files["oil"])
        panel = build_panel(obs, regions, oil)
        got = panel.data.sort_values(["country", "year"]).reset_index(drop=True)
        ref = pd.read_csv(data_files["pwt"]) \
            .sort_values(["countrycode", "year"]).reset_index(drop=True)
        assert np.allclose(got["y"], ref["rgdpo"] / ref["pop"], rtol=1e-12)
        assert np.allclose(got["ky"], ref["rnna"] / ref["rgdpna"], rtol=1e-12)
        assert np.allclose(got["alpha"], 1 - ref["labsh"], atol=1e-12)


class TestExitCodes:
    def test_usage_error_missing_required_flag(self, data_files):
        assert run(["beta"] + data_args(data_files)) == 2

    def test_unknown_flag(self):
        assert run(["beta", "--nonsense"]) == 2

    def test_missing_data_file(self, tmp_path):
        status = run(["beta", "--pwt", str(tmp_path / "absent.csv"),
                      "--regions", str(tmp_path / "absent2.csv"),
                      "--t0", "2000", "--t1", "2019"])
        assert status == 3

    def test_numerical_failure(self, tmp_path):
        # identical initial incomes leave the catch-up rate unidentified
        rows = ["countrycode,year,rgdpo,rgdpe,rgdpna,rnna,pop,hc,labsh"]
        for code in ("AAA", "BBB", "CCC"):
            rows.append(f"{code},2000,100,100,100,200,1,1.5,0.6")
        rows.append("AAA,2019,150,150,150,300,1,1.5,0.6")
        rows.append("BBB,2019,120,120,120,240,1,1.5,0.6")
        rows.append("CCC,2019,180,180,180,360,1,1.5,0.6")
        (tmp_path / "pwt.csv").write_text("\n".join(rows) + "\n")
        (tmp_path / "regions.csv").write_text(
            "countrycode,region\nAAA,X\nBBB,X\nCCC,X\n")
        status = run(["beta", "--pwt", str(tmp_path / "pwt.csv"),
                      "--regions", str(tmp_path / "regions.csv"),
                      "--t0", "2000", "--t1", "2019"])
        assert status == 4

    def test_bad_year_list_is_usage_error(self, data_files):
        assert run(["sigma", "--years", "x,y"] + data_args(data_files)) == 2


class TestSubcommands:
    def test_beta_json_output(self, data_files, capsys):
        status = run(["beta", "--t0", "2000", "--t1", "2019",
                      "--format", "json"] + data_args(data_files))
        assert status == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload) == 1
        row = payload[0]
        assert row["n"] == SPEC["n_countries"]
        assert {"beta", "se_beta", "beta0"} <= set(row)

    def test_sigma_csv_output(self, data_files, capsys):
        status = run(["sigma", "--years", "1980,2019", "--format", "csv"]
                     + data_args(data_files))
        assert status == 0
        out = capsys.readouterr().out
        header = out.splitlines()[0].split(",")
        assert {"year", "p90_p10", "var_log", "income_ratio"} <= set(header)
        assert len(out.splitlines()) == 3

    def test_decompose_periods(self, data_files, capsys):
        status = run(["decompose", "--pair", "90:10",
                      "--years", "1980,2000,2019", "--format", "csv"]
                     + data_args(data_files))
        assert status == 0
        df = pd.read_csv(pd.io.common.StringIO(capsys.readouterr().out))
        assert list(df["year1"]) == [1980, 2000, 1980]
        assert list(df["year2"]) == [2000, 2019, 2019]
        # telescoping over the common balanced sample
        for col in ("delta_total", "delta_tfp", "delta_ky", "delta_h"):
            assert abs(df[col][0] + df[col][1] - df[col][2]) < 1e-12

    def test_decompose_constant_alpha(self, data_files, capsys):
        status = run(["decompose", "--years", "1980,2019",
                      "--alpha", "const:0.3333", "--format", "csv"]
                     + data_args(data_files))
        assert status == 0
        df = pd.read_csv(pd.io.common.StringIO(capsys.readouterr().out))
        assert df["alpha_mode"].iloc[0] == "constant(0.3333)"

    def test_vardecomp_identity(self, data_files, capsys):
        status = run(["vardecomp", "--years", "1980,2019",
                      "--alpha-const", "0.46", "--format", "csv"]
                     + data_args(data_files))
        assert status == 0
        df = pd.read_csv(pd.io.common.StringIO(capsys.readouterr().out))
        gap = df["var_ln_y"] - (df["var_ln_a"] + df["var_ln_ykh"] + df["cov_term"])
        assert np.all(np.abs(gap) < 1e-10)

    def test_regions_output(self, data_files, capsys):
        status = run(["regions", "--years", "2019", "--format", "csv"]
                     + data_args(data_files))
        assert status == 0
        df = pd.read_csv(pd.io.common.StringIO(capsys.readouterr().out))
        assert set(df["region"]) == {"Sub-Saharan Africa", "Synthetic"}

    def test_capital_diagnostics(self, tmp_path, capsys):
        rows = ["countrycode,year,investment"]
        for year in range(1970, 2001):
            rows.append(f"AAA,{year},{5.0}")  # constant investment
        (tmp_path / "invest.csv").write_text("\n".join(rows) + "\n")
        status = run(["capital-diagnostics", "--invest",
                      str(tmp_path / "invest.csv"), "--delta", "0.05",
                      "--base", "1970", "--years", "1980,2000",
                      "--k0-growth", "0.0", "--format", "csv"])
        assert status == 0
        df = pd.read_csv(pd.io.common.StringIO(capsys.readouterr().out))
        # constant investment with k0 = I/delta sits at the steady state,
        # so the carry-over share is the pure decay factor
        row = df[df["country"] == "AAA"].iloc[0]
        assert abs(row["share_1980"] - 0.95**10) < 1e-9
        assert abs(row["share_2000"] - 0.95**30) < 1e-9
        assert df["country"].iloc[-1] == "MEAN"

    def test_growth_mode_synth(self, tmp_path, capsys):
        spec = {"seed": 3,
                "growth": {"beta0": 0.02, "beta": -0.015, "s": 19,
                           "n": 50, "sigma_eps": 0.0, "t0": 2000}}
        (tmp_path / "spec.json").write_text(json.dumps(spec))
        status = run(["synth", "--spec", str(tmp_path / "spec.json"),
                      "--out", str(tmp_path / "panel.csv"),
                      "--regions-out", str(tmp_path / "regions.csv")])
        assert status == 0
        status = run(["beta", "--pwt", str(tmp_path / "panel.csv"),
                      "--regions", str(tmp_path / "regions.csv"),
                      "--t0", "2000", "--t1", "2019", "--format", "json"])
        assert status == 0
        row = json.loads(capsys.readouterr().out.splitlines()[-1])[0]
        assert abs(row["beta"] - (-0.015)) < 1e-6


@pytest.fixture(scope="module")
def report_dir(data_files):
    out = data_files["root"] / "results"
    status = run(["report", "--out", str(out)] + data_args(data_files))
    assert status == 0
    return out


class TestReport:
    def test_artifact_inventory(self, report_dir):
        csvs = sorted(p.name for p in report_dir.glob("*.csv"))
        assert len(csvs) >= 8
        assert "beta_regressions.csv" in csvs
        assert "dispersion_measures.csv" in csvs
        assert (report_dir / "manifest.json").exists()
        assert len(list(report_dir.glob("*.png"))) >= 4

    def test_manifest_contents(self, report_dir):
        manifest = json.loads((report_dir / "manifest.json").read_text())
        assert {"inputs", "config", "config_hash", "artifacts"} <= set(manifest)
        assert len(manifest["config_hash"]) == 64
        for entry in manifest["artifacts"]:
            assert (report_dir / entry["file"]).exists()
            if entry["file"].endswith(".csv"):
                assert entry["rows"] == len(pd.read_csv(report_dir / entry["file"]))

    def test_outputs_roundtrip_through_pandas(self, report_dir):
        for path in report_dir.glob("*.csv"):
            df = pd.read_csv(path)
            assert df.columns.size > 0

    def test_rerun_is_byte_identical(self, data_files, report_dir):
        out2 = data_files["root"] / "results_rerun"
        status = run(["report", "--out", str(out2)] + data_args(data_files))
        assert status == 0
        for path in sorted(report_dir.glob("*.csv")):
            assert (out2 / path.name).read_bytes() == path.read_bytes()
        assert (out2 / "manifest.json").read_bytes() \
            == (report_dir / "manifest.json").read_bytes()

    def test_decomposition_telescopes_in_report(self, report_dir):
        df = pd.read_csv(report_dir / "decomposition_nonssa.csv")
        for col in ("delta_total", "delta_tfp", "delta_ky", "delta_h"):
            assert abs(df[col][0] + df[col][1] - df[col][2]) < 1e-12


class TestConfigFile:
    def test_flags_override_config(self, data_files, tmp_path, capsys):
        cfg = {"pwt": str(data_files["pwt"]),
               "regions": str(data_files["regions"]),
               "oil": str(data_files["oil"]),
               "format": "json"}
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(cfg))
        status = run(["beta", "--config", str(cfg_path),
                      "--t0", "2000", "--t1", "2019"])
        assert status == 0
        json.loads(capsys.readouterr().out)  # format taken from config

    def test_env_data_dir(self, data_files, tmp_path, monkeypatch, capsys):
        env_dir = tmp_path / "datadir"
        env_dir.mkdir()
        for kind, name in (("pwt", "pwt.csv"), ("regions", "regions.csv"),
                           ("oil", "oil_rents.csv")):
            (env_dir / name).write_bytes(data_files[
                "oil" if kind == "oil" else kind].read_bytes())
        monkeypatch.setenv("CONVACCT_DATA_DIR", str(env_dir))
        assert run(["beta", "--t0", "2000", "--t1", "2019"]) == 0
