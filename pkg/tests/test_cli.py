"""Harness behaviour: config handling, outputs, determinism, exit codes."""

import json
import os

import pytest

from capillarity import cli


def run_cli(argv):
    return cli.main(argv)


def read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    return header, rows


def test_coexist_ok(tmp_path):
    out = str(tmp_path)
    assert run_cli(["coexist", "--T-list", "0.7", "0.9", "--out", out]) == 0
    header, rows = read_csv(tmp_path / "coexist.csv")
    assert header == ["T", "rho_v", "rho_l", "P_sat", "mu_sat",
                      "resid_P", "resid_mu", "status"]
    assert len(rows) == 2 and all(r[-1] == "ok" for r in rows)
    # round-trip exact numeric formatting
    assert float(rows[1][1]) == pytest.approx(0.42574163772405627, rel=1e-16)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["status"] == "ok"
    assert "coexist.csv" in manifest["files"]
    assert manifest["version"]


def test_coexist_supercritical_row(tmp_path):
    out = str(tmp_path)
    assert run_cli(["coexist", "--T-list", "0.9", "1.2", "--out", out]) == 1
    _, rows = read_csv(tmp_path / "coexist.csv")
    assert rows[0][-1] == "ok" and rows[1][-1] == "failed"
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["status"] == "failed"


def test_planar_report(tmp_path):
    out = str(tmp_path)
    assert run_cli(["planar", "--T", "0.9", "--out", out]) == 0
    report = json.loads((tmp_path / "planar_report.json").read_text())
    assert report["rel_discrepancy"] < 1e-6
    assert report["sigma_integral"] > 0.0
    header, rows = read_csv(tmp_path / "planar_profile.csv")
    assert header == ["x", "rho"] and len(rows) > 100


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "planar", "T": 0.8, "lam": 2.0}))
    out = str(tmp_path / "o")
    assert run_cli(["planar", "--config", str(cfg), "--T", "0.9",
                    "--out", out]) == 0
    report = json.loads((tmp_path / "o" / "planar_report.json").read_text())
    assert report["T"] == 0.9  # flag wins
    assert report["lam"] == 2.0  # config survives


def test_command_only_in_config(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "coexist", "T": [0.85]}))
    out = str(tmp_path / "o")
    parser_args = ["--config", str(cfg), "--out", out]
    # argparse subcommand omitted entirely: resolve from the config document
    args = cli.build_parser().parse_args([])
    args.config = str(cfg)
    args.out = out
    command, cfg_d, outdir, fmt, threads = cli.resolve_config(args)
    assert command == "coexist" and cfg_d["T"] == [0.85]


def test_command_mismatch_is_config_error(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "planar"}))
    assert run_cli(["coexist", "--config", str(cfg),
                    "--out", str(tmp_path)]) == 2


def test_malformed_config(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{not json")
    assert run_cli(["planar", "--config", str(cfg),
                    "--out", str(tmp_path)]) == 2


def test_invalid_flag_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run_cli(["coexist", "--format", "xml", "--out", str(tmp_path)])
    assert exc.value.code == 2


def test_env_var_outdir(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.ENV_OUTDIR, str(tmp_path / "envout"))
    assert run_cli(["coexist", "--T", "0.8"]) == 0
    assert (tmp_path / "envout" / "coexist.csv").exists()


def test_determinism_byte_identical(tmp_path):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    for out in (a, b):
        assert run_cli(["planar", "--T", "0.88", "--n", "300",
                        "--out", out]) == 0
    for name in ("planar_profile.csv", "planar_report.json"):
        assert (tmp_path / "a" / name).read_bytes() == (
            tmp_path / "b" / name
        ).read_bytes()


def test_json_table_format(tmp_path):
    out = str(tmp_path)
    assert run_cli(["coexist", "--T", "0.9", "--format", "json",
                    "--out", out]) == 0
    rows = json.loads((tmp_path / "coexist.json").read_text())
    assert rows[0]["rho_l"] == pytest.approx(1.6572702119983223, rel=1e-15)


def test_sharp_outputs(tmp_path):
    out = str(tmp_path)
    assert run_cli(["sharp", "--T", "0.9", "--out", out]) == 0
    calib = json.loads((tmp_path / "sharp_calibration.json").read_text())
    assert calib["mu"] > 0.0
    assert calib["sigma_roundtrip"] == pytest.approx(calib["sigma"], rel=1e-14)
    header, rows = read_csv(tmp_path / "sharp_convergence.csv")
    assert header[0] == "epsilon"
    # planar phi == 1: the pairing column is constant across eps
    pairings = {r[1] for r in rows}
    assert len(pairings) == 1


def test_distribution_orders(tmp_path):
    out = str(tmp_path)
    assert run_cli(["distribution", "--T", "0.9", "--geometry", "spherical",
                    "--center", "20", "--epsilons", "0.2", "0.1", "0.05",
                    "--out", out]) == 0
    _, rows = read_csv(tmp_path / "distribution.csv")
    orders = [float(r[4]) for r in rows[1:]]
    assert all(o > 1.9 for o in orders)


def test_droplet_command(tmp_path):
    out = str(tmp_path)
    assert run_cli(["droplet", "--T", "0.9", "--radius-over-thickness", "10",
                    "--out", out]) == 0
    report = json.loads((tmp_path / "droplet_report.json").read_text())
    assert report["H_s"] > 0.0
    assert report["delta_P"] == pytest.approx(
        report["P_in"] - report["P_out"], rel=1e-12
    )
    assert report["far_field_mismatch"] < 1e-9


def test_laplace_degenerate_single_radius(tmp_path):
    out = str(tmp_path)
    assert run_cli(["laplace", "--T", "0.9", "--radii-over-thickness", "10",
                    "--out", out]) == 1
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert "FitDegeneracyError" in manifest["error"]


def test_laplace_radii_must_increase(tmp_path):
    assert run_cli(["laplace", "--T", "0.9",
                    "--radii-over-thickness", "20", "10",
                    "--out", str(tmp_path)]) == 2
