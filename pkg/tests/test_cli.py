"""Harness tests: CSV schemas, config handling, determinism."""

import numpy as np
import pytest

from hnmaxwell.cli import build_config, main
from hnmaxwell.monotonicity import index_k
from hnmaxwell.prabhakar import hn_kernel
from hnmaxwell.quadrature import cm2_weights


def read_csv(path):
    lines = path.read_text().splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    header = body[0].split(",")
    rows = [ln.split(",") for ln in body[1:]]
    return comments, header, rows


def test_weights_roundtrip(tmp_path):
    assert main([
        "weights", "--scheme", "cm2", "--alpha", "0.5", "--beta", "0.5",
        "--tau", "0.01", "--J", "50", "--out", str(tmp_path),
    ]) == 0
    comments, header, rows = read_csv(tmp_path / "weights.csv")
    assert header == ["j", "w_j"]
    assert len(comments) == 1 and comments[0].startswith("# config:")
    got = np.array([float(r[1]) for r in rows])
    assert np.array_equal(got, cm2_weights(0.5, 0.5, 0.01, 50).weights)


def test_reruns_byte_identical(tmp_path):
    # '#' comment lines carry the resolved config (incl. the out dir) and are
    # excluded from the comparison; everything else must match byte for byte
    def data_bytes(path):
        return b"\n".join(
            ln for ln in path.read_bytes().splitlines() if not ln.startswith(b"#")
        )

    args = [
        "weights", "--scheme", "bdf2", "--alpha", "0.7", "--beta", "0.3",
        "--tau", "0.02", "--J", "40",
    ]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    first = data_bytes(tmp_path / "a" / "weights.csv")
    assert first == data_bytes(tmp_path / "b" / "weights.csv")
    # and a literal rerun into the same directory is fully identical
    main(args + ["--out", str(tmp_path / "a")])
    assert data_bytes(tmp_path / "a" / "weights.csv") == first


def test_cm_check_single_point(tmp_path):
    assert main([
        "cm-check", "--scheme", "cm2", "--alpha", "0.5", "--beta", "0.5",
        "--tau", "0.01", "--J", "200", "--kmax", "2", "--out", str(tmp_path),
        "--threads", "1",
    ]) == 0
    _, header, rows = read_csv(tmp_path / "cm_check.csv")
    assert header == ["alpha", "beta", "k", "index", "rho_index"]
    assert len(rows) == 3
    w = cm2_weights(0.5, 0.5, 0.01, 200).weights
    for row in rows:
        k = int(row[2])
        assert float(row[3]) == pytest.approx(index_k(w, k, 200, compensated=True), abs=1e-16)
        assert row[4] == "1"


def test_kernel_csv(tmp_path):
    assert main([
        "kernel", "--alpha", "0.4", "--beta", "0.9", "--tmin", "0.1",
        "--tmax", "2.0", "--points", "7", "--out", str(tmp_path),
    ]) == 0
    _, header, rows = read_csv(tmp_path / "kernel.csv")
    assert header == ["t", "omega"]
    assert len(rows) == 7
    for row in rows:
        assert float(row[1]) == pytest.approx(hn_kernel(0.4, 0.9, float(row[0])), rel=1e-15)


def test_convergence_csv(tmp_path):
    assert main([
        "convergence", "--alpha", "0.5", "--beta", "0.5", "--tau", "0.25,0.125",
        "--nx", "8", "--ny", "8", "--T", "1.0", "--mode", "vs_reference",
        "--tau-ref", "0.015625", "--out", str(tmp_path),
    ]) == 0
    _, header, rows = read_csv(tmp_path / "convergence.csv")
    assert header == ["tau", "err_E", "rate_E", "err_H", "rate_H", "err_P", "rate_P"]
    assert len(rows) == 2
    assert rows[0][2] == ""  # no rate on the first row
    assert float(rows[1][2]) > 0.0


def test_energy_csvs(tmp_path):
    assert main([
        "energy", "--alpha", "0.3,0.7", "--beta", "0.5", "--tau", "0.1",
        "--nx", "8", "--ny", "8", "--T", "1.0", "--out", str(tmp_path),
    ]) == 0
    for alpha in ("0.3", "0.7"):
        path = tmp_path / f"energy_alpha{alpha}_beta0.5.csv"
        _, header, rows = read_csv(path)
        assert header == ["n", "t", "total", "term_E", "term_H", "term_hist"]
        totals = np.array([float(r[2]) for r in rows])
        assert totals.size == 11
        assert (np.diff(totals) <= 1e-10 * totals[0]).all()


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# comment line\n"
        "scheme = cm2\n"
        "alpha = 0.5\n"
        "beta = 0.5\n"
        "tau = 0.02\n"
        "J = 30\n"
    )
    out = tmp_path / "out"
    assert main([
        "weights", "--config", str(cfg), "--tau", "0.04", "--out", str(out)
    ]) == 0
    comments, _, rows = read_csv(out / "weights.csv")
    assert "tau=0.04" in comments[0]  # flag wins over file
    got = np.array([float(r[1]) for r in rows])
    assert np.array_equal(got, cm2_weights(0.5, 0.5, 0.04, 30).weights)


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("frobnicate = 7\n")
    assert main(["weights", "--config", str(cfg)]) == 2


def test_missing_required_option():
    assert main(["weights", "--beta", "0.5", "--tau", "0.01"]) == 2


def test_non_integer_step_count():
    assert main([
        "energy", "--alpha", "0.5", "--beta", "0.5", "--tau", "0.3",
        "--nx", "4", "--ny", "4", "--T", "1.0",
    ]) == 2


def test_env_var_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("HNMX_OUT", str(tmp_path))
    monkeypatch.chdir(tmp_path)
    assert main([
        "weights", "--scheme", "bdf1", "--alpha", "1.0", "--beta", "1.0",
        "--tau", "1.0", "--J", "3",
    ]) == 0
    assert (tmp_path / "weights.csv").exists()


def test_build_config_grid_defaults():
    cfg = build_config(["cm-check", "--tau", "0.01"])
    assert cfg.experiment == "cm-check"
    assert cfg.alphas == [] and cfg.betas == []  # grid filled from grid_step at run time
    assert cfg.grid_step == 0.05
    assert cfg.j_max == 1000 and cfg.k_max == 3


def test_check_mode_kernel(tmp_path):
    assert main([
        "kernel", "--alpha", "1.0", "--beta", "1.0", "--points", "5",
        "--out", str(tmp_path), "--check",
    ]) == 0
