"""End-to-end checks of the command-line interface.

Every test drives main(argv) in-process; one test covers the installed
console script. The artifact contracts pinned here (CSV headers,
sidecar fields, byte-stable reruns) are what downstream consumers rely
on, so changing them is an interface break.
"""

from __future__ import annotations

import json
import subprocess

import numpy as np

from ptspectra import __version__
from ptspectra.cli import _fmt, main


def run_cli(*argv) -> int:
    return main(list(argv))


def test_spectrum_stdout_json(capsys):
    rc = run_cli(
        "spectrum", "--model", "zn", "--N", "3", "--J", "0.2",
        "--hR", "0.25", "--hI", "1.25",
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["region"] == "II"
    assert doc["dim"] == 3
    mags = [abs(complex(re, im)) for re, im in doc["eigenvalues"]]
    assert mags == sorted(mags, reverse=True)
    assert doc["pt_residual"] < 1e-12


def test_classify_negative_field_region(capsys):
    rc = run_cli(
        "classify", "--model", "zn", "--N", "3", "--J", "0.2",
        "--hR", "-0.5", "--hI", "0.875",
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["region"] == "III"
    assert len(doc["dominant"]) == 2


def test_spectrum_out_file_with_sidecar(tmp_path):
    out = tmp_path / "spec.json"
    rc = run_cli(
        "spectrum", "--model", "chiral_potts", "--N", "4", "--J", "0.5",
        "--delta", "0.3", "--out", str(out),
    )
    assert rc == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    # positive entries: the dominant eigenvalue cannot be a pair member
    assert doc["region"] in {"Ia", "Ib", "II"}
    meta = json.loads((tmp_path / "spec.json.meta.json").read_text())
    assert meta["version"] == __version__
    assert meta["subcommand"] == "spectrum"
    assert meta["parameters"]["delta"] == 0.3
    assert "timestamp" not in json.dumps(meta).lower()


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(
        json.dumps({"model": "zn", "N": 3, "J": 0.2, "h_R": -0.45, "h_I": 0.5})
    )
    rc = run_cli("classify", "--config", str(cfg))
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["region"] == "Ia"
    rc = run_cli("classify", "--config", str(cfg), "--hR", "0.25", "--hI", "1.25")
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["region"] == "II"


def test_unknown_config_key_exits_two(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(
        json.dumps(
            {"model": "zn", "N": 3, "J": 0.2, "h_R": 0.0, "h_I": 0.0, "banana": 1}
        )
    )
    rc = run_cli("classify", "--config", str(cfg))
    assert rc == 2
    assert "banana" in capsys.readouterr().err


def test_missing_parameter_exits_two(capsys):
    rc = run_cli("spectrum", "--model", "zn", "--N", "3", "--J", "0.2",
                 "--hR", "0.1")
    assert rc == 2
    assert "h_I" in capsys.readouterr().err


def test_range_rejected_outside_scan(capsys):
    rc = run_cli(
        "spectrum", "--model", "zn", "--N", "3", "--J", "0.2",
        "--hR", "0:1:5", "--hI", "0.5",
    )
    assert rc == 2
    assert "range" in capsys.readouterr().err


def test_refusal_exits_one(capsys):
    # hermitize must refuse outside region I
    rc = run_cli(
        "hermitize", "--model", "zn", "--N", "3", "--J", "0.2",
        "--hR", "0.25", "--hI", "1.25",
    )
    assert rc == 1
    assert "BrokenSymmetryError" in capsys.readouterr().err


def test_correlator_csv_and_sidecar(tmp_path):
    out = tmp_path / "corr.csv"
    rc = run_cli(
        "correlator", "--model", "zn", "--N", "3", "--J", "0.2",
        "--hR", "-0.45", "--hI", "0.5", "--L", "16", "--rmax", "8",
        "--connected", "--label", "A", "--out", str(out),
    )
    assert rc == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "r,G,method"
    assert len(lines) == 10  # header + r = 0..8
    first = lines[1].split(",")
    assert int(first[0]) == 0
    assert math_finite(first[1])
    assert first[2] == "direct_trace"
    meta = json.loads((tmp_path / "corr.csv.meta.json").read_text())
    assert meta["kind"] == "correlator"
    assert meta["parameters"]["op1"] == "w"
    assert meta["parameters"]["op2"] == "w_dagger"
    assert meta["parameters"]["connected"] is True
    assert meta["parameters"]["label"] == "A"


def math_finite(text: str) -> bool:
    value = float(text)
    return value == value and abs(value) != float("inf")


def test_scan_csv_schema_and_rerun_bytes(tmp_path):
    out = tmp_path / "scan.csv"
    argv = (
        "scan", "--model", "zn", "--N", "3", "--J", "0.2",
        "--hR", "-0.6:-0.3:2", "--hI", "0.5:0.6:2", "--out", str(out),
    )
    assert run_cli(*argv) == 0
    first = out.read_bytes()
    meta_first = (tmp_path / "scan.csv.meta.json").read_bytes()
    lines = first.decode("utf-8").splitlines()
    assert lines[0] == (
        "param1,param2,region,re_lambda0,im_lambda0,re_lambda1,im_lambda1"
    )
    assert len(lines) == 5
    assert {ln.split(",")[2] for ln in lines[1:]} <= {"Ia", "Ib", "II", "III"}
    # identical invocation, identical bytes (CSV and sidecar)
    assert run_cli(*argv) == 0
    assert out.read_bytes() == first
    assert (tmp_path / "scan.csv.meta.json").read_bytes() == meta_first


def test_scan_records_axis_sliver_note(tmp_path):
    out = tmp_path / "sliver.csv"
    rc = run_cli(
        "scan", "--model", "zn", "--N", "3", "--J", "0.2",
        "--hR", "-0.05:0.0:2", "--hI", "1.25:1.3:2", "--out", str(out),
    )
    assert rc == 0
    meta = json.loads((tmp_path / "sliver.csv.meta.json").read_text())
    assert meta["failures"] == 0
    assert meta["axes"]["param1"]["name"] == "h_R"
    assert len(meta["notes"]) == 1
    assert "h_R = 0" in meta["notes"][0]


def test_threads_do_not_change_bytes(tmp_path):
    base = tmp_path / "t1.csv"
    alt = tmp_path / "t2.csv"
    common = (
        "scan", "--model", "zn", "--N", "3", "--J", "0.3",
        "--hR", "-1:0:3", "--hI", "0.2:1.2:3",
    )
    assert run_cli(*common, "--threads", "1", "--out", str(base)) == 0
    assert run_cli(*common, "--threads", "3", "--out", str(alt)) == 0
    assert base.read_bytes() == alt.read_bytes()


def test_env_thread_cap(tmp_path, monkeypatch):
    monkeypatch.setenv("PTSPECTRA_THREADS", "2")
    out = tmp_path / "env.csv"
    rc = run_cli(
        "scan", "--model", "annni", "--K1", "-1:1:3", "--K2", "-1:0:2",
        "--out", str(out),
    )
    assert rc == 0
    assert len(out.read_text().splitlines()) == 7


def test_zeros_csv_and_stdout(tmp_path, capsys):
    out = tmp_path / "zeros.csv"
    argv = (
        "zeros", "--model", "zn", "--N", "3", "--J", "0.2",
        "--hR", "-0.5", "--hI", "0.7:1.0", "--L", "8",
    )
    rc = run_cli(*argv, "--out", str(out))
    assert rc == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "kind,p,param,gap"
    kinds = [ln.split(",")[0] for ln in lines[1:]]
    assert kinds.count("exact") == 2
    assert kinds.count("predicted") >= 2
    for ln in lines[1:]:
        row = ln.split(",")
        if row[0] == "exact":
            assert 0.7 <= float(row[2]) <= 1.0
            assert float(row[3]) < 1e-6
    rc = run_cli(*argv)
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["zeros"]) == 2
    assert doc["note"] is None or isinstance(doc["note"], str)


def test_gauge_spectrum_json(capsys):
    rc = run_cli(
        "gauge-spectrum", "--group", "su3", "--coupling-scale", "1.0",
        "--h", "0.0", "--cutoff", "2",
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    res = [re for re, _ in doc["eigenvalues"]]
    assert res == sorted(res)
    assert abs(res[0]) < 1e-12
    assert doc["truncation_boundary"]


def test_trajectory_csv_and_sidecar(tmp_path):
    out = tmp_path / "traj.csv"
    rc = run_cli(
        "trajectory", "--group", "u1", "--coupling-scale", "1.0",
        "--h", "0.4", "--cutoff", "3", "--beta-mu-grid", "0:1:3",
        "--levels", "3", "--out", str(out),
    )
    assert rc == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "beta_mu,k,re_E,im_E"
    assert len(lines) == 1 + 3 * 3
    meta = json.loads((tmp_path / "traj.csv.meta.json").read_text())
    assert meta["kind"] == "trajectory"
    assert meta["cutoff_used"] >= 3
    assert meta["drift"] <= 1e-6
    assert meta["basis_size"] >= 7


def test_oracle_zn_agreement(capsys):
    rc = run_cli(
        "oracle", "--model", "zn", "--N", "3", "--J", "0.2",
        "--hR", "-0.45", "--hI", "0.5", "--L", "6",
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["config_count"] == 3**6
    assert doc["rel_deviation"] < 1e-10


def test_oracle_annni_routes(capsys):
    rc = run_cli(
        "oracle", "--model", "annni", "--K1", "0.3", "--K2", "-0.4", "--L", "6",
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["spin_vs_bonds_rel"] < 1e-10
    assert doc["spin_vs_trace_rel"] < 1e-10
    assert doc["spin_vs_t4_rel"] < 1e-10


def test_hermitize_report(capsys):
    rc = run_cli(
        "hermitize", "--model", "zn", "--N", "3", "--J", "0.2",
        "--hR", "-0.45", "--hI", "0.5",
    )
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["hermiticity_defect"] < 1e-10
    assert doc["isospectral_rel_dev"] < 1e-8


def test_realbasis_report(capsys):
    rc = run_cli("realbasis", "--model", "annni", "--K1", "0.5", "--K2", "-0.2")
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["max_imag_entry"] < 1e-9
    assert doc["spectrum_rel_dev"] < 1e-9


def test_fmt_round_trips_float64():
    rng = np.random.default_rng(7)
    for _ in range(200):
        x = float(rng.standard_normal() * 10.0 ** rng.integers(-8, 8))
        assert float(_fmt(x)) == x


def test_console_script_version():
    res = subprocess.run(
        ["ptspectra", "--version"], capture_output=True, text=True
    )
    assert res.returncode == 0
    assert res.stdout.strip() == __version__
