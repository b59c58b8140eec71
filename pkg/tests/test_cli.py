"""CLI contract: subcommand output shape, exit codes, byte determinism."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest
import scipy.io

from quadmom.chebnumbers import cheb_number_closed
from quadmom.cli import main
from quadmom.params import accel_params
from quadmom.polynomials import Method


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


# ---------------------------------------------------------------------------
# curves


def test_curves_shape_and_boundary_comment(capsys):
    code, out, err = run_cli(
        capsys, "curves", "--rho", "0.8", "--k", "3", "--grid", "11"
    )
    assert code == 0 and err == ""
    lines = out.splitlines()
    assert lines[0] == "mu,method,k,rho,value"
    comments = [ln for ln in lines if ln.startswith("#")]
    assert len(comments) == 1
    assert float(comments[0].rsplit(" ", 1)[1]) == pytest.approx(0.8, abs=1e-15)
    # boundary comment sits between the mu=0.8 block and the mu=0.9 block
    idx = lines.index(comments[0])
    assert float(lines[idx - 1].split(",")[0]) == pytest.approx(0.8, abs=1e-15)
    assert float(lines[idx + 1].split(",")[0]) == pytest.approx(0.9, abs=1e-15)
    header, rows = parse_csv(out)
    assert len(rows) == 11 * 4  # grid points x methods


def test_curves_k0_all_ones(capsys):
    code, out, _ = run_cli(
        capsys, "curves", "--rho", "0.5", "--k", "0", "--grid", "5"
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert all(float(r[4]) == 1.0 for r in rows)


def test_curves_single_method_and_range(capsys):
    code, out, _ = run_cli(
        capsys,
        "curves", "--rho", "0.8", "--k", "2", "--method", "chebyshev",
        "--grid", "3", "--mu-range", "0:0.5",
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 3
    assert {r[1] for r in rows} == {"chebyshev"}
    assert [float(r[0]) for r in rows] == [0.0, 0.25, 0.5]
    # entire range below rho: the boundary comment is appended at the end
    assert out.splitlines()[-1].startswith("# boundary")


def test_curves_bad_mu_range_exits_2(capsys):
    code, out, err = run_cli(
        capsys, "curves", "--rho", "0.8", "--k", "2", "--mu-range", "0.9:0.1"
    )
    assert code == 2
    assert err.startswith("error:")


# ---------------------------------------------------------------------------
# run


@pytest.fixture()
def two_eig_matrix(tmp_path):
    scipy.io.mmwrite(str(tmp_path / "h"), np.diag([1.0, 0.2]))
    return str(tmp_path / "h.mtx")


def test_run_single_direction_matches_worst_case(capsys, tmp_path, two_eig_matrix):
    # companion chosen so w* excites only the lambda=0.2 direction: mu = 0.8
    yfile = tmp_path / "y.txt"
    yfile.write_text("0.0\n0.2\n")
    code, out, _ = run_cli(
        capsys,
        "run", "--method", "chebyshev", "--rho", "auto", "--k", "4",
        "--matrix", two_eig_matrix, "--y", str(yfile),
    )
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["k", "excess_risk", "worst_component_mu", "max_component_error"]
    assert len(rows) == 5
    risks = [float(r[1]) for r in rows]
    assert risks[0] == pytest.approx(0.1, rel=1e-14)  # 0.5 * 0.2 * 1
    params = accel_params(0.8)
    for k in range(1, 5):
        ch = cheb_number_closed(Method.CHEBYSHEV, k, params).value
        assert risks[k] / risks[0] == pytest.approx(ch**2, rel=1e-12)
    # only one active direction, and it has mu = 0.8
    assert all(float(r[2]) == pytest.approx(0.8, abs=1e-15) for r in rows)
    assert all(float(r[3]) <= 1e-10 for r in rows)


def test_run_auto_rho_and_synthetic_default(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--method", "power", "--rho", "auto", "--k", "10"
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 11
    risks = [float(r[1]) for r in rows]
    # gradient descent on a quadratic: monotone decrease
    assert all(b <= a for a, b in zip(risks, risks[1:]))
    assert all(float(r[3]) <= 1e-8 for r in rows)


def test_run_misspecified_rho_still_tracks_prediction(capsys, two_eig_matrix):
    # rho=0.5 while the true edge is mu=0.8: predictions must still be exact
    code, out, _ = run_cli(
        capsys,
        "run", "--method", "sor", "--rho", "0.5", "--k", "30",
        "--matrix", two_eig_matrix,
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert all(float(r[3]) <= 1e-8 for r in rows)
    risks = [float(r[1]) for r in rows]
    # convergent but slower than the well-specified rate; still decays
    assert risks[-1] < risks[0] * 1e-2


def test_run_negative_k_exits_2(capsys):
    code, _, err = run_cli(capsys, "run", "--method", "power", "--rho", "0.5", "--k", "-1")
    assert code == 2 and err.startswith("error:")


# ---------------------------------------------------------------------------
# verify


def test_verify_single_suite_json(capsys, tmp_path):
    out_path = tmp_path / "rep.json"
    code, out, _ = run_cli(
        capsys, "verify", "oracle", "--grid", "31", "--k", "20", "--out", str(out_path)
    )
    assert code == 0
    assert out == "oracle: pass\n"
    payload = json.loads(out_path.read_text())
    assert isinstance(payload, list) and len(payload) == 1
    rep = payload[0]
    assert list(rep) == ["theorem_id", "passed", "max_violation", "grids", "witnesses"]
    assert rep["theorem_id"] == "oracle"
    assert rep["passed"] is True
    assert rep["witnesses"] == []


def test_verify_all_downscaled(capsys):
    code, out, _ = run_cli(capsys, "verify", "all", "--grid", "300", "--k", "12")
    assert code == 0
    payload = json.loads(out)
    assert len(payload) == 11
    assert all(rep["passed"] for rep in payload)


def test_verify_flag_alias_and_conflict(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "thm4", "--k", "12")
    assert code == 0
    payload = json.loads(out)
    assert len(payload) == 1 and payload[0]["theorem_id"] == "thm4"
    code, _, err = run_cli(capsys, "verify", "thm3", "--suite", "thm4", "--k", "12")
    assert code == 2 and "conflicting" in err


def test_verify_unknown_suite_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "thm99"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# chebnum


def test_chebnum_frozen_rows(capsys):
    code, out, _ = run_cli(capsys, "chebnum", "--rho", "0.8", "--k", "1:2")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["rho", "k", "method", "cheb_number", "asymptotic_1st_order"]
    by_key = {(int(r[1]), r[2]): (float(r[3]), float(r[4])) for r in rows}
    # every method collapses to rho at k=1
    for m in ("power", "sor", "nesterov", "chebyshev"):
        assert by_key[(1, m)][0] == pytest.approx(0.8, abs=4e-16)
    assert by_key[(2, "chebyshev")][0] == pytest.approx(8.0 / 17.0, rel=1e-15)
    assert by_key[(2, "sor")][0] == pytest.approx(0.55, rel=1e-13)
    assert by_key[(2, "nesterov")][0] == pytest.approx(0.5788854381999831, rel=1e-13)
    assert by_key[(2, "power")][0] == pytest.approx(0.64, rel=1e-15)
    # eps = 0.2 is outside the expansion's domain: the column is nan
    assert all(math.isnan(v[1]) for v in by_key.values())


def test_chebnum_asymptotic_column_inside_domain(capsys):
    code, out, _ = run_cli(
        capsys, "chebnum", "--rho", "0.99", "--k", "3", "--method", "chebyshev"
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert float(rows[0][4]) == pytest.approx(0.91, abs=1e-12)
    assert float(rows[0][3]) == pytest.approx(0.9156355572331787, rel=1e-12)


def test_chebnum_bad_ranges_exit_2(capsys):
    for argv in (
        ["chebnum", "--rho", "0.8", "--k", "5:2"],
        ["chebnum", "--rho", "0.8", "--k", "x"],
        ["chebnum", "--rho", "", "--k", "2"],
        ["chebnum", "--rho", "0.8", "--k", "0"],
        ["chebnum", "--rho", "1.0", "--k", "2"],
    ):
        code, _, err = run_cli(capsys, *argv)
        assert code == 2, argv
        assert err.startswith("error:"), argv


# ---------------------------------------------------------------------------
# shared plumbing


def test_threads_zero_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["curves", "--rho", "0.8", "--k", "2", "--threads", "0"])
    assert exc.value.code == 2


def test_out_files_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        code = main(
            ["curves", "--rho", "0.85", "--k", "6", "--grid", "513", "--out", str(p)]
        )
        assert code == 0
    capsys.readouterr()
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    assert b"\r" not in a  # LF endings only
    assert b"-0," not in a and not a.endswith(b"-0")  # negative zero folded


def test_chebnum_out_duplicates_stdout(tmp_path, capsys):
    out_path = tmp_path / "t.csv"
    code, out, _ = run_cli(
        capsys, "chebnum", "--rho", "0.5", "--k", "2", "--out", str(out_path)
    )
    assert code == 0
    assert out_path.read_text() == out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "quadmom", "chebnum", "--rho", "0.8", "--k", "2",
         "--method", "power"],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "rho,k,method,cheb_number,asymptotic_1st_order"
    assert "0.64" in proc.stdout
