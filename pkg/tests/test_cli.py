"""End-to-end command line tests, run in-process via main(argv)."""

import csv
import json
import math

import pytest

from ringwalk.cli import main

EX_RING = "F2[x,y]/(x^2, y^2)"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -------------------------------------------------------------------------
# spectrum
# -------------------------------------------------------------------------


def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--ring", EX_RING, "--divisors", "R, x*y", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["ring"] == "F2[x,y]/(x^2,y^2)"  # canonical form drops the space
    assert [i["generator"] for i in data["divisors"]["ideals"]] == ["x*y", "1"]
    assert data["degree"] == 9
    assert data["components"] == 1
    got = {e["value"]: e["multiplicity"] for e in data["spectrum"]["eigenvalues"]}
    assert got == {9: 1, 1: 6, -1: 8, -7: 1}


def test_spectrum_table(capsys):
    code, out, _ = run(capsys, "spectrum", "--ring", EX_RING, "--divisors", "R, x*y")
    assert code == 0
    assert "char poly" in out
    assert "(x9)" not in out  # multiplicities rendered as (x1), (x6), ...
    assert "(x1)" in out and "(x6)" in out and "(x8)" in out
    assert "degree 9" in out


def test_spectrum_edges_csv(capsys, tmp_path):
    path = tmp_path / "edges.csv"
    code, out, err = run(
        capsys, "spectrum", "--ring", "Z8", "--divisors", "R", "--json",
        "--edges-csv", str(path),
    )
    assert code == 0
    assert "wrote" in err
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["a", "b"]
    assert len(rows) == 1 + 8 * 4 // 2


# -------------------------------------------------------------------------
# pst
# -------------------------------------------------------------------------


def test_pst_positive_json(capsys):
    code, out, _ = run(capsys, "pst", "--ring", EX_RING, "--divisors", "R, x*y")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "pst"
    assert data["target"] == "x*y"
    assert data["minimal_time"] == {"num": 1, "den": 4, "of": "2*pi"}
    assert abs(data["minimal_time_decimal"] - math.pi / 2) < 1e-12
    assert data["period"] == {"num": 1, "den": 2, "of": "2*pi"}
    assert data["source"] == "congruence"


def test_pst_negative_json(capsys):
    code, out, _ = run(capsys, "pst", "--ring", EX_RING, "--divisors", "R, x, x*y")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "no_pst"
    assert data["witness"]["kind"] == "equal_lambda_pair"
    assert {"r1", "r2"} <= set(data["witness"])


def test_pst_verify_flag(capsys):
    code, out, _ = run(
        capsys, "pst", "--ring", EX_RING, "--divisors", "R, x*y", "--verify"
    )
    data = json.loads(out)
    assert data["oracle"]["verified"] is True
    assert data["oracle"]["modulus_at_minimal_time"] >= 1 - 1e-9

    code, out, _ = run(
        capsys, "pst", "--ring", EX_RING, "--divisors", "R, x, x*y", "--verify"
    )
    data = json.loads(out)
    assert data["oracle"]["verified"] is True
    assert data["oracle"]["max_sweep_modulus"] <= 1 - 1e-3


def test_pst_explicit_target(capsys):
    code, out, _ = run(
        capsys, "pst", "--ring", "Z8", "--divisors", "2", "--target", "4"
    )
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "pst" and data["target"] == "4"
    # an impossible explicit target yields a witnessed refusal, not an error
    code, out, _ = run(
        capsys, "pst", "--ring", "Z8", "--divisors", "R", "--target", "2"
    )
    assert code == 0
    assert json.loads(out)["verdict"] == "no_pst"


def test_pst_target_zero_is_an_input_error(capsys):
    code, _, err = run(capsys, "pst", "--ring", "Z8", "--divisors", "R", "--target", "0")
    assert code == 2
    assert "error" in err


def test_pst_sweep_csv(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    code, out, err = run(
        capsys, "pst", "--ring", "Z4", "--divisors", "R", "--sweep-csv", str(path)
    )
    assert code == 0
    assert "sweep rows" in err
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "re", "im", "modulus"]
    assert len(rows) == 2050  # 2048 steps + endpoint + header


# -------------------------------------------------------------------------
# unitary
# -------------------------------------------------------------------------


def test_unitary_positive(capsys):
    code, out, _ = run(capsys, "unitary", "--ring", "Z4 x GF(4)")
    assert code == 0
    data = json.loads(out)
    assert data["classification"]["has_pst"] is True
    assert data["verdict"]["verdict"] == "pst"


def test_unitary_negative(capsys):
    code, out, _ = run(capsys, "unitary", "--ring", "GF(9)")
    assert code == 0
    data = json.loads(out)
    assert data["classification"]["has_pst"] is False
    assert data["verdict"]["verdict"] == "no_pst"
    assert data["classification"]["reasons"]


# -------------------------------------------------------------------------
# scan
# -------------------------------------------------------------------------


def test_scan_json_lines(capsys):
    code, out, err = run(capsys, "scan", "--ring", "Z8")
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert len(lines) == 7
    assert all({"divisors", "verdict", "socle2_census"} <= set(row) for row in lines)
    summary = json.loads(err.strip().splitlines()[-1])["summary"]
    assert summary["sets"] == 7
    assert summary["pst"] == sum(1 for row in lines if row["verdict"] == "pst")


def test_scan_max_divisors(capsys):
    code, out, _ = run(capsys, "scan", "--ring", "Z8", "--max-divisors", "1")
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert code == 0
    assert len(lines) == 3
    assert all("," not in row["divisors"] for row in lines)


def test_scan_parallel_same_output(capsys):
    code1, out1, _ = run(capsys, "scan", "--ring", "F2[x]/(x^4)")
    code2, out2, _ = run(capsys, "scan", "--ring", "F2[x]/(x^4)", "--jobs", "2")
    assert code1 == code2 == 0
    assert out1 == out2


def test_scan_rejects_non_local(capsys):
    code, _, err = run(capsys, "scan", "--ring", "Z4 x F3")
    assert code == 2
    assert "error" in err


def test_scan_rejects_large_residue_field(capsys):
    code, _, err = run(capsys, "scan", "--ring", "GF(4)")
    assert code == 2


def test_scan_cap_exit_code(capsys):
    code, _, err = run(capsys, "scan", "--ring", "F2[x,y]/(x^2, y^2)", "--max-sets", "3")
    assert code == 3
    assert "error" in err


# -------------------------------------------------------------------------
# verify-paper
# -------------------------------------------------------------------------


def test_verify_paper(capsys):
    code, out, _ = run(capsys, "verify-paper")
    assert code == 0
    assert "PASS" in out
    assert "FAIL" not in out
    assert "checks passed" in out


# -------------------------------------------------------------------------
# describe-ring
# -------------------------------------------------------------------------


def test_describe_ring_text(capsys):
    code, out, _ = run(capsys, "describe-ring", "--ring", EX_RING)
    assert code == 0
    assert "order 16, exponent 2, 8 unit(s)" in out
    assert "minimal element: x*y" in out
    assert "second-socle ideals:" in out


def test_describe_ring_json(capsys):
    code, out, _ = run(capsys, "describe-ring", "--ring", "Z12", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["order"] == 12 and data["units"] == 4
    assert data["is_local"] is False
    assert len(data["local_factors"]["factors"]) == 2
    assert "minimal_element" not in data


def test_describe_ring_gf4_canonical_text(capsys):
    code, out, _ = run(capsys, "describe-ring", "--ring", "GF(4)", "--json")
    data = json.loads(out)
    assert data["ring"] == "Z2[t]/(t^2 + t + 1)"
    assert data["is_field"] is True


# -------------------------------------------------------------------------
# error handling
# -------------------------------------------------------------------------


def test_bad_ring_text_exit_code(capsys):
    code, _, err = run(capsys, "spectrum", "--ring", "Zq", "--divisors", "R")
    assert code == 2
    assert "error" in err


def test_bad_divisor_exit_code(capsys):
    code, _, err = run(capsys, "spectrum", "--ring", "Z8", "--divisors", "0")
    assert code == 2


def test_ring_order_cap_exit_code(capsys):
    code, _, err = run(capsys, "spectrum", "--ring", "Z1024 x Z1024", "--divisors", "R")
    assert code == 3


def test_outputs_are_deterministic(capsys):
    a = run(capsys, "pst", "--ring", EX_RING, "--divisors", "R, x, x*y")
    b = run(capsys, "pst", "--ring", EX_RING, "--divisors", "R, x, x*y")
    assert a == b
    c = run(capsys, "describe-ring", "--ring", "Z4 x GF(4)", "--json")
    d = run(capsys, "describe-ring", "--ring", "Z4 x GF(4)", "--json")
    assert c == d
