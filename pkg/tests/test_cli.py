import csv
import io
import json
import math
import subprocess
import sys

import pytest

from qhjspectra.analytic_spectra import energy
from qhjspectra.cli import dumps, enumerate_levels, format_float, main, parse_range
from qhjspectra.potentials import QuantumNumbers, UnitSystem, potential_from_name


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_spectrum_single_level():
    code, text = run("spectrum", "hartmann", "--alpha", "-1", "--beta", "0", "--m", "0", "--nr", "0", "--ntheta", "0")
    assert code == 0
    doc = json.loads(text)
    assert doc["schema_version"] == "1"
    assert doc["units"] == "2mu=1"
    assert doc["levels"][0]["energy"] == -0.25


def test_spectrum_ring_example():
    code, text = run("spectrum", "ring", "--alpha", "1", "--beta", "0", "--m", "0", "--nr", "1", "--ntheta", "0")
    assert code == 0 and json.loads(text)["levels"][0]["energy"] == 7


def test_spectrum_validation_error(capsys):
    code, _ = run("spectrum", "hartmann", "--alpha", "-1", "--beta", "-1", "--m", "0", "--nr", "0", "--ntheta", "0")
    assert code == 1
    assert "beta" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ("spectrum", "ring", "--alpha", "1", "--nr", "1"),
    ("spectrum", "ring", "--alpha", "1"),
    ("spectrum", "hartmann", "--alpha", "-1", "--max-energy", "0.1"),
    ("spectrum", "ring"),
    ("bogus",),
    ("table", "--potential", "ring", "--alpha", "1", "--nr", "2:1"),
    ("table", "--potential", "ring", "--alpha", "1", "--nr", "x"),
    ("verify", "ring", "--alpha", "-1"),
])
def test_usage_errors_exit_1(argv):
    assert run(*argv)[0] == 1


def test_spectrum_enumeration_sorted():
    code, text = run("spectrum", "ring", "--alpha", "1", "--beta", "0.5", "--max-energy", "12")
    levels = json.loads(text)["levels"]
    keys = [(lv["energy"], lv["n_r"], lv["n_theta"], lv["m"]) for lv in levels]
    assert keys == sorted(keys)
    assert all(lv["energy"] <= 12 for lv in levels)
    # brute force over a generous box
    units = UnitSystem(1.0)
    pot = potential_from_name("ring", 1.0, 0.5)
    expected = sum(
        energy(pot, QuantumNumbers(nr, nt, m), units) <= 12
        for nr in range(10) for nt in range(10) for m in range(10)
    )
    assert len(levels) == expected


def test_hartmann_enumeration_window():
    units = UnitSystem(1.0)
    pot = potential_from_name("hartmann", -1.0, 0.0)
    levels = enumerate_levels(pot, units, -0.02, -0.1)
    energies = [energy(pot, qn, units) for qn in levels]
    assert all(-0.1 <= e <= -0.02 for e in energies)
    brute = [
        (nr, nt, m) for nr in range(6) for nt in range(6) for m in range(6)
        if -0.1 <= energy(pot, QuantumNumbers(nr, nt, m), units) <= -0.02
    ]
    assert len(levels) == len(brute)


def test_global_and_local_hbar():
    _, a = run("--hbar", "0.5", "spectrum", "ring", "--alpha", "1", "--nr", "0", "--ntheta", "0", "--m", "0")
    _, b = run("spectrum", "ring", "--alpha", "1", "--nr", "0", "--ntheta", "0", "--m", "0", "--hbar", "0.5")
    assert a == b
    assert json.loads(a)["levels"][0]["energy"] == 1.5


def test_verify_oracle_example():
    code, text = run("verify", "--mode", "oracle", "hartmann", "--alpha", "-1", "--beta", "0",
                     "--m", "1", "--nr", "0", "--ntheta", "1")
    assert code == 0
    block = json.loads(text)["levels"][0]["verification"]["oracle"]
    assert block["rel_err"] < 1e-6 and block["flags"] == []


def test_verify_contour_example():
    code, text = run("verify", "--mode", "contour", "ring", "--alpha", "1", "--nr", "1", "--ntheta", "0",
                     "--m", "0", "--beta", "0")
    assert code == 0
    radial = json.loads(text)["levels"][0]["verification"]["contour"]["radial"]
    assert radial["j_re"] == pytest.approx(1.0, abs=1e-6)
    assert abs(radial["j_im"]) < 1e-8
    assert radial["converged"]


def test_verify_contour_not_applicable():
    code, text = run("verify", "--mode", "contour", "hartmann", "--alpha", "-1", "--ntheta", "0", "--m", "0",
                     "--beta", "0", "--nr", "0:1")
    assert code == 0
    for level in json.loads(text)["levels"]:
        assert level["verification"]["contour"]["angular"]["status"] == "not-applicable"


@pytest.mark.parametrize("mode", ["oracle", "residues"])
def test_verify_detects_perturbation(mode, capsys):
    args = ("verify", "--mode", mode, "ring", "--alpha", "4", "--beta", "0.5", "--nr", "0:1", "--ntheta", "0:1")
    assert run(*args)[0] == 0
    code, text = run(*args, "--perturb-energy", "1e-3")
    assert code == 2
    assert json.loads(text)["ok"] is False
    assert "verification failed" in capsys.readouterr().err


def test_table_examples():
    code, text = run("table", "--potential", "ring", "--alpha", "1", "--nr", "0:1", "--ntheta", "0:1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert text.splitlines()[0] == "n_r,n_theta,m,a,b,l_squared,energy"
    assert sorted(float(r["energy"]) for r in rows) == [3, 5, 7, 9]
    code, text = run("table", "--potential", "hartmann", "--alpha", "-1", "--nr", "0:1", "--ntheta", "0:1",
                     "--max-sum", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [float(r["energy"]) for r in rows] == [-0.25, -0.0625, -0.0625]
    assert [(r["n_r"], r["n_theta"]) for r in rows] == [("0", "0"), ("0", "1"), ("1", "0")]


def test_csv_and_json_agree():
    common = ("table", "--potential", "hartmann", "--alpha", "-2", "--beta", "0.5", "--nr", "0:2", "--ntheta", "0:2",
              "--m", "0:2")
    _, js = run(*common)
    _, cs = run(*common, "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(cs)))
    levels = json.loads(js)["levels"]
    assert len(rows) == len(levels) == 27
    for row, level in zip(rows, levels):
        for key in ("a", "b", "l_squared", "energy"):
            assert float(row[key]) == level[key]
            assert row[key] == format_float(level[key])


def test_round_trip_bit_exact():
    _, text = run("--hbar", "0.3", "table", "--potential", "ring", "--alpha", "4", "--beta", "3",
                  "--nr", "0:2", "--ntheta", "0:2", "--m", "0:2")
    doc = json.loads(text)
    units = UnitSystem(doc["hbar"])
    pot = potential_from_name(doc["potential"]["name"], doc["potential"]["alpha"], doc["potential"]["beta"])
    for level in doc["levels"]:
        e = energy(pot, QuantumNumbers(level["n_r"], level["n_theta"], level["m"]), units)
        assert e == level["energy"]
        assert format_float(e) == format_float(level["energy"])


def test_dumps_seventeen_digits():
    assert dumps(0.1) == "0.10000000000000001"
    assert json.loads(dumps({"x": [1.0 / 3, True, None, "s"]}))["x"][0] == 1.0 / 3
    with pytest.raises(ValueError):
        dumps(math.nan)
    with pytest.raises(TypeError):
        dumps(object())


def test_parse_range():
    assert parse_range("2") == [2]
    assert parse_range("0:2") == [0, 1, 2]
    assert parse_range("3,0:1") == [0, 1, 3]


def test_deterministic_output():
    argv = ("table", "--potential", "ring", "--alpha", "1", "--nr", "0:2", "--format", "csv")
    assert run(*argv) == run(*argv)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qhjspectra", "spectrum", "ring", "--alpha", "1", "--nr", "1", "--ntheta", "0", "--m", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["levels"][0]["energy"] == 7
    proc = subprocess.run([sys.executable, "-m", "qhjspectra", "spectrum", "ring", "--alpha", "-1", "--nr", "0",
                           "--ntheta", "0", "--m", "0"], capture_output=True, text=True, check=False)
    assert proc.returncode == 1 and "alpha" in proc.stderr
