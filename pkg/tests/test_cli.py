import io
import json
import struct
import subprocess
import sys

import numpy as np
import pytest

from qflag.cli import main


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def run_binary(argv):
    raw = io.BytesIO()
    out = io.TextIOWrapper(raw)
    code = main(argv, out)
    return code, raw.getvalue()


def test_weyl_example():
    code, text = run(["weyl", "--type", "A", "--rank", "2", "--S", "1"])
    assert code == 0
    reps = json.loads(text)["coset_representatives"]
    assert [r["word"] for r in reps] == [[], [2], [1, 2]]
    assert all({"word", "length", "action"} <= set(r) for r in reps)


@pytest.mark.parametrize("cmd", ["roots", "cells", "poisson", "module", "funalg"])
def test_basic_subcommands(cmd):
    code, text = run([cmd, "--type", "A", "--rank", "2", "--S", "1", "--Lambda", "1,1"])
    assert code == 0
    json.loads(text)


def test_flag_verify_algthm_example():
    code, text = run(["flag", "verify-algthm", "--type", "A", "--rank", "2", "--S", "1",
                      "--Lambda", "0,1", "--degree", "2"])
    assert code == 0
    rows = json.loads(text)["rows"]
    assert rows and all(r["verdict"] == "PASS" and "claim" in r for r in rows)


def test_flag_verify_ss():
    assert run(["flag", "verify-ss", "--type", "A", "--rank", "2", "--S", "1"])[0] == 0


def test_a0_proper_exit_codes():
    # no weight witness for Lambda = varpi_2: verdict is not PASS
    assert run(["flag", "a0-proper", "--type", "A", "--rank", "2", "--S", "1",
                "--Lambda", "0,1"])[0] == 1
    assert run(["flag", "a0-proper", "--type", "A", "--rank", "2", "--S", "1",
                "--Lambda", "0,2"])[0] == 0


def test_rep_matrix_example_json():
    code, text = run(["rep", "matrix", "--type", "A", "--rank", "1", "--w", "1", "--N", "4"])
    assert code == 0
    m = np.array(json.loads(text)["matrix"])
    assert np.allclose(m[..., 0], np.diag([1, 0.5, 0.25, 0.125]))
    assert not m[..., 1].any()


def test_rep_matrix_binary_layout():
    code, blob = run_binary(["rep", "matrix", "--type", "A", "--rank", "1", "--w", "1",
                             "--N", "4", "--format", "binary"])
    assert code == 0
    N, l = struct.unpack("<II", blob[:8])
    assert (N, l) == (4, 1)
    vals = np.frombuffer(blob[8:], dtype="<f8").reshape(4, 4, 2)
    assert np.allclose(vals[..., 0], np.diag([1, 0.5, 0.25, 0.125]))


def test_rep_matrix_with_phase():
    code, text = run(["rep", "matrix", "--type", "A", "--rank", "1", "--w", "1", "--N", "3",
                      "--t", "0.25"])
    m = np.array(json.loads(text)["matrix"])
    assert code == 0 and np.allclose(m[0, 0], [0, 1])


def test_rep_verify_ssb_and_norms():
    assert run(["rep", "verify-ssb", "--type", "A", "--rank", "2", "--S", "1", "--N", "4",
                "--samples", "2"])[0] == 0
    code, text = run(["rep", "norms", "--type", "A", "--rank", "2", "--S", "1", "--Ns", "4,8",
                      "--count", "2"])
    assert code == 0 and json.loads(text)["rows"]


def test_rep_verify_class_exit_code_matches_verdict():
    code, text = run(["rep", "verify-class", "--type", "A", "--rank", "2", "--N", "4"])
    report = json.loads(text)
    assert code == (0 if report["verdict"] == "PASS" else 1)
    assert all("claim" in r for r in report["reports"])


@pytest.mark.parametrize("argv", [
    ["weyl", "--type", "E", "--rank", "6"],
    ["module", "--type", "A", "--rank", "2", "--q", "3/2", "--Lambda", "1,0"],
    ["module", "--type", "A", "--rank", "2", "--q", "abc", "--Lambda", "1,0"],
    ["rep", "matrix", "--type", "A", "--rank", "2", "--w", "1,1", "--N", "4"],
    ["weyl", "--type", "A", "--rank", "2", "--S", "3"],
    ["weyl", "--format", "binary"],
    ["rep", "matrix", "--N", "0"],
    ["nonsense"],
])
def test_configuration_errors_exit_2(argv):
    assert run(argv)[0] == 2


def test_internal_error_exit_3(monkeypatch):
    import qflag.repengine.rank1 as rank1
    monkeypatch.setattr(rank1, "_monomial_value", lambda *a: 0)
    code, _ = run(["rep", "matrix", "--type", "A", "--rank", "1", "--w", "1", "--N", "4"])
    assert code == 3


def test_csv_output():
    code, text = run(["flag", "verify-ss", "--type", "A", "--rank", "2", "--S", "1",
                      "--format", "csv"])
    assert code == 0
    header = text.splitlines()[0]
    assert "verdict" in header


@pytest.mark.parametrize("argv", [
    ["rep", "norms", "--type", "A", "--rank", "2", "--S", "1", "--Ns", "4,8", "--count", "2",
     "--seed", "7"],
    ["funalg", "--type", "A", "--rank", "2", "--seed", "3"],
])
def test_byte_identical_reports(argv):
    assert run(argv) == run(argv)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qflag.cli", "weyl", "--type", "A",
                           "--rank", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["coset_representatives"]) == 2
