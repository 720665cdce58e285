"""Command-line behavior: dispatch, formats, determinism, exit codes."""

import contextlib
import io
import json
from fractions import Fraction

import pytest

import triplesieve.cli as cli
from triplesieve.groups import BallBudgetError


def run(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


def data_lines(out):
    return [l for l in out.splitlines() if not l.startswith("#")]


def test_verify_passes_small():
    code, out = run(["verify", "--pmax", "13"])
    assert code == 0
    assert "all suites passed" in out
    assert out.count("PASS") == 5
    assert "FAIL" not in out


def test_verify_mutant_rho_detected(monkeypatch):
    monkeypatch.setattr(cli, "rho", lambda q: Fraction(2 * q, q * q))
    code, out = run(["verify", "--pmax", "13"])
    assert code == 2
    assert "FAIL weighted-zero-count-vanishes" in out


def test_exit_code_bad_input():
    assert run(["nope"])[0] == 4
    assert run(["orbit", "--format", "xml"])[0] == 4
    assert run(["adq", "--q", "6", "--X", "6", "--Y", "6"])[0] == 4
    assert run(["census", "--config", "/nonexistent/path"])[0] == 4


def test_exit_code_budget(monkeypatch):
    def boom(*a, **k):
        raise BallBudgetError(100.0, 5, 5)

    monkeypatch.setattr(cli, "enumerate_ball", boom)
    assert run(["orbit", "--T", "10"])[0] == 3


def test_byte_identical_determinism():
    argv = ["census", "--T", "20", "--f", "z", "--R", "2", "--format", "json"]
    a = run(argv)
    b = run(argv)
    assert a == b
    t1 = run(["orbit", "--T", "10", "--threads", "1", "--format", "csv"])
    t4 = run(["orbit", "--T", "10", "--threads", "4", "--format", "csv"])
    assert data_lines(t1[1]) == data_lines(t4[1])


def test_config_file_with_flag_override(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("# comment\nT = 10\nf = y\nformat = text\n")
    code, out = run(["census", "--config", str(cfgfile), "--T", "12", "--R", "2"])
    assert code == 0
    assert "# T = 12.0" in out
    assert "# f = y" in out
    bad = tmp_path / "bad.cfg"
    bad.write_text("this line has no equals\n")
    assert run(["census", "--config", str(bad)])[0] == 4


def test_constants_json_provenance():
    code, out = run(["constants", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["provenance"] == "saturation_table"
    assert doc["config"]["subcommand"] == "constants"
    assert [r["R"] for r in doc["rows"]] == [4, 18, 26]
    assert all("provenance" in r for r in doc["rows"])
    assert doc["rows"][0]["delta0"] == pytest.approx(0.983994188, abs=5e-6)


def test_census_regression_and_formats():
    code, out = run(["census", "--group", "modular", "--T", "200", "--f", "z",
                     "--R", "4", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    counts = doc["summary"]["almost_prime_counts"]
    assert counts["le_1"] == 15644
    assert counts["le_1"] > 0
    code, out = run(["census", "--T", "30", "--f", "z", "--R", "2", "--format", "csv"])
    lines = data_lines(out)
    assert lines[0] == "c,d,form,n,factors,omega,grade,imprimitive_flag"
    assert "1,2,z,5,5,1,P1,0" in lines


def test_density_z_rows():
    code, out = run(["density", "--f", "z", "--pmax", "97", "--format", "csv"])
    assert code == 0
    rows = [l.split(",") for l in data_lines(out)[1:]]
    for p_str, measured, predicted, match in rows:
        p = int(p_str)
        assert match == "1"
        if p % 4 == 1:
            assert measured == str(Fraction(2, p + 1))
        else:
            assert measured == "0"


def test_orbit_text_count():
    code, out = run(["orbit", "--T", "10"])
    assert code == 0
    assert "elements = 580" in out


def test_delta_output():
    code, out = run(["delta", "--T", "60", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert 0.5 < doc["delta_hat"] < 1.5
    ts = [s["T"] for s in doc["samples"]]
    assert ts == sorted(ts)
    assert doc["provenance"] == "estimate_delta"


def test_adq_trivial_and_parity():
    code, out = run(["adq", "--X", "8", "--Y", "8", "--q", "1", "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["mass"] == doc["chi"]
    assert doc["remainder"] == "0"
    code, out = run(["adq", "--X", "8", "--Y", "8", "--q", "7", "--f", "z",
                     "--format", "json"])
    doc = json.loads(out)
    assert doc["main"] == "0"
    assert doc["mass"] == "0"


def test_generator_file_group(tmp_path):
    path = tmp_path / "gens.txt"
    path.write_text("# label: custom\n1 1 0 1\n1 0 1 1\n")
    code, out = run(["orbit", "--group", str(path), "--T", "10"])
    assert code == 0
    assert "elements = 580" in out
    assert "# group = " in out


def test_header_serializes_full_config():
    code, out = run(["orbit", "--T", "5", "--format", "csv"])
    header = [l for l in out.splitlines() if l.startswith("# ")]
    keys = {l.split(" = ")[0][2:] for l in header}
    assert {"subcommand", "group", "T", "X", "Y", "q", "p_max", "alpha",
            "kappa", "R", "f", "format", "seed", "threads"} <= keys
