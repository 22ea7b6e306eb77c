import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from vngap import cli, schemas
from vngap import serialization as ser
from vngap.exceptions import NonConvergence
from vngap.polynomial import MatrixPolynomial, linear_pencil
from vngap.tuples import random_commuting_tuple


@pytest.fixture(scope="module")
def cert_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "cert.json"
    assert cli.main(["search", "--n", "2", "--restarts", "3", "--seed", "7", "--workers", "1",
                     "--out", str(path)]) == cli.EXIT_OK
    return path


def test_search_writes_valid_certificate(cert_path):
    data = ser.load(cert_path)
    jsonschema.validate(data, schemas.CERTIFICATE)
    assert data["violation"] and data["seed"] == 7


def test_search_summary(tmp_path, capsys):
    out = tmp_path / "c.json"
    code = cli.main(["search", "--restarts", "2", "--seed", "1", "--budget", "2000", "--workers", "1",
                     "--out", str(out)])
    line = capsys.readouterr().out
    assert code == cli.EXIT_OK
    assert "n=2" in line and "ratio_lower=" in line and "wall_time=" in line and "seed=1" in line


def test_search_n1_is_config_error(capsys):
    assert cli.main(["search", "--n", "1"]) == cli.EXIT_INPUT
    assert "error" in capsys.readouterr().err


def test_search_commuting_pair_no_violation(tmp_path):
    pair = tmp_path / "commuting.json"
    eye = ser.matrix_to_json(np.eye(2))
    ser.dump({"schema": "vn-bpair/1", "b1": eye, "b2": eye}, pair)
    jsonschema.validate(ser.load(pair), schemas.B_PAIR)
    code = cli.main(["search", "--b-pair", str(pair), "--n-max", "2", "--restarts", "2",
                     "--budget", "800", "--workers", "1", "--out", str(tmp_path / "c.json")])
    assert code == cli.EXIT_NO_VIOLATION


def test_certify_round_trip(cert_path, capsys):
    assert cli.main(["certify", str(cert_path)]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "verdict=VIOLATION" in out


def test_certify_ignores_edited_ratio(cert_path, tmp_path, capsys):
    data = ser.load(cert_path)
    true_ratio = data["ratio_lower"]
    data["ratio_lower"] = 0.5
    edited = tmp_path / "edited.json"
    ser.dump(data, edited)
    assert cli.main(["certify", str(edited), "--fine-grid", "1024"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    printed = float(out.split("ratio_lower=")[1].split()[0])
    assert printed == pytest.approx(true_ratio, rel=1e-2)
    assert printed != 0.5


def test_certify_truncated_file(cert_path, tmp_path):
    truncated = tmp_path / "truncated.json"
    truncated.write_text(cert_path.read_text()[:200])
    assert cli.main(["certify", str(truncated)]) == cli.EXIT_INPUT
    assert cli.main(["certify", str(tmp_path / "missing.json")]) == cli.EXIT_INPUT


def test_certify_non_violating(tmp_path):
    from vngap.gap import GapCertificate, lhs_norm, rhs_norm
    from vngap.tuples import pauli_pair
    a = np.eye(2)
    _, w = lhs_norm(a, a, a, *pauli_pair())
    cert = GapCertificate(a, a, a, *pauli_pair(), w, 0.0, rhs_norm(a, a, a, grid=64), 0)
    path = tmp_path / "c.json"
    ser.dump(cert.to_dict(), path)
    assert cli.main(["certify", str(path), "--fine-grid", "64"]) == cli.EXIT_NO_VIOLATION


def test_verify_counterexample(cert_path, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["verify", "--certificate", str(cert_path), "--out", str(out)]) == cli.EXIT_OK
    assert "holds=false" in capsys.readouterr().out
    jsonschema.validate(ser.load(out), schemas.INEQUALITY_REPORT)


def test_verify_files(tmp_path, capsys):
    poly, tup = tmp_path / "p.json", tmp_path / "t.json"
    p = MatrixPolynomial({(1, 1): [[1.0]], (0, 0): [[0.5]]})
    ser.dump(p.to_dict(), poly)
    ser.dump(random_commuting_tuple(2, 3, 0).to_dict(), tup)
    jsonschema.validate(ser.load(poly), schemas.POLYNOMIAL)
    jsonschema.validate(ser.load(tup), schemas.TUPLE)
    assert cli.main(["verify", "--poly", str(poly), "--tuple", str(tup)]) == cli.EXIT_OK
    assert "holds=true" in capsys.readouterr().out
    assert cli.main(["verify", "--poly", str(poly)]) == cli.EXIT_INPUT


def test_suite(tmp_path, capsys):
    out = tmp_path / "suite.json"
    assert cli.main(["suite", "--trials", "5", "--seed", "1", "--out", str(out)]) == cli.EXIT_OK
    text = capsys.readouterr().out
    assert text.count("PASS") == 3
    for report in ser.load(out):
        jsonschema.validate(report, schemas.SUITE_REPORT)


def test_suite_failure_detected(monkeypatch):
    from vngap import verify
    monkeypatch.setattr(verify.InequalityReport, "holds", property(lambda self: False))
    assert cli.main(["suite", "--suite", "ando", "--trials", "1"]) == cli.EXIT_SUITE_FAILED


def test_norm_torus_sup_diagonal(tmp_path, capsys):
    path = tmp_path / "pencil.json"
    p = linear_pencil([np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), np.eye(2)])
    ser.dump(p.to_dict(), path)
    assert cli.main(["norm", str(path), "--op", "torus-sup"]) == cli.EXIT_OK
    first = capsys.readouterr().out.splitlines()[0]
    assert float(first.split("=")[1]) == pytest.approx(2.0, abs=1e-12)


def test_norm_op_norm(tmp_path, capsys):
    path = tmp_path / "m.json"
    ser.dump({"schema": "vn-matrix/1", "matrix": ser.matrix_to_json([[0, 2], [0, 0]])}, path)
    jsonschema.validate(ser.load(path), schemas.MATRIX_DOC)
    assert cli.main(["norm", str(path)]) == cli.EXIT_OK
    assert capsys.readouterr().out.strip() == "op_norm=2.0"
    assert cli.main(["norm", str(path), "--op", "torus-sup"]) == cli.EXIT_INPUT


def test_nonconvergence_exit_code(tmp_path, monkeypatch):
    path = tmp_path / "m.json"
    ser.dump({"matrix": ser.matrix_to_json(np.eye(2))}, path)

    def boom(m):
        raise NonConvergence(7)

    monkeypatch.setattr(cli, "op_norm", boom)
    assert cli.main(["norm", str(path)]) == cli.EXIT_NONCONVERGENCE


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("restarts = 5\nseed = 9\nfine-grid = 256\n")
    args = cli.build_parser().parse_args(["search", "--config", str(cfg), "--seed", "4"])
    s = cli.resolve(args, ["restarts", "seed", "fine_grid", "budget"])
    assert s == {"restarts": 5, "seed": 4, "fine_grid": 256, "budget": None}


def test_config_rejects_unknown_and_out_of_bounds(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("restarts = 5\ncolour = red\n")
    assert cli.main(["search", "--config", str(cfg)]) == cli.EXIT_INPUT
    cfg.write_text("grid = 2\n")
    assert cli.main(["search", "--config", str(cfg)]) == cli.EXIT_INPUT
    assert cli.main(["search", "--restarts", "0"]) == cli.EXIT_INPUT
    assert cli.main(["frobnicate"]) == cli.EXIT_INPUT


def test_module_entry_point(tmp_path):
    path = tmp_path / "m.json"
    ser.dump({"matrix": ser.matrix_to_json(np.eye(3))}, path)
    proc = subprocess.run([sys.executable, "-m", "vngap", "norm", str(path)], capture_output=True,
                          text=True, env={"NO_COLOR": "1", "PATH": ""})
    assert proc.returncode == 0
    assert proc.stdout.strip() == "op_norm=1.0"
