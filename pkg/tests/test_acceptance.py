"""Exit criteria for the package, one test per criterion.

Each test reports a PASS/FAIL line in the terminal summary.  Criterion 4 runs
the full search (200 restarts per coefficient size) and takes a few minutes.
"""

import itertools
import json
import time

import numpy as np
import pytest

from vngap import cli
from vngap import serialization as ser
from vngap.gap import GapCertificate, assemble_counterexample, assemble_lhs, certify
from vngap.linalg import kron, op_norm
from vngap.norms import phase_reduction, torus_sup
from vngap.polynomial import linear_pencil
from vngap.tuples import validate
from vngap.verify import ando_suite, check_inequality, n1_suite, remark1_suite

from conftest import closed_form_top_singular_2x2, random_matrix

RESULTS = {}


@pytest.fixture(scope="module", autouse=True)
def report_lines(request):
    yield
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")
    lines = [f"[criterion {k}] {'PASS' if ok else 'FAIL'}  {msg}" for k, (ok, msg) in sorted(RESULTS.items())]
    for line in lines:
        if reporter is not None:
            reporter.write_line(line)
        else:
            print(line)


def record(k, ok, msg):
    RESULTS[k] = (bool(ok), msg)
    assert ok, msg


def test_criterion_1_remark1_suite():
    report = remark1_suite(trials=100, seed=0, tol=1e-8)
    record(1, report.passed and report.elapsed < 30,
           f"remark1: 100 trials, max ratio {report.max_ratio:.10f} <= 1 + 1e-8, {report.elapsed:.1f}s < 30s")


def test_criterion_2_n1_suite():
    report = n1_suite(trials=100, seed=0, tol=1e-6)
    record(2, report.passed and report.elapsed < 60,
           f"n1: 100 trials, max ratio {report.max_ratio:.10f} <= 1 + 1e-6, {report.elapsed:.1f}s < 60s")


def test_criterion_3_ando_suite():
    report = ando_suite(trials=100, seed=0, tol=1e-6)
    record(3, report.passed and report.elapsed < 60,
           f"ando: 100 trials, max ratio {report.max_ratio:.10f} <= 1 + 1e-6, {report.elapsed:.1f}s < 60s")


@pytest.fixture(scope="module")
def existence_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("acceptance") / "pauli_cert.json"
    start = time.perf_counter()
    code = cli.main(["search", "--n", "2", "--n-max", "4", "--restarts", "200", "--seed", "7",
                     "--fine-grid", "512", "--out", str(out)])
    elapsed = time.perf_counter() - start
    return code, out, elapsed


def test_criterion_4_existence(existence_run):
    code, out, elapsed = existence_run
    cert = GapCertificate.from_dict(ser.load(out))
    verdict = certify(cert, fine_grid=512)
    ok = (code == cli.EXIT_OK and verdict.violation
          and verdict.lhs_lower > verdict.certified_upper
          and verdict.rhs_result.grid_points_per_dim >= 512 and elapsed <= 600)
    record(4, ok, f"n={cert.n}: lhs_lower {verdict.lhs_lower:.12f} > certified_upper "
                  f"{verdict.certified_upper:.12f} on 512^2 (ratio {verdict.ratio_lower:.6f}), {elapsed:.0f}s <= 600s")


def test_criterion_5_assembly(existence_run):
    _, out, _ = existence_run
    cert = GapCertificate.from_dict(ser.load(out))
    ce = assemble_counterexample(cert, fine_grid=512)
    ops = ce.tuple.operators
    products_zero = all(not np.any(a @ b) for a, b in itertools.product(ops, repeat=2))
    norms_ok = all(abs(op_norm(t) - 1.0) <= 1e-10 for t in ops)
    report = check_inequality(ce.pencil, ce.tuple)
    block_norm = op_norm(assemble_lhs(cert.a1, cert.a2, cert.a3, cert.b1, cert.b2))
    ok = (validate(ce.tuple).accepted and products_zero and norms_ok and not report.holds
          and abs(report.lhs - block_norm) <= 1e-9)
    record(5, ok, f"Parrott triple valid, T_kT_j = 0, holds=false, |lhs - block norm| = "
                  f"{abs(report.lhs - block_norm):.2e} <= 1e-9")


def test_criterion_6_norm_oracles():
    worst_closed = 0.0
    for seed in range(200):
        m = random_matrix(np.random.default_rng(seed), 2)
        expected = closed_form_top_singular_2x2(m)
        worst_closed = max(worst_closed, abs(op_norm(m) - expected) / expected)
    worst_kron = 0.0
    for seed in range(50):
        rng = np.random.default_rng(10_000 + seed)
        r1, c1, r2, c2 = rng.integers(1, 5, 4)
        a, b = random_matrix(rng, r1, c1), random_matrix(rng, r2, c2)
        worst_kron = max(worst_kron, abs(op_norm(kron(a, b)) - op_norm(a) * op_norm(b)))
    record(6, worst_closed <= 1e-12 and worst_kron <= 1e-9,
           f"closed-form 2x2 rel err {worst_closed:.1e} <= 1e-12; kron err {worst_kron:.1e} <= 1e-9")


def _brute_force_affine(a, points=720):
    angles = 2 * np.pi * np.arange(points) / points
    l1, l2 = np.meshgrid(np.exp(1j * angles), np.exp(1j * angles), indexing="ij")
    stack = l1.ravel()[:, None, None] * a[0] + l2.ravel()[:, None, None] * a[1] + a[2]
    return np.linalg.svd(stack, compute_uv=False)[:, 0].max()


def test_criterion_7_torus_certification():
    worst_margin, worst_agree = np.inf, np.inf
    for seed in range(50):
        rng = np.random.default_rng(20_000 + seed)
        a = [random_matrix(rng, 2) for _ in range(3)]
        pencil = linear_pencil(a)
        reduced = torus_sup(phase_reduction(pencil), 64)
        worst_margin = min(worst_margin, reduced.certified_upper - _brute_force_affine(a))
        full = torus_sup(pencil, 64)
        slack = (reduced.certified_upper - reduced.grid_max) + (full.certified_upper - full.grid_max)
        worst_agree = min(worst_agree, slack - abs(full.best_value - reduced.best_value))
    record(7, worst_margin >= 0 and worst_agree >= 0,
           f"min(certified_upper - brute 720^2 max) = {worst_margin:.3e} >= 0; "
           f"T^3 vs T^2 agreement within slack (min margin {worst_agree:.3e})")


def test_criterion_8_determinism(tmp_path):
    docs = []
    for k in range(2):
        out = tmp_path / f"run{k}.json"
        assert cli.main(["search", "--restarts", "20", "--seed", "7", "--out", str(out)]) == cli.EXIT_OK
        data = json.loads(out.read_text())
        data.pop("timing")
        docs.append(ser.canonical_json(data).encode())
    record(8, docs[0] == docs[1], "two identical search runs give byte-identical certificates (timing excluded)")
