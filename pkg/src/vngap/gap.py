"""Search for, certify and assemble violations of the generalized von Neumann
inequality on the Parrott triple.

For unitaries ``B_1, B_2`` on ``C^d`` and ``n x n`` matrices ``A_1, A_2, A_3``
the left side is ``|A_1 (x) B_1 + A_2 (x) B_2 + A_3 (x) I|`` and the right
side is ``max |A_1 l_1 + A_2 l_2 + A_3|`` over the 2-torus.  A certificate
stores the matrices, a unit witness vector for the left side and a certified
torus bound for the right side; :func:`certify` recomputes both from those
fields alone.
"""

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import serialization as ser
from ._validation import check_matrix
from .exceptions import CertificateError, DegenerateInput, DimensionMismatch
from .linalg import batch_spectral_norm, is_unitary, lower_bound_norm, top_singular_pair
from .norms import CERTIFY_GRID, SEARCH_GRID, TWO_PI, TorusSupResult, polydisk_sup, torus_sup
from .polynomial import MatrixPolynomial, eval_tuple, linear_pencil
from .tuples import parrott_triple, pauli_pair, validate

CERT_SCHEMA = "vn-gap-cert/1"
VIOLATION = "VIOLATION"
NO_VIOLATION = "NO_VIOLATION"
MIN_STEP = 1e-6
INITIAL_STEP = 0.5
DEFAULT_RESTARTS = 200
EVALS_PER_RESTART = 4000
N_SCHEDULE = (2, 3, 4)


def assemble_lhs(a1, a2, a3, b1, b2):
    """``A_1 (x) B_1 + A_2 (x) B_2 + A_3 (x) I_d``."""
    d = b1.shape[0]
    return np.kron(a1, b1) + np.kron(a2, b2) + np.kron(a3, np.eye(d))


def _check_triple(a1, a2, a3):
    a = [check_matrix(x, square=True, name=f"a{k + 1}") for k, x in enumerate((a1, a2, a3))]
    if not (a[0].shape == a[1].shape == a[2].shape):
        raise DimensionMismatch("a1, a2, a3 must share one square shape")
    return a


def affine_pencil(a1, a2, a3):
    """``A_1 l_1 + A_2 l_2 + A_3`` as a two-variable polynomial."""
    a1, a2, a3 = _check_triple(a1, a2, a3)
    p = MatrixPolynomial([((1, 0), a1), ((0, 1), a2), ((0, 0), a3)], num_vars=2, coeff_dim=a1.shape[0])
    if p.is_zero():
        raise DegenerateInput("zero coefficient triple")
    return p


def lhs_norm(a1, a2, a3, b1, b2):
    """Norm of the amplified Parrott map and a unit witness attaining it.

    The value equals ``|M v|`` for the returned witness ``v``.
    """
    a1, a2, a3 = _check_triple(a1, a2, a3)
    b1 = check_matrix(b1, square=True, name="b1")
    b2 = check_matrix(b2, square=True, name="b2")
    if b1.shape != b2.shape:
        raise DimensionMismatch("b1 and b2 must share one square shape")
    return top_singular_pair(assemble_lhs(a1, a2, a3, b1, b2))


def rhs_norm(a1, a2, a3, grid=CERTIFY_GRID, refine=True):
    """Certified sup of ``|A_1 l_1 + A_2 l_2 + A_3|`` over the 2-torus."""
    return torus_sup(affine_pencil(a1, a2, a3), grid, refine)


@dataclass(frozen=True)
class GapCertificate:
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    witness: np.ndarray
    lhs_lower: float
    rhs_result: TorusSupResult
    seed: int
    search_meta: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.a1.shape[0]

    @property
    def ratio_lower(self):
        return self.lhs_lower / self.rhs_result.certified_upper

    @property
    def violation(self):
        return self.lhs_lower > self.rhs_result.certified_upper

    def to_dict(self, *, include_timing=True):
        out = {
            "schema": CERT_SCHEMA,
            "n": self.n,
            "d": self.b1.shape[0],
            "a1": ser.matrix_to_json(self.a1),
            "a2": ser.matrix_to_json(self.a2),
            "a3": ser.matrix_to_json(self.a3),
            "b1": ser.matrix_to_json(self.b1),
            "b2": ser.matrix_to_json(self.b2),
            "witness": ser.vector_to_json(self.witness),
            "lhs_lower": self.lhs_lower,
            "rhs_result": self.rhs_result.to_dict(),
            "ratio_lower": self.ratio_lower,
            "violation": self.violation,
            "seed": self.seed,
            "search_meta": dict(self.search_meta),
        }
        out["digest"] = ser.digest(out)
        if include_timing:
            out["timing"] = dict(self.timing)
        return out

    @classmethod
    def from_dict(cls, data):
        """Parse a certificate; stored ratio, verdict and digest are ignored."""
        try:
            if data["schema"] != CERT_SCHEMA:
                raise CertificateError(f"unsupported certificate schema {data['schema']!r}")
            mats = {k: ser.matrix_from_json(data[k]) for k in ("a1", "a2", "a3", "b1", "b2")}
            cert = cls(
                **mats,
                witness=ser.vector_from_json(data["witness"]),
                lhs_lower=float(data["lhs_lower"]),
                rhs_result=TorusSupResult.from_dict(data["rhs_result"]),
                seed=int(data["seed"]),
                search_meta=dict(data.get("search_meta", {})),
                timing=dict(data.get("timing", {})),
            )
        except CertificateError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateError(f"malformed certificate: {exc}") from exc
        _check_certificate_shapes(cert)
        return cert


def _check_certificate_shapes(cert):
    n = cert.a1.shape
    if not (len(n) == 2 and n[0] == n[1] and cert.a2.shape == n and cert.a3.shape == n):
        raise CertificateError("a1, a2, a3 must be square of one size")
    d = cert.b1.shape
    if not (len(d) == 2 and d[0] == d[1] and cert.b2.shape == d):
        raise CertificateError("b1, b2 must be square of one size")
    if cert.witness.shape != (n[0] * d[0],):
        raise CertificateError(f"witness must have length {n[0] * d[0]}")


@dataclass(frozen=True)
class CertifiedVerdict:
    verdict: str
    lhs_lower: float
    rhs_result: TorusSupResult

    @property
    def certified_upper(self):
        return self.rhs_result.certified_upper

    @property
    def ratio_lower(self):
        return self.lhs_lower / self.certified_upper

    @property
    def violation(self):
        return self.verdict == VIOLATION


def certify(cert, fine_grid=CERTIFY_GRID):
    """Recompute both sides of a certificate from its matrices and witness.

    Nothing stored from the search (values, ratio, bound) is trusted.
    """
    _check_certificate_shapes(cert)
    for name in ("b1", "b2"):
        if not is_unitary(getattr(cert, name)):
            raise CertificateError(f"{name} is not unitary")
    m = assemble_lhs(cert.a1, cert.a2, cert.a3, cert.b1, cert.b2)
    try:
        lhs = lower_bound_norm(m, cert.witness)
    except ValueError as exc:
        raise CertificateError(str(exc)) from exc
    try:
        rhs = rhs_norm(cert.a1, cert.a2, cert.a3, fine_grid, refine=True)
    except DegenerateInput as exc:
        raise CertificateError(str(exc)) from exc
    verdict = VIOLATION if lhs > rhs.certified_upper else NO_VIOLATION
    return CertifiedVerdict(verdict, lhs, rhs)


# -- search ------------------------------------------------------------------


class _Objective:
    """Uncertified ratio ``lhs / grid max`` used while searching."""

    def __init__(self, n, b1, b2, grid):
        self.n = n
        self.b1, self.b2 = b1, b2
        self.eye_d = np.eye(b1.shape[0])
        angles = TWO_PI * np.arange(grid) / grid
        l1, l2 = np.meshgrid(np.exp(1j * angles), np.exp(1j * angles), indexing="ij")
        self.phases = np.stack([l1.ravel(), l2.ravel(), np.ones(grid * grid)], axis=-1)
        self.evaluations = 0

    def unpack(self, x):
        n = self.n
        z = x[: 3 * n * n] + 1j * x[3 * n * n:]
        return z.reshape(3, n, n)

    def __call__(self, x):
        self.evaluations += 1
        a = self.unpack(x)
        rhs = batch_spectral_norm((self.phases @ a.reshape(3, -1)).reshape(-1, self.n, self.n)).max()
        if rhs == 0.0:
            return 0.0
        m = np.kron(a[0], self.b1) + np.kron(a[1], self.b2) + np.kron(a[2], self.eye_d)
        return float(batch_spectral_norm(m[None])[0] / rhs)


def _ascend(f, x, budget, step=INITIAL_STEP, min_step=MIN_STEP):
    """Coordinate-wise ascent with step halving; returns (x, f(x), sweeps)."""
    fx = f(x)
    used, sweeps = 1, 0
    while step >= min_step and used < budget:
        sweeps += 1
        improved = False
        for i in range(x.size):
            for sign in (1.0, -1.0):
                if used >= budget:
                    break
                trial = x.copy()
                trial[i] += sign * step
                ft = f(trial)
                used += 1
                if ft > fx:
                    x, fx, improved = trial, ft, True
                    break
        if not improved:
            step /= 2.0
    return x, fx, sweeps


def restart_seed(seed, n, index):
    return np.random.SeedSequence([int(seed), int(n), int(index)])


def _run_restart(args):
    n, b1, b2, grid, seed, index, budget = args
    rng = np.random.default_rng(restart_seed(seed, n, index))
    f = _Objective(n, b1, b2, grid)
    x0 = rng.standard_normal(6 * n * n)
    x, fx, sweeps = _ascend(f, x0, budget)
    return index, fx, x, f.evaluations, sweeps


def search(n, b_pair=None, restarts=DEFAULT_RESTARTS, seed=0, budget=None, *,
           grid=SEARCH_GRID, fine_grid=CERTIFY_GRID, workers=1, allow_scalar=False):
    """Look for ``A_1, A_2, A_3`` (``n x n``) making the amplified Parrott map expansive.

    Each restart draws a seeded random start and runs coordinate ascent on the
    uncertified ratio.  The best restart (lowest index on ties) is rescaled so
    that its certified right side is 1, then re-certified on ``fine_grid``
    with a fresh witness for the left side.  The returned certificate is the
    best found whether or not it shows a violation.

    ``budget`` caps the total number of objective evaluations and is split
    evenly between restarts, so results do not depend on ``workers``.
    """
    if n < 2 and not (allow_scalar and n == 1):
        raise ValueError("n must be >= 2")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    b1, b2 = pauli_pair() if b_pair is None else b_pair
    parrott_triple(b1, b2)  # validates the pair
    b1 = check_matrix(b1, square=True)
    b2 = check_matrix(b2, square=True)
    budget = restarts * EVALS_PER_RESTART if budget is None else int(budget)
    per_restart = max(1, budget // restarts)

    start = time.perf_counter()
    jobs = [(n, b1, b2, grid, seed, i, per_restart) for i in range(restarts)]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_restart, jobs, chunksize=max(1, restarts // (4 * workers))))
    else:
        results = [_run_restart(job) for job in jobs]

    best = results[0]
    for res in results[1:]:
        if res[1] > best[1]:
            best = res
    index, ratio, x, _, _ = best
    a = _Objective(n, b1, b2, grid).unpack(x)

    scale = rhs_norm(*a, grid=fine_grid, refine=False).certified_upper
    a = a / scale
    rhs = rhs_norm(*a, grid=fine_grid, refine=True)
    _, witness = lhs_norm(*a, b1, b2)
    lhs = lower_bound_norm(assemble_lhs(*a, b1, b2), witness)

    meta = {
        "restarts": restarts,
        "budget": budget,
        "evaluations": int(sum(r[3] for r in results)),
        "sweeps": int(sum(r[4] for r in results)),
        "best_restart": int(index),
        "search_ratio": float(ratio),
        "search_grid": int(grid),
        "fine_grid": int(fine_grid),
    }
    timing = {"wall_time_s": time.perf_counter() - start, "created": time.strftime("%Y-%m-%dT%H:%M:%S")}
    return GapCertificate(a[0], a[1], a[2], b1, b2, witness, lhs, rhs, int(seed), meta, timing)


def search_escalating(n_values=N_SCHEDULE, b_pair=None, restarts=DEFAULT_RESTARTS, seed=0,
                      budget=None, **kwargs):
    """Run :func:`search` for each ``n`` in turn, stopping at the first violation.

    Returns the certificate of the first violating ``n``, or else the one with
    the best certified ratio.
    """
    best = None
    for n in n_values:
        cert = search(n, b_pair, restarts, seed, budget, **kwargs)
        if cert.violation:
            return cert
        if best is None or cert.ratio_lower > best.ratio_lower:
            best = cert
    return best


def default_workers():
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


# -- assembly ----------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    tuple: object
    pencil: MatrixPolynomial
    operator_norm: float
    polydisk: TorusSupResult
    lhs_lower: float

    @property
    def ratio(self):
        return self.operator_norm / self.polydisk.certified_upper


def assemble_counterexample(cert, fine_grid=CERTIFY_GRID, tol=1e-10):
    """Turn a violating certificate into ``(T, L)`` with ``|L(T)| > max |L|``.

    Raises
    ------
    CertificateError
        If the certificate does not certify a violation, or the reassembled
        quantities contradict it.
    """
    from .linalg import op_norm

    verdict = certify(cert, fine_grid)
    if not verdict.violation:
        raise CertificateError("certificate does not certify a violation")
    tup = parrott_triple(cert.b1, cert.b2)
    report = validate(tup)
    if not report.accepted:
        raise CertificateError(f"Parrott triple failed validation: {report.summary()}")
    pencil = linear_pencil([cert.a1, cert.a2, cert.a3])
    lt = eval_tuple(pencil, tup)
    n, d = cert.n, cert.b1.shape[0]
    blocks = lt.reshape(n, 2 * d, n, 2 * d)
    if np.any(blocks[:, :d, :, :]) or np.any(blocks[:, :, :, d:]):
        raise CertificateError("L(T) has non-zero entries outside the lower-left blocks")
    lt_norm = op_norm(lt)
    if lt_norm < verdict.lhs_lower - tol:
        raise CertificateError(f"|L(T)| = {lt_norm!r} is below the certified lower bound {verdict.lhs_lower!r}")
    poly = polydisk_sup(pencil, fine_grid, refine=True, reduce_homogeneous=True)
    if not lt_norm > poly.certified_upper:
        raise CertificateError("reassembled pencil does not violate the inequality")
    return Counterexample(tup, pencil, lt_norm, poly, verdict.lhs_lower)
