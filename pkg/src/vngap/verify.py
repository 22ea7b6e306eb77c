"""The generalized von Neumann inequality ``|P(T)| <= max_polydisk |P|`` and
property suites for the regimes where it is known to hold:

* scalar affine ``a_0 + sum a_k z_k`` with arbitrary (even non-commuting)
  contractions,
* one contraction and any matrix polynomial,
* two commuting contractions and any matrix polynomial.

The right side is always the *certified upper* bound, so a reported failure
cannot come from under-estimating the polydisk sup.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import serialization as ser
from .exceptions import DegenerateInput, DimensionMismatch, InvalidTuple
from .linalg import op_norm
from .norms import polydisk_sup
from .polynomial import MatrixPolynomial, eval_tuple
from .tuples import ContractionTuple, random_commuting_tuple, random_contraction, validate

_DEFAULT_GRIDS = {1: 4096, 2: 256, 3: 64, 4: 24}


def default_grid(num_vars):
    """Grid size per angle keeping the scan near 2**18 points or fewer."""
    if num_vars in _DEFAULT_GRIDS:
        return _DEFAULT_GRIDS[num_vars]
    return max(4, int(2 ** (18 / num_vars)))


@dataclass(frozen=True)
class InequalityReport:
    lhs: float
    rhs: float
    tol: float
    digest: str

    @property
    def ratio(self):
        return self.lhs / self.rhs

    @property
    def holds(self):
        return self.ratio <= 1.0 + self.tol

    def to_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio, "holds": self.holds,
                "tol": self.tol, "digest": self.digest}


def check_inequality(p, t, tol=1e-8, grid=None, *, reduce_homogeneous=True):
    """Compare ``|P(T)|`` with the certified polydisk sup of ``P``.

    Homogeneous linear pencils are phase-reduced before the torus scan
    unless ``reduce_homogeneous`` is false.

    Raises
    ------
    InvalidTuple
        If ``t`` fails :func:`~vngap.tuples.validate`.
    DegenerateInput
        For the zero polynomial.
    """
    if p.is_zero():
        raise DegenerateInput("zero polynomial")
    if p.num_vars != t.num_operators:
        raise DimensionMismatch(f"polynomial has {p.num_vars} variables, tuple has {t.num_operators}")
    report = validate(t)
    if not report.accepted:
        raise InvalidTuple(report.summary())
    grid = default_grid(p.num_vars) if grid is None else grid
    lhs = op_norm(eval_tuple(p, t, check=False))
    rhs = polydisk_sup(p, grid, refine=False, reduce_homogeneous=reduce_homogeneous).certified_upper
    key = ser.digest({"polynomial": p.to_dict(), "tuple": t.to_dict()})
    return InequalityReport(lhs, rhs, float(tol), key)


@dataclass
class SuiteReport:
    name: str
    trials: int
    seed: int
    tol: float
    max_ratio: float = 0.0
    failures: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self):
        return not self.failures

    def to_dict(self):
        return {"name": self.name, "trials": self.trials, "seed": self.seed, "tol": self.tol,
                "max_ratio": self.max_ratio, "passed": self.passed, "failures": self.failures,
                "elapsed_s": self.elapsed}

    def summary(self):
        status = "PASS" if self.passed else f"FAIL ({len(self.failures)} trials)"
        return (f"{self.name}: {status}  trials={self.trials} seed={self.seed} "
                f"max_ratio={self.max_ratio:.12f} tol={self.tol:g} time={self.elapsed:.1f}s")


def trial_rng(seed, trial):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(trial)]))


def _complex_square(rng, shape):
    return rng.uniform(-1, 1, shape) + 1j * rng.uniform(-1, 1, shape)


def random_scalar_affine(num_vars, rng):
    coeffs = _complex_square(rng, num_vars + 1)
    terms = [((0,) * num_vars, [[coeffs[0]]])]
    terms += [(tuple(int(j == k) for j in range(num_vars)), [[coeffs[k + 1]]]) for k in range(num_vars)]
    return MatrixPolynomial(terms, num_vars=num_vars, coeff_dim=1)


def multi_indices(num_vars, max_degree):
    if num_vars == 1:
        return [(d,) for d in range(max_degree + 1)]
    return [(d,) + rest for d in range(max_degree + 1)
            for rest in multi_indices(num_vars - 1, max_degree - d)]


def random_matrix_polynomial(num_vars, coeff_dim, max_degree, rng):
    """Every multi-index of total degree ``<= max_degree`` with a random coefficient."""
    terms = [(t, _complex_square(rng, (coeff_dim, coeff_dim))) for t in multi_indices(num_vars, max_degree)]
    return MatrixPolynomial(terms, num_vars=num_vars, coeff_dim=coeff_dim)


def _contraction_scale(rng):
    return 1.0 if rng.random() < 0.5 else float(rng.uniform(0.5, 1.0))


def _run_suite(name, trials, seed, tol, make_case):
    report = SuiteReport(name, int(trials), int(seed), float(tol))
    start = time.perf_counter()
    for trial in range(trials):
        p, t = make_case(trial_rng(seed, trial))
        res = check_inequality(p, t, tol)
        report.max_ratio = max(report.max_ratio, res.ratio)
        if not res.holds:
            report.failures.append({
                "trial": trial, "seed": seed, "ratio": res.ratio, "lhs": res.lhs, "rhs": res.rhs,
                "polynomial": p.to_dict(), "tuple": t.to_dict(),
            })
    report.elapsed = time.perf_counter() - start
    return report


def remark1_suite(trials=100, seed=0, tol=1e-8, max_vars=4, max_dim=6):
    """Scalar affine functions of up to ``max_vars`` arbitrary contractions."""
    def case(rng):
        num_vars = int(rng.integers(1, max_vars + 1))
        dim = int(rng.integers(1, max_dim + 1))
        p = random_scalar_affine(num_vars, rng)
        ops = tuple(random_contraction(dim, rng, scale=_contraction_scale(rng)) for _ in range(num_vars))
        return p, ContractionTuple(ops, commutativity_tol=math.inf)

    if trials < 1:
        raise ValueError("trials must be >= 1")
    return _run_suite("remark1", trials, seed, tol, case)


def n1_suite(trials=100, seed=0, tol=1e-6, max_coeff_dim=3, max_degree=5, max_dim=6):
    """Matrix polynomials of a single contraction."""
    def case(rng):
        n = int(rng.integers(1, max_coeff_dim + 1))
        deg = int(rng.integers(1, max_degree + 1))
        dim = int(rng.integers(1, max_dim + 1))
        p = random_matrix_polynomial(1, n, deg, rng)
        t = ContractionTuple((random_contraction(dim, rng, scale=_contraction_scale(rng)),))
        return p, t

    if trials < 1:
        raise ValueError("trials must be >= 1")
    return _run_suite("n1", trials, seed, tol, case)


def ando_suite(trials=100, seed=0, tol=1e-6, max_coeff_dim=2, max_degree=3, max_dim=6):
    """Matrix polynomials of two commuting contractions."""
    def case(rng):
        n = int(rng.integers(1, max_coeff_dim + 1))
        deg = int(rng.integers(1, max_degree + 1))
        dim = int(rng.integers(1, max_dim + 1))
        p = random_matrix_polynomial(2, n, deg, rng)
        t = random_commuting_tuple(2, dim, int(rng.integers(0, 2**31)))
        return p, t

    if trials < 1:
        raise ValueError("trials must be >= 1")
    return _run_suite("ando", trials, seed, tol, case)


SUITES = {"remark1": remark1_suite, "n1": n1_suite, "ando": ando_suite}
