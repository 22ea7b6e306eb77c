"""Tuples of contractions, centrally the Parrott triple.

The Parrott triple lives on ``X (+) X`` and consists of the block operators
``[[0, 0], [C_k, 0]]`` with ``C_1, C_2`` a pair of unitaries and ``C_3 = I``.
Every product ``T_k T_j`` vanishes, so the triple commutes exactly whatever
``C_1, C_2`` are.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import ALGEBRAIC_TOL, commutator_norm, is_unitary, op_norm, require_square_same
from .serialization import matrix_from_json, matrix_to_json

TUPLE_SCHEMA = "vn-tuple/1"


@dataclass(frozen=True)
class ContractionTuple:
    """``N`` operators on one finite-dimensional space plus validation tolerances.

    ``commutativity_tol = inf`` means commutativity is not required, which is
    how non-commuting tuples are fed to the scalar affine checks.
    """

    operators: tuple
    commutativity_tol: float = 1e-8
    contraction_tol: float = ALGEBRAIC_TOL

    def __post_init__(self):
        ops = require_square_same(self.operators)
        for op in ops:
            op.setflags(write=False)
        object.__setattr__(self, "operators", tuple(ops))

    @property
    def num_operators(self):
        return len(self.operators)

    @property
    def dim(self):
        return self.operators[0].shape[0]

    def scaled(self, factor):
        return ContractionTuple(tuple(factor * op for op in self.operators),
                                self.commutativity_tol, self.contraction_tol)

    def padded(self):
        """Append a zero operator (a variable the polynomial need not use)."""
        zero = np.zeros((self.dim, self.dim), dtype=np.complex128)
        return ContractionTuple(self.operators + (zero,), self.commutativity_tol, self.contraction_tol)

    def to_dict(self):
        return {
            "schema": TUPLE_SCHEMA,
            "operators": [matrix_to_json(op) for op in self.operators],
            "commutativity_tol": _encode_tol(self.commutativity_tol),
            "contraction_tol": _encode_tol(self.contraction_tol),
        }

    @classmethod
    def from_dict(cls, data):
        if data.get("schema", TUPLE_SCHEMA) != TUPLE_SCHEMA:
            raise ValueError(f"unsupported tuple schema {data.get('schema')!r}")
        return cls(
            tuple(matrix_from_json(op) for op in data["operators"]),
            commutativity_tol=_decode_tol(data.get("commutativity_tol", 1e-8)),
            contraction_tol=_decode_tol(data.get("contraction_tol", ALGEBRAIC_TOL)),
        )


def _encode_tol(x):
    return None if math.isinf(x) else float(x)


def _decode_tol(x):
    return math.inf if x is None else float(x)


@dataclass(frozen=True)
class ValidationReport:
    norms: tuple
    commutators: dict = field(default_factory=dict)
    contraction_tol: float = ALGEBRAIC_TOL
    commutativity_tol: float = 1e-8

    @property
    def margins(self):
        """``1 - |T_k|`` per operator; negative means the norm bound is exceeded."""
        return tuple(1.0 - v for v in self.norms)

    @property
    def failures(self):
        out = [f"|T_{k + 1}| = {v:.6g} > 1 + {self.contraction_tol:g}"
               for k, v in enumerate(self.norms) if v > 1.0 + self.contraction_tol]
        out += [f"|[T_{k + 1}, T_{j + 1}]| = {v:.6g} > {self.commutativity_tol:g}"
                for (k, j), v in self.commutators.items() if v > self.commutativity_tol]
        return out

    @property
    def accepted(self):
        return not self.failures

    def summary(self):
        return "accepted" if self.accepted else "rejected: " + "; ".join(self.failures)


def validate(tup):
    """Check the contraction and commutativity bounds of ``tup``; never raises."""
    norms = tuple(op_norm(op) for op in tup.operators)
    comms = {}
    if not math.isinf(tup.commutativity_tol):
        for k in range(tup.num_operators):
            for j in range(k + 1, tup.num_operators):
                comms[(k, j)] = commutator_norm(tup.operators[k], tup.operators[j])
    return ValidationReport(norms, comms, tup.contraction_tol, tup.commutativity_tol)


def pauli_pair():
    """The default non-commuting unitary pair ``([[0, 1], [1, 0]], [[1, 0], [0, -1]])``."""
    b1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    b2 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    return b1, b2


def parrott_triple(b1, b2, *, unitary_tol=ALGEBRAIC_TOL):
    """Block triple ``[[0, 0], [C, 0]]`` with ``C`` in ``(b1, b2, I)`` on ``C^{2d}``."""
    b1, b2 = require_square_same([b1, b2])
    d = b1.shape[0]
    if d < 2:
        raise ValueError("the unitaries must act on a space of dimension >= 2")
    for name, b in (("b1", b1), ("b2", b2)):
        if not is_unitary(b, unitary_tol):
            raise ValueError(f"{name} is not unitary within {unitary_tol:g}")
    ops = []
    for c in (b1, b2, np.eye(d, dtype=np.complex128)):
        t = np.zeros((2 * d, 2 * d), dtype=np.complex128)
        t[d:, :d] = c
        ops.append(t)
    return ContractionTuple(tuple(ops), commutativity_tol=0.0)


def _horner(coeffs, s):
    out = np.zeros_like(s)
    eye = np.eye(s.shape[0], dtype=np.complex128)
    for c in coeffs[::-1]:
        out = out @ s + c * eye
    return out


def random_contraction(dim, rng, *, scale=1.0):
    """A random ``dim x dim`` complex matrix with operator norm ``scale``."""
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return m * (scale / op_norm(m))


def random_commuting_tuple(n_vars, dim, seed, *, eps=1e-6, commutativity_tol=1e-8):
    """Commuting contractions ``p_k(S) / |p_k(S)| * (1 - eps)`` for one random ``S``.

    The ``p_k`` are random scalar polynomials of degree at most 3, so the
    operators commute by construction.  Deterministic in ``seed``.
    """
    if n_vars < 1 or dim < 1:
        raise ValueError("n_vars and dim must be >= 1")
    rng = np.random.default_rng(seed)
    s = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2 * dim)
    ops = []
    for _ in range(n_vars):
        deg = int(rng.integers(0, 4))
        coeffs = rng.uniform(-1, 1, deg + 1) + 1j * rng.uniform(-1, 1, deg + 1)
        m = _horner(coeffs, s)
        norm = op_norm(m)
        if norm == 0.0:
            m, norm = np.eye(dim, dtype=np.complex128), 1.0
        ops.append(m * ((1.0 - eps) / norm))
    return ContractionTuple(tuple(ops), commutativity_tol=commutativity_tol)
