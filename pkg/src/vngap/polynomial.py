"""Matrix-valued polynomials ``P(z) = sum_t A_t z^t`` in ``N`` variables.

Two evaluation semantics are provided: at a scalar point ``z`` in ``C^N``
(:func:`eval_scalar`) and at a tuple of operators (:func:`eval_tuple`), where
``z^t`` becomes ``T_1^{t_1} ... T_N^{t_N}`` and the coefficient enters through
a Kronecker product.
"""

from collections.abc import Mapping

import numpy as np

from ._validation import check_matrix, check_vector
from .exceptions import DegenerateInput, DimensionMismatch, InvalidTuple

POLY_SCHEMA = "vn-poly/1"


def _multi_index(t, num_vars):
    t = tuple(int(k) for k in t)
    if len(t) != num_vars:
        raise DimensionMismatch(f"multi-index {t} does not have {num_vars} components")
    if any(k < 0 for k in t):
        raise ValueError(f"multi-index {t} has a negative component")
    return t


class MatrixPolynomial:
    """Immutable polynomial with ``n x n`` complex matrix coefficients.

    Parameters
    ----------
    terms : mapping
        Multi-index (sequence of ``num_vars`` non-negative ints) to coefficient.
        Exactly-zero coefficients are dropped; repeated indices are summed.
    num_vars, coeff_dim : int, optional
        Required when ``terms`` is empty, otherwise inferred.
    """

    __slots__ = ("_terms", "num_vars", "coeff_dim")

    def __init__(self, terms, num_vars=None, coeff_dim=None):
        items = list(terms.items()) if isinstance(terms, Mapping) else list(terms)
        if num_vars is None:
            if not items:
                raise DegenerateInput("num_vars is required for an empty polynomial")
            num_vars = len(tuple(items[0][0]))
        if num_vars < 1:
            raise ValueError("num_vars must be >= 1")
        acc = {}
        for t, coeff in items:
            t = _multi_index(t, num_vars)
            coeff = check_matrix(coeff, square=True, name=f"coefficient {t}")
            if coeff_dim is None:
                coeff_dim = coeff.shape[0]
            if coeff.shape != (coeff_dim, coeff_dim):
                raise DimensionMismatch(
                    f"coefficient {t} has shape {coeff.shape}, expected {(coeff_dim, coeff_dim)}")
            acc[t] = acc[t] + coeff if t in acc else coeff
        if coeff_dim is None:
            raise DegenerateInput("coeff_dim is required for an empty polynomial")
        canon = {}
        for t in sorted(acc):
            if np.any(acc[t]):
                acc[t].setflags(write=False)
                canon[t] = acc[t]
        self._terms = canon
        self.num_vars = int(num_vars)
        self.coeff_dim = int(coeff_dim)

    @property
    def terms(self):
        """Read-only view of the ``{multi_index: coefficient}`` map, sorted by index."""
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def is_zero(self):
        return not self._terms

    def __repr__(self):
        return (f"MatrixPolynomial(num_vars={self.num_vars}, coeff_dim={self.coeff_dim}, "
                f"terms={list(self._terms)})")

    def __eq__(self, other):
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return (self.num_vars == other.num_vars and self.coeff_dim == other.coeff_dim
                and self._terms.keys() == other._terms.keys()
                and all(np.array_equal(c, other._terms[t]) for t, c in self._terms.items()))

    __hash__ = None

    def _check_compatible(self, other):
        if (self.num_vars, self.coeff_dim) != (other.num_vars, other.coeff_dim):
            raise DimensionMismatch("polynomials differ in num_vars or coeff_dim")

    def __add__(self, other):
        self._check_compatible(other)
        return MatrixPolynomial(list(self) + list(other), self.num_vars, self.coeff_dim)

    def __mul__(self, scalar):
        return MatrixPolynomial([(t, complex(scalar) * c) for t, c in self],
                                self.num_vars, self.coeff_dim)

    __rmul__ = __mul__

    def __sub__(self, other):
        return self + (-1) * other

    def degree(self):
        return degree(self)

    def is_homogeneous_linear(self):
        return is_homogeneous_linear(self)

    def to_dict(self):
        return {
            "schema": POLY_SCHEMA,
            "num_vars": self.num_vars,
            "coeff_dim": self.coeff_dim,
            "terms": [
                {"multi_index": list(t), "coeff_real": c.real.tolist(), "coeff_imag": c.imag.tolist()}
                for t, c in self
            ],
        }

    @classmethod
    def from_dict(cls, data):
        if data.get("schema", POLY_SCHEMA) != POLY_SCHEMA:
            raise ValueError(f"unsupported polynomial schema {data.get('schema')!r}")
        terms = [
            (term["multi_index"],
             np.asarray(term["coeff_real"], dtype=float) + 1j * np.asarray(term["coeff_imag"], dtype=float))
            for term in data["terms"]
        ]
        return cls(terms, num_vars=int(data["num_vars"]), coeff_dim=int(data["coeff_dim"]))


def linear_pencil(coeffs):
    """Homogeneous pencil ``A_1 z_1 + ... + A_N z_N`` from ``N`` coefficients."""
    coeffs = [check_matrix(c, square=True) for c in coeffs]
    if not coeffs:
        raise DegenerateInput("empty coefficient list")
    dim = coeffs[0].shape[0]
    num_vars = len(coeffs)
    terms = []
    for k, c in enumerate(coeffs):
        if c.shape != (dim, dim):
            raise DimensionMismatch("pencil coefficients must share one square shape")
        terms.append((tuple(int(j == k) for j in range(num_vars)), c))
    p = MatrixPolynomial(terms, num_vars=num_vars, coeff_dim=dim)
    if p.is_zero():
        raise DegenerateInput("all pencil coefficients are zero")
    return p


def degree(p):
    if p.is_zero():
        raise DegenerateInput("the zero polynomial has no degree")
    return max(sum(t) for t, _ in p)


def is_homogeneous_linear(p):
    return not p.is_zero() and all(sum(t) == 1 for t, _ in p)


def eval_scalar(p, z):
    """Evaluate ``P`` at a point of ``C^N``; returns an ``n x n`` matrix."""
    z = check_vector(z, size=p.num_vars, name="z")
    out = np.zeros((p.coeff_dim, p.coeff_dim), dtype=np.complex128)
    for t, coeff in p:
        out += coeff * np.prod(z ** np.asarray(t))
    return out


def monomial(operators, t):
    """``T_1^{t_1} ... T_N^{t_N}``, multiplied in fixed variable order."""
    dim = operators[0].shape[0]
    out = np.eye(dim, dtype=np.complex128)
    for op, k in zip(operators, t):
        if k:
            out = out @ np.linalg.matrix_power(op, k)
    return out


def eval_tuple(p, tup, *, check=True):
    """Evaluate ``P(T) = sum_t A_t (x) T^t`` on a :class:`~vngap.tuples.ContractionTuple`.

    The tuple is validated against its own tolerances first unless ``check``
    is false.
    """
    from .tuples import validate

    if p.num_vars != tup.num_operators:
        raise DimensionMismatch(
            f"polynomial has {p.num_vars} variables but tuple has {tup.num_operators} operators")
    if check:
        report = validate(tup)
        if not report.accepted:
            raise InvalidTuple(report.summary())
    size = p.coeff_dim * tup.dim
    out = np.zeros((size, size), dtype=np.complex128)
    for t, coeff in p:
        out += np.kron(coeff, monomial(tup.operators, t))
    return out
