import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vngap.exceptions import DimensionMismatch, NonConvergence
from vngap.linalg import (batch_spectral_norm, commutator_norm, is_contraction, is_unitary, kron,
                          lower_bound_norm, op_norm, top_singular_pair)
from vngap.tuples import pauli_pair

from conftest import closed_form_top_singular_2x2, random_matrix, random_unitary

NILPOTENT = np.array([[0, 2], [0, 0]], dtype=complex)


def test_kron_identity():
    np.testing.assert_array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_block_structure():
    out = kron([[0, 1], [0, 0]], np.eye(2))
    expected = np.zeros((4, 4))
    expected[:2, 2:] = np.eye(2)
    np.testing.assert_array_equal(out, expected)


def test_kron_associative(rng):
    a, b, c = (random_matrix(rng, 2, 3), random_matrix(rng, 3), random_matrix(rng, 2, 1))
    np.testing.assert_allclose(kron(a, kron(b, c)), kron(kron(a, b), c), atol=1e-13)


def test_kron_norm_multiplicative_closed_form(rng):
    for _ in range(20):
        a, b = random_matrix(rng, 2), random_matrix(rng, 2)
        expected = closed_form_top_singular_2x2(a) * closed_form_top_singular_2x2(b)
        assert op_norm(kron(a, b)) == pytest.approx(expected, rel=1e-10)


def test_op_norm_trivial():
    assert op_norm(NILPOTENT) == pytest.approx(2.0, abs=1e-14)
    for n in (1, 3, 7):
        assert op_norm(np.eye(n)) == pytest.approx(1.0, abs=1e-14)
    assert op_norm(np.zeros((3, 3))) == 0.0


def test_op_norm_matches_closed_form(rng):
    for _ in range(50):
        m = random_matrix(rng, 2)
        assert op_norm(m) == pytest.approx(closed_form_top_singular_2x2(m), rel=1e-12)


def test_op_norm_rectangular(rng):
    m = random_matrix(rng, 3, 5)
    assert op_norm(m) == pytest.approx(np.linalg.svd(m, compute_uv=False)[0], rel=1e-10)


def test_op_norm_nonconvergence_is_signalled():
    # nearly equal top singular values cannot settle in 3 steps
    m = np.diag([1.0, 1.0 - 1e-9, 0.5])
    with pytest.raises(NonConvergence) as exc:
        op_norm(m + 1e-3 * np.triu(np.ones((3, 3)), 1), max_iter=3, max_restarts=1)
    assert exc.value.iterations == 6


def test_lower_bound_norm_examples():
    assert lower_bound_norm(np.eye(2), [1, 0]) == 1.0
    assert lower_bound_norm(NILPOTENT, [0, 1]) == 2.0


def test_lower_bound_norm_rejects_non_unit():
    with pytest.raises(ValueError):
        lower_bound_norm(np.eye(2), [1, 1])
    with pytest.raises(DimensionMismatch):
        lower_bound_norm(np.eye(2), [1, 0, 0])


def test_lower_bound_norm_with_top_singular_vector(rng):
    for _ in range(20):
        m = random_matrix(rng, 4)
        value, v = top_singular_pair(m)
        assert lower_bound_norm(m, v) == pytest.approx(op_norm(m), rel=1e-10)
        assert value == pytest.approx(np.linalg.svd(m, compute_uv=False)[0], rel=1e-10)


def test_predicates():
    b1, b2 = pauli_pair()
    assert is_unitary(np.eye(2), 1e-12)
    assert is_unitary(b1) and is_unitary(b2)
    assert not is_unitary(NILPOTENT)
    assert commutator_norm(b1, b2) == pytest.approx(2.0, abs=1e-14)
    assert not is_contraction(NILPOTENT)
    with pytest.raises(DimensionMismatch):
        commutator_norm(np.eye(2), np.eye(3))


def test_scaled_unitary_is_contraction(rng):
    u = random_unitary(rng, 4)
    assert is_contraction(0.5 * u, 1e-10)
    assert op_norm(0.5 * u) == pytest.approx(0.5, abs=1e-12)


def test_rejects_nan():
    with pytest.raises(ValueError):
        op_norm([[np.nan, 0], [0, 1]])


def test_batch_spectral_norm_matches_svd(rng):
    for shape in [(5, 1, 1), (5, 2, 2), (5, 3, 3), (5, 2, 4), (5, 4, 2)]:
        stack = random_matrix(rng, shape[0] * shape[1], shape[2]).reshape(shape)
        np.testing.assert_allclose(batch_spectral_norm(stack),
                                   np.linalg.svd(stack, compute_uv=False)[:, 0], rtol=1e-12)


seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 4)


def _mat(seed, r, c):
    return random_matrix(np.random.default_rng(seed), r, c)


@settings(max_examples=50, deadline=None)
@given(seeds, dims, dims, dims, dims)
def test_kron_multiplicativity_property(seed, r1, c1, r2, c2):
    a, b = _mat(seed, r1, c1), _mat(seed + 1, r2, c2)
    assert op_norm(kron(a, b)) == pytest.approx(op_norm(a) * op_norm(b), rel=1e-9)


@settings(max_examples=50, deadline=None)
@given(seeds, dims, dims)
def test_lower_bound_never_exceeds_norm(seed, r, c):
    rng = np.random.default_rng(seed)
    m = random_matrix(rng, r, c)
    v = random_matrix(rng, c, 1)[:, 0]
    v /= np.linalg.norm(v)
    assert lower_bound_norm(m, v) <= op_norm(m) + 1e-10


@settings(max_examples=50, deadline=None)
@given(seeds, dims)
def test_unitary_invariance(seed, n):
    rng = np.random.default_rng(seed)
    m, u, w = random_matrix(rng, n), random_unitary(rng, n), random_unitary(rng, n)
    assert op_norm(u @ m @ w) == pytest.approx(op_norm(m), rel=1e-9)


@settings(max_examples=50, deadline=None)
@given(seeds, dims, st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False))
def test_homogeneity(seed, n, c):
    m = _mat(seed, n, n)
    assert op_norm(c * m) == pytest.approx(abs(c) * op_norm(m), rel=1e-10, abs=1e-300)
