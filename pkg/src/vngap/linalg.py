"""Dense complex linear algebra: Kronecker products and operator norms.

Matrices are plain ``numpy`` complex128 arrays.  The operator norm used for
every certificate-relevant quantity is computed by power iteration on the
Gram matrix ``m^H m``; :func:`lower_bound_norm` gives the iteration-free
lower bound ``|m v|`` used when auditing certificates.
"""

import numpy as np

from ._validation import check_matrix, check_same_shape, check_unit_vector
from .exceptions import DimensionMismatch, NonConvergence

REL_TOL = 1e-14
MAX_ITER = 20_000
MAX_RESTARTS = 3
ALGEBRAIC_TOL = 1e-10
PROPERTY_TOL = 1e-8


def kron(a, b):
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    a = check_matrix(a, name="a")
    b = check_matrix(b, name="b")
    return np.kron(a, b)


def _start_vector(size):
    # all-ones plus a fixed, non-symmetric perturbation so that the start is
    # not orthogonal to structured singular subspaces
    k = np.arange(size, dtype=float)
    v = np.ones(size, dtype=np.complex128) + 0.1 * np.sin(1.0 + 2.0 * k) + 0.05j * np.cos(3.0 * k + 0.5)
    return v / np.linalg.norm(v)


def _power_iterate(gram, v, rel_tol, max_iter):
    """Run power iteration from ``v``; return (vector, iterations, converged)."""
    rq_prev = None
    for it in range(1, max_iter + 1):
        w = gram @ v
        rq = float(np.real(np.vdot(v, w)))
        wn = np.linalg.norm(w)
        if wn == 0.0:
            return v, it, False
        v = w / wn
        if rq_prev is not None and abs(rq - rq_prev) <= rel_tol * abs(rq):
            return v, it, True
        rq_prev = rq
    return v, max_iter, False


def top_singular_pair(m, *, rel_tol=REL_TOL, max_iter=MAX_ITER, max_restarts=MAX_RESTARTS):
    """Largest singular value of ``m`` and a unit right-singular vector.

    The returned value is exactly ``|m v|`` for the returned ``v``, so it is
    never above the true norm beyond rounding.

    Raises
    ------
    NonConvergence
        If the Rayleigh quotient has not settled after ``max_iter`` steps
        from the deterministic start and from ``max_restarts`` seeded
        random starts.
    """
    m = check_matrix(m, name="m")
    cols = m.shape[1]
    scale = float(np.max(np.abs(m)))
    if scale == 0.0:
        return 0.0, _start_vector(cols)
    # normalise first so the Gram matrix cannot under- or overflow
    ms = m / scale
    gram = ms.conj().T @ ms

    v = _start_vector(cols)
    rng = np.random.default_rng(0)
    total = 0
    for attempt in range(max_restarts + 1):
        v, used, ok = _power_iterate(gram, v, rel_tol, max_iter)
        total += used
        if ok:
            return float(np.linalg.norm(ms @ v)) * scale, v
        v = rng.standard_normal(cols) + 1j * rng.standard_normal(cols)
        v /= np.linalg.norm(v)
    raise NonConvergence(total)


def op_norm(m, **kwargs):
    """Operator (spectral) norm of ``m``; see :func:`top_singular_pair`."""
    return top_singular_pair(m, **kwargs)[0]


def lower_bound_norm(m, v, *, tol=1e-12):
    """Return ``|m v|`` for a unit vector ``v``: a lower bound on ``op_norm(m)``."""
    m = check_matrix(m, name="m")
    v = check_unit_vector(v, size=m.shape[1], tol=tol, name="v")
    return float(np.linalg.norm(m @ v))


def is_contraction(m, tol=ALGEBRAIC_TOL):
    m = check_matrix(m, square=True)
    return op_norm(m) <= 1.0 + tol


def is_unitary(m, tol=ALGEBRAIC_TOL):
    m = check_matrix(m, square=True)
    defect = m.conj().T @ m - np.eye(m.shape[0])
    return op_norm(defect) <= tol


def commutator_norm(a, b):
    a = check_matrix(a, square=True, name="a")
    b = check_matrix(b, square=True, name="b")
    check_same_shape(a, b)
    return op_norm(a @ b - b @ a)


def batch_spectral_norm(stack):
    """Spectral norms of a stack of matrices with shape ``(..., r, c)``.

    Used by the torus scans, where millions of small norms are needed.
    1x1 and 2x2 blocks use closed forms; larger ones go through the
    Hermitian eigensolver on the Gram matrix.
    """
    stack = np.asarray(stack)
    r, c = stack.shape[-2:]
    if r == 1 and c == 1:
        return np.abs(stack[..., 0, 0])
    if r == 2 and c == 2:
        a, b = stack[..., 0, 0], stack[..., 0, 1]
        cc, d = stack[..., 1, 0], stack[..., 1, 1]
        # largest eigenvalue of the Gram matrix [[p, q], [q*, s]]; the square
        # root holds a sum of squares, so near-equal singular values stay accurate
        p = (a * a.conj() + cc * cc.conj()).real
        s = (b * b.conj() + d * d.conj()).real
        q = a.conj() * b + cc.conj() * d
        half = 0.5 * (p - s)
        return np.sqrt(0.5 * (p + s) + np.sqrt(half * half + (q * q.conj()).real))
    if r < c:
        gram = stack @ np.conj(np.swapaxes(stack, -1, -2))
    else:
        gram = np.conj(np.swapaxes(stack, -1, -2)) @ stack
    top = np.linalg.eigvalsh(gram)[..., -1]
    return np.sqrt(np.maximum(top, 0.0))


def require_square_same(mats):
    mats = [check_matrix(m, square=True) for m in mats]
    for m in mats[1:]:
        if m.shape != mats[0].shape:
            raise DimensionMismatch("all matrices must share one square shape")
    return mats
