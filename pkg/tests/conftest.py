import numpy as np
import pytest


def random_matrix(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary(rng, dim):
    q, r = np.linalg.qr(random_matrix(rng, dim))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def closed_form_top_singular_2x2(m):
    """Largest root of the characteristic quadratic of the Gram matrix m^H m."""
    g = m.conj().T @ m
    tr = (g[0, 0] + g[1, 1]).real
    det = (g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]).real
    return np.sqrt((tr + np.sqrt(max(tr * tr - 4 * det, 0.0))) / 2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
