"""Input validation helpers, in the spirit of ``sklearn.utils.validation``."""

import numpy as np

from .exceptions import DimensionMismatch

UNIT_TOL = 1e-12


def check_matrix(m, *, square=False, name="matrix"):
    """Return ``m`` as a finite, non-empty 2-D complex128 array.

    A fresh array is always returned so callers may keep it without worrying
    about later mutation of the argument.
    """
    arr = np.array(m, dtype=np.complex128, copy=True)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionMismatch(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {arr.shape}")
    return arr


def check_vector(v, *, size=None, name="vector"):
    arr = np.array(v, dtype=np.complex128, copy=True).reshape(-1)
    if arr.size == 0:
        raise DimensionMismatch(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    if size is not None and arr.size != size:
        raise DimensionMismatch(f"{name} has length {arr.size}, expected {size}")
    return arr


def check_unit_vector(v, *, size=None, tol=UNIT_TOL, name="vector"):
    """Like :func:`check_vector` but also insists on ``|v| = 1`` within ``tol``."""
    arr = check_vector(v, size=size, name=name)
    norm = np.linalg.norm(arr)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"{name} is not a unit vector (norm {norm!r})")
    return arr


def check_same_shape(a, b):
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
