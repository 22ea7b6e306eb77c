"""JSON encoding helpers shared by certificates, tuples and reports."""

import hashlib
import json

import numpy as np


def matrix_to_json(m):
    """Nested rows of ``[re, im]`` pairs."""
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def matrix_from_json(data):
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValueError("matrix must be a nested array of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def vector_to_json(v):
    return [[float(x.real), float(x.imag)] for x in np.asarray(v, dtype=np.complex128).reshape(-1)]


def vector_from_json(data):
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[-1] != 2:
        raise ValueError("vector must be an array of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def canonical_json(obj):
    # json emits repr() floats, which round-trip exactly
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def digest(obj):
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


def dump(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True, allow_nan=False)
        fh.write("\n")


def load(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
