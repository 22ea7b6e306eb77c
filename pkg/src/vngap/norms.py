"""Sup-norms of matrix polynomials over the polydisk, via the torus.

The sup of ``|P(z)|`` over the closed polydisk is attained on the torus
``|z_k| = 1``.  :func:`torus_sup` scans a uniform angular grid and adds a
Lipschitz slack, so that ``certified_upper`` dominates the true sup no matter
where the maximiser sits.  In coordinate ``k`` the angular derivative of
``P(e^{i theta})`` is bounded by ``D_k = sum_t t_k |A_t|``; every torus point
is within half a grid step of a grid point in each coordinate, hence

    sup <= grid_max + (h / 2) * sum_k D_k,      h = 2 pi / grid_points_per_dim.

An optional coordinate-wise golden-section pass improves ``best_value``
(the lower estimate); it never touches the certificate.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateInput, DimensionMismatch
from .linalg import batch_spectral_norm, op_norm
from .polynomial import MatrixPolynomial, is_homogeneous_linear

TWO_PI = 2.0 * math.pi
MIN_GRID = 4
SEARCH_GRID = 64
CERTIFY_GRID = 512
REFINE_TOL = 1e-10
# gains below this relative size are rounding noise, not ascent
_MIN_GAIN = 1e-14
_CHUNK = 1 << 16
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TorusPoint:
    angles: tuple

    def __post_init__(self):
        angles = tuple(float(a) % TWO_PI for a in self.angles)
        object.__setattr__(self, "angles", angles)

    def as_complex(self):
        return np.exp(1j * np.asarray(self.angles))


@dataclass(frozen=True)
class TorusSupResult:
    best_value: float
    best_point: TorusPoint
    certified_upper: float
    grid_step: float
    lipschitz_bound: float
    grid_max: float
    grid_points_per_dim: int
    num_vars: int
    reduction: str = "torus"

    def to_dict(self):
        return {
            "best_value": self.best_value,
            "best_point": list(self.best_point.angles),
            "certified_upper": self.certified_upper,
            "grid_step": self.grid_step,
            "lipschitz_bound": self.lipschitz_bound,
            "grid_max": self.grid_max,
            "grid_points_per_dim": self.grid_points_per_dim,
            "num_vars": self.num_vars,
            "reduction": self.reduction,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            best_value=float(data["best_value"]),
            best_point=TorusPoint(tuple(data["best_point"])),
            certified_upper=float(data["certified_upper"]),
            grid_step=float(data["grid_step"]),
            lipschitz_bound=float(data["lipschitz_bound"]),
            grid_max=float(data["grid_max"]),
            grid_points_per_dim=int(data["grid_points_per_dim"]),
            num_vars=int(data["num_vars"]),
            reduction=str(data.get("reduction", "torus")),
        )


class _TorusFunction:
    """``theta -> |P(e^{i theta})|`` with the coefficients packed for batching."""

    def __init__(self, p):
        items = list(p)
        self.n = p.coeff_dim
        self.exponents = np.array([t for t, _ in items], dtype=float)
        self.coeffs = np.stack([c for _, c in items]).reshape(len(items), -1)

    def values(self, angles):
        phases = np.exp(1j * (angles @ self.exponents.T))
        mats = (phases @ self.coeffs).reshape(-1, self.n, self.n)
        return batch_spectral_norm(mats)

    def __call__(self, theta):
        return float(self.values(np.asarray(theta, dtype=float)[None, :])[0])


def lipschitz_bounds(p):
    """Per-coordinate bounds ``D_k = sum_t t_k |A_t|`` on the angular derivative."""
    out = np.zeros(p.num_vars)
    for t, coeff in p:
        if any(t):
            out += np.asarray(t, dtype=float) * op_norm(coeff)
    return out


def _grid_scan(f, num_vars, points):
    """Return (grid max, angles of the chosen maximiser).

    Values within a relative ``_MIN_GAIN`` of the maximum count as ties and
    the lexicographically smallest grid point among them is chosen, so that
    rounding noise does not decide between exactly equal maxima.
    """
    angles_1d = TWO_PI * np.arange(points) / points
    total = points ** num_vars
    best, best_idx = -1.0, 0
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total))
        multi = np.unravel_index(idx, (points,) * num_vars)
        angles = np.stack([angles_1d[m] for m in multi], axis=-1)
        vals = f.values(angles)
        top = float(vals.max())
        if top > best * (1.0 + _MIN_GAIN):
            j = int(np.argmax(vals >= top * (1.0 - _MIN_GAIN)))
            best_idx = int(idx[j])
        best = max(best, top)
    multi = np.unravel_index(best_idx, (points,) * num_vars)
    return best, np.array([angles_1d[m] for m in multi])


def _golden_max(g, lo, hi, tol):
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = g(c), g(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = g(d)
    return (c, fc) if fc >= fd else (d, fd)


def _refine(f, theta, value, step, tol=REFINE_TOL, max_sweeps=50):
    theta = theta.copy()
    for _ in range(max_sweeps):
        moved = 0.0
        for k in range(theta.size):
            def g(x, k=k):
                trial = theta.copy()
                trial[k] = x
                return f(trial)

            x, fx = _golden_max(g, theta[k] - step, theta[k] + step, tol)
            if fx > value * (1.0 + _MIN_GAIN):
                moved = max(moved, abs(x - theta[k]))
                theta[k], value = x, fx
        if moved < tol:
            break
    return theta, value


def torus_sup(p, grid_points_per_dim=SEARCH_GRID, refine=True):
    """Maximum of ``|P(lambda)|`` over the torus, with a certified upper bound.

    Parameters
    ----------
    p : MatrixPolynomial
        Non-zero polynomial.
    grid_points_per_dim : int
        Uniform grid size per angle, at least 4.  The scan visits
        ``grid_points_per_dim ** num_vars`` points.
    refine : bool
        Run the golden-section ascent from the best grid point.

    Returns
    -------
    TorusSupResult
    """
    if not isinstance(p, MatrixPolynomial):
        raise TypeError("p must be a MatrixPolynomial")
    if p.is_zero():
        raise DegenerateInput("the zero polynomial has no meaningful sup")
    points = int(grid_points_per_dim)
    if points < MIN_GRID:
        raise ValueError(f"grid_points_per_dim must be >= {MIN_GRID}, got {points}")
    f = _TorusFunction(p)
    step = TWO_PI / points
    grid_max, theta = _grid_scan(f, p.num_vars, points)
    lipschitz = float(lipschitz_bounds(p).sum())
    certified = grid_max + 0.5 * step * lipschitz
    value = f(theta)
    if refine:
        theta, value = _refine(f, theta, value, step)
    # the refined value is a lower estimate and cannot legitimately exceed the bound
    value = min(value, certified)
    return TorusSupResult(
        best_value=float(value),
        best_point=TorusPoint(tuple(theta)),
        certified_upper=float(certified),
        grid_step=step,
        lipschitz_bound=lipschitz,
        grid_max=float(grid_max),
        grid_points_per_dim=points,
        num_vars=p.num_vars,
    )


def phase_reduction(pencil):
    """Set ``z_N = 1`` in a homogeneous linear pencil.

    ``A_1 z_1 + ... + A_N z_N`` becomes ``A_1 l_1 + ... + A_{N-1} l_{N-1} + A_N``.
    The torus sups agree because multiplying by the unimodular ``conj(z_N)``
    does not change operator norms.
    """
    if not is_homogeneous_linear(pencil):
        raise ValueError("phase reduction needs a homogeneous linear pencil")
    if pencil.num_vars < 2:
        raise DimensionMismatch("phase reduction needs at least two variables")
    terms = [(t[:-1], c) for t, c in pencil]
    return MatrixPolynomial(terms, num_vars=pencil.num_vars - 1, coeff_dim=pencil.coeff_dim)


def polydisk_sup(p, grid_points_per_dim=SEARCH_GRID, refine=True, reduce_homogeneous=False):
    """Sup of ``|P(z)|`` over the closed polydisk.

    By the maximum principle this is the torus sup, so the work is delegated
    to :func:`torus_sup`.  With ``reduce_homogeneous`` a homogeneous linear
    pencil is first passed through :func:`phase_reduction`, which removes one
    grid dimension; the returned point then carries a trailing angle of 0.
    """
    if reduce_homogeneous and p.num_vars >= 2 and is_homogeneous_linear(p):
        res = torus_sup(phase_reduction(p), grid_points_per_dim, refine)
        return TorusSupResult(
            best_value=res.best_value,
            best_point=TorusPoint(res.best_point.angles + (0.0,)),
            certified_upper=res.certified_upper,
            grid_step=res.grid_step,
            lipschitz_bound=res.lipschitz_bound,
            grid_max=res.grid_max,
            grid_points_per_dim=res.grid_points_per_dim,
            num_vars=p.num_vars,
            reduction="polydisk->torus, phase-reduced (z_N = 1)",
        )
    res = torus_sup(p, grid_points_per_dim, refine)
    return TorusSupResult(**{**res.__dict__, "reduction": "polydisk->torus"})
