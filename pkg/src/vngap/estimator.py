"""scikit-learn style front end to the gap search."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .gap import N_SCHEDULE, certify, search_escalating
from .norms import CERTIFY_GRID, SEARCH_GRID
from .tuples import pauli_pair


class GapSearch(BaseEstimator):
    """Search for a certified violation on the Parrott triple built from ``b_pair``.

    ``fit`` takes no data: the "training" is the search itself.  After
    fitting, ``certificate_`` holds the best :class:`~vngap.gap.GapCertificate`
    and ``verdict_`` its independent re-certification.

    Parameters
    ----------
    n, n_max : int
        Coefficient sizes tried in order ``n, n + 1, ..., n_max``; the first
        size producing a certified violation wins.
    b_pair : "pauli" or (array, array)
        The non-commuting unitaries.
    """

    def __init__(self, n=2, n_max=N_SCHEDULE[-1], restarts=200, budget=None, seed=0,
                 grid=SEARCH_GRID, fine_grid=CERTIFY_GRID, b_pair="pauli", workers=1):
        self.n = n
        self.n_max = n_max
        self.restarts = restarts
        self.budget = budget
        self.seed = seed
        self.grid = grid
        self.fine_grid = fine_grid
        self.b_pair = b_pair
        self.workers = workers

    def _check_params(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.n_max < self.n:
            raise ValueError("n_max must be >= n")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.grid < 4 or self.fine_grid < 4:
            raise ValueError("grid sizes must be >= 4")

    def _b_pair(self):
        if isinstance(self.b_pair, str):
            if self.b_pair != "pauli":
                raise ValueError(f"unknown b_pair {self.b_pair!r}")
            return pauli_pair()
        b1, b2 = self.b_pair
        return np.asarray(b1, dtype=complex), np.asarray(b2, dtype=complex)

    def fit(self, X=None, y=None):
        self._check_params()
        self.certificate_ = search_escalating(
            range(self.n, self.n_max + 1), self._b_pair(), self.restarts, self.seed, self.budget,
            grid=self.grid, fine_grid=self.fine_grid, workers=self.workers)
        self.verdict_ = certify(self.certificate_, self.fine_grid)
        self.n_ = self.certificate_.n
        self.ratio_ = self.verdict_.ratio_lower
        self.violation_ = self.verdict_.violation
        return self

    def score(self, X=None, y=None):
        """Certified ratio ``lhs_lower / certified_upper`` of the best certificate."""
        if not hasattr(self, "verdict_"):
            raise NotFittedError("GapSearch is not fitted yet")
        return self.ratio_
