"""Exception hierarchy shared by all modules."""


class VonNeumannError(Exception):
    """Base class for errors raised by :mod:`vngap`."""


class DimensionMismatch(VonNeumannError, ValueError):
    """Shapes or arities of the inputs do not agree."""


class DegenerateInput(VonNeumannError, ValueError):
    """Input is mathematically degenerate (zero polynomial, zero pencil...)."""


class NonConvergence(VonNeumannError, RuntimeError):
    """An iterative method hit its iteration cap without converging."""

    def __init__(self, iterations, message=None):
        self.iterations = iterations
        super().__init__(message or f"no convergence after {iterations} iterations")


class InvalidTuple(VonNeumannError, ValueError):
    """An operator tuple violates the contraction or commutativity bounds."""


class CertificateError(VonNeumannError, ValueError):
    """A certificate is malformed or internally inconsistent."""
