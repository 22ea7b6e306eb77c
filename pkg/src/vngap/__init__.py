"""Constructing and certifying counterexamples to the generalized von Neumann
inequality for linear matrix pencils of three commuting contractions."""

from .estimator import GapSearch
from .exceptions import (CertificateError, DegenerateInput, DimensionMismatch, InvalidTuple,
                         NonConvergence, VonNeumannError)
from .gap import (GapCertificate, assemble_counterexample, certify, lhs_norm, rhs_norm, search,
                  search_escalating)
from .linalg import commutator_norm, is_contraction, is_unitary, kron, lower_bound_norm, op_norm
from .norms import TorusPoint, TorusSupResult, phase_reduction, polydisk_sup, torus_sup
from .polynomial import (MatrixPolynomial, degree, eval_scalar, eval_tuple, is_homogeneous_linear,
                         linear_pencil)
from .tuples import (ContractionTuple, parrott_triple, pauli_pair, random_commuting_tuple,
                     validate)
from .verify import ando_suite, check_inequality, n1_suite, remark1_suite

__version__ = "0.1.0"
