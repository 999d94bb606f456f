"""Entanglement of finitely many smeared modes of a free scalar field in its vacuum."""

__version__ = "0.1.0"

from .errors import (CommutatorError, ConfigError, ConvergenceError, DegeneracyError, DomainError,
                     FieldModesError, IRDivergenceError, NoThresholdError, QuadratureError,
                     UnknownExperimentError, UnsupportedConfigurationError)
from .smearing import Family, SmearingSpec, fourier_transform, normalization, overlap, sobolev_norm_sq
from .modes import ModeSpec, Term
from .correlators import CorrelatorKind, FieldParams, correlator
from .gaussian import (Bipartition, GaussianState, build_covariance, entanglement_threshold,
                       entanglement_verdict, log_negativity, min_pt_eigenvalue, mutual_information,
                       partial_transpose, rindler_two_mode, symplectic_spectrum, von_neumann_entropy)
from .geometry import Configuration
