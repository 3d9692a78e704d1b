"""Exact operator algebra for the four-body harmonic oscillator in squared-distance variables."""

from .diffop import DiffOperator, commutator, matrix_on_basis
from .errors import (BadLimit, ConfigError, FlagViolation, FourBodyError, IdentityFailure, NegativeRoot,
                     NoConvergence, NoFit, NonNormalizable, SingularPoint)
from .geometry import MassConfig
from .oscillator import GaugeParams, SpecialModel, build_delta_rad, build_h_es, forward_spring_map
from .poly import Polynomial

__version__ = "0.1.0"

__all__ = [
    "BadLimit", "ConfigError", "DiffOperator", "FlagViolation", "FourBodyError", "GaugeParams",
    "IdentityFailure", "MassConfig", "NegativeRoot", "NoConvergence", "NoFit", "NonNormalizable",
    "Polynomial", "SingularPoint", "SpecialModel", "build_delta_rad", "build_h_es", "commutator",
    "forward_spring_map", "matrix_on_basis",
]
