"""Exact spectra of k-periodic XY chains and rings in the one-magnon sector."""

from periodic_xy.errors import (
    DegenerateParameters,
    DimensionMismatch,
    MatchFailure,
    NoConvergence,
    NonHermitianInput,
    NonOrthogonalBasis,
    OverflowRisk,
    ParameterError,
    ShapeMismatch,
    SingularShift,
    SpectralError,
)
from periodic_xy.linalg import SymTridiag, hermitian_eig, inverse_tridiag_entry, tridiag_char
from periodic_xy.model import ChainModel, PeriodicParameters, RingModel, load_params
from periodic_xy.solver import EigenSystem, SpectralLine, oracle_eigensystem, solve

__all__ = [
    "ChainModel",
    "DegenerateParameters",
    "DimensionMismatch",
    "EigenSystem",
    "MatchFailure",
    "NoConvergence",
    "NonHermitianInput",
    "NonOrthogonalBasis",
    "OverflowRisk",
    "ParameterError",
    "PeriodicParameters",
    "RingModel",
    "ShapeMismatch",
    "SingularShift",
    "SpectralError",
    "SpectralLine",
    "SymTridiag",
    "hermitian_eig",
    "inverse_tridiag_entry",
    "load_params",
    "oracle_eigensystem",
    "solve",
    "tridiag_char",
]
