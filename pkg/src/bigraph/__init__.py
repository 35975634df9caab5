"""Numerical machinery for the cubic fourth-order Schrodinger equation on star graphs.

Subpackages cover the vertex-coupling matrix algebra, Riemann-Liouville
fractional operators on sampled signals, the oscillatory forcing kernel and
boundary forcing operators, a conservative time-domain simulator, and a
reproducible command-line front end.
"""

__version__ = "0.1.0"

from . import errors
from .fractional import SampledSignal, rl_derivative, rl_integral
from .vertex import (
    CANONICAL_LAMBDA,
    CouplingMatrix,
    LambdaAssignment,
    NormalizedMatrix,
    VertexType,
    boundary_trace_coefficient,
    build_coupling_matrix,
    build_normalized_matrix,
    certify_invertible,
    determinant_block,
    determinant_lu,
    normalized_coefficients,
    reduced_certificates,
    solve_gamma,
    trace_coefficients,
    universal_constant,
)

__all__ = [
    "errors",
    "SampledSignal",
    "rl_integral",
    "rl_derivative",
    "VertexType",
    "LambdaAssignment",
    "CouplingMatrix",
    "NormalizedMatrix",
    "CANONICAL_LAMBDA",
    "universal_constant",
    "normalized_coefficients",
    "trace_coefficients",
    "boundary_trace_coefficient",
    "build_coupling_matrix",
    "build_normalized_matrix",
    "determinant_lu",
    "determinant_block",
    "certify_invertible",
    "solve_gamma",
    "reduced_certificates",
]
