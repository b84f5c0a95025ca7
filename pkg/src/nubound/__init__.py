"""Certified upper bounds on heat transport in rapidly rotating convection."""

from .core import (
    Constants,
    FlowParameters,
    PiecewiseLinearProfile,
    TestField,
    boundary_layer_profile,
    constants,
    derive_params,
    phi_prime_l2sq,
    profile_derivative_eval,
    profile_eval,
    zero_profile,
)

__version__ = "0.1.0"

__all__ = [
    "Constants",
    "FlowParameters",
    "PiecewiseLinearProfile",
    "TestField",
    "boundary_layer_profile",
    "constants",
    "derive_params",
    "phi_prime_l2sq",
    "profile_derivative_eval",
    "profile_eval",
    "zero_profile",
    "__version__",
]
