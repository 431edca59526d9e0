"""Exact dg-module algebra and the model structure transferred along an adjunction.

The usual entry points are re-exported here; see the submodules for the rest.
"""

from .adjoin import AdjoinResult, HPair, psi, psi_inverse, transfer_along_homotopy
from .adjunction import IdentityInstance, WindowTooSmall, verify_theorem_hypothesis
from .dgcore import PreconditionViolated, cone, homology, is_quasi_iso, lift_through_surjective_qiso
from .exactlin import Q, GradedField, Matrix, PrimeField
from .graded import DgModule, GradedModule, HomogeneousMap, shift_map, shift_module
from .model import (
    NoFillerAvailable,
    StagesExhausted,
    classify,
    factor_cof_trivfib,
    factor_trivcof_fib,
    retract_presentation,
)
from .semifree import SemifreeAlgebra, SemifreeInstance

__all__ = [
    "AdjoinResult", "HPair", "psi", "psi_inverse", "transfer_along_homotopy",
    "IdentityInstance", "WindowTooSmall", "verify_theorem_hypothesis",
    "PreconditionViolated", "cone", "homology", "is_quasi_iso", "lift_through_surjective_qiso",
    "Q", "GradedField", "Matrix", "PrimeField",
    "DgModule", "GradedModule", "HomogeneousMap", "shift_map", "shift_module",
    "NoFillerAvailable", "StagesExhausted", "classify", "factor_cof_trivfib",
    "factor_trivcof_fib", "retract_presentation",
    "SemifreeAlgebra", "SemifreeInstance",
]

__version__ = "0.1.0"
