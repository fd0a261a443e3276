"""Positive representations of the modular double: operator calculus on the
core space and the Clebsch-Gordan intertwining kernel."""
from .calculus import (CoreFunction, DiffOperator, PositiveRepReport, apply, build_operator, coproduct,
                       verify_positive_rep)
from .kernel import KernelParams, functional_residual, kernel_C, kernel_C_phi, kernel_const, plancherel_density

__all__ = [
    "CoreFunction", "DiffOperator", "PositiveRepReport", "apply", "build_operator", "coproduct",
    "verify_positive_rep", "KernelParams", "functional_residual", "kernel_C", "kernel_C_phi",
    "kernel_const", "plancherel_density",
]
