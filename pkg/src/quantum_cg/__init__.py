"""Clebsch-Gordan theory for U_q(sl2), U_q(sl3) and positive representations
of the modular double of U_q(sl(2,R)).

Exact q-arithmetic lives in :mod:`qfield`, :mod:`sl2` and :mod:`sl3`; the
non-compact side (quantum dilogarithm, contour integrals, the core-space
operator calculus and the intertwining kernel) in :mod:`qdilog`,
:mod:`contour` and :mod:`positive`.
"""
from .qfield import QRat, qbinomial, qfactorial, qnumber, qnumber_numeric
from .qdilog import DEFAULT_B, BContext, ComplexVal, PoleError, gb, gb_small, gb_values, sb, sb_values
from .sl2 import cg_coefficient, cg_table, cg_vector, verify_decomposition
from .sl3 import canonical_span, verify_sl3_relations, weyl_dimension
from .contour import ContourError, ContourSpec, QuadratureConfig, integrate

__version__ = "0.1.0"

__all__ = [
    "QRat", "qbinomial", "qfactorial", "qnumber", "qnumber_numeric",
    "DEFAULT_B", "BContext", "ComplexVal", "PoleError", "gb", "gb_small", "gb_values", "sb", "sb_values",
    "cg_coefficient", "cg_table", "cg_vector", "verify_decomposition",
    "canonical_span", "verify_sl3_relations", "weyl_dimension",
    "ContourError", "ContourSpec", "QuadratureConfig", "integrate",
]
