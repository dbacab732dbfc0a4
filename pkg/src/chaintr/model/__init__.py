from .chain import (ChainModel, DivisorProfile, FillingData, SchemaError,
                    f_poly, hat_x_sequence, parse_coeff)
from .build import SolverError, build_curve
from .moduli import ModuliReport, ModuliRow, validate_moduli
from .plane import compute_E0

__all__ = [
    "ChainModel", "DivisorProfile", "FillingData", "ModuliReport",
    "ModuliRow", "SchemaError", "SolverError", "build_curve", "compute_E0",
    "f_poly", "hat_x_sequence", "parse_coeff", "validate_moduli",
]
