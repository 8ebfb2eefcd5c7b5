"""Exact single-face arrangements of curves and Davenport-Schinzel checks."""
from .ds_core import (
    Sequence,
    collapse,
    ds_report,
    fact1_decompose,
    is_ds,
    is_k_friendly,
    lambda_exact,
    restrict,
)
from .geometry import Curve, CurveSet, validate_general_position
from .arrangement import Arrangement, build
from .face_analysis import boundary_sequence, verify_theorem4
from .generators import generators

__all__ = [
    "Arrangement",
    "Curve",
    "CurveSet",
    "Sequence",
    "boundary_sequence",
    "build",
    "collapse",
    "ds_report",
    "fact1_decompose",
    "generators",
    "is_ds",
    "is_k_friendly",
    "lambda_exact",
    "restrict",
    "validate_general_position",
    "verify_theorem4",
]
