"""Refinements of the Schwarz inequality in complex inner-product spaces.

Every inequality is evaluated as a :class:`BoundReport` with both sides,
the gap and tolerance-aware satisfaction and equality flags.
"""

from ._accel import backend_name
from .core import DEFAULT_TOL, CVector, Tolerance, inner, norm, normalize
from .errors import (
    ConsistencyError,
    DimensionMismatchError,
    FormatError,
    ParameterError,
    SchwarzkitError,
    ValidationError,
    ZeroVectorError,
)
from .metrics import AngleKind, AngleValue, TriangleKind, angle, d_p, delta_p, triangle_check
from .ntuple import Family, NTupleReport, Order, basis_max_bound, general_e_bound, mean_bound
from .projections import Projector, apply, make_projector, projection_bound, projection_floor, quadratic_form
from .refinements import (
    MetricParams,
    Mode,
    RSChain,
    det2_bound,
    detp_bound,
    quad_refinement,
    rs_chain,
    schwarz_bound,
)
from .reports import BoundReport

__version__ = "0.1.0"

__all__ = [
    "AngleKind", "AngleValue", "BoundReport", "CVector", "ConsistencyError", "DEFAULT_TOL",
    "DimensionMismatchError", "Family", "FormatError", "MetricParams", "Mode", "NTupleReport", "Order",
    "ParameterError", "Projector", "RSChain", "SchwarzkitError", "Tolerance", "TriangleKind",
    "ValidationError", "ZeroVectorError", "angle", "apply", "backend_name", "basis_max_bound", "d_p",
    "delta_p", "det2_bound", "detp_bound", "general_e_bound", "inner", "make_projector", "mean_bound",
    "norm", "normalize", "projection_bound", "projection_floor", "quad_refinement", "quadratic_form",
    "rs_chain", "schwarz_bound", "triangle_check",
]
