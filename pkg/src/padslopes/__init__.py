"""Exact formal and p-adic slopes of differential operators over the
punctured p-adic disc, and ramification data of small Galois groups."""

from .catalog import ModuleFile, catalog_adjoint_bessel2, catalog_bessel, catalog_exp
from .errors import (
    CertificationError,
    InternalInconsistency,
    ParseError,
    PreconditionError,
    SlopeViolation,
    SlopesError,
)
from .exactnum import Cyclotomic, FiniteField, FqElement, PiScalar, psi_value, vp
from .laurent import AffinePiece, LaurentElement, PiecewiseAffine, Tail, derive, dominance_threshold, gauss_envelope, lmul, ord_x
from .newton import formal_polygon, formal_slopes, hull_thresholds, parametric_polygon, polygon_at, stabilization_threshold
from .ramify import (
    artin_schreier_compose,
    build_semidirect,
    character_table_semidirect,
    classify_quotients,
    jumps_vs_slopes,
    sl2f3,
    swan_and_breaks,
    upper_jumps,
)
from .slopes import compare_slopes, infer_padic, radii_profile, subsidiary_radii
from .twisted import SystemMatrix, TwistedOperator, cyclic_form, expand_theta, tmul

__version__ = "0.1.0"
