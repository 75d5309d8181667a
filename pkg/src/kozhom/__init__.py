"""Exact supports of DG modules over Koszul complexes over prime fields."""
from .field import DEFAULT_P, FieldElement, matrix_kernel, matrix_rank
from .poly import Poly, PolyMatrix, PolyRing, poly_eval_at_origin
from .parser import ParseError, parse_polynomial
from .dgmodule import (
    AxiomReport,
    ClosedFiberModuleData,
    DGEModuleData,
    FreeComplex,
    HomComplex,
    RingSpec,
    ShapeError,
    hom_complex,
    reduce_at_origin,
    residue_field_datum,
    verify_dg_axioms,
)
from .families import (
    build_koszul,
    codepth2_family,
    codepth3_family,
    jorgensen_family,
    residue_field_resolution,
    xy_yz_resolution,
)

__version__ = "0.1.0"
