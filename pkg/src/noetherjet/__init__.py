"""Exact jet-space calculus engine for the conservation laws of the
critical Kohn-Laplace equation on the Heisenberg group."""

from .algebra import (
    DEFAULT_MAX_ORDER,
    Expr,
    JetAlgebraError,
    JetVar,
    MissingAssignmentError,
    Monomial,
    OrderOverflowError,
)
from .calculus import (
    FluxVector,
    OrderMismatchError,
    PointSymmetryViolation,
    ProlongedField,
    SymmetryRecord,
    VectorField,
    apply_prolonged,
    characteristic,
    divergence,
    euler_operator,
    lie_bracket,
    prolong,
    total_derivative,
)
from .parsing import (
    ParseError,
    PointSymmetryError,
    format_symmetry_file,
    parse_expr,
    parse_symmetry_file,
    print_expr,
)
from .verifier import (
    CATALOG_NAMES,
    NotInSpanError,
    UnknownSymmetryError,
    VerificationReport,
    bracket_table,
    catalog,
    catalog_record,
    divergence_symmetry_defect,
    equation_expr,
    flux_equivalent,
    lagrangian_expr,
    noether_flux,
    on_shell_reduce,
    verify_record,
    verify_symmetry,
)

__version__ = "0.1.0"

__all__ = [
    "CATALOG_NAMES",
    "DEFAULT_MAX_ORDER",
    "Expr",
    "FluxVector",
    "JetAlgebraError",
    "JetVar",
    "MissingAssignmentError",
    "Monomial",
    "NotInSpanError",
    "OrderMismatchError",
    "OrderOverflowError",
    "ParseError",
    "PointSymmetryError",
    "PointSymmetryViolation",
    "ProlongedField",
    "SymmetryRecord",
    "UnknownSymmetryError",
    "VectorField",
    "VerificationReport",
    "apply_prolonged",
    "bracket_table",
    "catalog",
    "catalog_record",
    "characteristic",
    "divergence",
    "divergence_symmetry_defect",
    "equation_expr",
    "euler_operator",
    "flux_equivalent",
    "format_symmetry_file",
    "lagrangian_expr",
    "lie_bracket",
    "noether_flux",
    "on_shell_reduce",
    "parse_expr",
    "parse_symmetry_file",
    "print_expr",
    "prolong",
    "total_derivative",
    "verify_record",
    "verify_symmetry",
]
