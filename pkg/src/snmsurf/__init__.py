"""Sectional curvature of translation surfaces under the canonical
semi-symmetric non-metric connection of R^3, with an independent
finite-difference oracle and generators for constant-curvature cylinders."""

__version__ = "0.1.0"

from .jets import DomainError, Jet3, NonFiniteError
from .expr import ExpressionSyntaxError, eval_jet, eval_jet_fd_check, parse_expression, to_text
from .ambient import AmbientField, PlaneSection, cov_deriv, curvature, sectional_curvature_plane, torsion
from .surface import (
    TranslationSurface,
    fundamental_data,
    second_form_equality_check,
    sectional_curvature_closed,
    sectional_curvature_gauss,
    sectional_curvature_printed,
)
from .oracle import OracleConfig, compare, induced_cov_deriv, intrinsic_K_fd
from .profiles import (
    ConstraintError,
    family_from_json,
    first_integral,
    grim_reaper,
    maximal_domain,
    quadrature_profile,
)

__all__ = [
    "__version__",
    "Jet3",
    "DomainError",
    "NonFiniteError",
    "ExpressionSyntaxError",
    "parse_expression",
    "to_text",
    "eval_jet",
    "eval_jet_fd_check",
    "AmbientField",
    "PlaneSection",
    "cov_deriv",
    "torsion",
    "curvature",
    "sectional_curvature_plane",
    "TranslationSurface",
    "fundamental_data",
    "sectional_curvature_closed",
    "sectional_curvature_gauss",
    "sectional_curvature_printed",
    "second_form_equality_check",
    "OracleConfig",
    "induced_cov_deriv",
    "intrinsic_K_fd",
    "compare",
    "ConstraintError",
    "family_from_json",
    "maximal_domain",
    "first_integral",
    "quadrature_profile",
    "grim_reaper",
]
