from typing import Literal as _Literal


ExpressionErrcode = _Literal["syntax", "unknown_identifier", "arity"]
EvaluationErrcode = _Literal["log_domain", "division_by_zero", "not_real"]
GeometryErrcode = _Literal[
    "ray_no_root", "ray_multiple_roots", "collar", "stencil"
]
NumericalErrcode = _Literal["conditioning", "quadrature", "hefer_identity", "t_grid"]
PreconditionErrcode = _Literal[
    "not_convex",
    "not_closed",
    "leray_vanishing",
    "degenerate_gradient",
    "not_strict",
    "normal_form",
    "partition",
    "pair_distance",
    "band_sampling",
    "leray_missing",
    "unsupported_dimension",
    "unsupported_degree",
    "unsupported_coefficients",
]
ConfigErrcode = _Literal[
    "config_syntax", "config_unknown_key", "config_value", "config_experiment"
]

CrlabErrcode = (
    ExpressionErrcode
    | EvaluationErrcode
    | GeometryErrcode
    | NumericalErrcode
    | PreconditionErrcode
    | ConfigErrcode
    | _Literal["unknown"]
)
