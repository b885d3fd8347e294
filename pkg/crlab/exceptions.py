from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from crlab.types.error import (
        CrlabErrcode,
        ExpressionErrcode,
        EvaluationErrcode,
        GeometryErrcode,
        NumericalErrcode,
        PreconditionErrcode,
        ConfigErrcode,
    )


UNKNOWN_ERRCODE = "unknown"
UNKNOWN_ERRMSG = "Unknown error"


class CrlabException(Exception):
    """Base crlab exception"""

    code: "CrlabErrcode"
    details: dict | None

    def __init__(
        self,
        /,
        code: str | None = None,
        description: str | None = None,
        *,
        details: Optional[dict] = None,
    ):
        if description is not None:
            description = description.strip(" .")

        super().__init__(description or UNKNOWN_ERRMSG)
        self.code = code or UNKNOWN_ERRCODE
        self.details = details


class ExpressionError(CrlabException):
    """Defining expression could not be parsed"""

    code: "ExpressionErrcode"


class ExpressionSyntaxError(ExpressionError):
    """Malformed expression text"""

    @property
    def offset(self) -> int:
        return (self.details or {}).get("offset", -1)


class UnknownIdentifierError(ExpressionError):
    """Identifier is neither a variable, a function nor a supplied constant"""


class ArityError(ExpressionError):
    """Function called with a wrong number of arguments"""


class EvaluationError(CrlabException):
    """Expression evaluation left the real domain of an operation"""

    code: "EvaluationErrcode"


class GeometryError(CrlabException):
    """Domain geometry does not fit the sampling assumptions"""

    code: "GeometryErrcode"


class RayError(GeometryError):
    """Boundary ray without a sign change"""


class NonStarShapedError(GeometryError):
    """Boundary ray with several sign changes"""


class CollarError(GeometryError):
    """Collar construction failure"""


class StencilError(GeometryError):
    """Finite difference stencil leaves the domain"""


class NumericalError(CrlabException):
    """Numerical construction failed its own residual check"""

    code: "NumericalErrcode"


class ConditioningError(NumericalError):
    """Ill-conditioned linear system"""


class QuadratureError(NumericalError):
    """Quadrature rule could not be set up"""


class HeferIdentityError(NumericalError):
    """Hefer decomposition does not reproduce the support function"""


class FamilyNormError(NumericalError):
    """Parameter grid too coarse for the requested derivative order"""


class PreconditionError(CrlabException):
    """Input violates an operator precondition"""

    code: "PreconditionErrcode"


class NotConvexError(PreconditionError):
    """Defining function is not strictly convex where required"""


class NotClosedError(PreconditionError):
    """Form is not dbar-closed"""


class LerayError(PreconditionError):
    """Leray denominator vanishes on sampled pairs"""


class NormalizationError(PreconditionError):
    """Narasimhan normalization is degenerate at the point"""


class PartitionError(PreconditionError):
    """Partition of unity weight outside its cover"""


class UnsupportedError(PreconditionError):
    """Dimension or form degree not supported"""


class ConfigError(CrlabException):
    """Experiment configuration is invalid"""

    code: "ConfigErrcode"

    @property
    def path(self) -> str | None:
        return (self.details or {}).get("path")


def get_exception_cls(code: str | None = None) -> type[CrlabException]:
    """Get exception class by error code"""
    if code is None or code == UNKNOWN_ERRCODE:
        return CrlabException
    elif code == "syntax":
        return ExpressionSyntaxError
    elif code == "unknown_identifier":
        return UnknownIdentifierError
    elif code == "arity":
        return ArityError
    elif code in ("log_domain", "division_by_zero", "not_real"):
        return EvaluationError
    elif code == "ray_no_root":
        return RayError
    elif code == "ray_multiple_roots":
        return NonStarShapedError
    elif code == "collar":
        return CollarError
    elif code == "stencil":
        return StencilError
    elif code == "conditioning":
        return ConditioningError
    elif code == "quadrature":
        return QuadratureError
    elif code == "hefer_identity":
        return HeferIdentityError
    elif code == "t_grid":
        return FamilyNormError
    elif code == "not_convex":
        return NotConvexError
    elif code == "not_closed":
        return NotClosedError
    elif code == "leray_vanishing":
        return LerayError
    elif code in ("degenerate_gradient", "not_strict", "normal_form"):
        return NormalizationError
    elif code == "partition":
        return PartitionError
    elif code in ("pair_distance", "band_sampling", "leray_missing"):
        return PreconditionError
    elif code.startswith("unsupported"):
        return UnsupportedError
    elif code.startswith("config"):
        return ConfigError
    else:
        return CrlabException


def exception(
    code: str | None = None,
    description: str | None = None,
    *,
    details: Optional[dict] = None,
) -> CrlabException:
    """Create crlab exception instance by error code and description"""
    cls = get_exception_cls(code)
    return cls(code, description, details=details)
