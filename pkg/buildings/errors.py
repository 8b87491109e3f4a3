"""
Exceptions raised by the buildings package.

Every error carries a machine-readable ``code`` and, where one exists, a finite
``witness`` (charts, points, constraints) that reproduces the failure.
"""
from typing import Any, Optional


class BuildingError(ValueError):
    """Base class for all domain errors."""

    code = "domain_error"
    exit_code = 1

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_dict(self) -> dict:
        return {"error": self.code, "message": self.message, "witness": self.witness}


class RankMismatchError(BuildingError):
    code = "rank_mismatch"


class MorphismError(BuildingError):
    code = "invalid_morphism"


class UnsupportedRootSystemError(BuildingError):
    code = "unsupported_root_system"


class NotARootError(BuildingError):
    code = "not_a_root"


class EmptyInputError(BuildingError):
    code = "empty_input"


class PointOutsideError(BuildingError):
    """A base point does not satisfy the constraints it should."""

    code = "point_outside"


class PointInsideError(BuildingError):
    code = "point_inside"


class TypeMismatchError(BuildingError):
    code = "type_mismatch"


class UnknownChartError(BuildingError):
    code = "unknown_chart"


class NotInChartError(BuildingError):
    code = "not_in_chart"


class NoCommonChartError(BuildingError):
    code = "no_common_chart"


class NoChartContainingGermAndPointError(BuildingError):
    code = "no_chart_containing_germ_and_point"


class OrbitCapExceededError(BuildingError):
    code = "orbit_cap_exceeded"


class NotFiniteGroupError(BuildingError):
    code = "not_finite_group"


class UnsupportedComplexClassError(BuildingError):
    code = "unsupported_complex_class"


class ParseError(BuildingError):
    code = "parse_error"


class ValidationError(BuildingError):
    """A presentation violates the building axioms."""

    code = "validation_failed"
    exit_code = 2


class ConvexityViolation(ValidationError):
    code = "convexity_violation"


class CocycleViolation(ValidationError):
    code = "cocycle_violation"


class TransitionViolation(ValidationError):
    code = "transition_violation"


class InconsistentGluing(ValidationError):
    code = "inconsistent_gluing"


class DanglingChart(ValidationError):
    code = "dangling_chart"


class EmptyGluing(ValidationError):
    code = "empty_gluing"


class GeneratorViolation(ValidationError):
    code = "generator_violation"
