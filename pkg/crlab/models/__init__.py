from .solve import SolveReport, FamilyReport
from .report import Field, Comparison, ReportRow
from .config import ExperimentConfig


__all__ = (
    "SolveReport",
    "FamilyReport",
    "Field",
    "Comparison",
    "ReportRow",
    "ExperimentConfig",
)
