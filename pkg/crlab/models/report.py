from typing import Self, TYPE_CHECKING
from enum import Enum, StrEnum, auto, member
from dataclasses import dataclass
from math import isfinite


if TYPE_CHECKING:
    from crlab.types.common import ExperimentId
    from crlab.types.report import ReportRowDict


__all__ = ("Field", "Comparison", "ReportRow")


def _flag(x) -> bool:
    if isinstance(x, str):
        return x.strip().lower() in ("1", "true", "yes")
    return bool(x)


def _real(x) -> float:
    try:
        return float(x)
    except TypeError:
        # missing values read back from CSV
        return float("nan")


class Field(Enum):
    """CSV columns of a report table and their converters"""

    EXPERIMENT = member(lambda x: str(x))
    T = member(lambda x: float(x))
    RESOLUTION = member(lambda x: int(float(x)))
    METRIC = member(lambda x: str(x))
    VALUE = member(_real)
    TOLERANCE = member(_real)
    PASS = member(_flag)

    @property
    def column(self) -> str:
        return self.name.lower()

    def convert(self, value):
        return self.value(value)


class Comparison(StrEnum):
    """How a metric value is held against its tolerance"""

    BELOW = auto()
    AT_LEAST = auto()
    AT_MOST = auto()

    def holds(self, value: float, tolerance: float) -> bool:
        if not isfinite(value):
            return False
        match self:
            case Comparison.BELOW:
                return value < tolerance
            case Comparison.AT_LEAST:
                return value >= tolerance
            case Comparison.AT_MOST:
                return value <= tolerance


@dataclass(frozen=True, eq=False, slots=True)
class ReportRow:
    """
    One `experiment,t,resolution,metric,value,tolerance,pass` record

    Rows are built with `ReportRow.check`, which decides `passed` from the
    value and the tolerance.

    >>> ReportRow.check("E1", "max_abs_err", 2e-12, 1e-4).passed
    True
    >>> ReportRow.check("E4", "min_slack", -1.0, -1e-9, kind="at_least").passed
    False
    """

    experiment: "ExperimentId"
    t: float
    resolution: int
    metric: str
    value: float
    tolerance: float
    passed: bool

    @classmethod
    def check(
        cls,
        experiment: "ExperimentId",
        metric: str,
        value: float,
        tolerance: float,
        /,
        *,
        t: float = 0.0,
        resolution: int = 0,
        kind: Comparison | str = Comparison.BELOW,
    ) -> Self:
        value = float(value)
        passed = Comparison(kind).holds(value, float(tolerance))
        return cls(experiment, float(t), int(resolution), metric, value, float(tolerance), passed)

    @classmethod
    def from_dict(cls, data: dict) -> Self:
        """Build a row from a CSV record keyed by column names"""
        values = {f.column: f.convert(data[f.column]) for f in Field}
        values["passed"] = values.pop("pass")
        return cls(**values)

    def to_dict(self) -> "ReportRowDict":
        return {
            "experiment": self.experiment,
            "t": self.t,
            "resolution": self.resolution,
            "metric": self.metric,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }

    def to_record(self) -> dict:
        """Row keyed by CSV column names"""
        record = self.to_dict()
        record["pass"] = record.pop("passed")
        return record
