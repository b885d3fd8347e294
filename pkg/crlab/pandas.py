from typing import Iterable

from pandas import (
    read_csv as pd_read_csv,
    BooleanDtype,
    DataFrame,
    Float64Dtype,
    Int64Dtype,
    StringDtype,
)

from crlab.constants import CSV_COLUMNS
from crlab.models.report import ReportRow

STRING_TYPE = StringDtype()
FLOAT_TYPE = Float64Dtype()
INT_TYPE = Int64Dtype()
BOOL_TYPE = BooleanDtype()

COLUMN_TYPES = {
    "experiment": STRING_TYPE,
    "t": FLOAT_TYPE,
    "resolution": INT_TYPE,
    "metric": STRING_TYPE,
    "value": FLOAT_TYPE,
    "tolerance": FLOAT_TYPE,
    "pass": BOOL_TYPE,
}

FLOAT_FORMAT = "%.17g"


def rows_to_frame(rows: Iterable[ReportRow]) -> DataFrame:
    """Report table with the CSV column order and types"""
    frame = DataFrame.from_records([row.to_record() for row in rows], columns=list(CSV_COLUMNS))
    return frame.astype(COLUMN_TYPES)


def write_report_csv(rows: Iterable[ReportRow], target, **kwargs) -> None:
    """Write rows as `experiment,t,resolution,metric,value,tolerance,pass`"""
    rows_to_frame(rows).to_csv(
        target, index=False, float_format=FLOAT_FORMAT, lineterminator="\n", **kwargs
    )


def read_report_csv(source, **kwargs) -> DataFrame:
    """
    Read a report CSV with the appropriate column types

    Arguments
    ---------

    - `source`: File path or file-like object
    - `**kwargs`: Additional arguments to pass to `pandas.read_csv`
    """
    return pd_read_csv(source, dtype=COLUMN_TYPES, usecols=list(CSV_COLUMNS), **kwargs)


def frame_to_rows(frame: DataFrame) -> list[ReportRow]:
    return [ReportRow.from_dict(record) for record in frame.to_dict("records")]
