from math import nan

from pytest import fixture

from crlab.constants import CSV_COLUMNS
from crlab.models import Comparison, ReportRow
from crlab.pandas import frame_to_rows, read_report_csv, rows_to_frame, write_report_csv


@fixture
def rows():
    return [
        ReportRow.check("E1", "max_abs_err", 3.5e-11, 1e-4, resolution=128),
        ReportRow.check("E7", "modulus_ratio_max", 2.7, 2.5, t=0.5, resolution=8, kind="at_most"),
        ReportRow.check("E4", "min_slack", nan, -1e-12, resolution=100, kind=Comparison.AT_LEAST),
    ]


def test_comparisons(rows):
    assert [row.passed for row in rows] == [True, False, False]
    assert ReportRow.check("E7", "modulus_ratio_min", 1.5, 1.5, kind="at_least").passed
    assert not ReportRow.check("E1", "max_abs_err", 1e-4, 1e-4).passed


def test_frame_columns(rows):
    frame = rows_to_frame(rows)
    assert tuple(frame.columns) == CSV_COLUMNS
    assert frame["pass"].tolist() == [True, False, False]


def test_csv(rows, tmp_path):
    target = tmp_path / "report.csv"
    write_report_csv(rows, target)

    lines = target.read_text().splitlines()
    assert lines[0] == "experiment,t,resolution,metric,value,tolerance,pass"
    assert len(lines) == 4

    again = frame_to_rows(read_report_csv(target))
    assert [row.metric for row in again] == [row.metric for row in rows]
    assert again[0].value == rows[0].value
    assert again[1].t == 0.5
    assert again[1].resolution == 8
    assert not again[1].passed
    assert again[2].value != again[2].value
