"""
Registered experiments E1..E10 and the run and sweep drivers.

Each experiment returns report rows; `run_experiment` writes them as CSV,
the configuration and artifacts as JSON and a plain-text summary when an
output directory is configured or set through `CRLAB_OUTPUT_DIR`.
"""

from typing import Iterable, Optional
from concurrent.futures import Executor
from dataclasses import dataclass, field, replace
from logging import getLogger
from os import environ
from pathlib import Path
from time import perf_counter
from warnings import warn

import numpy as np
from pandas import DataFrame

from crlab.constants import OUTPUT_DIR_ENV
from crlab.config import encode
from crlab.dev import CrlabWarning
from crlab.exceptions import ConfigError
from crlab.models import ExperimentConfig, ReportRow
from crlab.pandas import write_report_csv

from .registry import REGISTRY, Context, Experiment, get_experiment, register
from . import oracles, geometry, regularity, applications  # noqa: F401


__all__ = (
    "REGISTRY",
    "Context",
    "Experiment",
    "ExperimentResult",
    "get_experiment",
    "register",
    "run_experiment",
    "sweep",
)


logger = getLogger(__package__)


@dataclass(frozen=True, eq=False, slots=True)
class ExperimentResult:
    config: ExperimentConfig
    rows: tuple[ReportRow, ...]
    artifacts: dict = field(default_factory=dict)
    timing: float = 0.0
    paths: dict[str, Path] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def failures(self) -> tuple[ReportRow, ...]:
        return tuple(row for row in self.rows if not row.passed)

    def summary(self) -> str:
        experiment = get_experiment(self.config.experiment)
        lines = [
            f"{experiment.id} {experiment.title}",
            f"{len(self.rows)} rows, {len(self.failures)} failing, {self.timing:.2f}s",
        ]
        for row in self.rows:
            lines.append(
                f"  {'PASS' if row.passed else 'FAIL'} {row.metric} t={row.t:g} "
                f"N={row.resolution} value={row.value:.6g} tol={row.tolerance:.3g}"
            )
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "passed": self.passed,
            "rows": [row.to_dict() for row in self.rows],
            "artifacts": self.artifacts,
        }


def _output_dir(config: ExperimentConfig) -> Optional[Path]:
    if config.output_dir is not None:
        return config.output_dir
    value = environ.get(OUTPUT_DIR_ENV)
    return Path(value) if value else None


def write_outputs(result: ExperimentResult, directory: Path, /) -> ExperimentResult:
    """Write `<stem>.csv`, `<stem>.json` and `<stem>.txt` into `directory`"""
    directory.mkdir(parents=True, exist_ok=True)
    stem = result.config.file_stem
    paths = {
        "csv": directory / f"{stem}.csv",
        "json": directory / f"{stem}.json",
        "summary": directory / f"{stem}.txt",
    }
    write_report_csv(result.rows, paths["csv"])
    paths["json"].write_text(encode(result.to_dict()) + "\n", encoding="utf-8")
    paths["summary"].write_text(result.summary() + "\n", encoding="utf-8")
    logger.info("%s: wrote %s", result.config.experiment, ", ".join(str(p) for p in paths.values()))
    return replace(result, paths=paths)


def run_experiment(
    config: ExperimentConfig,
    /,
    *,
    executor: Optional[Executor] = None,
    write: bool = True,
) -> ExperimentResult:
    """
    Run one registered experiment

    Sampling is seeded from `config.seed`, so identical configurations give
    identical rows. The executor is used only when `config.parallel` is set.
    """
    experiment = get_experiment(config.experiment)
    for knob in config.resolution:
        if knob not in experiment.knobs:
            warn(f"{experiment.id} does not use the knob {knob}", stacklevel=2, category=CrlabWarning)

    ctx = Context(config, experiment.resolve_family(config), executor if config.parallel else None)
    logger.info("%s: %s on %s", experiment.id, experiment.title, ctx.family.name)

    start = perf_counter()
    rows = tuple(experiment.runner(ctx))
    result = ExperimentResult(config, rows, ctx.artifacts, perf_counter() - start)

    log = logger.info if result.passed else logger.warning
    log("%s: %d of %d rows pass in %.2fs", experiment.id,
        len(rows) - len(result.failures), len(rows), result.timing)

    directory = _output_dir(config) if write else None
    if directory is not None:
        result = write_outputs(result, directory)
    return result


def _empirical_order(settings: np.ndarray, errors: np.ndarray) -> np.ndarray:
    """`log(e_i / e_{i+1}) / log(v_{i+1} / v_i)`, undefined for the first value"""
    order = np.full(len(errors), np.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        order[1:] = np.log(errors[:-1] / errors[1:]) / np.log(settings[1:] / settings[:-1])
    return order


def sweep(
    config: ExperimentConfig,
    knob: str,
    values: Iterable,
    /,
    *,
    metric: Optional[str] = None,
    executor: Optional[Executor] = None,
) -> DataFrame:
    """
    Run an experiment once per knob value and tabulate one metric

    The table has the knob values, the worst metric value over the rows of
    each run, whether those rows pass, and the empirical order of
    convergence between consecutive values.
    """
    values = list(values)
    if not values:
        raise ConfigError("config_value", "Sweep needs at least one value", details={"path": "values"})

    experiment = get_experiment(config.experiment)
    if knob not in experiment.knobs:
        raise ConfigError(
            "config_value",
            f"{experiment.id} has no resolution knob {knob}",
            details={"path": f"resolution.{knob}"},
        )
    metric = metric or experiment.metric

    records = []
    for value in values:
        result = run_experiment(config.with_knob(knob, value), executor=executor, write=False)
        rows = [row for row in result.rows if row.metric == metric]
        if not rows:
            raise ConfigError(
                "config_value", f"{experiment.id} reports no metric {metric}", details={"path": "metric"}
            )
        records.append(
            {
                knob: value,
                "metric": metric,
                "value": max(row.value for row in rows),
                "pass": all(row.passed for row in rows),
            }
        )

    frame = DataFrame.from_records(records)
    frame["order"] = _empirical_order(
        frame[knob].to_numpy(dtype=float), frame["value"].to_numpy(dtype=float)
    )
    logger.info("%s: swept %s over %s", experiment.id, knob, values)

    directory = _output_dir(config)
    if directory is not None:
        directory.mkdir(parents=True, exist_ok=True)
        frame.to_csv(directory / f"{config.file_stem}_sweep.csv", index=False,
                     float_format="%.17g", lineterminator="\n")
    return frame
