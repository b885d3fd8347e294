from typing import Callable, Optional
from concurrent.futures import Executor
from logging import getLogger

import numpy as np

from crlab.exceptions import CrlabException
from crlab.domain import DomainFamily
from crlab.models.solve import FamilyReport, SolveReport
from crlab.solvers.cauchy import cauchy_solve
from crlab.solvers.common import Form
from crlab.solvers.homotopy import homotopy_solve
from crlab.solvers.lieb_range import bmk_solve

from crlab.types.common import SolverName


__all__ = ("get_solver", "solve_family")


logger = getLogger(__package__)


def get_solver(name: SolverName) -> Callable[..., SolveReport]:
    match name:
        case "cauchy_pompeiu":
            return cauchy_solve
        case "lieb_range":
            return bmk_solve
        case "homotopy":
            return homotopy_solve
        case _:
            raise ValueError(f"Unknown solver {name!r}")


def solve_family(
    family: DomainFamily,
    /,
    t_grid,
    f_family: Callable[[float], Form],
    solver: SolverName,
    *,
    eval_points,
    resolution: int,
    executor: Optional[Executor] = None,
    refine: bool = False,
    check: int = 20,
    seed: int = 0,
    **options,
) -> FamilyReport:
    """
    Solve `dbar u^t = f^t` for every `t` of the grid

    Failures at single parameter values are collected in the report. The
    solves run on `executor` when one is given.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    eval_points = np.asarray(eval_points, dtype=complex).reshape(-1, family.n)
    solve = get_solver(solver)

    def job(t: float) -> SolveReport | str:
        try:
            return solve(
                family, t, f_family(t), eval_points,
                resolution=resolution, refine=refine, check=check, seed=seed, **options,
            )
        except CrlabException as e:
            return str(e)

    results = list(executor.map(job, t_grid) if executor is not None else map(job, t_grid))

    failures = {}
    for t, result in zip(t_grid, results):
        if isinstance(result, str):
            failures[float(t)] = result
        elif not result.ok:
            failures[float(t)] = result.error
    reports = tuple(r for r in results if isinstance(r, SolveReport))

    values = [
        r.u if isinstance(r, SolveReport) and r.ok else None for r in results
    ]
    moduli = np.array(
        [
            np.nan if a is None or b is None else float(np.max(np.abs(b - a), initial=0.0))
            for a, b in zip(values, values[1:])
        ]
    )

    report = FamilyReport(solver, t_grid, reports, moduli, failures)
    if failures:
        logger.warning("%s: %d of %d parameter values failed", family.name, len(failures), len(t_grid))
    logger.info(
        "%s: %s over %d parameter values, measured t-Lipschitz constant %.4g",
        family.name, solver, len(t_grid), report.constant,
    )
    return report
