from typing import Optional
from dataclasses import dataclass, field

import numpy as np

from crlab.constants import REFINEMENT_RATIO, RESIDUAL_FLOOR
from crlab.types.common import SolverName


@dataclass(frozen=True, eq=False, slots=True)
class SolveReport:
    """
    Outcome of one solve at one parameter value

    `refinement_ratio` is `residual(2N) / residual(N)`. A report is also
    produced for failed solves, with `error` set and `u` empty.
    """

    solver: SolverName
    t: float
    resolution: int
    points: np.ndarray
    u: np.ndarray
    residual: float
    refinement_ratio: Optional[float] = None
    refined_residual: Optional[float] = None
    timing: float = 0.0
    diagnostics: dict = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def converging(self) -> bool:
        """Refinement ratio below the threshold, or refined residual at the finite difference floor"""
        if self.refinement_ratio is None:
            return True
        return self.refinement_ratio < REFINEMENT_RATIO or self.refined_residual < RESIDUAL_FLOOR

    def to_dict(self) -> dict:
        return {
            "solver": self.solver,
            "t": self.t,
            "resolution": self.resolution,
            "residual": self.residual,
            "refinement_ratio": self.refinement_ratio,
            "refined_residual": self.refined_residual,
            "timing": self.timing,
            "diagnostics": self.diagnostics,
            "error": self.error,
        }


@dataclass(frozen=True, eq=False, slots=True)
class FamilyReport:
    """
    Per-t solve reports with the discrete continuity modulus
    `sup_z |u^{t_{i+1}} - u^{t_i}|` over consecutive successful values
    """

    solver: SolverName
    t_grid: np.ndarray
    reports: tuple[SolveReport, ...]
    moduli: np.ndarray
    failures: dict[float, str] = field(default_factory=dict)

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.t_grid)

    @property
    def constant(self) -> float:
        """Largest `modulus / delta`, the measured Lipschitz constant in t"""
        ratios = self.moduli / self.steps
        ratios = ratios[np.isfinite(ratios)]
        return float(np.max(ratios, initial=0.0))

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "solver": self.solver,
            "t_grid": self.t_grid.tolist(),
            "moduli": self.moduli.tolist(),
            "constant": self.constant,
            "failures": {str(t): e for t, e in self.failures.items()},
            "reports": [r.to_dict() for r in self.reports],
        }
