"""
Leray homotopy operator for `(0,1)`-forms.

    T f(z) = int_D BM(zeta, z) . f  -  int_bD Omega01(zeta, z) ^ f

For `n = 1` the boundary term drops out and `T` is the Cauchy transform.
"""

from typing import Optional
from logging import getLogger

import numpy as np

from crlab.domain import DomainFamily
from crlab.kernels import LerayMap, cf_kernel_coefficients, check_leray_nonvanishing, convex_leray_map
from crlab.models.solve import SolveReport
from crlab.solvers.cauchy import cauchy_pompeiu
from crlab.solvers.common import (
    Form,
    check_points,
    form_values,
    pin_leray,
    require_closed,
    run_solve,
    volume_part,
)
from crlab.solvers.quadrature import boundary_rule


__all__ = ("Homotopy", "homotopy_solve")


logger = getLogger(__package__)


class Homotopy:
    def __init__(
        self,
        family: DomainFamily,
        /,
        t: float,
        f: Form,
        *,
        resolution: int = 12,
        leray: Optional[LerayMap] = None,
    ):
        self.family = family
        self.t = float(t)
        self.f = f
        self.resolution = resolution

        if family.n == 1:
            self.kernel = None
            return

        leray = leray or convex_leray_map(family, t)
        self.boundary = boundary_rule(family, t, resolution)
        self.values = np.array(form_values(f, self.boundary.nodes, family.n))
        self.leray = pin_leray(leray, self.boundary.nodes)
        self.kernel = cf_kernel_coefficients(self.leray, family.n)

    def _boundary_term(self, point: np.ndarray) -> complex:
        nodes = self.boundary.nodes
        check_leray_nonvanishing(self.leray, nodes, point, strict=True)
        density = self.kernel.boundary(nodes, point, self.boundary.normals, self.values)
        return self.boundary.integrate(density)

    def __call__(self, z) -> np.ndarray:
        if self.kernel is None:
            return cauchy_pompeiu(
                self.family, self.t, self.f, z, angles=self.resolution, radial=self.resolution
            )

        z = np.asarray(z, dtype=complex)
        inner = volume_part(self.family, self.t, self.f, z, self.kernel, self.resolution)
        flat = z.reshape(-1, self.family.n)
        outer = np.array([self._boundary_term(point) for point in flat], dtype=complex)
        return inner + outer.reshape(z.shape[:-1])


def homotopy_solve(
    family: DomainFamily,
    /,
    t: float,
    f: Form,
    eval_points,
    *,
    resolution: int = 12,
    leray: Optional[LerayMap] = None,
    refine: bool = False,
    check: int = 20,
    seed: int = 0,
) -> SolveReport:
    """
    Solve `dbar u = f` with the homotopy operator of a Leray map

    The convex map `g = r_zeta` is used unless another map is given. A
    vanishing Leray denominator at the evaluation points is reported as a
    failed solve.
    """
    require_closed(f, check_points(family, t, seed=seed))
    return run_solve(
        "homotopy", family, t, f,
        lambda res: Homotopy(family, t, f, resolution=res, leray=leray),
        eval_points, resolution=resolution, refine=refine, check=check, seed=seed,
    )
