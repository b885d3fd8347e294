"""
Lieb-Range solution operator on strictly convex domains.

    S f = L Ef + K dbar Ef

`L` is the Bochner-Martinelli transform over `D` and the collar shell
around it; `K` integrates `dbar Ef` over the shell only, since `Ef = f` is
`dbar`-closed on `D`. For `n = 1` the operator is the Cauchy transform of
`Ef` and `K` is absent.
"""

from typing import Optional
from logging import getLogger

import numpy as np

from crlab.constants import COLLAR_WIDTH, EXTENSION_FD_STEP, SOLVER_SEELEY_ORDER
from crlab.calculus import dbar_fd
from crlab.domain import DomainFamily
from crlab.kernels import LerayMap, cf_kernel_coefficients, convex_leray_map
from crlab.models.solve import SolveReport
from crlab.seeley import extend_from_domain, make_seeley_sequences
from crlab.solvers.common import (
    Form,
    check_points,
    form_values,
    pin_leray,
    require_closed,
    require_convex,
    run_solve,
    volume_part,
)
from crlab.solvers.quadrature import shell_rule


__all__ = ("LiebRange", "bmk_solve")


logger = getLogger(__package__)


class LiebRange:
    """
    Quadrature realization of `S f` at a fixed resolution

    Shell data (`Ef` and `dbar Ef` at the collar nodes) is computed once;
    each evaluation then costs one polar volume rule about `z`.
    """

    def __init__(
        self,
        family: DomainFamily,
        /,
        t: float,
        f: Form,
        *,
        resolution: int = 12,
        seeley_order: int = SOLVER_SEELEY_ORDER,
        collar_width: float = COLLAR_WIDTH,
        ext_step: float = EXTENSION_FD_STEP,
        leray: Optional[LerayMap] = None,
    ):
        n = family.n
        self.family = family
        self.t = float(t)
        self.f = f
        self.resolution = resolution

        seq = make_seeley_sequences(seeley_order)
        Ef = extend_from_domain(family, lambda z: np.array(form_values(f, z, n)), t, seq, collar_width)
        self.shell = shell_rule(family, t, resolution, width=collar_width, levels=seeley_order)
        self.ef = np.asarray(Ef(self.shell.nodes), dtype=complex)

        if n == 2:
            leray = leray or convex_leray_map(family, t)
            D = dbar_fd(Ef, self.shell.nodes, ext_step)
            self.dbar_ef = D[..., 1, 0] - D[..., 0, 1]
            self.kernel = cf_kernel_coefficients(pin_leray(leray, self.shell.nodes), 2)
        else:
            self.dbar_ef = None
            self.kernel = cf_kernel_coefficients(None, 1)

        logger.debug(
            "%s: Lieb-Range operator with %d shell nodes at t=%g", family.name, len(self.shell), t
        )

    def _each(self, z, term) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1, self.family.n)
        return np.array([term(point) for point in flat], dtype=complex).reshape(z.shape[:-1])

    def l_part(self, z) -> np.ndarray:
        """Bochner-Martinelli transform of `Ef` over `D` and the shell"""
        nodes = self.shell.nodes

        def shell_term(point):
            return self.shell.integrate(np.sum(self.kernel.volume(nodes, point) * self.ef, axis=-1))

        inner = volume_part(self.family, self.t, self.f, z, self.kernel, self.resolution)
        return inner + self._each(z, shell_term)

    def k_part(self, z) -> np.ndarray:
        """Shell integral of `dbar Ef`; zero for `n = 1`"""
        if self.dbar_ef is None:
            return np.zeros(np.shape(z)[:-1], dtype=complex)
        nodes = self.shell.nodes
        return self._each(
            z, lambda point: self.shell.integrate(self.kernel.shell(nodes, point, self.dbar_ef))
        )

    def __call__(self, z) -> np.ndarray:
        return self.l_part(z) + self.k_part(z)


def bmk_solve(
    family: DomainFamily,
    /,
    t: float,
    f: Form,
    eval_points,
    *,
    resolution: int = 12,
    refine: bool = False,
    check: int = 20,
    seed: int = 0,
    **options,
) -> SolveReport:
    """
    Solve `dbar u = f` on a strictly convex domain with the Lieb-Range operator

    Raises `NotConvexError` when the real Hessian of `r` is not positive on
    the boundary and `NotClosedError` when `f` is not `dbar`-closed.
    Numerical failures end up in the report.
    """
    require_convex(family, t)
    require_closed(f, check_points(family, t, seed=seed))

    return run_solve(
        "lieb_range", family, t, f,
        lambda res: LiebRange(family, t, f, resolution=res, **options),
        eval_points, resolution=resolution, refine=refine, check=check, seed=seed,
    )
