from logging import getLogger

import numpy as np

from crlab.constants import FD_STEP
from crlab.exceptions import StencilError, UnsupportedError
from crlab.domain import DomainFamily, ray_roots, sphere_rule
from crlab.kernels import cf_kernel_coefficients
from crlab.models.solve import SolveReport
from crlab.solvers.common import Form, run_solve, volume_part


__all__ = ("cauchy_pompeiu", "cauchy_solve")


logger = getLogger(__package__)


def _require_clearance(family: DomainFamily, t: float, z: np.ndarray, angles: int):
    theta, _ = sphere_rule(1, angles)
    for point in z:
        R, failed = ray_roots(family, t, theta, origin=point)
        if np.any(failed) or np.min(R) < 2 * FD_STEP:
            raise StencilError(
                "stencil",
                f"{family.name}: point {complex(point[0]):.6g} within {2 * FD_STEP:g} of the boundary",
            )


def cauchy_pompeiu(
    family: DomainFamily,
    /,
    t: float,
    f: Form,
    z,
    *,
    angles: int = 128,
    radial: int = 128,
) -> np.ndarray:
    """
    Cauchy transform `u(z) = -1/pi int_D f(zeta) / (zeta - z) dA(zeta)`

    Polar coordinates about `z` cancel the singularity, so constants and
    polynomials in `zeta` and `conj(zeta)` are integrated exactly in the
    radius and spectrally in the angle.

    `z` has shape `(..., 1)`; the result has shape `(...)`.

    >>> from crlab.dev.testing import BuiltinFamily
    >>> disk = BuiltinFamily.DISK.family()
    >>> u = cauchy_pompeiu(disk, 0.0, lambda w: np.ones(w.shape[:-1]), np.array([[0.3 + 0.1j]]))
    >>> bool(abs(u[0] - (0.3 - 0.1j)) < 1e-10)
    True
    """
    if family.n != 1:
        raise UnsupportedError("unsupported_dimension", f"Cauchy-Pompeiu needs n=1, got n={family.n}")

    z = np.asarray(z, dtype=complex)
    _require_clearance(family, t, z.reshape(-1, 1), angles)
    kernel = cf_kernel_coefficients(None, 1)
    return volume_part(family, t, f, z, kernel, angles, radial=radial)


def cauchy_solve(
    family: DomainFamily,
    /,
    t: float,
    f: Form,
    eval_points,
    *,
    resolution: int = 128,
    refine: bool = False,
    check: int = 20,
    seed: int = 0,
) -> SolveReport:
    """Cauchy-Pompeiu solve with `resolution` angles and radial nodes"""

    def build(res: int):
        return lambda z: cauchy_pompeiu(family, t, f, z, angles=res, radial=res)

    return run_solve(
        "cauchy_pompeiu", family, t, f, build, eval_points,
        resolution=resolution, refine=refine, check=check, seed=seed,
    )
