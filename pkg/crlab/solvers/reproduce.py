from typing import Callable, Optional
from dataclasses import dataclass
from logging import getLogger
from warnings import warn

import numpy as np

from crlab.calculus import dbar_fd
from crlab.dev import CrlabWarning
from crlab.exceptions import UnsupportedError
from crlab.domain import DomainFamily
from crlab.kernels import LerayMap, cf_kernel_coefficients, convex_leray_map
from crlab.solvers.common import pin_leray
from crlab.solvers.quadrature import boundary_rule


__all__ = ("Reproduction", "leray_reproduce", "calibrate_reproduction")


logger = getLogger(__package__)

HOLOMORPHY_TOL = 1e-6


@dataclass(frozen=True, eq=False, slots=True)
class Reproduction:
    z: np.ndarray
    value: np.ndarray
    expected: np.ndarray

    @property
    def error(self) -> float:
        return float(np.max(np.abs(self.value - self.expected)))


def leray_reproduce(
    family: DomainFamily,
    /,
    t: float,
    h: Callable[[np.ndarray], np.ndarray],
    z,
    *,
    leray: Optional[LerayMap] = None,
    resolution: int = 64,
) -> Reproduction:
    """
    Boundary integral `int_bD h Omega1(., z)` of a holomorphic `h`

    The Cauchy kernel for `n = 1`, the Leray kernel of `leray` (the convex
    map by default) for `n = 2`.

    >>> from crlab.dev.testing import BuiltinFamily
    >>> disk = BuiltinFamily.DISK.family()
    >>> result = leray_reproduce(disk, 0.0, lambda w: w[..., 0] ** 2, np.array([[0.5j]]))
    >>> result.error < 1e-12
    True
    """
    z = np.asarray(z, dtype=complex)
    flat = z.reshape(-1, family.n)

    if np.max(np.abs(dbar_fd(h, flat))) > HOLOMORPHY_TOL:
        warn("reproduced function is not holomorphic", stacklevel=2, category=CrlabWarning)

    rule = boundary_rule(family, t, resolution)
    if family.n == 2:
        leray = pin_leray(leray or convex_leray_map(family, t), rule.nodes)
        if leray.dbar_g is None:
            raise UnsupportedError(
                "unsupported_coefficients",
                f"{leray.kind} Leray map has no zeta-bar derivatives",
            )
    kernel = cf_kernel_coefficients(leray, family.n)

    values = np.asarray(h(rule.nodes), dtype=complex)
    out = np.array(
        [rule.integrate(values * kernel.reproducing(rule.nodes, point, rule.normals)) for point in flat],
        dtype=complex,
    )
    return Reproduction(flat, out.reshape(z.shape[:-1]), np.asarray(h(z), dtype=complex))


def calibrate_reproduction(
    family: DomainFamily, /, t: float = 0.0, *, resolution: int = 64, leray: Optional[LerayMap] = None
) -> float:
    """Error of reproducing `h = 1` at the family center"""
    result = leray_reproduce(
        family, t, lambda w: np.ones(w.shape[:-1]), family.center[None],
        leray=leray, resolution=resolution,
    )
    logger.info(
        "%s: constants reproduced within %.3e at resolution %d", family.name, result.error, resolution
    )
    return result.error
