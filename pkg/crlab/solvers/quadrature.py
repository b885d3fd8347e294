"""
Quadrature rules in polar coordinates.

- volume rules are centered at the singular point `z`: `zeta = z + rho theta`
  with radial Gauss-Legendre on `[0, R_z(theta)]` and the sphere rule in
  `theta`, so `dV = rho^{2n-1} drho dsigma`;
- boundary rules use rays from the family center,
  `dS = R^{2n-1} dsigma / <theta, nu>`;
- shell rules cover `{R(theta) <= rho <= R(theta) + w}` with composite
  Gauss-Legendre in the collar coordinate, broken at `w 2^-k`.
"""

from typing import Optional
from dataclasses import dataclass
from logging import getLogger

import numpy as np
from numpy.polynomial.legendre import leggauss

from crlab.constants import COLLAR_WIDTH, SOLVER_SEELEY_ORDER
from crlab.exceptions import QuadratureError
from crlab.domain import DomainFamily, ray_roots, sample_boundary, sphere_rule

from crlab.types.common import QuadratureKind


__all__ = ("Quadrature", "volume_rule", "boundary_rule", "shell_rule")


logger = getLogger(__package__)


@dataclass(frozen=True, eq=False, slots=True)
class Quadrature:
    kind: QuadratureKind
    nodes: np.ndarray
    weights: np.ndarray
    normals: Optional[np.ndarray] = None
    singularity_center: Optional[np.ndarray] = None
    collar: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def measure(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, values) -> np.ndarray:
        """Weighted sum over the node axis, which comes first"""
        return np.tensordot(self.weights, np.asarray(values), axes=(0, 0))


def _default_radial(n: int, resolution: int) -> int:
    return resolution if n == 1 else max(resolution // 2, 2)


def volume_rule(
    family: DomainFamily,
    /,
    t: float,
    z,
    resolution: int,
    *,
    radial: Optional[int] = None,
    min_radius: float = 0.0,
) -> Quadrature:
    """
    Polar rule for `D^t` about the interior point `z`

    Raises `QuadratureError` when a ray from `z` misses the boundary or
    the boundary comes closer than `min_radius`.
    """
    z = np.asarray(z, dtype=complex)
    n = family.n
    radial = radial or _default_radial(n, resolution)
    theta, w_sigma = sphere_rule(n, resolution)
    R, failed = ray_roots(family, t, theta, origin=z)

    if np.any(failed):
        raise QuadratureError(
            "quadrature",
            f"{family.name}: {int(failed.sum())} rays from {z.tolist()} without a boundary crossing",
        )
    if np.min(R) <= min_radius:
        raise QuadratureError(
            "quadrature", f"{family.name}: boundary within {np.min(R):.3g} of the center point"
        )

    x, w = leggauss(radial)
    rho = R[:, None] * (x + 1) / 2
    weights = w_sigma[:, None] * (R[:, None] * w / 2) * rho ** (2 * n - 1)
    nodes = z + rho[..., None] * theta[:, None, :]
    return Quadrature(
        "volume", nodes.reshape(-1, n), weights.ravel(), singularity_center=z
    )


def boundary_rule(family: DomainFamily, /, t: float, resolution: int) -> Quadrature:
    """Surface rule on `bD^t` from rays of the family center"""
    sample = sample_boundary(family, t, resolution, strict=True)
    n = family.n
    theta = sample.directions
    cosine = np.real(np.sum(theta * np.conj(sample.normals), axis=-1))
    if np.any(cosine <= 0):
        raise QuadratureError(
            "quadrature", f"{family.name}: boundary is not transversal to the center rays"
        )
    weights = sample.weights * sample.radii ** (2 * n - 1) / cosine
    return Quadrature("boundary", sample.points, weights, normals=sample.normals)


def _collar_breaks(width: float, levels: int) -> np.ndarray:
    return np.concatenate([[0.0], width * 2.0 ** -np.arange(levels, -1, -1)])


def shell_rule(
    family: DomainFamily,
    /,
    t: float,
    resolution: int,
    *,
    width: float = COLLAR_WIDTH,
    levels: int = SOLVER_SEELEY_ORDER,
    per_interval: Optional[int] = None,
) -> Quadrature:
    """
    Collar rule for the shell between `bD^t` and its `width`-translate
    along center rays

    The collar coordinate is split at `width 2^-k` for `k <= levels`, the
    scales of the Seeley cutoffs.
    """
    sample = sample_boundary(family, t, resolution, strict=True)
    n = family.n
    per_interval = per_interval or max(resolution // 4, 4)

    x, w = leggauss(per_interval)
    breaks = _collar_breaks(width, levels)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    s = ((hi - lo) * (x + 1) / 2 + lo).ravel()
    ws = ((hi - lo) * w / 2).ravel()

    rho = sample.radii[:, None] + s
    weights = sample.weights[:, None] * ws * rho ** (2 * n - 1)
    nodes = family.center + rho[..., None] * sample.directions[:, None, :]
    collar = np.broadcast_to(s, rho.shape)

    logger.debug("%s: shell rule with %d nodes over %d collar intervals",
                 family.name, weights.size, len(breaks) - 1)
    return Quadrature(
        "shell", nodes.reshape(-1, n), weights.ravel(), collar=collar.ravel()
    )
