from typing import Callable, Optional
from dataclasses import dataclass
from logging import getLogger

import numpy as np

from crlab.domain import DomainFamily
from crlab.expr import DefiningExpr
from crlab.expr.nodes import const, sub
from crlab.kernels import LerayMap, cf_kernel_coefficients, check_leray_nonvanishing, convex_leray_map
from crlab.solvers.common import pin_leray
from crlab.solvers.quadrature import boundary_rule
from crlab.util.convert import to_point


__all__ = ("OkaWeilApproximant", "oka_weil_step", "sublevel_samples")


logger = getLogger(__package__)

LEVEL_FRACTION = 0.9


@dataclass(frozen=True, eq=False, slots=True)
class OkaWeilApproximant:
    """
    Riemann sum `g(z) = sum_m c_m K(zeta_m, z)` of the reproducing kernel
    over the `level` boundary, with its sup error on the inner sublevel set
    """

    nodes: np.ndarray
    coefficients: np.ndarray
    kernel: Callable[[np.ndarray, np.ndarray], np.ndarray]
    level: float
    error: float
    witness: Optional[np.ndarray]

    @property
    def terms(self) -> int:
        return len(self.nodes)

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        flat = z.reshape(-1, z.shape[-1])
        out = np.array([np.sum(self.coefficients * self.kernel(self.nodes, p)) for p in flat])
        return out.reshape(z.shape[:-1])


def sublevel_samples(
    exhaustion: DefiningExpr, /, t: float, c: float, box, count: int, *, seed: int = 0
) -> np.ndarray:
    """Seeded uniform samples of `{phi^t <= c}` from the box"""
    box = np.asarray(box, dtype=float)
    rng = np.random.default_rng(seed)
    found = []
    total = 0
    for _ in range(64):
        x = rng.uniform(box[:, 0], box[:, 1], size=(4 * count, len(box)))
        z = to_point(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            keep = exhaustion(z, t) <= c
        found.append(z[keep])
        total += int(keep.sum())
        if total >= count:
            break
    return np.concatenate(found)[:count]


def oka_weil_step(
    exhaustion: DefiningExpr,
    /,
    t: float,
    h: Callable[[np.ndarray], np.ndarray],
    c: float,
    c_prime: float,
    *,
    box,
    center=None,
    terms: int = 256,
    samples: int = 400,
    seed: int = 0,
    leray: Optional[LerayMap] = None,
) -> OkaWeilApproximant:
    """
    Approximate `h` on `K_c = {phi^t <= c}` by a finite sum of kernels
    holomorphic on `{phi^t < c''}`, `c < c'' < c'`

    `terms` is the boundary resolution of the `c''` level set: the number of
    kernel terms for `n = 1`, the sphere resolution for `n = 2`. For `n = 2`
    the Leray denominator is checked between the levels and a vanishing
    one raises `LerayError`.
    """
    assert c < c_prime, "c must be below c_prime"
    level = c + LEVEL_FRACTION * (c_prime - c)
    n = exhaustion.n
    family = DomainFamily(
        r=DefiningExpr(sub(exhaustion.freeze(t).root, const(level)), n),
        box=box,
        center=center,
        name=f"level {level:.4g}",
    )

    rule = boundary_rule(family, t, terms)
    inner = sublevel_samples(exhaustion, t, c, box, samples, seed=seed)

    if n == 2:
        leray = pin_leray(leray or convex_leray_map(family, t), rule.nodes)
        for point in inner:
            check_leray_nonvanishing(leray, rule.nodes, point, strict=True)
    kernel = cf_kernel_coefficients(leray if n == 2 else None, n)
    normals = rule.normals

    def single(nodes, z):
        return kernel.reproducing(nodes, z, normals)

    coefficients = rule.weights * np.asarray(h(rule.nodes), dtype=complex)
    approximant = OkaWeilApproximant(rule.nodes, coefficients, single, level, np.nan, None)

    error, witness = 0.0, None
    if len(inner):
        deviation = np.abs(approximant(inner) - np.asarray(h(inner), dtype=complex))
        k = int(np.argmax(deviation))
        error, witness = float(deviation[k]), inner[k]

    logger.info(
        "Oka-Weil step at t=%g: %d terms on level %.4g, sup error %.3e on {phi <= %g}",
        t, len(rule), level, error, c,
    )
    return OkaWeilApproximant(rule.nodes, coefficients, single, level, error, witness)
