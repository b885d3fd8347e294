from typing import Callable, Optional
from logging import getLogger
from time import perf_counter

import numpy as np

from crlab.constants import FD_STEP
from crlab.exceptions import CrlabException, NotClosedError, NotConvexError
from crlab.calculus import dbar_fd, min_real_hessian_eigenvalue
from crlab.domain import DomainFamily, ray_roots, sample_boundary
from crlab.kernels import KernelCoefficients, LerayMap
from crlab.models.solve import SolveReport
from crlab.solvers.quadrature import volume_rule

from crlab.types.common import SolverName


__all__ = (
    "Form",
    "Solution",
    "check_points",
    "form_values",
    "residual",
    "volume_part",
    "pin_leray",
    "require_convex",
    "require_closed",
    "run_solve",
)


logger = getLogger(__package__)

Form = Callable[[np.ndarray], np.ndarray]
Solution = Callable[[np.ndarray], np.ndarray]


def check_points(
    family: DomainFamily, /, t: float, count: int = 20, *, fraction: float = 0.35, seed: int = 0
) -> np.ndarray:
    """
    Seeded interior points at most `fraction` of the boundary radius away
    from the family center
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((count, 2 * family.n))
    x /= np.linalg.norm(x, axis=-1, keepdims=True)
    theta = x[:, 0::2] + 1j * x[:, 1::2]
    R, failed = ray_roots(family, t, theta)
    theta, R = theta[~failed], R[~failed]
    radius = fraction * R * rng.uniform(0.3, 1.0, len(R))
    return family.center + radius[:, None] * theta


def form_values(f: Form, points: np.ndarray, n: int) -> np.ndarray:
    """Coefficients of a `(0,1)`-form as `(..., n)`; scalar forms are allowed for `n = 1`"""
    values = np.asarray(f(points), dtype=complex)
    if n == 1 and values.shape == points.shape[:-1]:
        values = values[..., None]
    return np.broadcast_to(values, points.shape[:-1] + (n,))


def residual(
    u: Solution,
    f: Form,
    points: np.ndarray,
    /,
    family: Optional[DomainFamily] = None,
    t: float = 0.0,
    h: float = FD_STEP,
) -> float:
    """`max |dbar u - f|` over the points"""
    if len(points) == 0:
        return float("nan")
    d = dbar_fd(u, points, h, family=family, t=t)
    return float(np.max(np.abs(d - form_values(f, points, points.shape[-1]))))


def volume_part(
    family: DomainFamily,
    /,
    t: float,
    f: Form,
    z: np.ndarray,
    kernel: KernelCoefficients,
    resolution: int,
    *,
    radial: Optional[int] = None,
) -> np.ndarray:
    """
    `int_D sum_j K_j(zeta, z) f_j(zeta) dV` with the Bochner-Martinelli
    density, on polar rules about each `z`
    """
    z = np.asarray(z, dtype=complex)
    flat = z.reshape(-1, family.n)
    out = np.empty(len(flat), dtype=complex)
    for i, point in enumerate(flat):
        rule = volume_rule(family, t, point, resolution, radial=radial)
        integrand = np.sum(kernel.volume(rule.nodes, point) * form_values(f, rule.nodes, family.n), axis=-1)
        out[i] = rule.integrate(integrand)
    return out.reshape(z.shape[:-1])


def pin_leray(leray: LerayMap, nodes: np.ndarray, /) -> LerayMap:
    """
    Leray map restricted to fixed quadrature nodes

    The convex map does not depend on `z`, so its values at the nodes are
    computed once; other maps are returned unchanged.
    """
    if leray.kind != "convex":
        return leray
    g = leray.g(nodes, nodes)
    return LerayMap(leray.kind, leray.n, lambda zeta, z: g, leray.dbar_g)


def require_convex(family: DomainFamily, /, t: float, resolution: int = 8):
    sample = sample_boundary(family, t, resolution)
    smallest = min_real_hessian_eigenvalue(family.r, sample.points, t)
    if smallest <= 0:
        raise NotConvexError(
            "not_convex",
            f"{family.name}: real Hessian eigenvalue {smallest:.3e} on the boundary at t={t:g}",
        )


def require_closed(f: Form, points: np.ndarray, /, tol: float = 1e-6):
    """`dbar f = 0` for a `(0,1)`-form in two variables, by finite differences"""
    if points.shape[-1] != 2:
        return
    d = dbar_fd(lambda z: form_values(f, z, 2), points)
    defect = float(np.max(np.abs(d[..., 1, 0] - d[..., 0, 1])))
    if defect >= tol:
        raise NotClosedError("not_closed", f"dbar f = {defect:.3e} at interior points")


def run_solve(
    solver: SolverName,
    family: DomainFamily,
    /,
    t: float,
    f: Form,
    build: Callable[[int], Solution],
    eval_points,
    *,
    resolution: int,
    check: int = 20,
    refine: bool = False,
    seed: int = 0,
) -> SolveReport:
    """
    Build the solution operator at `resolution`, evaluate it, measure the
    residual at seeded check points and optionally at doubled resolution

    Numerical failures are reported, not raised.
    """
    start = perf_counter()
    eval_points = np.asarray(eval_points, dtype=complex).reshape(-1, family.n)
    points = check_points(family, t, check, seed=seed) if check else np.empty((0, family.n), complex)
    diagnostics = {"check_points": len(points)}

    try:
        u = build(resolution)
        values = u(eval_points) if len(eval_points) else np.empty(0, dtype=complex)
        res = residual(u, f, points, family, t)

        ratio = refined = None
        if refine and len(points):
            refined = residual(build(2 * resolution), f, points, family, t)
            ratio = refined / res if res > 0 else 0.0
    except CrlabException as e:
        logger.warning("%s failed on %s at t=%g: %s", solver, family.name, t, e)
        return SolveReport(
            solver, float(t), resolution, eval_points, np.empty(0, dtype=complex), float("nan"),
            timing=perf_counter() - start, diagnostics=diagnostics, error=str(e),
        )

    report = SolveReport(
        solver, float(t), resolution, eval_points, values, res,
        refinement_ratio=ratio, refined_residual=refined,
        timing=perf_counter() - start, diagnostics=diagnostics,
    )
    if not report.converging:
        logger.warning("%s residual does not decrease under refinement: ratio %.3g", solver, ratio)
    logger.info(
        "%s on %s at t=%g, resolution %d: residual %.3e, ratio %s, %.2fs",
        solver, family.name, t, resolution, res,
        "n/a" if ratio is None else f"{ratio:.3g}", report.timing,
    )
    return report
