"""Regularity in the parameter and near the boundary, measured on solutions."""

from logging import getLogger

import numpy as np

from crlab.calculus import holder_seminorm
from crlab.dev.testing import BuiltinFamily
from crlab.domain import DomainFamily, ray_roots
from crlab.solvers import Homotopy, LiebRange, check_points, solve_family

from .oracles import FORMS
from .registry import Context, register


logger = getLogger(__package__)


@register(
    "E7",
    "Parameter continuity of solutions",
    family=BuiltinFamily.SHIFTED_BALL,
    knobs={"quad_n": 8},
    metric="modulus_ratio_min",
)
def parameter_continuity(ctx: Context):
    """
    The modulus `sup_z |u^t2 - u^t0|` against `sup_z |u^t1 - u^t0|` over the
    first three grid values; for `t0, t1, t2` equally spaced a Lipschitz
    family gives a ratio near 2
    """
    family = ctx.family
    resolution = int(ctx.knob("quad_n", 8))
    t_grid = ctx.config.t_values([0.5, 0.6, 0.7])
    assert len(t_grid) >= 3, "parameter continuity needs at least three t values"
    t_grid = t_grid[:3]
    points = check_points(family, t_grid[0], 8, seed=ctx.config.seed)
    f = FORMS["dzbar1"]

    report = solve_family(
        family, t_grid, lambda t: f, "homotopy",
        eval_points=points, resolution=resolution, executor=ctx.executor, check=0,
    )
    ctx.artifacts["family_report"] = report

    ratio = float("nan")
    if report.ok:
        u0, u1, u2 = (r.u for r in report.reports)
        near = np.max(np.abs(u1 - u0))
        ratio = np.max(np.abs(u2 - u0)) / near if near > 0 else float("nan")
    rows = [
        ctx.row("modulus_ratio_min", ratio, 1.5, resolution=resolution, kind="at_least"),
        ctx.row("modulus_ratio_max", ratio, 2.5, resolution=resolution, kind="at_most"),
    ]

    ball = BuiltinFamily.BALL.family()
    unit = Homotopy(ball, 1.0, f, resolution=resolution)(points)
    error = 0.0
    for t in t_grid:
        scaled = Homotopy(ball, t, lambda z, t=t: t * f(z), resolution=resolution)(points)
        error = max(error, float(np.max(np.abs(scaled - t * unit))))
    rows.append(ctx.row("linearity_err", error, 1e-8, resolution=resolution))

    static = solve_family(
        ball, t_grid, lambda t: f, "homotopy",
        eval_points=points, resolution=resolution, executor=ctx.executor, check=0,
    )
    rows.append(
        ctx.row("static_modulus", np.max(static.moduli, initial=0.0), 1e-10, resolution=resolution)
    )
    return rows


COLLARS = (0.3, 0.2, 0.1)


def collar_points(family: DomainFamily, /, t: float, eps: float, count: int, *, seed: int = 0) -> np.ndarray:
    """Seeded points at relative radius in `[1 - eps, 1 - eps / 2]` along rays from the center"""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((count, 2 * family.n))
    x /= np.linalg.norm(x, axis=-1, keepdims=True)
    theta = x[:, 0::2] + 1j * x[:, 1::2]
    R, failed = ray_roots(family, t, theta)
    theta, R = theta[~failed], R[~failed]
    fraction = rng.uniform(1 - eps, 1 - eps / 2, len(R))
    return family.center + (fraction * R)[:, None] * theta


@register(
    "E10",
    "Hoelder quotient of the shell part near the boundary",
    family=BuiltinFamily.BALL,
    knobs={"quad_n": 8, "pairs": 12},
    metric="holder_growth",
)
def holder_trend(ctx: Context):
    """
    Largest `C^{1/2}` quotient of the shell part of the Lieb-Range solution
    over shrinking collars, at the base resolution and two doublings

    A bounded trend is a qualitative check only.
    """
    family = ctx.family
    base = int(ctx.knob("quad_n", 8))
    count = int(ctx.knob("pairs", 12))
    f = FORMS["z2_dzbar1"]
    rows = []

    for t in ctx.config.t_values([0.0]):
        samples = [collar_points(family, t, eps, count, seed=ctx.config.seed + k) for k, eps in enumerate(COLLARS)]
        quotients = []
        for resolution in (base, 2 * base, 4 * base):
            operator = LiebRange(family, t, f, resolution=resolution)
            quotient = max(
                holder_seminorm(points, operator.k_part(points), 0.5).seminorm for points in samples
            )
            logger.info("%s: C^1/2 quotient %.4g at resolution %d", family.name, quotient, resolution)
            quotients.append(quotient)

        ctx.artifacts[f"holder_quotients@{t:g}"] = quotients
        growth = max(b / a if a > 0 else float("inf") for a, b in zip(quotients, quotients[1:]))
        rows.append(ctx.row("holder_growth", growth, 2.0, t=t, resolution=4 * base))

    return rows
