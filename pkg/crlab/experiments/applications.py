"""Cousin splitting and Oka-Weil approximation on disks."""

from logging import getLogger

import numpy as np

from crlab.dev.testing import BuiltinFamily
from crlab.solvers import cousin1_solve, oka_weil_step

from .registry import Context, register


logger = getLogger(__package__)


POLE = 1.2j

COCYCLES = {
    "one": lambda z: np.ones(z.shape[:-1], dtype=complex),
    "pole": lambda z: 1 / (z[..., 0] - POLE),
}


@register(
    "E8",
    "First Cousin problem on a two-disk cover",
    family=BuiltinFamily.SHRINKING_DISK,
    knobs={"polar_nodes": 256},
    metric="cocycle_pole",
)
def cousin_splitting(ctx: Context):
    family = ctx.family
    nodes = int(ctx.knob("polar_nodes", 256))
    rows = []

    for t in ctx.config.t_values([0.0, 0.5, 1.0]):
        for name, f_ab in COCYCLES.items():
            solution = cousin1_solve(family, t, f_ab, angles=2 * nodes, radial=nodes, seed=ctx.config.seed)
            rows.append(ctx.row(f"cocycle_{name}", solution.cocycle, 1e-6, t=t, resolution=nodes))
            holomorphy = max(solution.holomorphy_a, solution.holomorphy_b)
            rows.append(ctx.row(f"holomorphy_{name}", holomorphy, 1e-3, t=t, resolution=nodes))

    return rows


ZETA0 = 0.95
LEVELS = (-0.75, -0.19)


@register(
    "E9",
    "Oka-Weil approximation by kernel sums",
    family=BuiltinFamily.DISK,
    knobs={"terms": 256},
    metric="sup_error",
)
def oka_weil(ctx: Context):
    """
    `h = 1/(zeta0 - z)` on `{r <= c}` from kernel sums on a level between
    `c` and `c'`; the error is also required to fall through `terms/4`,
    `terms/2` and `terms`
    """
    family = ctx.family
    terms = int(ctx.knob("terms", 256))
    c, c_prime = LEVELS
    h = lambda z: 1 / (ZETA0 - z[..., 0])
    rows = []

    for t in ctx.config.t_values([0.0]):
        errors = []
        for count in (terms // 4, terms // 2, terms):
            approximant = oka_weil_step(
                family.r, t, h, c, c_prime,
                box=family.box, center=family.center, terms=count, seed=ctx.config.seed,
            )
            errors.append(approximant.error)
        ctx.artifacts[f"errors@{t:g}"] = dict(zip((terms // 4, terms // 2, terms), errors))

        rows.append(ctx.row("sup_error", errors[-1], 1e-3, t=t, resolution=terms))
        decreasing = float(all(b < a for a, b in zip(errors, errors[1:])))
        rows.append(ctx.row("decreasing", decreasing, 1.0, t=t, resolution=terms, kind="at_least"))

    return rows
