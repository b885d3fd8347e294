"""Solver oracles: Cauchy-Pompeiu on disks, Lieb-Range on the ball, Leray reproduction."""

from logging import getLogger

import numpy as np

from crlab.constants import FD_STEP, REFINEMENT_RATIO, RESIDUAL_FLOOR
from crlab.calculus import dbar_fd
from crlab.dev.testing import BuiltinFamily
from crlab.domain import ray_roots, sphere_rule
from crlab.models import SolveReport
from crlab.solvers import (
    Homotopy,
    LiebRange,
    bmk_solve,
    calibrate_reproduction,
    cauchy_pompeiu,
    check_points,
    leray_reproduce,
    residual,
)

from .registry import Context, register


logger = getLogger(__package__)


def _interior_grid(ctx: Context, t: float, size: int, fraction: float = 0.6) -> np.ndarray:
    """`size x size` square grid inside the largest centered disk of `D^t`"""
    family = ctx.family
    theta, _ = sphere_rule(1, 64)
    R, failed = ray_roots(family, t, theta)
    half = fraction * float(np.min(R[~failed])) / np.sqrt(2)
    axis = np.linspace(-half, half, size)
    x, y = np.meshgrid(axis, axis, indexing="ij")
    return (family.center[0] + x + 1j * y).reshape(-1, 1)


@register(
    "E1",
    "Cauchy-Pompeiu disk oracle",
    family=BuiltinFamily.DISK,
    knobs={"polar_nodes": 128, "grid": 20, "fd_step": FD_STEP},
    metric="max_abs_err",
)
def cauchy_oracle(ctx: Context):
    """
    On a disk centered at `c` the Cauchy transform of `1` is `conj(z - c)`;
    `f = conj(zeta)` is checked through the residual only
    """
    family = ctx.family
    nodes = int(ctx.knob("polar_nodes", 128))
    size = int(ctx.knob("grid", 20))
    h = float(ctx.knob("fd_step", FD_STEP))
    c = family.center[0]
    rows = []

    for t in ctx.config.t_values([0.0]):
        grid = _interior_grid(ctx, t, size)
        u = cauchy_pompeiu(family, t, lambda z: np.ones(z.shape[:-1]), grid, angles=nodes, radial=nodes)
        error = np.max(np.abs(u - np.conj(grid[:, 0] - c)))
        rows.append(ctx.row("max_abs_err", error, 1e-4, t=t, resolution=nodes))

        zero = cauchy_pompeiu(family, t, lambda z: np.zeros(z.shape[:-1]), grid[:4], angles=nodes, radial=nodes)
        rows.append(ctx.row("zero_form_max", np.max(np.abs(zero)), 1e-14, t=t, resolution=nodes))

        conj = lambda z: np.conj(z[..., 0])
        points = check_points(family, t, 20, seed=ctx.config.seed)
        u_conj = lambda z: cauchy_pompeiu(family, t, conj, z, angles=nodes, radial=nodes)
        rows.append(
            ctx.row("residual_conj", residual(u_conj, conj, points, family, t, h), 1e-3, t=t, resolution=nodes)
        )
        holomorphic = lambda z: u_conj(z) - np.conj(z[..., 0]) ** 2 / 2
        defect = np.max(np.abs(dbar_fd(holomorphic, points, h, family=family, t=t)))
        rows.append(ctx.row("holomorphy_conj", defect, 1e-3, t=t, resolution=nodes))

    return rows


def _refinement_rows(ctx: Context, name: str, report: SolveReport, t: float) -> list:
    rows = [ctx.row(f"residual_{name}", report.residual, 1e-2, t=t, resolution=report.resolution)]
    if report.refined_residual is None:
        return rows
    if report.refined_residual < RESIDUAL_FLOOR:
        rows.append(
            ctx.row(f"refined_residual_{name}", report.refined_residual, RESIDUAL_FLOOR,
                    t=t, resolution=2 * report.resolution)
        )
    else:
        rows.append(
            ctx.row(f"refinement_ratio_{name}", report.refinement_ratio, REFINEMENT_RATIO,
                    t=t, resolution=2 * report.resolution)
        )
    return rows


FORMS = {
    "dzbar1": lambda z: np.stack([np.ones(z.shape[:-1]), np.zeros(z.shape[:-1])], axis=-1),
    "z2_dzbar1": lambda z: np.stack([z[..., 1], np.zeros(z.shape[:-1])], axis=-1),
}


@register(
    "E2",
    "Lieb-Range solve on the ball",
    family=BuiltinFamily.BALL,
    knobs={"quad_n": 24, "seeley_order": 4, "check_points": 20},
    metric="residual_dzbar1",
)
def lieb_range_ball(ctx: Context):
    """
    Residuals of `dz1bar` and `z2 dz1bar` with one doubling, the discrete
    holomorphy of `u - conj(z1) z2`, and the cross-solver check against the
    Leray homotopy operator
    """
    family = ctx.family
    resolution = int(ctx.knob("quad_n", 24))
    order = int(ctx.knob("seeley_order", 4))
    check = int(ctx.knob("check_points", 20))
    seed = ctx.config.seed
    rows = []

    for t in ctx.config.t_values([0.0]):
        center = family.center[None]
        for name, f in FORMS.items():
            report = bmk_solve(
                family, t, f, center,
                resolution=resolution, refine=True, check=check, seed=seed, seeley_order=order,
            )
            ctx.artifacts[f"{name}@{t:g}"] = report
            rows.extend(_refinement_rows(ctx, name, report, t))

        points = check_points(family, t, 8, seed=seed)
        f = FORMS["z2_dzbar1"]
        lieb = LiebRange(family, t, f, resolution=resolution, seeley_order=order)
        d = dbar_fd(lambda z: lieb(z) - np.conj(z[..., 0]) * z[..., 1], points, family=family, t=t)
        rows.append(
            ctx.row("holomorphy_z2_dzbar1", np.max(np.abs(d)), 1e-2, t=t, resolution=resolution)
        )

        # both operators solve dbar u = f, so their difference is holomorphic
        f = FORMS["dzbar1"]
        lieb = LiebRange(family, t, f, resolution=resolution, seeley_order=order)
        homotopy = Homotopy(family, t, f, resolution=resolution)
        defect = np.max(np.abs(dbar_fd(lambda z: lieb(z) - homotopy(z), points, family=family, t=t)))
        rows.append(ctx.row("cross_solver_dbar", defect, 1e-2, t=t, resolution=resolution))

    return rows


@register(
    "E3",
    "Leray reproduction of holomorphic functions",
    family=BuiltinFamily.BALL,
    knobs={"boundary_nodes": 64},
    metric="disk_rational_err",
)
def leray_reproduction(ctx: Context):
    """
    The disk runs use `4 boundary_nodes` points on the circle, the ball
    runs a sphere resolution of `boundary_nodes`
    """
    nodes = int(ctx.knob("boundary_nodes", 64))
    disk = BuiltinFamily.DISK.family()
    ball = BuiltinFamily.BALL.family()
    rows = []

    for t in ctx.config.t_values([0.0]):
        one = lambda z: np.ones(z.shape[:-1])
        rows.append(
            ctx.row("disk_const_err", calibrate_reproduction(disk, t, resolution=4 * nodes), 1e-8,
                    t=t, resolution=4 * nodes)
        )
        rational = leray_reproduce(disk, t, lambda z: 1 / (1.5 - z[..., 0]), np.array([[0.3]]),
                                   resolution=4 * nodes)
        rows.append(ctx.row("disk_rational_err", rational.error, 1e-8, t=t, resolution=4 * nodes))

        const = leray_reproduce(ball, t, one, np.zeros((1, 2)), resolution=nodes)
        rows.append(ctx.row("ball_const_err", const.error, 1e-6, t=t, resolution=nodes))
        linear = leray_reproduce(ball, t, lambda z: z[..., 0], np.zeros((1, 2)), resolution=nodes)
        rows.append(ctx.row("ball_z1_err", linear.error, 1e-6, t=t, resolution=nodes))
        poly = leray_reproduce(ball, t, lambda z: z[..., 0] * z[..., 1] + 3, np.array([[0.3, 0.1]]),
                               resolution=nodes)
        rows.append(ctx.row("ball_poly_err", poly.error, 1e-5, t=t, resolution=nodes))

        if ctx.config.family is not None:
            family = ctx.family
            scale = 4 if family.n == 1 else 1
            error = calibrate_reproduction(family, t, resolution=scale * nodes)
            rows.append(ctx.row("family_const_err", error, 1e-6, t=t, resolution=scale * nodes))

    return rows
