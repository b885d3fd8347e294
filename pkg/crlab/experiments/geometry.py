"""Support inequality scans, bump certificates and Seeley extension fidelity."""

from logging import getLogger

import numpy as np

from crlab.constants import COLLAR_WIDTH, SEELEY_ORDER
from crlab.calculus import min_levi_eigenvalue
from crlab.convexify import narasimhan_normalize, normal_form_residues, search_bump
from crlab.dev.testing import BuiltinFamily
from crlab.domain import DomainFamily, ray_roots
from crlab.kernels import Exact, check_support_inequality, hefer_residual, sample_band_pairs
from crlab.seeley import (
    make_seeley_sequences,
    moment_residuals,
    probe_extension_norm,
    seeley_extend_halfspace,
)

from .registry import Context, register


logger = getLogger(__package__)


PAIR_DISTANCE = 0.5
BAND = 0.1
T_SAMPLES = 5


def _support_scan(family: DomainFamily, t: float, pairs: int, seed: int):
    """
    Scan the support inequality with `lambda0` the smallest Levi eigenvalue
    in the band, or `1` when the family is not plurisubharmonic there
    """
    zeta, z = sample_band_pairs(family, t, pairs, PAIR_DISTANCE, band=BAND, seed=seed)
    lambda0 = min_levi_eigenvalue(family.r, zeta, t)
    if lambda0 <= 0:
        logger.info("%s: Levi form not positive in the band (%.3g), scanning with lambda0=1",
                    family.name, lambda0)
        lambda0 = 1.0
    return check_support_inequality(family, t, Exact(), zeta, z, lambda0, PAIR_DISTANCE)


@register(
    "E4",
    "Support inequality of the Levi polynomial",
    family=BuiltinFamily.BALL,
    knobs={"pairs": 10000},
    metric="min_slack",
)
def support_inequality(ctx: Context):
    pairs = int(ctx.knob("pairs", 10000))
    seed = ctx.config.seed
    rows = []

    ball = _support_scan(ctx.family, 0.0, pairs, seed)
    rows.append(ctx.row("min_slack", ball.margin, -1e-12, resolution=pairs, kind="at_least"))

    perturbed = BuiltinFamily.PERTURBED_BALL.family()
    for t in ctx.config.t_values(np.linspace(0, 1, T_SAMPLES)):
        scan = _support_scan(perturbed, t, pairs, seed)
        rows.append(
            ctx.row("min_slack_perturbed", scan.margin, -1e-9, t=t, resolution=pairs, kind="at_least")
        )

    counter = _support_scan(BuiltinFamily.NON_PSH.family(), 0.0, pairs, seed)
    if counter.witness is not None:
        ctx.artifacts["non_psh_witness"] = {"zeta": counter.witness[0], "z": counter.witness[1]}
    found = float(not counter.ok and counter.witness is not None)
    rows.append(ctx.row("non_psh_witness", found, 1.0, resolution=pairs, kind="at_least"))

    return rows


def _default_point(family: DomainFamily, t: float) -> np.ndarray:
    """Boundary point on the first real axis through the center"""
    direction = np.zeros(family.n, dtype=complex)
    direction[0] = 1
    R, failed = ray_roots(family, t, direction[None])
    assert not failed[0], f"{family.name}: no boundary point along the first axis"
    return family.center + R[0] * direction


@register(
    "E5",
    "Grauert bump certification",
    family=BuiltinFamily.BALL,
    knobs={"grid": 9},
    metric="min_real_hessian_eig",
)
def bump_certification(ctx: Context):
    family = ctx.family
    grid = int(ctx.knob("grid", 9))
    rows = []

    for t in ctx.config.t_values([0.5]):
        p = ctx.config.point if ctx.config.point is not None else _default_point(family, t)
        result = search_bump(family, t, p, grid_n=grid)
        cert = result.certificate
        ctx.artifacts[f"certificate@{t:g}"] = cert

        _, rstar = narasimhan_normalize(family, t, p, eps0=cert.eps0, grid_n=grid)
        residues = normal_form_residues(rstar)
        ctx.artifacts[f"normal_form@{t:g}"] = residues

        rows.append(
            ctx.row("min_real_hessian_eig", cert.min_real_hessian_eig, 1e-12,
                    t=t, resolution=grid, kind="at_least")
        )
        rows.append(ctx.row("normal_form_residue", max(residues.values()), 1e-10, t=t, resolution=grid))
        rows.append(
            ctx.row("hefer_residual", hefer_residual(family, t, seed=ctx.config.seed), 1e-10,
                    t=t, resolution=grid)
        )
        for name in ("separation_ok", "patch_ok", "compact_ok"):
            flag = float(getattr(cert, name))
            rows.append(ctx.row(name.removesuffix("_ok"), flag, 1.0, t=t, resolution=grid, kind="at_least"))

    return rows


def _polynomial(coefficients):
    return lambda s: np.polynomial.polynomial.polyval(s, coefficients)


@register(
    "E6",
    "Seeley extension fidelity",
    family=BuiltinFamily.DISK,
    knobs={"seeley_order": SEELEY_ORDER},
    metric="polynomial_err",
)
def seeley_fidelity(ctx: Context):
    """
    Polynomials of degree below `N` are reproduced across `s = 0` where every
    cutoff `phi(b_k s)` equals one, that is for `|s| < 2^(1 - N)`
    """
    N = int(ctx.knob("seeley_order", SEELEY_ORDER))
    seq = make_seeley_sequences(N)
    rng = np.random.default_rng(ctx.config.seed)
    rows = [ctx.row("moment_residual", np.max(moment_residuals(seq)), 1e-9, resolution=N)]

    s = -np.linspace(2.0**-N, 0, 64, endpoint=False)
    error = 0.0
    for degree in range(N):
        p = _polynomial(rng.uniform(-1, 1, degree + 1))
        error = max(error, float(np.max(np.abs(seeley_extend_halfspace(p, seq)(s) - p(s)))))
    rows.append(ctx.row("polynomial_err", error, 1e-8, resolution=N))

    f, g = np.sin, lambda x: np.exp(-x) * np.cos(3 * x)
    alpha, beta = 0.7, -1.3
    s = np.linspace(-1, 1, 201)
    combined = seeley_extend_halfspace(lambda x: alpha * f(x) + beta * g(x), seq)(s)
    separate = alpha * seeley_extend_halfspace(f, seq)(s) + beta * seeley_extend_halfspace(g, seq)(s)
    rows.append(ctx.row("linearity_err", np.max(np.abs(combined - separate)), 1e-12, resolution=N))

    if ctx.family.n == 1:
        tests = [
            lambda z: np.real(z[..., 0]) ** 2,
            lambda z: np.sin(np.real(z[..., 0])) * np.imag(z[..., 0]),
        ]
        ctx.artifacts["extension_norm"] = probe_extension_norm(ctx.family, tests, 0.0, seq, COLLAR_WIDTH)

    return rows
