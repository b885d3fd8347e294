"""
Cauchy-Fantappie data.

Levi polynomials with exact or smoothed second order coefficients, the
support inequality scan, Leray maps with their Hefer decomposition, and
the kernel densities used by the solvers.

Kernel constants for `n = 2, q = 1` are fixed by two anchors: the
Bochner-Martinelli volume density is `4 dGamma/dz_j` for the Newton
potential `Gamma = -1/(4 pi^2 |w|^2)`, and the boundary densities follow
from Stokes on `D` with the coefficient `kappa` of the Cauchy-Fantappie
correction, which satisfies

    dkappa/dzbar_1 = -conj(w_2) / |w|^4,   dkappa/dzbar_2 = conj(w_1) / |w|^4

for `w = zeta - z` whenever the Leray map is holomorphic in `z`.
"""

from typing import Callable, Optional, Union
from dataclasses import dataclass
from functools import lru_cache
from logging import getLogger
from math import factorial

import numpy as np
from numpy.polynomial.legendre import leggauss

from crlab.constants import C_N, HEFER_TOL, SLACK_TOL, SMOOTHING_NODES
from crlab.exceptions import (
    HeferIdentityError,
    LerayError,
    PreconditionError,
    QuadratureError,
    UnsupportedError,
)
from crlab.expr import Node, Wrt, derivative, evaluate
from crlab.calculus import jet, wirtinger_derivatives
from crlab.domain import DomainFamily, ray_roots
from crlab.util.convert import to_real

from crlab.types.common import LerayKind


__all__ = (
    "Exact",
    "Smoothed",
    "SmoothedHessian",
    "LeviPolynomial",
    "SupportCheck",
    "BandParameters",
    "LerayMap",
    "LerayCheck",
    "KernelCoefficients",
    "smoothed_hessian_coeffs",
    "levi_polynomial_at",
    "levi_polynomial",
    "check_support_inequality",
    "band_parameters",
    "sample_band_pairs",
    "convex_leray_map",
    "hefer_residual",
    "hefer_w_levi",
    "check_leray_nonvanishing",
    "cf_kernel_coefficients",
)


logger = getLogger(__package__)


@dataclass(frozen=True, slots=True)
class Exact:
    """Second order coefficients `d^2 r / dzeta_j dzeta_k`"""


@dataclass(frozen=True, slots=True)
class Smoothed:
    """Coefficients convolved with a mollifier of radius `d`"""

    d: float
    nodes: int = SMOOTHING_NODES

    def __post_init__(self):
        assert self.d > 0, "smoothing radius must be positive"
        assert self.nodes > 0, "node count must be positive"


Coefficients = Union[Exact, Smoothed]


@dataclass(frozen=True, eq=False, slots=True)
class SmoothedHessian:
    coeffs: np.ndarray
    exact: np.ndarray
    deviation: float
    threshold: float

    @property
    def ok(self) -> bool:
        return self.deviation < self.threshold


def _mollifier_rule(n: int, d: float, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(nodes)
    x, w = d * x, d * w
    mesh = np.meshgrid(*([x] * (2 * n)), indexing="ij")
    weights = np.ones_like(mesh[0])
    for wm in np.meshgrid(*([w] * (2 * n)), indexing="ij"):
        weights = weights * wm
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    q = 1 - np.sum(points**2, axis=-1) / d**2
    bump = np.zeros(len(points))
    inside = q > 0
    bump[inside] = np.exp(-1 / q[inside])
    weights = weights.ravel() * bump
    return points[inside], weights[inside] / np.sum(weights[inside])


def _holo_hessian(family: DomainFamily, points: np.ndarray, t: float) -> np.ndarray:
    return wirtinger_derivatives(family.r, points, t).holo_hess


def smoothed_hessian_coeffs(
    family: DomainFamily,
    /,
    t: float,
    zeta,
    d: float,
    *,
    nodes: int = SMOOTHING_NODES,
    lambda0: Optional[float] = None,
    c_n: float = C_N,
) -> SmoothedHessian:
    """
    Convolution `a(zeta) = int d^2 r(zeta - x) chi_d(x) dV(x)` of the
    holomorphic Hessian with a normalized bump of radius `d`

    Tensor Gauss-Legendre with `nodes` points per real axis. The deviation
    from the exact Hessian is compared with `lambda0 / c_n`; `lambda0`
    defaults to the smallest Levi eigenvalue at the base points.
    """
    zeta = np.asarray(zeta, dtype=complex)
    batch = zeta.shape[:-1]
    flat = zeta.reshape(-1, family.n)

    x = to_real(flat)
    if np.any(x - d < family.box[:, 0]) or np.any(x + d > family.box[:, 1]):
        raise QuadratureError(
            "quadrature", f"smoothing ball of radius {d:g} leaves the box of {family.name}"
        )

    offsets, weights = _mollifier_rule(family.n, d, nodes)
    # offsets are real coordinates (Re z1, Im z1, ...)
    shifts = offsets[:, 0::2] + 1j * offsets[:, 1::2]

    coeffs = np.empty((len(flat), family.n, family.n), dtype=complex)
    for i, z in enumerate(flat):
        hess = _holo_hessian(family, z - shifts, t)
        coeffs[i] = np.tensordot(weights, hess, axes=1)

    data = wirtinger_derivatives(family.r, flat, t)
    if lambda0 is None:
        lambda0 = float(np.min(data.min_levi_eigenvalue))
    deviation = float(np.max(np.abs(coeffs - data.holo_hess)))
    threshold = lambda0 / c_n

    logger.info(
        "%s: smoothed Hessian deviation %.3e (threshold lambda0/C_n = %.3e, d=%g)",
        family.name, deviation, threshold, d,
    )
    return SmoothedHessian(
        coeffs.reshape(batch + (family.n, family.n)),
        data.holo_hess.reshape(batch + (family.n, family.n)),
        deviation,
        threshold,
    )


@dataclass(frozen=True, eq=False, slots=True)
class LeviPolynomial:
    """
    `F(z, zeta) = -sum r_j (z_j - zeta_j) - 1/2 sum b_jk (z_j - zeta_j)(z_k - zeta_k)`

    Arrays may carry a batch of base points in front.
    """

    zeta: np.ndarray
    grad: np.ndarray
    quad: np.ndarray
    lambda0: float

    def __call__(self, z) -> np.ndarray:
        w = np.asarray(z, dtype=complex) - self.zeta
        linear = np.sum(self.grad * w, axis=-1)
        quadratic = np.einsum("...j,...jk,...k->...", w, self.quad, w)
        return -(linear + quadratic / 2)

    def hefer(self, z) -> np.ndarray:
        """`w_j = r_j + 1/2 sum_k b_jk (z_k - zeta_k)`"""
        w = np.asarray(z, dtype=complex) - self.zeta
        return self.grad + np.einsum("...jk,...k->...j", self.quad, w) / 2


def _quad(family: DomainFamily, t: float, zeta: np.ndarray, coeffs: Coefficients) -> np.ndarray:
    match coeffs:
        case Exact():
            return wirtinger_derivatives(family.r, zeta, t).holo_hess
        case Smoothed(d=d, nodes=nodes):
            return smoothed_hessian_coeffs(family, t, zeta, d, nodes=nodes).coeffs
        case _:
            raise UnsupportedError("unsupported_coefficients", f"unknown coefficients {coeffs!r}")


def levi_polynomial_at(
    family: DomainFamily,
    /,
    t: float,
    zeta,
    coeffs: Coefficients = Exact(),
    *,
    lambda0: Optional[float] = None,
) -> LeviPolynomial:
    zeta = np.asarray(zeta, dtype=complex)
    data = wirtinger_derivatives(family.r, zeta, t)
    if lambda0 is None:
        lambda0 = float(np.min(data.min_levi_eigenvalue))
    return LeviPolynomial(zeta, data.grad_z, _quad(family, t, zeta, coeffs), lambda0)


def levi_polynomial(
    family: DomainFamily, /, t: float, zeta, z, coeffs: Coefficients = Exact()
) -> np.ndarray:
    """
    Value of the Levi polynomial at `z` with base point `zeta`

    >>> from crlab.dev.testing import BuiltinFamily
    >>> ball = BuiltinFamily.BALL.family()
    >>> abs(complex(levi_polynomial(ball, 0.0, [1, 0j], [1, 0j])))
    0.0
    """
    return levi_polynomial_at(family, t, zeta, coeffs)(z)


@dataclass(frozen=True, eq=False, slots=True)
class SupportCheck:
    ok: bool
    margin: float
    witness: Optional[tuple[np.ndarray, np.ndarray]]
    count: int


def check_support_inequality(
    family: DomainFamily,
    /,
    t: float,
    coeffs: Coefficients,
    zeta,
    z,
    lambda0: float,
    d: float,
) -> SupportCheck:
    """
    Minimum of `Re F - (r(zeta) - r(z)) / 2 - lambda0 |zeta - z|^2 / 4`
    over sampled pairs, which must stay above `SLACK_TOL`
    """
    zeta = np.asarray(zeta, dtype=complex)
    z = np.asarray(z, dtype=complex)
    distance = np.linalg.norm(zeta - z, axis=-1)
    if np.any(distance >= d):
        raise PreconditionError(
            "pair_distance", f"sample pairs must satisfy |zeta - z| < d = {d:g}"
        )

    F = levi_polynomial_at(family, t, zeta, coeffs, lambda0=lambda0)(z)
    slack = F.real - (family.r(zeta, t) - family.r(z, t)) / 2 - lambda0 * distance**2 / 4

    k = int(np.argmin(slack))
    margin = float(slack[k])
    ok = margin >= SLACK_TOL
    logger.info(
        "%s: support inequality at t=%g over %d pairs, margin %.3e (%s)",
        family.name, t, len(slack), margin, "pass" if ok else "fail",
    )
    return SupportCheck(ok, margin, None if ok else (zeta[k], z[k]), len(slack))


@dataclass(frozen=True, slots=True)
class BandParameters:
    eps: float
    smoothing_threshold: float


def band_parameters(lambda0: float, d: float, delta1: float, *, c_n: float = C_N) -> BandParameters:
    """
    >>> band_parameters(1.0, 0.8, 1.0).eps
    0.01
    """
    return BandParameters(min(lambda0 * d * d / 64, delta1), lambda0 / c_n)


def _unit_directions(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    x = rng.standard_normal((count, 2 * n))
    x /= np.linalg.norm(x, axis=-1, keepdims=True)
    return x[:, 0::2] + 1j * x[:, 1::2]


def _in_band(family: DomainFamily, t: float, z: np.ndarray, band: float) -> np.ndarray:
    """Points in the box whose distance to `bD^t` along their ray from the center is at most `band`"""
    w = z - family.center
    norm = np.linalg.norm(w, axis=-1)
    ok = family.in_box(z) & (norm > 0)
    if not np.any(ok):
        return ok
    radii, failed = ray_roots(family, t, w[ok] / norm[ok, None])
    near = ~failed & (np.abs(norm[ok] - np.nan_to_num(radii, nan=np.inf)) <= band)
    ok[ok] = near
    return ok


def sample_band_pairs(
    family: DomainFamily,
    /,
    t: float,
    count: int,
    d: float,
    *,
    band: float = 0.1,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Seeded pairs `(zeta, z)`, both within `band` of `bD^t` along rays from
    the center and inside the box, with `|zeta - z| < d`
    """
    rng = np.random.default_rng(seed)
    n = family.n
    zetas, zs = [], []
    found = 0

    for _ in range(64):
        theta = _unit_directions(rng, 2 * count, n)
        radii, failed = ray_roots(family, t, theta)
        theta, radii = theta[~failed], radii[~failed]
        offset = band * rng.uniform(-1, 1, len(radii))
        zeta = family.center + (radii + offset)[:, None] * theta

        v = _unit_directions(rng, len(zeta), n)
        rho = 0.99 * d * rng.uniform(0, 1, len(zeta)) ** (1 / (2 * n))
        z = zeta + rho[:, None] * v

        keep = _in_band(family, t, z, band)
        zetas.append(zeta[keep])
        zs.append(z[keep])
        found += int(keep.sum())
        if found >= count:
            break

    if found < count:
        raise PreconditionError(
            "band_sampling", f"{family.name}: only {found} band samples at t={t:g}"
        )

    return np.concatenate(zetas)[:count], np.concatenate(zs)[:count]


@lru_cache(maxsize=256)
def _third(root: Node, n: int, /) -> tuple:
    holo = jet(root, n).holo
    zbar = [Wrt("zbar", l + 1) for l in range(n)]
    return tuple(
        tuple(tuple(derivative(holo[j][k], zbar[l]) for l in range(n)) for k in range(n))
        for j in range(n)
    )


@dataclass(frozen=True, eq=False, slots=True)
class LerayMap:
    """
    Leray map `g(zeta, z)` with `Phi = g . (zeta - z)`

    `dbar_g` returns `M_jl = dg_j / dzbar_l` in `zeta`, shaped `(..., n, n)`.
    """

    kind: LerayKind
    n: int
    g: Callable[[np.ndarray, np.ndarray], np.ndarray]
    dbar_g: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None

    def denominator(self, zeta, z) -> np.ndarray:
        zeta = np.asarray(zeta, dtype=complex)
        z = np.asarray(z, dtype=complex)
        return np.sum(self.g(zeta, z) * (zeta - z), axis=-1)


def convex_leray_map(family: DomainFamily, /, t: float) -> LerayMap:
    """`g = r_zeta(zeta)`, independent of `z`"""
    r = family.r

    def g(zeta, z):
        zeta, z = np.broadcast_arrays(np.asarray(zeta, dtype=complex), np.asarray(z, dtype=complex))
        return wirtinger_derivatives(r, zeta, t).grad_z

    def dbar_g(zeta, z):
        zeta, z = np.broadcast_arrays(np.asarray(zeta, dtype=complex), np.asarray(z, dtype=complex))
        return wirtinger_derivatives(r, zeta, t).levi

    return LerayMap("convex", family.n, g, dbar_g)


def hefer_residual(
    family: DomainFamily,
    /,
    t: float,
    coeffs: Coefficients = Exact(),
    *,
    pairs: int = 100,
    seed: int = 0,
) -> float:
    """Relative defect of `sum (zeta_j - z_j) w_j = F(z, zeta)` at seeded pairs"""
    n = family.n
    rng = np.random.default_rng(seed)
    lo, hi = family.box[:, 0], family.box[:, 1]
    x = rng.uniform(lo + 0.25 * (hi - lo), hi - 0.25 * (hi - lo), size=(pairs, 2 * n))
    zeta = x[:, 0::2] + 1j * x[:, 1::2]
    z = zeta + 0.1 * _unit_directions(rng, pairs, n)

    F = levi_polynomial_at(family, t, zeta, coeffs, lambda0=0.0)
    lhs = np.sum((zeta - z) * F.hefer(z), axis=-1)
    rhs = F(z)
    return float(np.max(np.abs(lhs - rhs) / np.maximum(1, np.abs(rhs))))


def hefer_w_levi(
    family: DomainFamily,
    /,
    t: float,
    coeffs: Coefficients = Exact(),
    *,
    pairs: int = 100,
    seed: int = 0,
) -> LerayMap:
    """
    Hefer decomposition of the Levi polynomial,
    `w_j = r_j(zeta) + 1/2 sum_k b_jk(zeta) (z_k - zeta_k)`

    The identity `sum (zeta_j - z_j) w_j = F(z, zeta)` is checked at seeded
    pairs before the map is returned. With exact coefficients the
    `zbar`-derivative of `w` uses third symbolic derivatives of `r`; it is
    not available for smoothed coefficients.
    """
    n = family.n

    def polynomial(zeta):
        return levi_polynomial_at(family, t, zeta, coeffs, lambda0=0.0)

    def g(zeta, z):
        zeta, z = np.broadcast_arrays(np.asarray(zeta, dtype=complex), np.asarray(z, dtype=complex))
        return polynomial(zeta).hefer(z)

    dbar_g = None
    if isinstance(coeffs, Exact):
        third = _third(family.r.root, n)

        def dbar_g(zeta, z):
            zeta, z = np.broadcast_arrays(
                np.asarray(zeta, dtype=complex), np.asarray(z, dtype=complex)
            )
            levi = wirtinger_derivatives(family.r, zeta, t).levi
            T = np.stack(
                [
                    np.stack(
                        [np.stack([evaluate(third[j][k][l], zeta, t) for l in range(n)], -1)
                         for k in range(n)],
                        -2,
                    )
                    for j in range(n)
                ],
                -3,
            )
            return levi + np.einsum("...jkl,...k->...jl", T, z - zeta) / 2

    residual = hefer_residual(family, t, coeffs, pairs=pairs, seed=seed)
    if residual >= HEFER_TOL:
        raise HeferIdentityError(
            "hefer_identity",
            f"Hefer identity residual {residual:.3e} at {pairs} pairs",
            details={"residual": residual},
        )
    logger.debug("%s: Hefer identity residual %.3e", family.name, residual)

    return LerayMap("hefer_levi", n, g, dbar_g)


@dataclass(frozen=True, eq=False, slots=True)
class LerayCheck:
    ok: bool
    min_ratio: float
    witness: Optional[tuple[np.ndarray, np.ndarray]]


def check_leray_nonvanishing(
    leray: LerayMap, /, zeta, z, *, strict: bool = False, floor: float = 1e-12
) -> LerayCheck:
    """Smallest `|Phi| / |zeta - z|^2` over sampled pairs"""
    zeta = np.asarray(zeta, dtype=complex)
    z = np.asarray(z, dtype=complex)
    zeta, z = np.broadcast_arrays(zeta, z)
    zeta, z = zeta.reshape(-1, leray.n), z.reshape(-1, leray.n)
    ratio = np.abs(leray.denominator(zeta, z)) / np.sum(np.abs(zeta - z) ** 2, axis=-1)

    k = int(np.argmin(ratio))
    min_ratio = float(ratio[k])
    ok = min_ratio > floor
    if not ok and strict:
        raise LerayError(
            "leray_vanishing",
            f"{leray.kind} Leray denominator vanishes, |Phi|/|w|^2 = {min_ratio:.3e}",
            details={"zeta": to_real(zeta[k]).tolist(), "z": to_real(z[k]).tolist()},
        )
    return LerayCheck(ok, min_ratio, None if ok else (zeta[k], z[k]))


@dataclass(frozen=True, eq=False, slots=True)
class KernelCoefficients:
    """
    Coefficient evaluators for `q = 1`

    - `volume`: Bochner-Martinelli density `-(n-1)!/pi^n conj(w_j) / |w|^{2n}`
    - `shell`: correction density `-kappa F / pi^2` against `dbar Ef = F dzbar_1 ^ dzbar_2`
    - `boundary`: homotopy density `kappa (f_2 nu_1 - f_1 nu_2) / (2 pi^2)`
    - `reproducing`: Leray density of the reproducing formula
    """

    n: int
    q: int
    leray: Optional[LerayMap]

    def cauchy(self, zeta, z) -> np.ndarray:
        """`1 / (2 pi i (zeta - z))`"""
        self._require(1)
        w = np.asarray(zeta, dtype=complex)[..., 0] - np.asarray(z, dtype=complex)[..., 0]
        return 1 / (2j * np.pi * w)

    def volume(self, zeta, z) -> np.ndarray:
        w = np.asarray(zeta, dtype=complex) - np.asarray(z, dtype=complex)
        norm2 = np.sum(np.abs(w) ** 2, axis=-1)[..., None]
        c = factorial(self.n - 1) / np.pi**self.n
        return -c * np.conj(w) / norm2**self.n

    def kappa(self, zeta, z) -> np.ndarray:
        """`[conj(w_1) g_2 - conj(w_2) g_1] / (|w|^2 Phi)`"""
        self._require(2)
        zeta = np.asarray(zeta, dtype=complex)
        z = np.asarray(z, dtype=complex)
        w = zeta - z
        g = self.leray.g(zeta, z)
        phi = np.sum(g * w, axis=-1)
        norm2 = np.sum(np.abs(w) ** 2, axis=-1)
        wb = np.conj(w)
        return (wb[..., 0] * g[..., 1] - wb[..., 1] * g[..., 0]) / (norm2 * phi)

    def shell(self, zeta, z, F) -> np.ndarray:
        return -self.kappa(zeta, z) * F / np.pi**2

    def boundary(self, zeta, z, nu, f) -> np.ndarray:
        nu = np.asarray(nu, dtype=complex)
        f = np.asarray(f, dtype=complex)
        cross = f[..., 1] * nu[..., 0] - f[..., 0] * nu[..., 1]
        return self.kappa(zeta, z) * cross / (2 * np.pi**2)

    def reproducing(self, zeta, z, nu) -> np.ndarray:
        zeta = np.asarray(zeta, dtype=complex)
        z = np.asarray(z, dtype=complex)
        nu = np.asarray(nu, dtype=complex)
        if self.n == 1:
            return nu[..., 0] / (2 * np.pi * (zeta[..., 0] - z[..., 0]))

        g = self.leray.g(zeta, z)
        M = self.leray.dbar_g(zeta, z)
        phi = np.sum(g * (zeta - z), axis=-1)
        g1, g2 = g[..., 0], g[..., 1]
        bracket = (g2 * M[..., 0, 1] - g1 * M[..., 1, 1]) * nu[..., 0] - (
            g2 * M[..., 0, 0] - g1 * M[..., 1, 0]
        ) * nu[..., 1]
        return -bracket / (2 * np.pi**2 * phi**2)

    def _require(self, n: int):
        if self.n != n:
            raise UnsupportedError("unsupported_dimension", f"kernel needs n={n}, got n={self.n}")
        if n == 2 and self.leray is None:
            raise PreconditionError("leray_missing", "n=2 kernels need a Leray map")


def cf_kernel_coefficients(
    leray: Optional[LerayMap], /, n: int, q: int = 1
) -> KernelCoefficients:
    """
    Kernel evaluators for `n in (1, 2)` and `q = 1`

    >>> k = cf_kernel_coefficients(None, 1)
    >>> complex(k.cauchy(np.array([1 + 0j]), np.array([0j]))) == 1 / (2j * np.pi)
    True
    """
    if n not in (1, 2):
        raise UnsupportedError("unsupported_dimension", f"kernels for n={n}")
    if q != 1:
        raise UnsupportedError("unsupported_degree", f"kernels for q={q}")
    if n == 2:
        if leray is None:
            raise PreconditionError("leray_missing", "n=2 kernels need a Leray map")
        if leray.dbar_g is None:
            logger.debug("%s Leray map without dbar data, reproducing kernel unavailable", leray.kind)
    return KernelCoefficients(n, q, leray)
