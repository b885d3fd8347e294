"""
Narasimhan normalization at a boundary point and Grauert bumps.

The chart is `psi = phi2 . phi1 . phi0` with

- `phi0(z) = S (z - p)`, `S` unitary, sending the outward normal to `-i e_n`;
- `phi1 = G1^{-1}`, `G1(u) = (u', u_n + i sum A_jk u_j u_k)`, removing the
  holomorphic quadratic part of `r1 = r . phi0^{-1} / (2 |r_z(p)|)`;
- `phi2 = G2^{-1}`, `G2(v) = (v', v_n + i kappa v_n^2)` with `kappa = -1/4`,
  removing the holomorphic quadratic part created by the exponential in
  `r* = exp(r1 . G1 . G2) - 1`.

Afterwards `r* = -y_n + (Hermitian quadratic) + O(|v|^3)`.
"""

from typing import TYPE_CHECKING, Optional
from dataclasses import dataclass, replace
from logging import getLogger

import numpy as np
from scipy.linalg import null_space
from scipy.spatial import cKDTree

from crlab.exceptions import NonStarShapedError, NormalizationError
from crlab.expr import DefiningExpr, Node
from crlab.expr.nodes import ONE, add, call, const, mul, profile, sub, total, var
from crlab.calculus import min_real_hessian_eigenvalue, wirtinger_derivatives
from crlab.domain import DomainFamily, ray_roots, sample_boundary, sphere_rule, uniform_grid
from crlab.util.convert import to_real

if TYPE_CHECKING:
    from crlab.types.report import CertificateDict


__all__ = (
    "KAPPA",
    "BoundaryChart",
    "BumpCertificate",
    "BumpResult",
    "GrauertSequence",
    "narasimhan_normalize",
    "normal_form_residues",
    "verify_strict_convexity",
    "build_bump",
    "search_bump",
    "boundary_cover",
    "grauert_sequence",
)


logger = getLogger(__package__)

KAPPA = -0.25
NORMAL_FORM_TOL = 1e-10
JACOBIAN_TOL = 1e-6
CHART_GRID = 9
FAN_RAYS = 512
WINDOW_POINTS = 17


def _linear(coefficients, offset: complex = 0) -> Node:
    terms = [mul(const(c), var(j + 1)) for j, c in enumerate(coefficients) if c != 0]
    return add(const(offset), total(terms))


def _norm2(n: int, center=None) -> Node:
    if center is None:
        return total(call("abs2", var(k + 1)) for k in range(n))
    return total(call("abs2", sub(var(k + 1), const(center[k]))) for k in range(n))


@dataclass(frozen=True, eq=False, slots=True)
class BoundaryChart:
    """
    Normalizing chart at a boundary point `p` of `D^t`

    `rstar` is a defining expression in the chart variable `v`.
    """

    p: np.ndarray
    t: float
    S: np.ndarray
    scale: float
    quad1: np.ndarray
    rstar: DefiningExpr
    eps0: float = 0.5
    cstar: float = 10.0
    delta: float = 0.05
    eps2: Optional[float] = None
    kappa: float = KAPPA

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def eps1(self) -> float:
        return self.eps0 / 2

    @property
    def radius2(self) -> float:
        """Bump radius `eps2`, half of `eps1` unless set"""
        return self.eps1 / 2 if self.eps2 is None else self.eps2

    def phi0(self, z) -> np.ndarray:
        return (np.asarray(z, dtype=complex) - self.p) @ self.S.T

    def phi0_inv(self, w) -> np.ndarray:
        return self.p + np.asarray(w, dtype=complex) @ np.conj(self.S)

    def g1(self, u) -> np.ndarray:
        u = np.array(u, dtype=complex)
        u[..., -1] += 1j * np.einsum("...j,jk,...k->...", u, self.quad1, u)
        return u

    def g2(self, v) -> np.ndarray:
        v = np.array(v, dtype=complex)
        v[..., -1] += 1j * self.kappa * v[..., -1] ** 2
        return v

    def g1_inv(self, w, *, iterations: int = 50) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        u = np.array(w)
        for _ in range(iterations):
            residual = self.g1(u)[..., -1] - w[..., -1]
            slope = 1 + 2j * (u @ self.quad1.T)[..., -1]
            u[..., -1] -= residual / slope
            if np.max(np.abs(residual), initial=0.0) < 1e-15:
                break
        return u

    def g2_inv(self, u, *, iterations: int = 50) -> np.ndarray:
        u = np.asarray(u, dtype=complex)
        v = np.array(u)
        for _ in range(iterations):
            residual = v[..., -1] + 1j * self.kappa * v[..., -1] ** 2 - u[..., -1]
            v[..., -1] -= residual / (1 + 2j * self.kappa * v[..., -1])
            if np.max(np.abs(residual), initial=0.0) < 1e-15:
                break
        return v

    def to_chart(self, z) -> np.ndarray:
        """`psi(z)`"""
        return self.g2_inv(self.g1_inv(self.phi0(z)))

    def from_chart(self, v) -> np.ndarray:
        return self.phi0_inv(self.g1(self.g2(v)))

    def jacobians(self, v) -> tuple[np.ndarray, np.ndarray]:
        """`det G1` at `G2(v)` and `det G2` at `v`"""
        v = np.asarray(v, dtype=complex)
        u = self.g2(v)
        return 1 + 2j * (u @ self.quad1.T)[..., -1], 1 + 2j * self.kappa * v[..., -1]

    def grid(self, radius: float, grid_n: int = CHART_GRID) -> np.ndarray:
        """Tensor grid points of the chart ball of `radius`"""
        box = np.tile([-radius, radius], (2 * self.n, 1))
        points, _ = uniform_grid(box, grid_n)
        return points[np.linalg.norm(points, axis=-1) <= radius]


def narasimhan_normalize(
    family: DomainFamily,
    /,
    t: float,
    p,
    *,
    eps0: float = 0.5,
    grid_n: int = CHART_GRID,
) -> tuple[BoundaryChart, DefiningExpr]:
    """
    Normalizing chart and `r* = exp(r2 . G2) - 1` at the boundary point `p`

    The chart radius starts at `eps0` and is halved until `r*` is strictly
    convex on the chart ball grid.
    """
    p = np.asarray(p, dtype=complex)
    n = family.n
    r = family.r.freeze(t)

    if abs(float(r(p))) > 1e-8:
        raise NormalizationError(
            "normal_form", f"{family.name}: r({to_real(p).tolist()}) = {float(r(p)):.3e} is not 0"
        )

    data = wirtinger_derivatives(r, p)
    g = data.grad_z
    gnorm = float(np.linalg.norm(g))
    if gnorm < 1e-12:
        raise NormalizationError("degenerate_gradient", f"{family.name}: r_z(p) vanishes")
    if float(data.min_levi_eigenvalue) <= 0:
        raise NormalizationError(
            "not_strict",
            f"{family.name}: Levi form at p has eigenvalue {float(data.min_levi_eigenvalue):.3e}",
        )

    nu = np.conj(g) / gnorm
    tangent = null_space(np.conj(nu)[None, :])
    S = np.concatenate([np.conj(tangent).T, -1j * np.conj(nu)[None, :]], axis=0)
    scale = 1 / (2 * gnorm)

    # r1(w) = r(p + S^H w) / (2 |r_z(p)|)
    to_z = {k + 1: _linear(np.conj(S[:, k]), p[k]) for k in range(n)}
    r1 = DefiningExpr(mul(const(scale), r.substitute(to_z).root), n)
    A = wirtinger_derivatives(r1, np.zeros(n, dtype=complex)).holo_hess

    u = [var(j + 1) for j in range(n)]
    shear1 = add(u[-1], mul(const(1j), total(
        mul(const(A[j, k]), mul(u[j], u[k])) for j in range(n) for k in range(n) if A[j, k] != 0
    )))
    r2 = r1.substitute({n: shear1})
    shear2 = add(u[-1], mul(const(1j * KAPPA), mul(u[-1], u[-1])))
    rstar = DefiningExpr(sub(call("exp", r2.substitute({n: shear2}).root), ONE), n)

    _check_normal_form(rstar, family.name)

    for _ in range(12):
        chart = BoundaryChart(p, float(t), S, scale, A, rstar, eps0=eps0)
        if verify_strict_convexity(rstar, eps0, grid_n) > 0:
            break
        eps0 /= 2
    else:
        raise NormalizationError(
            "normal_form", f"{family.name}: r* is not convex on any tested chart ball"
        )

    points = chart.grid(eps0, grid_n)
    det1, det2 = chart.jacobians(points)
    smallest = float(min(np.min(np.abs(det1)), np.min(np.abs(det2))))
    if smallest <= JACOBIAN_TOL:
        raise NormalizationError(
            "normal_form", f"{family.name}: chart shear Jacobian {smallest:.3e} on the chart ball"
        )

    logger.info(
        "%s: normalized at p=%s t=%g, eps0=%g, |A|=%.3e",
        family.name, np.round(to_real(p), 6).tolist(), t, eps0, float(np.max(np.abs(A))),
    )
    return chart, rstar


def normal_form_residues(rstar: DefiningExpr, /) -> dict[str, float]:
    """Deviation of `r*` from `0`, gradient `(0, ..., i/2)` and zero holomorphic Hessian at the origin"""
    n = rstar.n
    origin = np.zeros(n, dtype=complex)
    data = wirtinger_derivatives(rstar, origin)
    expected = np.zeros(n, dtype=complex)
    expected[-1] = 0.5j

    value = abs(float(rstar(origin)))
    grad = float(np.max(np.abs(data.grad_z - expected)))
    holo = float(np.max(np.abs(data.holo_hess)))
    return {"value": value, "grad": grad, "holo_hess": holo}


def _check_normal_form(rstar: DefiningExpr, name: str):
    residues = normal_form_residues(rstar)
    value, grad, holo = residues["value"], residues["grad"], residues["holo_hess"]
    if max(value, grad, holo) >= NORMAL_FORM_TOL:
        raise NormalizationError(
            "normal_form",
            f"{name}: normal form residue value={value:.2e} grad={grad:.2e} holo={holo:.2e}",
            details=residues,
        )


def verify_strict_convexity(rstar: DefiningExpr, /, radius: float, grid_n: int = CHART_GRID) -> float:
    """
    Smallest real Hessian eigenvalue over the tensor grid of the ball of
    `radius` about 0

    >>> from crlab.expr import parse_defining_function
    >>> verify_strict_convexity(parse_defining_function("re(z1^2)", 1), 0.5)
    -2.0
    """
    assert radius > 0 and grid_n >= 2, "grid must cover a ball of positive radius"
    box = np.tile([-radius, radius], (2 * rstar.n, 1))
    points, _ = uniform_grid(box, grid_n)
    points = points[np.linalg.norm(points, axis=-1) <= radius]
    return min_real_hessian_eigenvalue(rstar, points)


@dataclass(frozen=True, eq=False, slots=True)
class BumpCertificate:
    point: np.ndarray
    t: float
    eps0: float
    eps1: float
    eps2: float
    delta: float
    cstar: float
    min_real_hessian_eig: float
    min_levi_next: float
    separation_ok: bool
    compact_ok: bool
    patch_ok: bool
    covered_boundary_patch: np.ndarray
    violations: tuple[str, ...]

    @property
    def valid(self) -> bool:
        return self.min_real_hessian_eig > 0 and self.separation_ok

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> "CertificateDict":
        return {
            "point": to_real(self.point).tolist(),
            "t": self.t,
            "eps0": self.eps0,
            "eps1": self.eps1,
            "eps2": self.eps2,
            "delta": self.delta,
            "cstar": self.cstar,
            "min_real_hessian_eig": self.min_real_hessian_eig,
            "min_levi_next": self.min_levi_next,
            "separation_ok": self.separation_ok,
            "compact_ok": self.compact_ok,
            "patch_ok": self.patch_ok,
            "violations": list(self.violations),
        }


def _fan(family: DomainFamily, p: np.ndarray, spread: float, count: int, seed: int) -> np.ndarray:
    """Ray directions from the family center through a neighbourhood of `p`"""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((count, 2 * family.n))
    x *= (spread * rng.uniform(0, 1, count) / np.linalg.norm(x, axis=-1))[:, None]
    q = p + x[:, 0::2] + 1j * x[:, 1::2]
    d = q - family.center
    return d / np.linalg.norm(d, axis=-1, keepdims=True)


def build_bump(
    family: DomainFamily,
    /,
    t: float,
    chart: BoundaryChart,
    *,
    grid_n: int = CHART_GRID,
    fan: int = FAN_RAYS,
    seed: int = 0,
) -> tuple[DefiningExpr, DefiningExpr, BumpCertificate]:
    """
    Convexified piece `N_hat = {r* + C* chi0(|v|^2 / eps1^2) < 0}` in chart
    coordinates and the bumped defining function
    `r_next = r - delta chi1(|z - p|^2 / eps2^2)`

    Failed checks are named in `violations`; nothing is raised.
    """
    n = family.n
    p = chart.p
    eps0, eps1, eps2 = chart.eps0, chart.eps1, chart.radius2
    delta, cstar = chart.delta, chart.cstar
    r = family.r.freeze(t)
    violations = []

    rhat = DefiningExpr(
        add(chart.rstar.root, mul(const(cstar), profile("chi0", mul(const(eps1**-2), _norm2(n))))),
        n,
    )
    r_next = DefiningExpr(
        sub(r.root, mul(const(delta), profile("chi1", mul(const(eps2**-2), _norm2(n, p))))),
        n,
    )

    min_hess = verify_strict_convexity(chart.rstar, eps0, grid_n)
    if min_hess <= 0:
        violations.append("convexity")

    theta, _ = sphere_rule(n, 16)
    compact_ok = bool(np.min(rhat(eps0 * theta)) > 0)
    if not compact_ok:
        violations.append("compactness")

    window = to_real(p)[:, None] + np.array([-2 * eps2, 2 * eps2])
    points, axes = uniform_grid(window, WINDOW_POINTS)
    h = float(axes[0][1] - axes[0][0])
    before, after = r(points), r_next(points)
    s = np.sum(np.abs(points - p) ** 2, axis=-1) / eps2**2
    monotone = np.all(after <= before) and np.all(after[s >= 2] == before[s >= 2])
    if delta > 0:
        monotone = monotone and np.all(after[s < 1.9] < before[s < 1.9])
    if not monotone:
        violations.append("monotone")

    directions = _fan(family, p, 1.5 * eps2, fan, seed)
    R, failed = ray_roots(family, t, directions)
    boundary = family.center + R[~failed, None] * directions[~failed]
    patch = boundary[np.linalg.norm(boundary - p, axis=-1) < eps2]
    patch_ok = bool(len(patch)) and bool(np.all(r_next(patch) < 0))
    if not patch_ok:
        violations.append("patch")

    bumped = DomainFamily(r_next, family.box, center=family.center, name=f"{family.name}+bump")
    shell = np.empty((0, n), dtype=complex)
    try:
        R_next, failed_next = ray_roots(bumped, t, directions)
        ok = ~failed_next
        roots = family.center + R_next[ok, None] * directions[ok]
        near = np.linalg.norm(roots - p, axis=-1) < 2 * eps2
        min_levi = float(np.min(
            wirtinger_derivatives(r_next, roots[near]).min_levi_eigenvalue, initial=np.inf
        ))
        both = ok & ~failed
        middle = family.center + ((R[both] + R_next[both]) / 2)[:, None] * directions[both]
        shell = middle[R_next[both] > R[both] + 1e-12]
    except NonStarShapedError as e:
        logger.debug("bumped boundary is not star-shaped: %s", e)
        min_levi = -np.inf
    if not min_levi > 0:
        violations.append("levi")

    # (B \ D) and (D \ N) are disjoint at grid resolution, N = D near p in the chart
    added = np.concatenate([points[(after < 0) & (before >= 0)], shell])
    chart_radius = np.linalg.norm(chart.to_chart(points), axis=-1)
    rest = points[(before < 0) & (chart_radius >= eps1)]
    separation_ok = True
    if len(added) and len(rest):
        distance, _ = cKDTree(to_real(rest)).query(to_real(added))
        separation_ok = bool(np.min(distance) > 1.01 * h)
    if not separation_ok:
        violations.append("separation")

    cert = BumpCertificate(
        point=p,
        t=float(t),
        eps0=eps0,
        eps1=eps1,
        eps2=eps2,
        delta=delta,
        cstar=cstar,
        min_real_hessian_eig=float(min_hess),
        min_levi_next=min_levi,
        separation_ok=separation_ok,
        compact_ok=compact_ok,
        patch_ok=patch_ok,
        covered_boundary_patch=patch,
        violations=tuple(violations),
    )
    logger.debug("bump certificate at %s: %s", to_real(p).tolist(), violations or "pass")
    return rhat, r_next, cert


@dataclass(frozen=True, eq=False, slots=True)
class BumpResult:
    chart: BoundaryChart
    n_hat: DefiningExpr
    r_next: DefiningExpr
    certificate: BumpCertificate


def search_bump(
    family: DomainFamily,
    /,
    t: float,
    p,
    *,
    delta: float = 0.05,
    cstar: float = 10.0,
    eps0: float = 0.5,
    max_steps: int = 24,
    grid_n: int = CHART_GRID,
) -> BumpResult:
    """
    Halving search over `(delta, eps2, C*)`

    Levi or patch failures halve `delta`, separation failures halve `eps2`
    and compactness failures double `C*`. The last attempt is returned
    when no certificate passes.
    """
    chart, _ = narasimhan_normalize(family, t, p, eps0=eps0, grid_n=grid_n)
    chart = replace(chart, delta=delta, cstar=cstar)

    for step in range(max_steps):
        n_hat, r_next, cert = build_bump(family, t, chart, grid_n=grid_n)
        if cert.passed:
            break
        if "convexity" in cert.violations:
            break

        changes = {}
        if "compactness" in cert.violations:
            changes["cstar"] = chart.cstar * 2
        if "levi" in cert.violations or "patch" in cert.violations or "monotone" in cert.violations:
            changes["delta"] = chart.delta / 2
        if "separation" in cert.violations:
            changes["eps2"] = chart.radius2 / 2
        chart = replace(chart, **changes)

    logger.info(
        "%s: bump at %s after %d steps, eps0=%g eps2=%g delta=%g C*=%g (%s)",
        family.name, np.round(to_real(chart.p), 6).tolist(), step + 1, chart.eps0,
        chart.radius2, chart.delta, chart.cstar, "pass" if cert.passed else ",".join(cert.violations),
    )
    return BumpResult(chart, n_hat, r_next, cert)


def boundary_cover(family: DomainFamily, /, t: float, eps2: float, resolution: int = 16) -> np.ndarray:
    """
    Greedy farthest point cover of a boundary sample by `eps2`-patches

    The first center is the first sample point; each next center is the
    sample point farthest from the chosen ones, until all are within `eps2`.
    """
    sample = sample_boundary(family, t, resolution)
    x = to_real(sample.points)
    chosen = [0]
    distance = np.linalg.norm(x - x[0], axis=-1)
    while np.max(distance) >= eps2:
        k = int(np.argmax(distance))
        chosen.append(k)
        distance = np.minimum(distance, np.linalg.norm(x - x[k], axis=-1))

    logger.info("%s: %d patches of radius %g cover %d boundary samples",
                family.name, len(chosen), eps2, len(x))
    return sample.points[chosen]


@dataclass(frozen=True, eq=False, slots=True)
class GrauertSequence:
    exprs: tuple[DefiningExpr, ...]
    certificates: tuple[BumpCertificate, ...]
    nested: bool


def grauert_sequence(
    family: DomainFamily,
    /,
    t: float,
    points,
    *,
    delta: float = 0.05,
    grid_resolution: int = 9,
    **options,
) -> GrauertSequence:
    """
    Bump successively at `points`, each moved onto the current boundary
    along its ray from the center, and check `r_0 >= r_1 >= ...` on a grid
    """
    current = family
    exprs = [family.r.freeze(t)]
    certificates = []

    for p in np.asarray(points, dtype=complex):
        direction = (p - family.center) / np.linalg.norm(p - family.center)
        R, failed = ray_roots(current, t, direction[None])
        if failed[0]:
            raise NormalizationError("normal_form", f"{current.name}: no boundary point along ray")
        q = family.center + R[0] * direction
        result = search_bump(current, t, q, delta=delta, **options)
        certificates.append(result.certificate)
        exprs.append(result.r_next)
        current = DomainFamily(
            result.r_next, family.box, center=family.center, name=f"{family.name}[{len(exprs) - 1}]"
        )

    grid, _ = uniform_grid(family.box, grid_resolution)
    values = [expr(grid, t) for expr in exprs]
    nested = all(np.all(b <= a + 1e-12) for a, b in zip(values, values[1:]))
    if not nested:
        logger.warning("%s: bumped sequence is not monotone on the grid", family.name)
    return GrauertSequence(tuple(exprs), tuple(certificates), nested)
