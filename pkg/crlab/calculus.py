"""
Wirtinger calculus on defining expressions, finite difference dbar on
sampled functions, and discrete Hoelder norms.

Derivatives of `r` are symbolic. Derivatives of computed solutions are
finite differences with the convention d/dz-bar = (d/dx + i d/dy) / 2.
"""

from typing import TYPE_CHECKING, Callable, Optional
from dataclasses import dataclass
from functools import lru_cache
from logging import getLogger
from warnings import warn

import numpy as np
from scipy.spatial.distance import pdist

from crlab.constants import FD_STEP, PAIR_CAP
from crlab.dev import CrlabWarning
from crlab.exceptions import StencilError, FamilyNormError
from crlab.expr import DefiningExpr, Node, Wrt, derivatives, evaluate
from crlab.util.convert import to_real

if TYPE_CHECKING:
    from crlab.domain import DomainFamily


__all__ = (
    "LeviData",
    "HolderEstimate",
    "FormSample",
    "jet",
    "gradient",
    "wirtinger_derivatives",
    "real_hessian",
    "real_hessian_fd",
    "min_levi_eigenvalue",
    "min_real_hessian_eigenvalue",
    "dbar_fd",
    "holder_seminorm",
    "family_norm",
)


logger = getLogger(__package__)


@dataclass(frozen=True, eq=False, slots=True)
class LeviData:
    """
    Wirtinger data of a real function at one or many points

    Arrays carry the batch shape of the evaluation points in front.
    """

    grad_z: np.ndarray
    levi: np.ndarray
    holo_hess: np.ndarray
    real_hess: np.ndarray

    @property
    def min_levi_eigenvalue(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.levi)[..., 0]

    @property
    def min_real_hessian_eigenvalue(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.real_hess)[..., 0]


@dataclass(frozen=True, eq=False, slots=True)
class Jet:
    """Symbolic first and second Wirtinger derivatives of an expression"""

    grad: tuple[Node, ...]
    levi: tuple[tuple[Node, ...], ...]
    holo: tuple[tuple[Node, ...], ...]


@lru_cache(maxsize=256)
def jet(root: Node, n: int, /) -> Jet:
    z = [Wrt("z", j + 1) for j in range(n)]
    zbar = [Wrt("zbar", j + 1) for j in range(n)]
    grad = tuple(derivatives(root, z[j]) for j in range(n))
    levi = tuple(tuple(derivatives(grad[j], zbar[k]) for k in range(n)) for j in range(n))
    holo = tuple(tuple(derivatives(grad[j], z[k]) for k in range(n)) for j in range(n))
    return Jet(grad, levi, holo)


def _stack(nodes, z, t) -> np.ndarray:
    return np.stack([evaluate(node, z, t) for node in nodes], axis=-1)


def gradient(expr: DefiningExpr, /, z, t=0.0) -> np.ndarray:
    """Complex gradient `(dr/dz_1, ..., dr/dz_n)` at points of shape `(..., n)`"""
    return _stack(jet(expr.root, expr.n).grad, z, t)


def real_hessian(levi: np.ndarray, holo_hess: np.ndarray, /) -> np.ndarray:
    """
    Real Hessian in the ordering `(x_1..x_n, y_1..y_n)` from the Levi form
    `B = r_{z_j zbar_k}` and the holomorphic Hessian `A = r_{z_j z_k}`
    """
    A, B = holo_hess, levi
    xx = 2 * (A + B).real
    xy = -2 * A.imag + 2 * B.imag
    yy = -2 * A.real + 2 * B.real
    top = np.concatenate([xx, xy], axis=-1)
    bottom = np.concatenate([np.swapaxes(xy, -1, -2), yy], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def wirtinger_derivatives(expr: DefiningExpr, /, z, t=0.0) -> LeviData:
    """
    Symbolic gradient, Levi form, holomorphic and real Hessian

    >>> from crlab.expr import parse_defining_function
    >>> r = parse_defining_function("abs2(z1)+abs2(z2)-1", 2)
    >>> wirtinger_derivatives(r, [0.5, 0j]).levi.real
    array([[1., 0.],
           [0., 1.]])
    """
    j = jet(expr.root, expr.n)
    grad = _stack(j.grad, z, t)
    levi = np.stack([_stack(row, z, t) for row in j.levi], axis=-2)
    holo = np.stack([_stack(row, z, t) for row in j.holo], axis=-2)
    # exact symmetries of a real function
    levi = (levi + np.conj(np.swapaxes(levi, -1, -2))) / 2
    holo = (holo + np.swapaxes(holo, -1, -2)) / 2
    return LeviData(grad, levi, holo, real_hessian(levi, holo))


def real_hessian_fd(expr: DefiningExpr, /, z, t=0.0, *, h: float = 1e-4) -> np.ndarray:
    """Central difference real Hessian, same ordering as `real_hessian`"""
    z = np.asarray(z, dtype=complex)
    n = expr.n
    directions = np.concatenate([np.eye(n), 1j * np.eye(n)]).astype(complex)
    out = np.empty(z.shape[:-1] + (2 * n, 2 * n))
    for a, ea in enumerate(directions):
        for b, eb in enumerate(directions):
            out[..., a, b] = (
                expr(z + h * (ea + eb), t)
                - expr(z + h * (ea - eb), t)
                - expr(z - h * (ea - eb), t)
                + expr(z - h * (ea + eb), t)
            ) / (4 * h * h)
    return out


def min_levi_eigenvalue(expr: DefiningExpr, /, points, t=0.0) -> float:
    """Smallest Levi form eigenvalue over sampled points"""
    points = np.asarray(points, dtype=complex)
    assert points.size > 0, "region sample must be nonempty"
    return float(np.min(wirtinger_derivatives(expr, points, t).min_levi_eigenvalue))


def min_real_hessian_eigenvalue(expr: DefiningExpr, /, points, t=0.0) -> float:
    points = np.asarray(points, dtype=complex)
    assert points.size > 0, "region sample must be nonempty"
    return float(np.min(wirtinger_derivatives(expr, points, t).min_real_hessian_eigenvalue))


def dbar_fd(
    u: Callable[[np.ndarray], np.ndarray],
    /,
    z,
    h: float = FD_STEP,
    *,
    family: Optional["DomainFamily"] = None,
    t: float = 0.0,
) -> np.ndarray:
    """
    Central difference `(du/dzbar_1, ..., du/dzbar_n)`

    `u` maps points `(..., n)` to values of shape `(...)` or `(..., m)`;
    the coefficients are stacked on a trailing axis of length `n`.
    When a family is given, every stencil point must lie inside `D^t`.

    >>> z = np.array([[0.3 + 0.2j]])
    >>> bool(abs(dbar_fd(lambda w: np.conj(w[..., 0]), z)[0, 0] - 1) < 1e-8)
    True
    """
    z = np.asarray(z, dtype=complex)
    n = z.shape[-1]
    coefficients = []

    for j in range(n):
        e = np.zeros(n, dtype=complex)
        e[j] = 1
        stencil = [z + h * e, z - h * e, z + 1j * h * e, z - 1j * h * e]

        if family is not None:
            for s in stencil:
                if not np.all(family.is_interior(s, t)):
                    raise StencilError(
                        "stencil", f"finite difference stencil leaves the domain (h={h})"
                    )

        up, um, vp, vm = (np.asarray(u(s)) for s in stencil)
        coefficients.append(((up - um) + 1j * (vp - vm)) / (4 * h))

    return np.stack(coefficients, axis=-1)


@dataclass(frozen=True, eq=False, slots=True)
class HolderEstimate:
    alpha: float
    seminorm: float
    sup_norm: float
    witness_pair: tuple[np.ndarray, np.ndarray] | None


def _condensed_to_pair(k: int, m: int) -> tuple[int, int]:
    i = int(m - 2 - np.floor(np.sqrt(-8 * k + 4 * m * (m - 1) - 7) / 2 - 0.5))
    j = int(k + i + 1 - m * (m - 1) // 2 + (m - i) * ((m - i) - 1) // 2)
    return i, j


def holder_seminorm(
    points,
    values,
    /,
    alpha: float,
    *,
    cap: int = PAIR_CAP,
    seed: int = 0,
) -> HolderEstimate:
    """
    Brute force Hoelder quotient `max |u(x) - u(y)| / |x - y|^alpha` over
    all sampled pairs

    The scan is O(N^2); beyond `cap` samples a seeded subsample is used.
    Complex points are measured in their real coordinates.

    >>> x = np.linspace(0, 1, 11)[:, None]
    >>> round(holder_seminorm(x, x[:, 0], 1.0).seminorm, 12)
    1.0
    """
    assert 0 < alpha <= 1, "alpha must be in (0, 1]"
    points = np.asarray(points)
    if np.iscomplexobj(points):
        points = to_real(points)
    points = points.reshape(len(points), -1).astype(float)
    values = np.asarray(values).reshape(len(points), -1)
    assert len(points) >= 2, "at least two samples required"

    sup_norm = float(np.max(np.linalg.norm(values, axis=-1)))

    if len(points) > cap:
        warn(
            f"Hoelder scan subsampled from {len(points)} to {cap} points",
            stacklevel=2,
            category=CrlabWarning,
        )
        keep = np.sort(np.random.default_rng(seed).choice(len(points), cap, replace=False))
        points, values = points[keep], values[keep]

    if np.iscomplexobj(values):
        values = np.concatenate([values.real, values.imag], axis=-1)

    dx = pdist(points)
    du = pdist(values)
    valid = dx > 0
    if not np.any(valid):
        return HolderEstimate(alpha, 0.0, sup_norm, None)

    quotient = np.zeros_like(dx)
    quotient[valid] = du[valid] / dx[valid] ** alpha
    k = int(np.argmax(quotient))
    i, j = _condensed_to_pair(k, len(points))
    return HolderEstimate(alpha, float(quotient[k]), sup_norm, (points[i], points[j]))


@dataclass(frozen=True, eq=False, slots=True)
class FormSample:
    """
    Samples of a form coefficient on a `(t, x)` tensor grid

    `values` has shape `(len(t_grid), len(axes[0]), ..., len(axes[-1]))`,
    optionally followed by one component axis. `axes` are the real
    coordinate axes `(Re z1, Im z1, ...)`.
    """

    t_grid: np.ndarray
    axes: tuple[np.ndarray, ...]
    values: np.ndarray

    @property
    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    @property
    def components(self) -> bool:
        return self.values.ndim == 2 + len(self.axes)


def _spatial_norm(sample: FormSample, v: np.ndarray, b: float) -> float:
    """`|v|_b` of one time slice, `v` shaped like the spatial grid"""
    order = int(np.floor(b))
    fraction = b - order
    ndim = len(sample.axes)
    level = [v]
    norm = float(np.max(np.abs(v)))

    for _ in range(order):
        nxt = []
        for w in level:
            for axis in range(ndim):
                nxt.append(np.gradient(w, sample.axes[axis], axis=axis, edge_order=2))
        level = nxt
        norm = max(norm, max(float(np.max(np.abs(w))) for w in level))

    if fraction > 0:
        points = sample.points
        for w in level:
            est = holder_seminorm(points, w.ravel(), fraction)
            norm = max(norm, est.seminorm)

    return norm


def family_norm(sample: FormSample, /, a: float, j: int) -> float:
    """
    Discrete mixed norm `max_{i <= j} sup_t |d_t^i u^t|_{max(a - i, 0)}`

    Parameter derivatives are central differences along the t-grid, which
    needs at least `2 i + 1` grid values for order `i`.
    """
    count = len(sample.t_grid)
    if count < 2 * j + 1:
        raise FamilyNormError(
            "t_grid", f"{count} t values cannot resolve derivatives of order {j}"
        )

    values = sample.values
    if sample.components:
        slices = [values[..., c] for c in range(values.shape[-1])]
    else:
        slices = [values]

    norm = 0.0
    for v in slices:
        dv = v
        for i in range(j + 1):
            if i > 0:
                dv = np.gradient(dv, sample.t_grid, axis=0, edge_order=2)
            b = max(a - i, 0.0)
            for slice_ in dv:
                norm = max(norm, _spatial_norm(sample, slice_, b))

    logger.debug("family norm a=%s j=%s: %.6g", a, j, norm)
    return norm
