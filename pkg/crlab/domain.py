"""
Parameter dependent domains `D^t = {z in box : r(z, t) < 0}`.

Boundaries are sampled along rays from a declared center, which assumes
every `D^t` is star-shaped with respect to it.
"""

from typing import TYPE_CHECKING, Optional, Self
from dataclasses import dataclass, field
from enum import StrEnum, auto
from logging import getLogger

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.spatial import cKDTree

from crlab.constants import (
    BOUNDARY_TOL,
    NEWTON_MAX_ITER,
    RAY_SAMPLES,
    ROOT_RESIDUAL,
    ROOT_TOL,
)
from crlab.exceptions import (
    EvaluationError,
    NonStarShapedError,
    RayError,
    UnsupportedError,
    exception,
)
from crlab.expr import DefiningExpr, parse_defining_function
from crlab.calculus import gradient
from crlab.util.convert import to_point, to_real

if TYPE_CHECKING:
    from crlab.types.config import FamilyDict


__all__ = (
    "PointClass",
    "DomainFamily",
    "BoundarySample",
    "Witness",
    "classify_point",
    "sphere_rule",
    "ray_roots",
    "sample_boundary",
    "uniform_grid",
    "sublevel_masks",
    "check_total_space_compactness",
    "check_openness",
    "monte_carlo_volume",
)


logger = getLogger(__package__)


class PointClass(StrEnum):
    INTERIOR = auto()
    BOUNDARY = auto()
    EXTERIOR = auto()


@dataclass(frozen=True, eq=False, slots=True)
class DomainFamily:
    """
    Family `{D^t}` given by a defining expression

    `box` has one `[lo, hi]` row per real coordinate in the order
    `(Re z1, Im z1, Re z2, Im z2, ...)`.
    """

    r: DefiningExpr
    box: np.ndarray
    t_range: tuple[float, float] = (0.0, 1.0)
    center: np.ndarray = field(default=None)
    boundary_tol: float = BOUNDARY_TOL
    name: str = "family"

    def __post_init__(self):
        box = np.asarray(self.box, dtype=float)
        assert box.shape == (2 * self.r.n, 2), f"box must have {2 * self.r.n} rows"
        assert np.all(box[:, 0] < box[:, 1]), "box bounds must be increasing"
        object.__setattr__(self, "box", box)

        lo, hi = self.t_range
        assert 0 <= lo <= hi <= 1, "t_range must be a subinterval of [0, 1]"
        object.__setattr__(self, "t_range", (float(lo), float(hi)))

        center = self.center
        if center is None:
            center = to_point(box.mean(axis=1))
        object.__setattr__(self, "center", np.asarray(center, dtype=complex))
        assert self.boundary_tol > 0, "boundary_tol must be positive"

    @property
    def n(self) -> int:
        return self.r.n

    @classmethod
    def from_dict(cls, data: "FamilyDict") -> Self:
        n = int(data["n"])
        r = parse_defining_function(data["r"], n, constants=data.get("constants"))
        center = data.get("center")
        return cls(
            r=r,
            box=np.asarray(data["box"], dtype=float),
            t_range=tuple(data.get("t_range", (0.0, 1.0))),
            center=None if center is None else to_point(center),
            boundary_tol=float(data.get("boundary_tol", BOUNDARY_TOL)),
            name=data.get("name", "family"),
        )

    def to_dict(self) -> "FamilyDict":
        return {
            "n": self.n,
            "r": str(self.r),
            "box": self.box.tolist(),
            "t_range": list(self.t_range),
            "center": to_real(self.center).tolist(),
            "boundary_tol": self.boundary_tol,
            "name": self.name,
        }

    def value(self, z, t=0.0) -> np.ndarray:
        return self.r(z, t)

    def in_box(self, z) -> np.ndarray:
        x = to_real(z)
        return np.all((x >= self.box[:, 0]) & (x <= self.box[:, 1]), axis=-1)

    def is_interior(self, z, t=0.0) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        inside = self.in_box(z)
        out = np.zeros(inside.shape, dtype=bool)
        if np.any(inside):
            out[inside] = self.r(z[inside], _select(t, inside)) < -self.boundary_tol
        return out

    def classify(self, z, t=0.0) -> np.ndarray:
        """Vectorized `PointClass` values"""
        z = np.asarray(z, dtype=complex)
        inside = self.in_box(z)
        values = np.full(inside.shape, np.inf)
        if np.any(inside):
            values[inside] = self.r(z[inside], _select(t, inside))
        out = np.full(inside.shape, PointClass.EXTERIOR.value, dtype=object)
        out[values < -self.boundary_tol] = PointClass.INTERIOR.value
        out[np.abs(values) <= self.boundary_tol] = PointClass.BOUNDARY.value
        return out

    def check_samples(self, /, count: int = 256, t_count: int = 5, *, seed: int = 0) -> None:
        """
        Sampled invariants: finite real values on the box and a nonempty
        `D^t` (its center interior) for every sampled t
        """
        rng = np.random.default_rng(seed)
        x = rng.uniform(self.box[:, 0], self.box[:, 1], size=(count, 2 * self.n))
        z = to_point(x)
        for t in np.linspace(*self.t_range, t_count):
            values = self.r(z, t)
            if not np.all(np.isfinite(values)):
                raise EvaluationError(
                    "division_by_zero", f"{self.name}: nonfinite values at t={t:g}"
                )
            if not self.is_interior(self.center[None], t)[0]:
                raise exception(
                    "ray_no_root", f"{self.name}: center is not interior at t={t:g}"
                )


def _select(t, mask):
    t = np.asarray(t, dtype=float)
    return t if t.ndim == 0 else t[mask]


def classify_point(family: DomainFamily, z, t=0.0) -> PointClass:
    """
    Classify a single point by its defining function value

    >>> from crlab.dev.testing import BuiltinFamily
    >>> classify_point(BuiltinFamily.BALL.family(), [0j, 0j])
    <PointClass.INTERIOR: 'interior'>
    """
    z = np.asarray(z, dtype=complex)
    return PointClass(family.classify(z[None], t)[0])


def sphere_rule(n: int, resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Directions on the unit sphere of `C^n` and their surface weights

    - `n == 1`: trapezoid in the angle, weights sum to `2 pi`.
    - `n == 2`: `theta = (cos(eta) e^{i a}, sin(eta) e^{i b})` with
      Gauss-Legendre in `eta` and trapezoid in `a`, `b`; weights sum to `2 pi^2`.
    """
    match n:
        case 1:
            a = 2 * np.pi * np.arange(resolution) / resolution
            return np.exp(1j * a)[:, None], np.full(resolution, 2 * np.pi / resolution)
        case 2:
            x, w = leggauss(max(resolution // 2, 1))
            eta = (x + 1) * np.pi / 4
            w_eta = w * np.pi / 4
            a = 2 * np.pi * np.arange(resolution) / resolution
            E, A, B = np.meshgrid(eta, a, a, indexing="ij")
            W = np.broadcast_to(
                (w_eta * np.sin(eta) * np.cos(eta))[:, None, None], E.shape
            ) * (2 * np.pi / resolution) ** 2
            theta = np.stack(
                [np.cos(E) * np.exp(1j * A), np.sin(E) * np.exp(1j * B)], axis=-1
            )
            return theta.reshape(-1, 2), W.ravel()
        case _:
            raise UnsupportedError("unsupported_dimension", f"sphere rule for n={n}")


def _exit_distance(family: DomainFamily, theta: np.ndarray, origin: np.ndarray) -> np.ndarray:
    c = to_real(origin)
    d = to_real(theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        hi = np.where(d > 0, (family.box[:, 1] - c) / d, np.inf)
        lo = np.where(d < 0, (family.box[:, 0] - c) / d, np.inf)
    return np.min(np.minimum(hi, lo), axis=-1)


@dataclass(frozen=True, eq=False, slots=True)
class BoundarySample:
    """Boundary points found along rays from the family center"""

    t: float
    directions: np.ndarray
    weights: np.ndarray
    radii: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    failed: np.ndarray

    def __len__(self) -> int:
        return len(self.points)


def ray_roots(
    family: DomainFamily,
    /,
    t: float,
    directions: np.ndarray,
    *,
    origin: Optional[np.ndarray] = None,
    samples: int = RAY_SAMPLES,
    chunk: int = 4096,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Radius of the boundary crossing along each ray from `origin`, the
    family center by default

    Returns `(radii, failed)`; failed rays carry `nan`. Multiple sign
    changes on a ray raise `NonStarShapedError`.
    """
    directions = np.asarray(directions, dtype=complex)
    radii = np.full(len(directions), np.nan)
    failed = np.zeros(len(directions), dtype=bool)

    for start in range(0, len(directions), chunk):
        sl = slice(start, start + chunk)
        r, f = _ray_chunk(family, t, directions[sl], samples, origin)
        radii[sl], failed[sl] = r, f

    if np.any(failed):
        logger.debug("%s: %d of %d rays without a root at t=%g",
                     family.name, int(failed.sum()), len(failed), t)
    return radii, failed


def _side(values) -> np.ndarray:
    return np.where(np.asarray(values) > 0, 1, -1)


def _ray_chunk(family, t, theta, samples, origin):
    c = family.center if origin is None else np.asarray(origin, dtype=complex)
    exit_ = _exit_distance(family, theta, c)
    s = exit_[:, None] * np.linspace(0, 1, samples + 1)[1:]
    values = family.r(c + s[..., None] * theta[:, None, :], t)
    r0 = family.r(c, t)

    # a sample exactly on r = 0 counts as inside
    signs = np.concatenate(
        [np.full((len(theta), 1), _side(r0)), _side(values)], axis=1
    )
    changes = np.sum(np.diff(signs, axis=1) != 0, axis=1)

    if np.any(changes > 1):
        k = int(np.argmax(changes > 1))
        raise NonStarShapedError(
            "ray_multiple_roots",
            f"{family.name}: ray {k} crosses the boundary {int(changes[k])} times at t={t:g}",
            details={"ray": k, "t": t},
        )

    failed = changes == 0
    first = np.argmax(np.diff(signs, axis=1) != 0, axis=1)
    grid = np.concatenate([np.zeros((len(theta), 1)), s], axis=1)
    rows = np.arange(len(theta))
    lo = grid[rows, first]
    hi = grid[rows, first + 1]
    lo[failed], hi[failed] = 0.0, 0.0

    def f(radius):
        return family.r(c + radius[:, None] * theta, t)

    # bisection narrows the bracket before Newton
    f_lo = f(lo)
    for _ in range(30):
        mid = (lo + hi) / 2
        f_mid = f(mid)
        left = _side(f_mid) == _side(f_lo)
        lo = np.where(left, mid, lo)
        f_lo = np.where(left, f_mid, f_lo)
        hi = np.where(left, hi, mid)

    radius = (lo + hi) / 2
    for _ in range(NEWTON_MAX_ITER):
        z = c + radius[:, None] * theta
        value = family.r(z, t)
        slope = 2 * np.real(np.sum(gradient(family.r, z, t) * theta, axis=-1))
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(np.abs(slope) > 0, value / slope, 0.0)
        step[failed] = 0.0
        radius = np.clip(radius - step, lo - (hi - lo), hi + (hi - lo))
        if np.max(np.abs(step), initial=0.0) < ROOT_TOL:
            break

    residual = np.abs(f(radius))
    failed = failed | (residual >= ROOT_RESIDUAL)
    radius[failed] = np.nan
    return radius, failed


def sample_boundary(
    family: DomainFamily,
    /,
    t: float,
    resolution: int,
    *,
    strict: bool = False,
) -> BoundarySample:
    """
    Root refined boundary points with unit outward normals

    Normals are `conj(r_z) / |r_z|`, the complex form of the real gradient.
    Failed rays are dropped and reported; with `strict` any failure raises.
    """
    theta, weights = sphere_rule(family.n, resolution)
    radii, failed = ray_roots(family, t, theta)

    if np.any(failed) and (strict or np.all(failed)):
        raise RayError(
            "ray_no_root",
            f"{family.name}: {int(failed.sum())} rays without a boundary crossing at t={t:g}",
            details={"rays": np.flatnonzero(failed).tolist(), "t": t},
        )

    ok = ~failed
    points = family.center + radii[ok, None] * theta[ok]
    g = np.conj(gradient(family.r, points, t))
    norm = np.linalg.norm(g, axis=-1)
    if np.any(norm == 0):
        raise exception("degenerate_gradient", f"{family.name}: vanishing gradient on the boundary")

    return BoundarySample(
        t=float(t),
        directions=theta[ok],
        weights=weights[ok],
        radii=radii[ok],
        points=points,
        normals=g / norm[:, None],
        failed=np.flatnonzero(failed),
    )


def uniform_grid(box: np.ndarray, /, resolution: int) -> tuple[np.ndarray, tuple[np.ndarray, ...]]:
    """Uniform tensor grid over a real box, as complex points and real axes"""
    axes = tuple(np.linspace(lo, hi, resolution) for lo, hi in np.asarray(box))
    mesh = np.meshgrid(*axes, indexing="ij")
    x = np.stack([m.ravel() for m in mesh], axis=-1)
    return to_point(x), axes


def sublevel_masks(expr: DefiningExpr, /, c: float, t_grid, points) -> np.ndarray:
    """Indicators of `{expr^t <= c}` on a common point set, one row per t"""
    points = np.asarray(points, dtype=complex)
    rows = []
    for t in np.asarray(t_grid, dtype=float):
        with np.errstate(divide="ignore", invalid="ignore"):
            try:
                rows.append(expr(points, t) <= c)
            except EvaluationError:
                rows.append(_pointwise_sublevel(expr, c, t, points))
    return np.array(rows)


def _pointwise_sublevel(expr, c, t, points):
    out = np.zeros(len(points), dtype=bool)
    for i, z in enumerate(points):
        try:
            out[i] = bool(expr(z, t) <= c)
        except EvaluationError:
            out[i] = False
    return out


@dataclass(frozen=True, slots=True)
class Witness:
    ok: bool
    z: Optional[np.ndarray] = None
    t: Optional[float] = None
    detail: str = ""


def check_total_space_compactness(
    masks: np.ndarray, t_grid, points, /, eps: float
) -> Witness:
    """
    Discrete upper semicontinuity of `t -> K^t`

    For every grid value `t0` the neighbouring sets must lie in the
    `eps`-dilation of `K^{t0}`. The first violating `(z, t)` is returned.
    """
    masks = np.asarray(masks, dtype=bool)
    t_grid = np.asarray(t_grid, dtype=float)
    x = to_real(np.asarray(points, dtype=complex))

    for i, t0 in enumerate(t_grid):
        base = x[masks[i]]
        tree = cKDTree(base) if len(base) else None

        for k in (i - 1, i + 1):
            if not 0 <= k < len(t_grid):
                continue
            other = x[masks[k]]
            if not len(other):
                continue
            if tree is None:
                dist = np.full(len(other), np.inf)
            else:
                dist, _ = tree.query(other, distance_upper_bound=2 * eps)
            bad = dist > eps
            if np.any(bad):
                j = int(np.argmax(bad))
                return Witness(
                    False,
                    to_point(other[j]),
                    float(t_grid[k]),
                    f"point of K at t={t_grid[k]:g} outside the {eps:g}-dilation of K at t={t0:g}",
                )

    return Witness(True)


def check_openness(family: DomainFamily, /, t_grid, resolution: int) -> Witness:
    """
    Openness probe of the total space on a uniform grid

    Every interior grid point with `r < -2 h Lip(r)` must have all its grid
    neighbours, in space and in t, interior as well.
    """
    points, axes = uniform_grid(family.box, resolution)
    h = max(float(a[1] - a[0]) for a in axes)
    shape = tuple(len(a) for a in axes)
    t_grid = np.asarray(t_grid, dtype=float)

    values = np.array([family.r(points, t) for t in t_grid]).reshape((len(t_grid),) + shape)
    lip = max(
        float(np.max(2 * np.linalg.norm(gradient(family.r, points, t), axis=-1)))
        for t in t_grid
    )
    interior = values < -family.boundary_tol
    deep = values < -2 * h * lip

    for axis in range(values.ndim):
        for shift in (-1, 1):
            neighbour = np.roll(interior, shift, axis=axis)
            # np.roll wraps around, the wrapped layer is not a neighbour
            edge = [slice(None)] * values.ndim
            edge[axis] = 0 if shift == 1 else -1
            neighbour[tuple(edge)] = True
            bad = deep & ~neighbour
            if np.any(bad):
                idx = np.unravel_index(int(np.argmax(bad)), bad.shape)
                return Witness(
                    False,
                    points.reshape(shape + (family.n,))[idx[1:]],
                    float(t_grid[idx[0]]),
                    "interior grid point with an exterior neighbour",
                )

    return Witness(True)


def monte_carlo_volume(
    family: DomainFamily, /, t: float, samples: int = 200_000, *, seed: int = 0
) -> tuple[float, float]:
    """Volume of `D^t` and its standard error from uniform box samples"""
    rng = np.random.default_rng(seed)
    x = rng.uniform(family.box[:, 0], family.box[:, 1], size=(samples, 2 * family.n))
    inside = family.is_interior(to_point(x), t)
    box_volume = float(np.prod(family.box[:, 1] - family.box[:, 0]))
    p = float(np.mean(inside))
    return box_volume * p, box_volume * float(np.sqrt(p * (1 - p) / samples))
