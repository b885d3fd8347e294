"""
Truncated Seeley extension.

With `b_k = -2^k` and `a_k` solving `sum_k a_k b_k^m = 1` for `m < N`,
a function on `s >= 0` is continued to `s < 0` by

    Ef(s) = sum_k a_k phi(b_k s) f(b_k s)

which reproduces polynomials of degree `< N` where `phi == 1` and is
`C^{N-1}` across `s = 0`.
"""

from typing import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from logging import getLogger
from math import fsum
from warnings import warn

import numpy as np

from crlab.constants import (
    COLLAR_WIDTH,
    MOMENT_TOL,
    SEELEY_MAX_ORDER,
    SEELEY_ORDER,
)
from crlab.cutoff import chi1
from crlab.dev import CrlabWarning
from crlab.exceptions import CollarError, ConditioningError
from crlab.domain import DomainFamily, ray_roots, uniform_grid
from crlab.util.convert import to_real


__all__ = (
    "SeeleySequences",
    "make_seeley_sequences",
    "moment_residuals",
    "seeley_extend_halfspace",
    "extend_from_domain",
    "extend_in_t",
    "probe_extension_norm",
)


logger = getLogger(__package__)


@dataclass(frozen=True, eq=False, slots=True)
class SeeleySequences:
    N: int
    b: np.ndarray
    a: np.ndarray
    residual: float
    alternating: bool

    @staticmethod
    def phi(s) -> np.ndarray:
        """1 on `|s| < 1`, 0 on `|s| > 2`"""
        return chi1(s)


def make_seeley_sequences(N: int = SEELEY_ORDER, /) -> SeeleySequences:
    """
    Solve the moment conditions in closed form, `a_k = prod_{j != k} (1 - b_j) / (b_k - b_j)`

    >>> make_seeley_sequences(2).a.tolist()
    [3.0, -2.0]
    """
    assert N >= 1, "N must be at least 1"
    if N > SEELEY_MAX_ORDER:
        raise ConditioningError(
            "conditioning",
            f"N={N} exceeds the Vandermonde conditioning limit {SEELEY_MAX_ORDER}",
            details={"N": N},
        )

    b = [-(2**k) for k in range(N)]
    a = []
    for k in range(N):
        value = Fraction(1)
        for j in range(N):
            if j != k:
                value *= Fraction(1 - b[j], b[k] - b[j])
        a.append(float(value))

    # exact moments of the rounded coefficients, relative to sum_k |a_k| |b_k|^m
    residual = 0.0
    for m in range(N):
        moment = sum(Fraction(a[k]) * Fraction(b[k]) ** m for k in range(N))
        scale = sum(abs(Fraction(a[k]) * Fraction(b[k]) ** m) for k in range(N))
        residual = max(residual, abs(float((moment - 1) / scale)))

    if residual > MOMENT_TOL:
        raise ConditioningError(
            "conditioning",
            f"relative moment residual {residual:.3e} for N={N}",
            details={"N": N, "residual": residual},
        )

    alternating = all((-1) ** k * a[k] > 0 for k in range(N))
    if not alternating:
        warn(
            f"Seeley coefficients for N={N} do not alternate in sign",
            stacklevel=2,
            category=CrlabWarning,
        )

    logger.debug("Seeley N=%d moment residual %.3e", N, residual)
    return SeeleySequences(N, np.array(b, dtype=float), np.array(a), residual, alternating)


def moment_residuals(seq: SeeleySequences, /) -> np.ndarray:
    """`|sum_k a_k b_k^m - 1| / sum_k |a_k| |b_k|^m` for `m < N`, summed with `fsum`"""
    return np.array(
        [
            abs(fsum(a * b**m for a, b in zip(seq.a, seq.b)) - 1)
            / fsum(abs(a * b**m) for a, b in zip(seq.a, seq.b))
            for m in range(seq.N)
        ]
    )


def _weight(w: np.ndarray, like: np.ndarray) -> np.ndarray:
    return w.reshape(w.shape + (1,) * (like.ndim - w.ndim))


def seeley_extend_halfspace(
    f: Callable[[np.ndarray], np.ndarray],
    seq: SeeleySequences,
    /,
    scale: float = 1.0,
) -> Callable[[np.ndarray], np.ndarray]:
    """
    Extend `f` from `s >= 0` to the real line

    `scale` stretches the cutoff: `phi(b_k s / scale)`, so `f` is only
    sampled on `[0, 2 scale]`.
    """

    def extended(s):
        s = np.asarray(s, dtype=float)
        neg = s < 0
        base = np.asarray(f(np.where(neg, 0.0, s)))
        out = np.array(base, dtype=np.result_type(base, float))

        if np.any(neg):
            sn = s[neg]
            acc = 0.0
            for a, b in zip(seq.a, seq.b):
                w = a * seq.phi(b * sn / scale)
                value = np.asarray(f(b * sn))
                acc = acc + _weight(w, value) * value
            out[neg] = acc

        return out

    return extended


def extend_from_domain(
    family: DomainFamily,
    f: Callable[[np.ndarray], np.ndarray],
    /,
    t: float,
    seq: SeeleySequences,
    collar_width: float = COLLAR_WIDTH,
) -> Callable[[np.ndarray], np.ndarray]:
    """
    Extend `f` off `D^t` along rays from the family center

    Outside `D^t` a point at ray distance `s` past the boundary radius `R`
    receives `plateau(2 s / w) sum_k a_k phi(2^k s / w) f(c + (R - 2^k s) theta)`,
    so the extension vanishes beyond `R + w` and equals `f` on the closure.
    """
    w = float(collar_width)
    c = family.center

    def radius(theta):
        radii, failed = ray_roots(family, t, theta)
        if np.any(failed):
            raise CollarError(
                "collar", f"{family.name}: collar rays without a boundary crossing at t={t:g}"
            )
        return radii

    def extended(z):
        z = np.asarray(z, dtype=complex)
        d = np.linalg.norm(z - c, axis=-1)
        far = d > 0
        theta = np.zeros_like(z)
        theta[far] = (z[far] - c) / d[far, None]

        outside = far & (family.r(z, t) > 0)
        R = np.full(d.shape, np.inf)
        if np.any(outside):
            R[outside] = radius(theta[outside])
            if 2 * w >= np.min(R[outside]):
                raise CollarError(
                    "collar",
                    f"collar width {w:g} too wide for boundary radius {np.min(R[outside]):.3g}",
                )

        base = np.asarray(f(np.where(outside[..., None], c, z)))
        out = np.array(base, dtype=np.result_type(base, complex))

        if np.any(outside):
            s = np.maximum(d[outside] - R[outside], 0.0)
            th = theta[outside]
            Ro = R[outside]
            acc = 0.0
            for a, b in zip(seq.a, seq.b):
                weight = a * seq.phi(-b * s / w)
                inner = c + (Ro + b * s)[:, None] * th
                value = np.asarray(f(inner))
                acc = acc + _weight(weight, value) * value
            cut = chi1(2 * s / w)
            out[outside] = _weight(cut, acc) * acc

        return out

    return extended


def extend_in_t(
    f: Callable[[float], np.ndarray],
    seq: SeeleySequences,
    /,
    t_range: tuple[float, float] = (0.0, 1.0),
) -> Callable[[float], np.ndarray]:
    """Seeley extension of a one parameter family across both ends of `t_range`"""
    lo, hi = t_range
    scale = (hi - lo) / 2

    def extended(t: float):
        if lo <= t <= hi:
            return np.asarray(f(t))
        s = t - lo if t < lo else hi - t
        acc = 0.0
        for a, b in zip(seq.a, seq.b):
            weight = a * float(seq.phi(b * s / scale))
            if weight == 0:
                continue
            # b s > 0 lands inside the slab
            inner = lo + b * s if t < lo else hi - b * s
            acc = acc + weight * np.asarray(f(inner))
        return np.asarray(acc)

    return extended


def _c2_norm(values: np.ndarray, axes: Sequence[np.ndarray], mask: np.ndarray) -> float:
    norm = float(np.max(np.abs(values[mask])))
    first = [np.gradient(values, ax, axis=i, edge_order=2) for i, ax in enumerate(axes)]
    for d1 in first:
        norm = max(norm, float(np.max(np.abs(d1[mask]))))
        for i, ax in enumerate(axes):
            d2 = np.gradient(d1, ax, axis=i, edge_order=2)
            norm = max(norm, float(np.max(np.abs(d2[mask]))))
    return norm


def probe_extension_norm(
    family: DomainFamily,
    functions: Sequence[Callable[[np.ndarray], np.ndarray]],
    /,
    t: float,
    seq: SeeleySequences,
    collar_width: float = COLLAR_WIDTH,
    resolution: int = 41,
) -> float:
    """
    Measured ratio `|Ef|_{C^2} / |f|_{C^2(D)}` over test functions

    The largest ratio is logged as the extension operator norm estimate.
    """
    points, axes = uniform_grid(family.box, resolution)
    shape = tuple(len(ax) for ax in axes)
    inside = (family.r(points, t) <= 0).reshape(shape)
    ratios = []

    for f in functions:
        Ef = extend_from_domain(family, f, t, seq, collar_width)
        ext = np.asarray(Ef(points)).reshape(shape)
        orig = np.asarray(f(points)).reshape(shape)
        ratios.append(_c2_norm(ext, axes, np.ones(shape, bool)) / _c2_norm(orig, axes, inside))

    constant = max(ratios)
    logger.info(
        "%s: extension C^2 operator norm probe %.4g over %d functions (N=%d, collar %.3g)",
        family.name, constant, len(functions), seq.N, collar_width,
    )
    return constant
