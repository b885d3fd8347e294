"""
First Cousin problem for two covers of a planar domain.

With a partition `chi_a + chi_b = 1` subordinate to `(D_a, D_b)`,

    g_a = chi_b f_ab,  g_b = -chi_a f_ab

have the common `dbar`, `phi = f_ab dbar chi_b`. Subtracting the Cauchy
transform `u` of `phi` leaves holomorphic `f_a = g_a - u`, `f_b = g_b - u`
with `f_a - f_b = f_ab`.
"""

from typing import Callable
from dataclasses import dataclass
from logging import getLogger

import numpy as np

from crlab.constants import FD_STEP
from crlab.cutoff import step
from crlab.calculus import dbar_fd
from crlab.exceptions import PartitionError, UnsupportedError
from crlab.domain import DomainFamily
from crlab.solvers.cauchy import cauchy_pompeiu


__all__ = ("Disk", "PartitionOfUnity", "CousinSolution", "cousin1_solve", "two_disk_cover")


logger = getLogger(__package__)

HOLOMORPHY_TOL = 1e-3
COCYCLE_TOL = 1e-6

# holomorphy check points keep this many finite-difference steps from the boundary
CHECK_CLEARANCE = 10


@dataclass(frozen=True, slots=True)
class Disk:
    center: complex
    radius: float

    def contains(self, z, margin: float = 0.0) -> np.ndarray:
        return np.abs(np.asarray(z)[..., 0] - self.center) < self.radius - margin


def two_disk_cover(offset: float = 0.5, radius: float = 1.2) -> tuple[Disk, Disk]:
    """Left and right disks overlapping in a lens around the imaginary axis"""
    return Disk(-offset, radius), Disk(offset, radius)


@dataclass(frozen=True, slots=True)
class PartitionOfUnity:
    """`chi_b = step((Re z - x0) / width + 1/2)`, `chi_a = 1 - chi_b`"""

    x0: float = 0.0
    width: float = 0.3

    @classmethod
    def vertical(cls, x0: float = 0.0, width: float = 0.3) -> "PartitionOfUnity":
        return cls(x0, width)

    def _arg(self, z) -> np.ndarray:
        return (np.real(np.asarray(z)[..., 0]) - self.x0) / self.width + 0.5

    def chi_b(self, z) -> np.ndarray:
        return step(self._arg(z))

    def chi_a(self, z) -> np.ndarray:
        return 1 - self.chi_b(z)

    def dbar_chi_b(self, z) -> np.ndarray:
        # d/dzbar of a function of Re z is half its x-derivative
        return 0.5 * step(self._arg(z), order=1) / self.width


def _masked(f: Callable, weight: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.zeros(weight.shape, dtype=complex)
    live = weight != 0
    if np.any(live):
        out[live] = weight[live] * np.asarray(f(z[live]), dtype=complex)
    return out


@dataclass(frozen=True, eq=False, slots=True)
class CousinSolution:
    f_a: Callable[[np.ndarray], np.ndarray]
    f_b: Callable[[np.ndarray], np.ndarray]
    holomorphy_a: float
    holomorphy_b: float
    cocycle: float

    @property
    def ok(self) -> bool:
        return (
            max(self.holomorphy_a, self.holomorphy_b) < HOLOMORPHY_TOL
            and self.cocycle < COCYCLE_TOL
        )


def _domain_samples(family: DomainFamily, t: float, count: int, seed: int, margin: float) -> np.ndarray:
    rng = np.random.default_rng(seed)
    box = family.box
    x = rng.uniform(box[:, 0], box[:, 1], size=(64 * count, 2))
    z = (x[:, 0] + 1j * x[:, 1])[:, None]
    return z[family.r(z, t) < -margin]


def _clear_of_boundary(family: DomainFamily, t: float, z: np.ndarray, distance: float) -> np.ndarray:
    """Points whose closed disk of radius `distance` lies in `D^t`, sampled on its circle"""
    circle = distance * np.exp(2j * np.pi * np.arange(16) / 16)
    ring = z + circle[None, :]
    return np.all(family.r(ring[..., None], t) < 0, axis=-1)


def cousin1_solve(
    family: DomainFamily,
    /,
    t: float,
    f_ab: Callable[[np.ndarray], np.ndarray],
    *,
    cover: tuple[Disk, Disk] | None = None,
    partition: PartitionOfUnity | None = None,
    angles: int = 512,
    radial: int = 256,
    samples: int = 40,
    seed: int = 0,
) -> CousinSolution:
    """
    Split `f_ab`, holomorphic on `D_a & D_b`, as `f_a - f_b` with `f_a`
    holomorphic on `D^t & D_a` and `f_b` on `D^t & D_b`

    Raises `PartitionError` when a partition weight is nonzero at a point of
    `D^t` outside its cover.
    """
    if family.n != 1:
        raise UnsupportedError("unsupported_dimension", f"Cousin problem for n={family.n}")

    cover_a, cover_b = cover or two_disk_cover()
    partition = partition or PartitionOfUnity.vertical()

    domain = _domain_samples(family, t, 4 * samples, seed, 0.0)
    for name, chi, disk in (("chi_a", partition.chi_a, cover_a), ("chi_b", partition.chi_b, cover_b)):
        outside = (chi(domain) > 0) & ~disk.contains(domain)
        if np.any(outside):
            raise PartitionError(
                "partition",
                f"{name} is positive outside its cover at {complex(domain[outside][0, 0]):.4g}",
            )

    def phi(z):
        z = np.asarray(z, dtype=complex)
        return _masked(f_ab, partition.dbar_chi_b(z), z)

    def u(z):
        return cauchy_pompeiu(family, t, phi, z, angles=angles, radial=radial)

    def f_a(z):
        z = np.asarray(z, dtype=complex)
        return _masked(f_ab, partition.chi_b(z), z) - u(z)

    def f_b(z):
        z = np.asarray(z, dtype=complex)
        return -_masked(f_ab, partition.chi_a(z), z) - u(z)

    inner = _domain_samples(family, t, samples, seed + 1, 0.2)
    inner = inner[_clear_of_boundary(family, t, inner, CHECK_CLEARANCE * FD_STEP)]
    on_a = inner[cover_a.contains(inner, 0.2)][:samples]
    on_b = inner[cover_b.contains(inner, 0.2)][:samples]
    overlap = inner[cover_a.contains(inner, 0.2) & cover_b.contains(inner, 0.2)][:samples]

    holomorphy_a = float(np.max(np.abs(dbar_fd(f_a, on_a, family=family, t=t)), initial=0.0))
    holomorphy_b = float(np.max(np.abs(dbar_fd(f_b, on_b, family=family, t=t)), initial=0.0))
    cocycle = float(
        np.max(np.abs(f_a(overlap) - f_b(overlap) - np.asarray(f_ab(overlap), dtype=complex)), initial=0.0)
    )

    solution = CousinSolution(f_a, f_b, holomorphy_a, holomorphy_b, cocycle)
    log = logger.info if solution.ok else logger.warning
    log(
        "%s: Cousin splitting at t=%g, holomorphy %.2e / %.2e, cocycle %.2e",
        family.name, t, holomorphy_a, holomorphy_b, cocycle,
    )
    return solution
