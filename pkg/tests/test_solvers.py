import numpy as np
from pytest import approx, fixture, raises, warns

from crlab.dev import CrlabWarning
from crlab.dev.testing import BuiltinFamily
from crlab.exceptions import (
    NotClosedError,
    NotConvexError,
    PartitionError,
    StencilError,
    UnsupportedError,
)
from crlab.solvers import (
    Homotopy,
    PartitionOfUnity,
    bmk_solve,
    cauchy_pompeiu,
    cauchy_solve,
    cousin1_solve,
    get_solver,
    homotopy_solve,
    leray_reproduce,
    oka_weil_step,
    solve_family,
)


def one(z):
    return np.ones(z.shape[:-1], dtype=complex)


def dzbar1(z):
    out = np.zeros(z.shape, dtype=complex)
    out[..., 0] = 1
    return out


@fixture
def disk():
    return BuiltinFamily.DISK.family()


@fixture
def ball():
    return BuiltinFamily.BALL.family()


def test_cauchy_transform_of_one():
    family = BuiltinFamily.SHIFTED_DISK.family()
    z = np.array([[0.3 + 0.2j], [-0.4j], [0.5 + 0j]])
    u = cauchy_pompeiu(family, 1.0, one, z, angles=64, radial=64)
    assert np.allclose(u, np.conj(z[:, 0] - 0.1), atol=1e-8)


def test_cauchy_solve(disk):
    report = cauchy_solve(disk, 0.0, one, [[0.1 + 0.1j]], resolution=64, check=5)

    assert report.ok
    assert report.solver == "cauchy_pompeiu"
    assert report.residual < 1e-6
    assert report.u[0] == approx(0.1 - 0.1j, abs=1e-8)


def test_cauchy_requires_clearance(disk):
    with raises(StencilError):
        cauchy_pompeiu(disk, 0.0, one, np.array([[0.9995 + 0j]]))


def test_cauchy_requires_plane(ball):
    with raises(UnsupportedError):
        cauchy_pompeiu(ball, 0.0, one, np.array([[0j, 0j]]))


def test_homotopy_in_the_plane_is_cauchy(disk):
    z = np.array([[0.2 - 0.3j]])
    u = Homotopy(disk, 0.0, one, resolution=64)(z)
    assert u[0] == approx(0.2 + 0.3j, abs=1e-8)


def test_homotopy_is_linear(ball):
    z = np.array([[0.1 + 0.1j, -0.2j], [0.3 + 0j, 0.1 + 0j]])
    unit = Homotopy(ball, 0.0, dzbar1, resolution=6)(z)
    double = Homotopy(ball, 0.0, lambda w: 2 * dzbar1(w), resolution=6)(z)
    assert np.allclose(double, 2 * unit, rtol=1e-12, atol=1e-14)


def test_homotopy_rejects_non_closed_forms(ball):
    def form(z):
        out = np.zeros(z.shape, dtype=complex)
        out[..., 0] = np.conj(z[..., 1])
        return out

    with raises(NotClosedError):
        homotopy_solve(ball, 0.0, form, [[0j, 0j]], resolution=6)


def test_lieb_range_requires_convexity():
    family = BuiltinFamily.NON_PSH.family()
    with raises(NotConvexError):
        bmk_solve(family, 0.0, dzbar1, [[0j, 0j]], resolution=6)


def test_lieb_range_ball(ball):
    report = bmk_solve(ball, 0.0, dzbar1, [[0j, 0j]], resolution=24, refine=True, check=4)

    assert report.ok
    assert report.residual < 1e-2
    assert report.converging
    assert report.refined_residual is not None


def test_solve_family():
    family = BuiltinFamily.SHIFTED_DISK.family()
    report = solve_family(
        family, [0.0, 0.5, 1.0], lambda t: one, "cauchy_pompeiu",
        eval_points=[[0.1j], [-0.2 + 0j]], resolution=32, check=0,
    )

    assert report.ok
    assert len(report.reports) == 3
    assert np.allclose(report.moduli, 0.05, atol=1e-8)
    assert report.constant == approx(0.1, abs=1e-7)


def test_unknown_solver():
    with raises(ValueError):
        get_solver("spectral")


def test_disk_reproduction(disk):
    h = lambda w: 1 / (1.5 - w[..., 0])
    result = leray_reproduce(disk, 0.0, h, np.array([[0.3 + 0j]]), resolution=64)
    assert result.error < 1e-8


def test_reproduction_warns_for_non_holomorphic(disk):
    with warns(CrlabWarning):
        leray_reproduce(disk, 0.0, lambda w: np.conj(w[..., 0]), np.array([[0.1j]]), resolution=16)


def test_oka_weil_step(disk):
    h = lambda w: 1 / (0.95 - w[..., 0])
    errors = [
        oka_weil_step(disk.r, 0.0, h, -0.75, -0.19, box=disk.box, terms=terms).error
        for terms in (64, 128)
    ]
    assert errors[1] < errors[0]
    assert errors[1] < 1e-3


def test_cousin_partition_outside_cover(disk):
    with raises(PartitionError):
        cousin1_solve(disk, 0.0, one, partition=PartitionOfUnity.vertical(x0=-2.0))


def test_cousin_requires_plane(ball):
    with raises(UnsupportedError):
        cousin1_solve(ball, 0.0, one)
