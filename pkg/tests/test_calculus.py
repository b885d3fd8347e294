import numpy as np
from pytest import approx, fixture, raises, warns

from crlab.calculus import (
    FormSample,
    dbar_fd,
    family_norm,
    gradient,
    holder_seminorm,
    min_levi_eigenvalue,
    real_hessian_fd,
    wirtinger_derivatives,
)
from crlab.dev import CrlabWarning
from crlab.dev.testing import BuiltinFamily
from crlab.exceptions import FamilyNormError, StencilError


@fixture
def ball():
    return BuiltinFamily.BALL.family()


@fixture
def points():
    return np.array([[0.5 + 0j, 0j], [0.1 - 0.2j, 0.3j], [0.4j, -0.6 + 0.1j]])


def test_ball_levi_form(ball, points):
    data = wirtinger_derivatives(ball.r, points)

    assert data.levi.shape == (3, 2, 2)
    assert np.allclose(data.levi, np.eye(2))
    assert np.allclose(data.holo_hess, 0)
    assert np.allclose(data.real_hess, 2 * np.eye(4))


def test_gradient(ball, points):
    assert np.allclose(gradient(ball.r, points), np.conj(points))


def test_real_hessian_matches_differences(points):
    r = BuiltinFamily.QUARTIC.family().r
    symbolic = wirtinger_derivatives(r, points).real_hess
    assert np.allclose(symbolic, real_hessian_fd(r, points), atol=1e-5)


def test_indefinite_levi_form(points):
    r = BuiltinFamily.NON_PSH.family().r
    assert min_levi_eigenvalue(r, points) == approx(-2.0)


def test_dbar_fd(points):
    u = lambda z: np.conj(z[..., 0]) * z[..., 1] + z[..., 0] ** 2
    expected = np.stack([points[:, 1], np.zeros(3)], axis=-1)
    assert np.allclose(dbar_fd(u, points), expected, atol=1e-10)


def test_dbar_fd_stencil():
    disk = BuiltinFamily.DISK.family()
    u = lambda z: np.conj(z[..., 0])

    assert np.allclose(dbar_fd(u, [[0.5 + 0j]], family=disk), 1.0)
    with raises(StencilError):
        dbar_fd(u, [[0.9995 + 0j]], family=disk)


def test_holder_seminorm_sqrt():
    x = np.linspace(0, 1, 101)[:, None]
    estimate = holder_seminorm(x, np.sqrt(x[:, 0]), 0.5)

    assert estimate.seminorm == approx(1.0)
    assert estimate.sup_norm == approx(1.0)
    assert 0.0 in (estimate.witness_pair[0][0], estimate.witness_pair[1][0])


def test_holder_seminorm_subsample():
    x = np.linspace(0, 1, 20)[:, None]
    with warns(CrlabWarning):
        estimate = holder_seminorm(x, x[:, 0], 1.0, cap=10)
    assert estimate.seminorm == approx(1.0)


def test_family_norm():
    axes = (np.linspace(-1, 1, 5), np.linspace(-1, 1, 5))
    t_grid = np.linspace(0, 1, 5)
    values = np.broadcast_to(t_grid[:, None, None], (5, 5, 5)).copy()
    sample = FormSample(t_grid, axes, values)

    assert family_norm(sample, 0, 0) == approx(1.0)
    assert family_norm(sample, 0, 1) == approx(1.0)
    assert family_norm(sample, 1, 0) == approx(1.0)


def test_family_norm_coarse_grid():
    axes = (np.linspace(-1, 1, 3), np.linspace(-1, 1, 3))
    sample = FormSample(np.array([0.0, 1.0]), axes, np.zeros((2, 3, 3)))

    with raises(FamilyNormError) as e:
        family_norm(sample, 0, 1)
    assert e.value.code == "t_grid"
