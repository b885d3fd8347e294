import numpy as np
from pytest import approx, fixture, raises

from crlab.dev.testing import BuiltinFamily
from crlab.exceptions import LerayError, PreconditionError, QuadratureError, UnsupportedError
from crlab.kernels import (
    Exact,
    LerayMap,
    Smoothed,
    band_parameters,
    cf_kernel_coefficients,
    check_leray_nonvanishing,
    check_support_inequality,
    convex_leray_map,
    hefer_residual,
    hefer_w_levi,
    levi_polynomial_at,
    sample_band_pairs,
    smoothed_hessian_coeffs,
)


@fixture
def ball():
    return BuiltinFamily.BALL.family()


@fixture
def quartic():
    return BuiltinFamily.QUARTIC.family()


def test_levi_polynomial_vanishes_at_base(quartic):
    zeta = np.array([[0.3 + 0.1j, -0.2j], [0.5, 0.4 + 0.1j]])
    F = levi_polynomial_at(quartic, 0.0, zeta)
    assert np.allclose(F(zeta), 0)


def test_hefer_identity(quartic):
    assert hefer_residual(quartic, 0.0) < 1e-12
    assert hefer_residual(quartic, 0.0, Smoothed(0.2, nodes=6)) < 1e-12


def test_hefer_map(ball):
    leray = hefer_w_levi(ball, 0.0)
    zeta = np.array([[0.6 + 0j, 0.8j]])
    z = np.array([[0.1j, 0.2 + 0j]])

    assert leray.kind == "hefer_levi"
    assert np.allclose(leray.g(zeta, z), np.conj(zeta))
    assert np.allclose(leray.dbar_g(zeta, z), np.eye(2))


def test_hefer_map_smoothed_has_no_dbar(quartic):
    assert hefer_w_levi(quartic, 0.0, Smoothed(0.2, nodes=6)).dbar_g is None


def test_smoothed_hessian(quartic):
    smoothed = smoothed_hessian_coeffs(quartic, 0.0, [0.3 + 0j, 0.1j], 0.2, nodes=6)

    assert smoothed.coeffs.shape == (2, 2)
    assert smoothed.ok
    assert smoothed.deviation < 1e-8


def test_smoothing_leaves_box(ball):
    with raises(QuadratureError) as e:
        smoothed_hessian_coeffs(ball, 0.0, [1.45 + 0j, 0j], 0.2, nodes=4)
    assert e.value.code == "quadrature"


def test_band_pairs(ball):
    zeta, z = sample_band_pairs(ball, 0.0, 50, 0.5, band=0.1, seed=1)

    assert zeta.shape == z.shape == (50, 2)
    assert np.all(np.abs(np.linalg.norm(zeta, axis=-1) - 1) <= 0.1 + 1e-12)
    assert np.all(np.abs(np.linalg.norm(z, axis=-1) - 1) <= 0.1 + 1e-12)
    assert np.all(ball.in_box(z))
    assert np.all(np.linalg.norm(zeta - z, axis=-1) < 0.5)


def test_support_inequality_ball(ball):
    zeta, z = sample_band_pairs(ball, 0.0, 200, 0.5)
    check = check_support_inequality(ball, 0.0, Exact(), zeta, z, 1.0, 0.5)

    assert check.ok
    assert check.witness is None
    # the slack is |zeta - z|^2 / 4 on the ball
    assert check.margin == approx(np.min(np.linalg.norm(zeta - z, axis=-1) ** 2) / 4, abs=1e-12)


def test_support_inequality_witness():
    family = BuiltinFamily.NON_PSH.family()
    zeta = np.array([[1.0 + 0j, 0j], [1.0 + 0j, 0j]])
    z = np.array([[0.9 + 0j, 0j], [1.0 + 0j, 0.2j]])
    check = check_support_inequality(family, 0.0, Exact(), zeta, z, 1.0, 0.5)

    assert not check.ok
    assert np.allclose(check.witness[1], z[1])


def test_support_pair_distance(ball):
    with raises(PreconditionError) as e:
        check_support_inequality(ball, 0.0, Exact(), [[1 + 0j, 0j]], [[0j, 0j]], 1.0, 0.5)
    assert e.value.code == "pair_distance"


def test_convex_leray_nonvanishing(ball):
    leray = convex_leray_map(ball, 0.0)
    zeta = np.array([[1 + 0j, 0j], [0j, -1j], [0.6 + 0j, 0.8j]])
    z = np.array([[0.5 + 0j, 0.2j]])

    assert check_leray_nonvanishing(leray, zeta, z).ok


def test_leray_vanishing():
    zero = lambda zeta, z: np.zeros(np.broadcast_shapes(zeta.shape, z.shape), dtype=complex)
    leray = LerayMap("convex", 2, zero)
    zeta, z = np.array([[1 + 0j, 0j]]), np.array([[0j, 0j]])

    assert not check_leray_nonvanishing(leray, zeta, z).ok
    with raises(LerayError):
        check_leray_nonvanishing(leray, zeta, z, strict=True)


def test_kernel_requirements(ball):
    with raises(UnsupportedError):
        cf_kernel_coefficients(None, 3)
    with raises(UnsupportedError):
        cf_kernel_coefficients(None, 1, q=2)
    with raises(PreconditionError) as e:
        cf_kernel_coefficients(None, 2)
    assert e.value.code == "leray_missing"


def test_volume_density_disk():
    kernel = cf_kernel_coefficients(None, 1)
    zeta, z = np.array([[0.5 + 0.5j]]), np.array([[0j]])
    assert complex(kernel.volume(zeta, z)[0, 0]) == approx(-1 / (np.pi * (0.5 + 0.5j)))


def test_band_parameters():
    band = band_parameters(2.0, 0.4, 1.0)
    assert band.eps == approx(2.0 * 0.16 / 64)
    assert band.smoothing_threshold == approx(2.0 / 16)

    assert band_parameters(64.0, 1.0, 0.25).eps == 0.25
