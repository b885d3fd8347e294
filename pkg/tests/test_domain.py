from json import loads

import numpy as np
from pytest import approx, fixture, raises

from crlab.dev.testing import BuiltinFamily, expanding_ball_exhaustion
from crlab.domain import (
    DomainFamily,
    PointClass,
    check_openness,
    check_total_space_compactness,
    classify_point,
    monte_carlo_volume,
    ray_roots,
    sample_boundary,
    sphere_rule,
    sublevel_masks,
)
from crlab.exceptions import RayError

from tests import EXAMPLES_DIR


@fixture
def disk():
    return BuiltinFamily.DISK.family()


@fixture
def ball():
    return BuiltinFamily.BALL.family()


def test_declaration_round_trip(ball: DomainFamily):
    again = DomainFamily.from_dict(ball.to_dict())
    z = np.array([[0.3 + 0.1j, 0.2j]])

    assert again.n == 2
    assert again.name == "ball"
    assert np.allclose(again.r(z), ball.r(z))
    assert np.allclose(again.center, ball.center)


def test_declaration_file():
    family = DomainFamily.from_dict(loads((EXAMPLES_DIR / "ball.json").read_text()))
    assert classify_point(family, [0j, 0j]) == PointClass.INTERIOR


def test_invalid_box():
    with raises(AssertionError):
        DomainFamily.from_dict({"n": 1, "r": "abs2(z1)-1", "box": [[1, -1], [-1, 1]]})


def test_classify(disk: DomainFamily):
    assert classify_point(disk, [0j]) == PointClass.INTERIOR
    assert classify_point(disk, [1 + 0j]) == PointClass.BOUNDARY
    assert classify_point(disk, [1.2 + 0j]) == PointClass.EXTERIOR
    # outside the box
    assert classify_point(disk, [2 + 0j]) == PointClass.EXTERIOR


def test_sphere_rule_weights():
    _, w1 = sphere_rule(1, 32)
    _, w2 = sphere_rule(2, 16)

    assert w1.sum() == approx(2 * np.pi, rel=1e-12)
    assert w2.sum() == approx(2 * np.pi**2, rel=1e-10)


def test_ray_roots_ball(ball: DomainFamily):
    theta, _ = sphere_rule(2, 8)
    radii, failed = ray_roots(ball, 0.0, theta)

    assert not failed.any()
    assert np.allclose(radii, 1.0, atol=1e-10)


def test_ray_sample_on_boundary():
    # rays along the axes have a sample exactly on |z| = 1
    disk = DomainFamily.from_dict({"n": 1, "r": "abs2(z1)-1", "box": [[-2, 2], [-2, 2]]})
    sample = sample_boundary(disk, 0.0, 8)

    assert not sample.failed.any()
    assert np.allclose(sample.radii, 1.0, atol=1e-10)


def test_boundary_normals_ball(ball: DomainFamily):
    sample = sample_boundary(ball, 0.0, 8)

    assert len(sample) == len(sample.weights)
    assert np.allclose(sample.normals, sample.points, atol=1e-9)


def test_failed_rays():
    family = BuiltinFamily.NON_PSH.family()

    with raises(RayError) as e:
        sample_boundary(family, 0.0, 8, strict=True)
    assert e.value.code == "ray_no_root"

    sample = sample_boundary(family, 0.0, 8)
    assert len(sample.failed) > 0


def test_shrinking_disk_radius():
    family = BuiltinFamily.SHRINKING_DISK.family()
    radii, _ = ray_roots(family, 1.0, np.array([[1 + 0j], [1j]]))
    assert np.allclose(radii, np.sqrt(0.5), atol=1e-10)


def test_monte_carlo_volume(disk: DomainFamily):
    volume, error = monte_carlo_volume(disk, 0.0)
    assert abs(volume - np.pi) < 4 * error


def test_openness(disk: DomainFamily):
    assert check_openness(disk, np.linspace(0, 1, 3), 21).ok
    assert check_openness(BuiltinFamily.SHRINKING_DISK.family(), np.linspace(0, 1, 5), 21).ok


def test_sublevel_masks():
    phi = expanding_ball_exhaustion()
    points = np.array([[0j, 0j], [2 + 0j, 0j]])
    masks = sublevel_masks(phi, 2.0, [0.5, 1.0], points)

    assert masks.shape == (2, 2)
    assert masks[:, 0].all()
    assert not masks[:, 1].any()


def test_compactness_witness():
    points = np.array([[0j], [1 + 0j]])
    t_grid = [0.0, 1.0]

    assert check_total_space_compactness(np.array([[True, True], [True, True]]), t_grid, points, 0.1).ok

    witness = check_total_space_compactness(np.array([[True, False], [True, True]]), t_grid, points, 0.1)
    assert not witness.ok
    assert witness.t == 1.0
    assert np.allclose(witness.z, [1 + 0j])
