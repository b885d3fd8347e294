from dataclasses import replace

import numpy as np
from pytest import fixture, raises

from crlab.convexify import (
    boundary_cover,
    build_bump,
    grauert_sequence,
    narasimhan_normalize,
    normal_form_residues,
    search_bump,
    verify_strict_convexity,
)
from crlab.dev.testing import BuiltinFamily
from crlab.domain import sample_boundary
from crlab.exceptions import NormalizationError
from crlab.expr import parse_defining_function
from crlab.util.convert import to_real


@fixture
def ball():
    return BuiltinFamily.BALL.family()


def test_normal_form(ball):
    chart, rstar = narasimhan_normalize(ball, 0.0, [1 + 0j, 0j])
    residues = normal_form_residues(rstar)

    assert max(residues.values()) < 1e-10
    assert chart.eps0 > 0
    assert np.allclose(chart.to_chart(chart.p[None]), 0, atol=1e-12)


def test_normal_form_quartic():
    family = BuiltinFamily.QUARTIC.family()
    sample = sample_boundary(family, 0.0, 8)
    _, rstar = narasimhan_normalize(family, 0.0, sample.points[3])
    assert max(normal_form_residues(rstar).values()) < 1e-10


def test_chart_round_trip(ball):
    chart, _ = narasimhan_normalize(ball, 0.0, [0j, 1j])
    z = np.array([[0.1 + 0.05j, 0.95j], [-0.05j, 0.1 + 0.9j]])
    assert np.allclose(chart.from_chart(chart.to_chart(z)), z, atol=1e-10)


def test_not_on_boundary(ball):
    with raises(NormalizationError) as e:
        narasimhan_normalize(ball, 0.0, [0.5 + 0j, 0j])
    assert e.value.code == "normal_form"


def test_not_strictly_pseudoconvex():
    family = BuiltinFamily.NON_PSH.family()
    with raises(NormalizationError) as e:
        narasimhan_normalize(family, 0.0, [1 + 0j, 0j])
    assert e.value.code == "not_strict"


def test_search_bump(ball):
    result = search_bump(ball, 0.5, [1 + 0j, 0j])
    certificate = result.certificate

    assert certificate.min_real_hessian_eig > 0
    assert certificate.to_dict()["point"] == [1.0, 0.0, 0.0, 0.0]

    rng = np.random.default_rng(0)
    x = rng.uniform(-1.2, 1.2, size=(200, 4))
    z = x[:, 0::2] + 1j * x[:, 1::2]
    assert np.all(result.r_next(z) <= ball.r(z))


def test_boundary_cover():
    disk = BuiltinFamily.DISK.family()
    centers = boundary_cover(disk, 0.0, 0.5, resolution=64)
    points = sample_boundary(disk, 0.0, 64).points

    distance = np.linalg.norm(to_real(points)[:, None] - to_real(centers)[None], axis=-1)
    assert np.all(distance.min(axis=1) < 0.5)
    assert 6 <= len(centers) <= 16


def test_verify_strict_convexity():
    ball = parse_defining_function("abs2(z1)+abs2(z2)-1", 2)
    assert abs(verify_strict_convexity(ball, 0.3) - 2.0) < 1e-9

    saddle = parse_defining_function("abs2(z1)-2*abs2(z2)", 2)
    assert verify_strict_convexity(saddle, 0.3) < 0


def test_grauert_sequence(ball):
    sequence = grauert_sequence(ball, 0.5, [[0.5 + 0j, 0j]])

    assert len(sequence.exprs) == 2
    assert len(sequence.certificates) == 1
    assert np.allclose(sequence.certificates[0].point, [1, 0])
    assert sequence.nested


def test_build_bump_without_lift(ball):
    chart, _ = narasimhan_normalize(ball, 0.0, [1 + 0j, 0j])
    _, r_next, cert = build_bump(ball, 0.0, replace(chart, delta=0.0))

    rng = np.random.default_rng(2)
    x = rng.uniform(-1.2, 1.2, size=(100, 4))
    z = x[:, 0::2] + 1j * x[:, 1::2]
    assert np.allclose(r_next(z), ball.r(z), atol=1e-14)
    assert cert.min_levi_next > 0
    assert "levi" not in cert.violations
    assert cert.min_real_hessian_eig > 0


def test_build_bump_too_large(ball):
    chart, _ = narasimhan_normalize(ball, 0.0, [1 + 0j, 0j])
    _, r_next, cert = build_bump(ball, 0.0, replace(chart, delta=10.0))

    assert not cert.passed
    assert "levi" in cert.violations
    assert r_next(np.array([[1 + 0j, 0j]]))[0] < -1
