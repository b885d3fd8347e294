import numpy as np
from pytest import approx, fixture, raises

from crlab.dev.testing import BuiltinFamily
from crlab.exceptions import ConditioningError
from crlab.seeley import (
    extend_from_domain,
    extend_in_t,
    make_seeley_sequences,
    moment_residuals,
    seeley_extend_halfspace,
)


@fixture
def seq():
    return make_seeley_sequences(4)


def test_sequences(seq):
    assert seq.b.tolist() == [-1, -2, -4, -8]
    assert seq.alternating
    assert seq.residual < 1e-10
    assert np.all(moment_residuals(seq) < 1e-9)


def test_sequences_high_order():
    for N in (8, 12):
        seq = make_seeley_sequences(N)
        assert seq.alternating
        assert seq.residual < 1e-12
        assert np.all(moment_residuals(seq) < 1e-12)


def test_sequences_conditioning():
    with raises(ConditioningError) as e:
        make_seeley_sequences(13)
    assert e.value.details["N"] == 13


def test_halfspace_reproduces_polynomials(seq):
    f = lambda s: 1 + s - 2 * s**2 + 0.5 * s**3
    Ef = seeley_extend_halfspace(f, seq)

    s = np.linspace(-0.1, 0.5, 25)
    assert np.allclose(Ef(s), f(s), atol=1e-12)


def test_halfspace_keeps_nonnegative_side(seq):
    Ef = seeley_extend_halfspace(np.cos, seq)
    s = np.linspace(0, 3, 7)
    assert np.array_equal(Ef(s), np.cos(s))


def test_extend_in_t():
    seq = make_seeley_sequences(3)
    Ef = extend_in_t(lambda t: np.array([t**2, 1.0]), seq)

    assert np.allclose(Ef(0.5), [0.25, 1.0])
    assert np.allclose(Ef(-0.1), [0.01, 1.0])
    assert np.allclose(Ef(1.1), [1.21, 1.0])


def test_extend_from_domain(seq):
    disk = BuiltinFamily.DISK.family()
    f = lambda z: z[..., 0].real
    Ef = extend_from_domain(disk, f, 0.0, seq)

    inside = np.array([[0.2 + 0.1j], [-0.5j]])
    assert np.allclose(Ef(inside), f(inside))

    # inside the collar the linear function continues
    assert Ef(np.array([[1.05 + 0j]]))[0].real == approx(1.05)

    # beyond the collar the extension is cut off
    assert abs(Ef(np.array([[1.45 + 0j]]))[0]) == 0
