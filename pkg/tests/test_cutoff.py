import numpy as np
from pytest import approx, raises

from crlab.cutoff import chi0, chi1, plateau, step
from crlab.exceptions import UnsupportedError


def test_step_values():
    x = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    assert np.allclose(step(x), [0, 0, 0.5, 1, 1])

    y = step(np.linspace(0, 1, 51))
    assert np.all(np.diff(y) >= 0)


def test_step_symmetry():
    x = np.linspace(0.05, 0.45, 9)
    assert np.allclose(step(x) + step(1 - x), 1.0)


def test_step_derivative():
    x, h = 0.3, 1e-4
    difference = (step(x + h) - step(x - h)) / (2 * h)
    assert float(step(x, order=1)) == approx(float(difference), abs=1e-6)


def test_plateau():
    assert np.allclose(plateau([0.0, 1.0, 1.5, 2.0, 3.0]), [1, 1, 0.5, 0, 0])


def test_chi1_even():
    s = np.linspace(0, 2.5, 11)
    assert np.allclose(chi1(s), chi1(-s))
    assert np.allclose(chi1(s, order=1), -chi1(-s, order=1))


def test_chi0_vanishes_below_one():
    s = np.linspace(-2, 1, 7)
    assert np.all(chi0(s) == 0)
    assert float(chi0(1.2)) > 0


def test_chi0_derivatives():
    s, h = 1.5, 1e-5
    for order in range(3):
        difference = (chi0(s + h, order=order) - chi0(s - h, order=order)) / (2 * h)
        assert float(chi0(s, order=order + 1)) == approx(float(difference), rel=1e-6)

    assert float(chi0(1.5, order=2)) == approx(np.exp(-2.0))


def test_unsupported_order():
    with raises(UnsupportedError):
        chi0(1.5, order=4)
    with raises(UnsupportedError):
        step(0.5, order=4)
