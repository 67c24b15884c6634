import numpy as np
import pytest
from hypothesis import given, strategies as st

from curvebody.potentials import PotentialSpec

SPECS = [
    PotentialSpec.zero(),
    PotentialSpec.coulomb(0.7),
    PotentialSpec.oscillator(1.3),
    PotentialSpec.inv_square_plus_square(0.4, 0.9),
    PotentialSpec.tabulated([0.1, 0.3, 0.6, 0.9], [2.0, 1.0, 0.5, 0.8]),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
@pytest.mark.parametrize("space", ["sphere", "hyperbolic"])
def test_derivative_matches_finite_difference(spec, space):
    r = np.array([0.15, 0.35, 0.55, 0.8])
    h = 1e-6
    fd = (spec(r + h, space, 1.4) - spec(r - h, space, 1.4)) / (2 * h)
    assert np.allclose(spec.derivative(r, space, 1.4), fd, rtol=1e-6, atol=1e-8)


@given(st.floats(0.05, 3.0), st.floats(0.1, 2.0), st.floats(0.1, 5.0))
def test_sphere_potentials_in_angle(theta_frac, R, g):
    theta = theta_frac % 1.5 + 0.01  # stay inside (0, pi/2)
    r = np.tan(theta / 2)
    assert PotentialSpec.coulomb(g)(r, "sphere", R) == pytest.approx(-(g / R) / np.tan(theta), rel=1e-9)
    assert PotentialSpec.oscillator(g)(r, "sphere", R) == pytest.approx(0.5 * g ** 2 * R ** 2 * np.tan(theta) ** 2,
                                                                        rel=1e-9)


@given(st.floats(0.05, 3.0), st.floats(0.1, 2.0))
def test_hyperbolic_potentials_in_distance(rho, R):
    r = np.tanh(rho / 2)
    assert PotentialSpec.coulomb(1.0)(r, "hyperbolic", R) == pytest.approx(-(1 / R) / np.tanh(rho), rel=1e-9)
    assert PotentialSpec.oscillator(1.0)(r, "hyperbolic", R) == pytest.approx(0.5 * R ** 2 * np.tanh(rho) ** 2,
                                                                              rel=1e-9)


def test_tabulated_interpolates_and_is_monotone_between_samples():
    spec = PotentialSpec.tabulated([0.0, 1.0, 2.0, 3.0], [0.0, 1.0, 1.0, 4.0])
    assert spec(np.array([0.0, 1.0, 2.0, 3.0])).tolist() == pytest.approx([0.0, 1.0, 1.0, 4.0])
    x = np.linspace(0, 3, 301)
    assert np.all(np.diff(spec(x)) >= -1e-14)
    # flat segment stays flat
    assert np.allclose(spec(np.linspace(1, 2, 11)), 1.0)


def test_invalid_specs():
    with pytest.raises(ValueError):
        PotentialSpec("quartic")
    with pytest.raises(ValueError):
        PotentialSpec.inv_square_plus_square(-1, 0)
    with pytest.raises(ValueError):
        PotentialSpec.tabulated([0.0, 0.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        PotentialSpec.tabulated([0.0, 1.0], [1.0])
    with pytest.raises(ValueError):
        PotentialSpec.coulomb(1.0)(0.5, "torus")


def test_to_dict():
    assert PotentialSpec.coulomb(2.0).to_dict() == {"kind": "coulomb", "gamma": 2.0}
    assert PotentialSpec.zero().to_dict() == {"kind": "zero"}
