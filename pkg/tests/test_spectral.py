import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curvebody import spectral
from curvebody.potentials import PotentialSpec
from curvebody.spectral import RadialProblem, case_coefficients


def test_case_table():
    c = case_coefficients(1, 2)
    assert (c.a, c.b, c.c) == (Fraction(3, 4), Fraction(3, 2), Fraction(3, 4))
    c3 = case_coefficients(3, "3/2")
    assert (c3.a, c3.b, c3.c) == (Fraction(1, 4), Fraction(9, 8), Fraction(3, 4))
    half = case_coefficients(3, 0.5)
    assert (half.a, half.b, half.c) == (0, Fraction(3, 8), Fraction(1, 4))
    c5 = case_coefficients(5, "3/2")
    assert (c5.a, c5.c) == (c3.c, c3.a)
    c7 = case_coefficients(7, 1)
    assert (c7.a, c7.b, c7.c) == (Fraction(1, 4), Fraction(1), Fraction(1, 4))
    assert case_coefficients(4, 0.5).equal_masses_required
    assert not case_coefficients(2, 0).equal_masses_required


@pytest.mark.parametrize("case,ell", [(1, 0.5), (3, 1), (7, 0), (8, 0.5), (9, 1), (0, 0)])
def test_case_table_rejects_invalid(case, ell):
    with pytest.raises(ValueError):
        case_coefficients(case, ell)


def test_free_levels():
    pr = RadialProblem(case_coefficients(1, 0), PotentialSpec.zero(), 1.0, 1.0)
    closed = spectral.closed_form_levels(pr, 3)
    grid = spectral.grid_eigensolve(pr, 3, 4000)
    assert closed.energies.tolist() == pytest.approx([0.0, 1.5, 4.0], abs=1e-12)
    assert grid.energies == pytest.approx([0.0, 1.5, 4.0], abs=1e-7)


def test_coulomb_ground_level():
    pr = RadialProblem(case_coefficients(1, 0), PotentialSpec.coulomb(1.0), 1.0, 1.0)
    closed = spectral.closed_form_levels(pr, 3)
    assert closed.levels[0] == (1, pytest.approx(-0.5))
    grid = spectral.grid_eigensolve(pr, 3, 4000)
    assert grid.ks == [1, 2, 3]
    assert spectral.compare_levels(closed, grid, pr.unit).max_rel < 1e-6


def test_coulomb_needs_symmetric_case():
    pr = RadialProblem(case_coefficients(3, 0.5), PotentialSpec.coulomb(1.0), 1.0, 1.0)
    with pytest.raises(ValueError, match="a = c"):
        spectral.closed_form_levels(pr, 3)
    with pytest.raises(ValueError, match="a = c"):
        spectral.levels_oscillator_twobody(case_coefficients(4, 1.5), 1.0, 1.0, 1.0, 3)


@pytest.mark.parametrize("omega,m,R", [(2.0, 0.5, 1.3), (0.7, 2.0, 0.8)])
def test_oscillator_frequency_factor_against_grid(omega, m, R):
    pr = RadialProblem(case_coefficients(7, 1), PotentialSpec.oscillator(omega), m, R)
    cmp = spectral.compare_levels(spectral.closed_form_levels(pr, 4), spectral.grid_eigensolve(pr, 4), pr.unit)
    assert cmp.max_rel < 1e-6


@pytest.mark.parametrize("case,ell", [(3, 1.5), (6, 0.5), (1, 2)])
def test_inverse_square_folding_against_grid(case, ell):
    pot = PotentialSpec.inv_square_plus_square(0.3, 0.2)
    pr = RadialProblem(case_coefficients(case, ell), pot, 1.5, 0.9)
    cmp = spectral.compare_levels(spectral.closed_form_levels(pr, 4), spectral.grid_eigensolve(pr, 4), pr.unit)
    assert cmp.max_rel < 1e-6


def test_free_levels_for_asymmetric_case():
    pr = RadialProblem(case_coefficients(5, 2.5), PotentialSpec.zero(), 1.0, 1.0)
    cmp = spectral.compare_levels(spectral.closed_form_levels(pr, 4), spectral.grid_eigensolve(pr, 4), pr.unit)
    assert cmp.max_rel < 1e-6


@settings(max_examples=30)
@given(st.integers(0, 6), st.floats(0.2, 3), st.floats(0.2, 3), st.floats(0.1, 3))
def test_two_body_coulomb_is_shifted_one_body(l, m, R, gamma):
    # a = c = l(l+1)/8 turns the two-body series into the one-body one plus (b - 2c)/(m R^2)
    for case, ell in ((1, l), (7, max(l, 1))):
        co = case_coefficients(case, ell)
        two = spectral.levels_coulomb_twobody(co, gamma, m, R, 6)
        L = co.ell.two_ell // 2
        one = spectral.levels_onebody("coulomb", L, m, R, 6, gamma=gamma)
        shift = float(co.b - 2 * co.c) / (m * R * R)
        assert np.allclose(two.energies, one.energies + shift, rtol=1e-12, atol=1e-12)


@settings(max_examples=30)
@given(st.integers(0, 6), st.floats(0.2, 3), st.floats(0.2, 3), st.floats(0.1, 3))
def test_two_body_oscillator_is_shifted_one_body(l, m, R, omega):
    co = case_coefficients(2, l)
    two = spectral.levels_oscillator_twobody(co, omega, m, R, 6)
    one = spectral.levels_onebody("oscillator", l, m, R, 6, omega=omega)
    shift = float(co.b - 2 * co.c) / (m * R * R)
    assert np.allclose(two.energies, one.energies + shift, rtol=1e-12, atol=1e-12)


def test_degenerate_coulomb_matches_one_body():
    two = spectral.levels_coulomb_twobody(case_coefficients(1, 0), 1.0, 1.0, 1.0, 10)
    one = spectral.levels_onebody("coulomb", 0, 1.0, 1.0, 10, gamma=1.0)
    assert np.max(np.abs(two.energies - one.energies)) < 1e-12
    assert two.levels[0][1] == pytest.approx(-0.5, abs=1e-15)


def test_general_formula_warns_on_formal_limit():
    with pytest.warns(UserWarning):
        spectral.levels_general(0.0, 1.0, 1.0, 1.0, 2)
    with pytest.raises(ValueError):
        spectral.levels_general(-1.0, 1.0, 1.0, 1.0, 2)


def test_levels_increase():
    pr = RadialProblem(case_coefficients(8, 2), PotentialSpec.oscillator(1.0), 1.0, 1.0)
    assert spectral.closed_form_levels(pr, 6).is_increasing()
    assert spectral.grid_eigensolve(pr, 6).is_increasing()


def test_second_order_convergence():
    pr = RadialProblem(case_coefficients(7, 1), PotentialSpec.coulomb(1.0), 1.0, 1.0)
    order = spectral.observed_order(pr, 3, 1000)
    assert np.all(np.abs(order - 2) < 0.05)


def test_convergence_monitor_trips_on_coarse_grid():
    pr = RadialProblem(case_coefficients(1, 0), PotentialSpec.coulomb(1.0), 1.0, 1.0)
    with pytest.raises(spectral.ConvergenceError):
        spectral.grid_eigensolve(pr, 5, 40, rel_change_tol=1e-9)


def test_tabulated_grid_only():
    r = np.linspace(0.05, 20, 60)
    pot = PotentialSpec.tabulated(r, 0.1 * r ** 2 / (1 + r ** 2))
    pr = RadialProblem(case_coefficients(1, 1), pot, 1.0, 1.0)
    with pytest.raises(ValueError):
        spectral.closed_form_levels(pr, 2)
    assert spectral.grid_eigensolve(pr, 2, 2000).is_increasing()


def test_serialization():
    pr = RadialProblem(case_coefficients(2, 1), PotentialSpec.coulomb(1.0), 1.0, 1.0)
    d = json.loads(json.dumps(spectral.closed_form_levels(pr, 2).to_dict()))
    assert d["case"] == 2 and d["ell"] == "1" and d["method"] == "closed_form"
    assert [lv["k"] for lv in d["levels"]] == [1, 2]


def test_problem_validation():
    with pytest.raises(ValueError):
        RadialProblem(case_coefficients(1, 0), PotentialSpec.zero(), 0.0, 1.0)
    pr = RadialProblem(case_coefficients(1, 0), PotentialSpec.oscillator(1.0), 1.0, 2.0)
    assert pr.interval() == pytest.approx(math.pi / 2)
    assert pr.unit == pytest.approx(1 / 8)
