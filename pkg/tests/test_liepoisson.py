import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curvebody import liepoisson as lp
from curvebody.liepoisson import PolyFunction

finite = st.floats(-3, 3, allow_nan=False)


@pytest.mark.parametrize("alg", list(lp.ALGEBRAS.values()), ids=lambda a: a.name)
def test_jacobi(alg):
    assert alg.jacobi_residual() == 0.0


def test_bad_structure_constants():
    with pytest.raises(ValueError):
        lp.LieAlgebraSpec("bad", np.ones((2, 2, 2)), ("a", "b"))
    with pytest.raises(ValueError):
        lp.LieAlgebraSpec("bad", np.zeros((2, 2, 2)), ("a", "b", "c"))


def test_polynomial_arithmetic():
    x, y = PolyFunction.variable(0, 2), PolyFunction.variable(1, 2)
    f = (x + y) ** 2 - x * x - y * y
    assert (f - 2 * x * y).is_zero
    assert f.degree == 2
    assert f.diff(0)(np.array([1.0, 3.0])) == pytest.approx(6.0)
    assert (-f + f).is_zero


def test_bracket_dimension_mismatch():
    with pytest.raises(ValueError):
        lp.lie_poisson_bracket(PolyFunction.variable(0, 3), PolyFunction.variable(0, 6), lp.SO4)


def test_so3_and_so12_tables():
    for alg, sign in ((lp.SO3, 1.0), (lp.SO12, -1.0)):
        p3, p4, p5 = alg.vars()
        assert (lp.lie_poisson_bracket(p3, p4, alg) - p5).is_zero
        assert (lp.lie_poisson_bracket(p4, p5, alg) - sign * p3).is_zero
        assert (lp.lie_poisson_bracket(p5, p3, alg) - p4).is_zero


@settings(max_examples=25, deadline=None)
@given(st.lists(finite, min_size=6, max_size=6))
def test_symbolic_bracket_matches_numeric(x):
    alg = lp.SO13
    P = lp.invariant_polynomials(alg)
    x = np.array(x)
    sym = lp.lie_poisson_bracket(P[1], P[3], alg)(x)
    num = lp.numeric_bracket(P[1], P[3], alg, x)
    assert num == pytest.approx(sym, abs=1e-6 * (1 + abs(sym)))


def test_bracket_antisymmetric_and_leibniz():
    alg = lp.SO4
    p = alg.vars()
    f = p[0] * p[4] + p[2] ** 2
    g = p[1] - p[3] * p[5]
    h = p[0] + p[2]
    assert (lp.lie_poisson_bracket(f, g, alg) + lp.lie_poisson_bracket(g, f, alg)).is_zero
    lhs = lp.lie_poisson_bracket(f, g * h, alg)
    rhs = lp.lie_poisson_bracket(f, g, alg) * h + g * lp.lie_poisson_bracket(f, h, alg)
    assert (lhs - rhs).max_coeff() < 1e-12


@pytest.mark.parametrize("alg,which", [(lp.SO4, "spherical"), (lp.SO13, "hyperbolic")])
def test_invariant_table_on_reduced_slice(alg, which):
    rep = lp.verify_invariant_table(alg, which)
    assert rep.passed and rep.max_residual == 0.0
    assert len(rep.records) == 6


def test_wrong_table_fails():
    assert not lp.verify_invariant_table(lp.SO4, "hyperbolic").passed
    assert not lp.verify_invariant_table(lp.SO13, "spherical").passed


def test_off_slice_difference_is_multiple_of_p1():
    alg = lp.SO4
    P = lp.invariant_polynomials(alg)
    diff = lp.lie_poisson_bracket(P[1], P[3], alg) - (-2 * P[0] * P[1])
    assert not diff.is_zero
    assert all(m[0] >= 1 for m, _ in diff.terms)
    x = np.array([0.0, 1.0, 0.0, 2.0, 1.0, 0.0])
    assert lp.lie_poisson_bracket(P[1], P[3], alg)(x) == pytest.approx(-4.0)


@pytest.mark.parametrize("alg", list(lp.ALGEBRAS.values()), ids=lambda a: a.name)
def test_casimirs(alg):
    for name, c in lp.casimirs(alg).items():
        rep = lp.casimir_check(alg, c)
        assert rep.passed, name


def test_non_casimir_detected():
    p = lp.SO4.vars()
    assert not lp.casimir_check(lp.SO4, p[0] ** 2).passed


@settings(max_examples=50, deadline=None)
@given(st.floats(0.2, 3), st.floats(0.2, 3), st.floats(-0.95, 0.95), st.floats(0, 2 * math.pi),
       st.floats(0, 2 * math.pi))
def test_s3_chart(mu, nu, t, psi, chi):
    if abs(mu - nu) < 1e-6:
        return
    u = t * min(mu, nu)
    pt = lp.orbit_chart_s3(mu, nu, u, psi, chi)
    assert pt.coords[0] == pytest.approx(0.0, abs=1e-14)
    assert np.linalg.norm(pt.u) == pytest.approx(mu)
    assert np.linalg.norm(pt.v) == pytest.approx(nu)
    assert lp.symplectic_pullback_residual(mu, nu, u, psi, chi) < 1e-10


def test_s3_chart_errors():
    with pytest.raises(ValueError, match="mu == nu"):
        lp.orbit_chart_s3(1.0, 1.0, 0.1, 0, 0)
    with pytest.raises(ValueError):
        lp.orbit_chart_s3(1.0, 2.0, 1.5, 0, 0)


def test_stabilizer_action_preserves_orbit_and_slice():
    pt = lp.orbit_chart_s3(1.0, 2.0, 0.4, 0.3, 1.1)
    q = lp.ad_star_k(pt, 0.7)
    assert np.linalg.norm(q.u) == pytest.approx(1.0)
    assert np.linalg.norm(q.v) == pytest.approx(2.0)
    assert q.coords[0] == pytest.approx(0.0, abs=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(-2, 2), st.floats(0.1, 2), st.floats(-2, 2), st.floats(-1.5, 1.5), st.floats(-3, 3))
def test_h3_chart(mu, nu, p4, psi, chi):
    pt = lp.orbit_chart_h3(mu, nu, p4, psi, chi)
    I1, I2 = lp.casimirs(lp.SO13)["I1"], lp.casimirs(lp.SO13)["I2"]
    x = pt.coords
    assert x[0] == 0.0 and x[3] == p4
    assert I1(x) == pytest.approx(mu, abs=1e-10 * (1 + np.dot(x, x)))
    assert I2(x) == pytest.approx(nu, abs=1e-10 * (1 + np.dot(x, x)))
    psi2, chi2 = lp.h3_angles(x)
    assert psi2 == pytest.approx(psi, abs=1e-9)
    assert math.remainder(chi2 - chi, 2 * math.pi) == pytest.approx(0.0, abs=1e-9)


def test_h3_chart_rejects_nu_zero():
    with pytest.raises(ValueError):
        lp.orbit_chart_h3(1.0, 0.0, 0.0, 0.0, 0.0)


def test_chart_coordinates_are_canonical():
    # Kirillov form on the chart tangents is du ^ dpsi - du ^ dchi
    mu, nu, u0, psi0, chi0 = 1.3, 0.7, 0.2, 0.4, 1.0
    T = lp.chart_tangents_s3(mu, nu, u0, psi0, chi0)
    uu, vv = lp._s3_uv(mu, nu, u0, psi0, chi0)
    om = np.array([[lp.kirillov_form(uu, vv, T[i], T[j], mu, nu) for j in range(3)] for i in range(3)])
    assert om[0, 1] == pytest.approx(1.0) and om[0, 2] == pytest.approx(-1.0)
    assert om[1, 2] == pytest.approx(0.0, abs=1e-12)
