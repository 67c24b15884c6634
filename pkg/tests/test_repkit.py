import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curvebody import repkit
from curvebody.repkit import IrrepPair, SpinLabel


def test_spin_label_parsing():
    assert SpinLabel.of("3/2").two_ell == 3
    assert SpinLabel.of(0.5).two_ell == 1
    assert SpinLabel.of(2).is_integer
    assert str(SpinLabel.of(2.5)) == "5/2"
    with pytest.raises(ValueError):
        SpinLabel.of(0.3)
    with pytest.raises(ValueError):
        SpinLabel(-1)


def test_mixed_parity_pair_rejected():
    with pytest.raises(ValueError, match="mixed-parity"):
        IrrepPair.of(0.5, 1)


def test_valid_pairs_parity_and_count():
    pairs = repkit.valid_pairs(5)
    assert all(p.ell1.two_ell % 2 == p.ell2.two_ell % 2 for p in pairs)
    assert len(pairs) == 18
    assert repkit.valid_pairs(0) == [IrrepPair.of(0, 0)]


@given(st.integers(0, 8))
def test_spin_matrices_su2_relations(two_ell):
    t0, tp, tm = repkit.spin_matrices(SpinLabel(two_ell))
    ell = two_ell / 2
    assert np.allclose(t0 @ tp - tp @ t0, tp)
    assert np.allclose(t0 @ tm - tm @ t0, -tm)
    assert np.allclose(tp @ tm - tm @ tp, 2 * t0)
    cas = t0 @ t0 + 0.5 * (tp @ tm + tm @ tp)
    assert np.allclose(cas, ell * (ell + 1) * np.eye(two_ell + 1))


def test_raising_operator_sign_convention():
    t0, tp, _ = repkit.spin_matrices(SpinLabel(2))
    # T+ psi_{-1} = -sqrt(2) psi_0
    assert tp[1, 0] == pytest.approx(-math.sqrt(2))


def test_operator_set_is_immutable():
    ops = repkit.build_operator_set(IrrepPair.of(1, 1))
    with pytest.raises(ValueError):
        ops.D1[0, 0] = 1.0


@pytest.mark.parametrize("pair", repkit.valid_pairs(5), ids=str)
def test_commutators_on_invariant_subspace(pair):
    rep = repkit.verify_commutators(repkit.build_operator_set(pair))
    assert rep.passed, rep.failures()
    assert len(rep.records) == 6


@pytest.mark.parametrize("pair", repkit.valid_pairs(5), ids=str)
def test_structure_identities(pair):
    rep = repkit.verify_structure(repkit.build_operator_set(pair))
    assert rep.passed, rep.failures()


def test_first_four_relations_hold_on_full_space():
    rep = repkit.verify_commutators(repkit.build_operator_set(IrrepPair.of(2.5, 2.5)), domain="full")
    by = {r.check: r for r in rep.records}
    for name, _ in repkit.RELATIONS[:4]:
        assert by[name].passed
    # the last two only hold where T0 + W0 vanishes
    assert not by["[D1,D3]+{D0,D1}"].passed


def test_trivial_pair():
    rep = repkit.verify_commutators(repkit.build_operator_set(IrrepPair.of(0, 0)))
    assert rep.passed and rep.max_residual == 0.0


def test_flipped_d3_is_detected():
    rep = repkit.verify_commutators(repkit.build_operator_set(IrrepPair.of(1, 1), flip_d3=True))
    assert "[D0,D1]+2D3" in {r.check for r in rep.failures()}


def test_invariant_subspace_dimension():
    assert len(repkit.invariant_subspace(IrrepPair.of(1, 2))) == 3
    assert len(repkit.invariant_subspace(IrrepPair.of(1.5, 0.5))) == 2


@pytest.mark.parametrize("pair", repkit.valid_pairs(8), ids=str)
def test_eigen_series(pair):
    rep = repkit.verify_eigen_series(pair)
    assert rep.passed, rep.failures()


def test_series_applicability():
    assert repkit.applicable_series(IrrepPair.of(3, 0)) == [1]
    assert repkit.applicable_series(IrrepPair.of(0, 0)) == [1, 2]
    assert repkit.applicable_series(IrrepPair.of(0.5, 2.5)) == [3, 5]
    assert repkit.applicable_series(IrrepPair.of(0.5, 0.5)) == [3, 4, 5, 6]
    assert repkit.applicable_series(IrrepPair.of(1, 3)) == [7]
    assert repkit.applicable_series(IrrepPair.of(1, 1)) == [7, 8]
    assert repkit.applicable_series(IrrepPair.of(1.5, 1.5)) == []


def test_series_1_eigenvalue():
    (s,) = repkit.series_vectors(IrrepPair.of(2, 0))
    assert s.d1 == s.d2 == -6.0


@pytest.mark.parametrize("pair", repkit.valid_pairs(4), ids=str)
def test_completeness(pair):
    rep = repkit.verify_series_completeness(pair)
    assert rep.passed, (rep.failures(), rep.notes)


def test_report_json():
    rep = repkit.verify_commutators(repkit.build_operator_set(IrrepPair.of(0.5, 0.5)))
    d = json.loads(json.dumps(rep.to_dicts()))
    assert set(d[0]) == {"pair", "relation", "group", "residual", "pass"}
    assert d[0]["pair"] == "(1/2,1/2)"


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 6), st.integers(0, 3))
def test_d_operators_preserve_invariant_subspace(a, k):
    b = a % 2 + 2 * k
    ops = repkit.build_operator_set(IrrepPair.doubled(a, b))
    kk = ops.T0 + ops.W0
    for d in (ops.D0, ops.D1, ops.D2, ops.D3):
        assert repkit.max_abs(d @ kk - kk @ d) < 1e-12
