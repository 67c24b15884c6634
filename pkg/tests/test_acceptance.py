"""Acceptance suite: nine end-to-end criteria, one PASS/FAIL line each.

Run under pytest (``pytest tests/test_acceptance.py -s`` shows the lines) or
directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import time
import warnings

import numpy as np

from curvebody import liepoisson as lp
from curvebody import repkit, spectral
from curvebody.dynamics import (OrbitState, ReducedState, SystemParams, coeff_h, coeff_s, coeff_s_pair,
                                hamiltonian, integrable_radial_period, integrate, measured_period)
from curvebody.potentials import PotentialSpec

RESULTS: dict[int, bool] = {}


def report(n: int, title: str, ok: bool, detail: str) -> None:
    RESULTS[n] = ok
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} -- {detail}")
    assert ok, detail


def test_criterion_1_commutators():
    t0 = time.perf_counter()
    worst, failed, n = 0.0, [], 0
    for pair in repkit.valid_pairs(5):
        rep = repkit.verify_commutators(repkit.build_operator_set(pair))
        n += len(rep.records)
        worst = max(worst, rep.max_residual)
        failed += [f"{r.pair} {r.check}" for r in rep.failures()]
    dt = time.perf_counter() - t0
    report(1, "commutator relations, 2*ell <= 5", not failed and worst < 1e-12 and dt < 10,
           f"{n} relations, max residual {worst:.2e}, {dt:.2f} s" + (f", failed {failed[:3]}" if failed else ""))


def test_criterion_2_eigen_series():
    t0 = time.perf_counter()
    worst, failed, n_series = 0.0, [], 0
    for pair in repkit.valid_pairs(8):
        rep = repkit.verify_eigen_series(pair)
        n_series += len({r.group for r in rep.records})
        worst = max(worst, rep.max_residual)
        failed += [f"{r.pair} {r.check}" for r in rep.failures()]
    covered = set()
    for pair in repkit.valid_pairs(8):
        covered.update(repkit.applicable_series(pair))
    complete_fail = []
    for pair in repkit.valid_pairs(4):
        rep = repkit.verify_series_completeness(pair)
        complete_fail += [f"{r.pair} {r.check}" for r in rep.failures()]
    dt = time.perf_counter() - t0
    ok = not failed and not complete_fail and worst < 1e-12 and covered == set(range(1, 9)) and dt < 30
    report(2, "eight eigenvector series, ell <= 4, completeness 2*ell <= 4", ok,
           f"{n_series} (pair, series) checks, max residual {worst:.2e}, series covered {sorted(covered)}, "
           f"completeness failures {len(complete_fail)}, {dt:.2f} s")


def test_criterion_3_poisson_tables():
    t0 = time.perf_counter()
    res = []
    for alg, which in ((lp.SO4, "spherical"), (lp.SO13, "hyperbolic")):
        tab = lp.verify_invariant_table(alg, which)
        res.append((tab.passed, tab.max_residual))
    cas = []
    for alg in (lp.SO13, lp.SO4):
        for c in lp.casimirs(alg).values():
            rep = lp.casimir_check(alg, c, tol=0.0)
            cas.append((rep.passed, rep.max_residual))
    dt = time.perf_counter() - t0
    ok = all(p for p, _ in res + cas) and max(r for _, r in res + cas) == 0.0 and dt < 1
    report(3, "Poisson tables and Casimirs", ok,
           f"table residuals {[r for _, r in res]}, Casimir residuals {[r for _, r in cas]}, {dt:.3f} s")


def test_criterion_4_coefficients():
    rng = np.random.default_rng(20261016)
    worst = 0.0
    for _ in range(1000):
        r = 10 ** rng.uniform(-2, 2)
        m1, m2 = 10 ** rng.uniform(-1, 1, 2)
        R = 10 ** rng.uniform(-0.5, 0.5)
        a = np.array(coeff_s(r, m1, m2, R))
        b = np.array(coeff_s_pair(r, m1, m2, R))
        worst = max(worst, np.max(np.abs(a - b)) / np.max(np.abs(a)))
    eq = 0.0
    for _ in range(200):
        m = 10 ** rng.uniform(-1, 1)
        R = 10 ** rng.uniform(-0.5, 0.5)
        eq = max(eq, abs(coeff_s(10 ** rng.uniform(-2, 2), m, m, R)[1]),
                 abs(coeff_h(rng.uniform(0.01, 0.99), m, m, R)[1]))
    report(4, "coefficient cross-form identity and equal-mass B = 0", worst < 1e-12 and eq < 1e-12,
           f"max scaled difference {worst:.2e} over 1000 points, max |B| at m1 = m2 {eq:.2e}")


def test_criterion_5_spectra():
    t0 = time.perf_counter()
    worst, rows = 0.0, 0
    for case in (1, 2, 7, 8):
        # cases 7 and 8 exist only for ell >= 1
        for ell in ((0, 1, 2) if case <= 2 else (1, 2)):
            for pot in (PotentialSpec.coulomb(1.0), PotentialSpec.oscillator(1.0)):
                pr = spectral.RadialProblem(spectral.case_coefficients(case, ell), pot, 1.0, 1.0)
                cmp = spectral.compare_levels(spectral.closed_form_levels(pr, 5),
                                              spectral.grid_eigensolve(pr, 5, n_points=8000), pr.unit)
                worst = max(worst, cmp.max_rel)
                rows += len(cmp.rows)
    dt = time.perf_counter() - t0
    report(5, "closed-form vs grid spectra", worst < 1e-6 and dt < 60,
           f"{rows} levels, max relative difference {worst:.2e}, {dt:.1f} s")


def test_criterion_6_degenerate_coulomb():
    co = spectral.case_coefficients(1, 0)
    two = spectral.levels_coulomb_twobody(co, 1.0, 1.0, 1.0, 10)
    one = spectral.levels_onebody("coulomb", 0, 1.0, 1.0, 10, gamma=1.0)
    diff = float(np.max(np.abs(two.energies - one.energies)))
    e1 = two.levels[0]
    ok = e1[0] == 1 and abs(e1[1] + 0.5) < 1e-12 and diff < 1e-12
    report(6, "case 1, ell = 0 Coulomb vs one-body series", ok, f"E_1 = {e1[1]!r}, max difference k <= 10 {diff:.2e}")


DRIFT_CASES = {
    "sphere generic": (SystemParams(20, 40, 1, "sphere", PotentialSpec.coulomb(0.1)),
                       ReducedState(1.0, 0.0, 0.5, 0.3, 1.5, 1.0)),
    "sphere mu = nu": (SystemParams(20, 40, 1, "sphere", PotentialSpec.coulomb(0.02)),
                       OrbitState(1.0, 0.0, 0.8, 0.3, 0.6)),
    "sphere integrable": (SystemParams(20, 20, 1, "sphere", PotentialSpec.coulomb(0.05)),
                          ReducedState(1.0, 0.0, 0.0, 0.0, 0.0, 1.0)),
    "sphere geodesic": (SystemParams(20, 20, 1, "sphere", PotentialSpec.inv_square_plus_square(1, 1)),
                        ReducedState(1.0, 0.5)),
    "hyperbolic generic": (SystemParams(20, 40, 1, "hyperbolic", PotentialSpec.coulomb(0.1)),
                           ReducedState(0.4, 0.0, 0.3, 0.2, 1.0, 0.5)),
    "hyperbolic nu = 0": (SystemParams(20, 40, 1, "hyperbolic", PotentialSpec.coulomb(0.05)),
                          OrbitState(0.4, 0.0, 1.0, 0.3, 0.2)),
    "hyperbolic geodesic": (SystemParams(20, 20, 1, "hyperbolic", PotentialSpec.inv_square_plus_square(0.05, 1)),
                            ReducedState(0.4, 0.1)),
}


def test_criterion_7_conservation():
    t0 = time.perf_counter()
    lines, ok = [], True
    for name, (params, state) in DRIFT_CASES.items():
        d = []
        for dt in (1e-3, 5e-4):
            tr = integrate(state, params, 1e5 * 1e-3, dt, stride=100)
            c0 = abs(tr.casimir[0])
            d.append((tr.relative_energy_drift(), tr.max_casimir_drift / c0 if c0 else tr.max_casimir_drift,
                      tr.halted))
        ratio = d[0][0] / d[1][0]
        good = d[0][0] < 1e-8 and d[0][1] < 1e-8 and ratio >= 3.5 and d[0][2] is None and d[1][2] is None
        ok &= good
        lines.append(f"{name}: {d[0][0]:.1e} (x{ratio:.2f}), casimir {d[0][1]:.1e}")
    dt = time.perf_counter() - t0
    ok &= dt < 60
    report(7, "energy and Casimir conservation over 1e5 steps", ok, "; ".join(lines) + f"; {dt:.1f} s")


def test_criterion_8_integrable_period():
    # reduced mass m = m1 m2 / (m1 + m2) = 1
    params = SystemParams(2.0, 2.0, 1.0, "sphere", PotentialSpec.coulomb(1.0))
    state = ReducedState(1.0, 0.0, 0.0, 0.0, 0.0, 1.0)
    E = hamiltonian(state, params)
    T_quad = integrable_radial_period(E, 1.0, params)
    tr = integrate(state, params, 100.0, 1e-3, stride=1)
    T_sim = measured_period(tr)
    rel = abs(T_sim - T_quad) / T_quad
    report(8, "integrable radial period vs quadrature", rel < 1e-5,
           f"simulated {T_sim:.12g}, quadrature {T_quad:.12g}, relative {rel:.2e}")


def test_criterion_9_symplectic_form():
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(100):
        mu, nu = rng.uniform(0.3, 3.0, 2)
        while abs(mu - nu) < 1e-3:
            nu = rng.uniform(0.3, 3.0)
        lim = min(mu, nu)
        u = rng.uniform(-0.95, 0.95) * lim
        psi, chi = rng.uniform(0, 2 * math.pi, 2)
        worst = max(worst, lp.symplectic_pullback_residual(mu, nu, u, psi, chi))
    report(9, "orbit chart pulls back the Kirillov form to du ^ d(psi - chi)", worst < 1e-10,
           f"max residual {worst:.2e} at 100 random points")


if __name__ == "__main__":
    warnings.simplefilter("ignore")
    for name, fn in sorted((k, v) for k, v in dict(globals()).items() if k.startswith("test_criterion_")):
        try:
            fn()
        except AssertionError:
            pass
        except Exception as exc:  # report crashes as failures
            n = int(name.split("_")[2])
            RESULTS[n] = False
            print(f"[FAIL] criterion {n}: {name} raised {exc!r}")
    print(f"{sum(RESULTS.values())}/{len(RESULTS)} criteria passed")
    raise SystemExit(0 if all(RESULTS.values()) else 1)
