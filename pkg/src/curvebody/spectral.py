"""Radial spectral problem of the two-body Hamiltonian on S^3.

The radial equation for ``f(r)``, ``0 < r < inf``, reads::

    -(1 + r^2)^3 / (8 m R^2 r^2) d/dr( r^2 / (1 + r^2) f' )
        + ( (a / r^2 + b + c r^2) / (m R^2) + U(r) - E ) f = 0

With ``theta = 2 arctan r`` (the angular separation) and ``g = sin(theta) f``
it becomes the Schrödinger form on ``(0, pi)``::

    -g'' / (2 m R^2) + ( V(theta) - 1 / (2 m R^2) ) g = E g,
    V = (a cot^2(theta/2) + b + c tan^2(theta/2)) / (m R^2) + U(tan(theta/2))

which is discretized by second-order finite differences with Dirichlet ends.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .potentials import PotentialSpec
from .repkit import SpinLabel

EXACT_CASES = (1, 2, 7, 8)


class ConvergenceError(RuntimeError):
    """Grid eigenvalues changed too much under refinement."""


@dataclass(frozen=True)
class CaseCoefficients:
    case_id: int
    ell: SpinLabel
    a: Fraction
    b: Fraction
    c: Fraction

    @property
    def equal_masses_required(self) -> bool:
        return self.case_id >= 3

    @property
    def symmetric(self) -> bool:
        return self.a == self.c

    def floats(self) -> tuple[float, float, float]:
        return float(self.a), float(self.b), float(self.c)

    def to_dict(self) -> dict:
        return {"case": self.case_id, "ell": str(self.ell), "a": float(self.a),
                "b": float(self.b), "c": float(self.c)}


def case_coefficients(case_id: int, ell) -> CaseCoefficients:
    """Coefficients ``(a, b, c)`` of the radial equation for an eigenvector series.

    ``ell`` may be a :class:`SpinLabel` or a number (``0.5``, ``"3/2"``, ``2``).
    """
    lab = ell if isinstance(ell, SpinLabel) else SpinLabel.of(ell)
    L = Fraction(lab.two_ell, 2)
    q = Fraction(1, 4)
    if case_id in (1, 2):
        if not lab.is_integer:
            raise ValueError(f"case {case_id} needs integer ell, got {lab}")
        a = c = L * (L + 1) / 8
        b = L * (L + 1) / 4
    elif case_id in (3, 4, 5, 6):
        if lab.is_integer:
            raise ValueError(f"case {case_id} needs half-integer ell, got {lab}")
        small = (L * L - q) / 8
        big = (L * L + 2 * L + 3 * q) / 8
        b = (L * L + L + 3 * q) / 4
        a, c = (small, big) if case_id in (3, 4) else (big, small)
    elif case_id in (7, 8):
        if not lab.is_integer or lab.two_ell < 2:
            raise ValueError(f"case {case_id} needs integer ell >= 1, got {lab}")
        a = c = L * (L + 1) / 8
        b = (L * L + L + 2) / 4
    else:
        raise ValueError(f"case_id must be 1..8, got {case_id}")
    return CaseCoefficients(case_id, lab, a, b, c)


@dataclass(frozen=True)
class RadialProblem:
    coeffs: CaseCoefficients
    potential: PotentialSpec
    m: float
    R: float

    def __post_init__(self):
        if not (self.m > 0 and self.R > 0):
            raise ValueError("m and R must be positive")

    @property
    def unit(self) -> float:
        """``1 / (2 m R^2)``, the natural energy scale."""
        return 1.0 / (2.0 * self.m * self.R ** 2)

    def interval(self) -> float:
        """Right end of the ``theta`` interval.

        The oscillator wall at ``r = 1`` splits the sphere into two isospectral
        halves; only the half containing ``r -> 0`` is discretized.
        """
        return math.pi / 2 if self.potential.kind == "oscillator" else math.pi

    def theta_potential(self, theta: np.ndarray) -> np.ndarray:
        a, b, c = self.coeffs.floats()
        r = np.tan(theta / 2)
        cen = (a / r ** 2 + b + c * r ** 2) / (self.m * self.R ** 2)
        return cen + self.potential(r, "sphere", self.R)


@dataclass
class SpectrumResult:
    levels: list[tuple[int, float]]
    method: str
    meta: dict = field(default_factory=dict)

    @property
    def energies(self) -> np.ndarray:
        return np.array([e for _, e in self.levels])

    @property
    def ks(self) -> list[int]:
        return [k for k, _ in self.levels]

    def is_increasing(self) -> bool:
        return bool(np.all(np.diff(self.energies) > 0))

    def to_dict(self) -> dict:
        d = dict(self.meta)
        d.update(method=self.method, levels=[{"k": k, "E": e} for k, e in self.levels])
        return d


# --------------------------------------------------------------------------
# closed forms

def levels_general(eta: float, nu: float, m: float, R: float, count: int, k0: int = 0) -> SpectrumResult:
    """Levels of the radial equation with potential ``eta / r^2 + nu r^2`` (no centrifugal term)."""
    if eta < 0 or nu < 0:
        raise ValueError(f"eta and nu must be nonnegative, got eta={eta}, nu={nu}")
    if eta == 0 or nu == 0:
        warnings.warn("eta or nu is zero: using the formal limit of the closed form", stacklevel=2)
    mu = 1.0 / (2.0 * m * R ** 2)
    A = math.sqrt(1 / 16 + eta / mu)
    B = math.sqrt(1 / 16 + nu / mu)
    lv = [(k, mu * (k * (k + 1) - 5 / 8 + (2 * k + 1) * (A + B) + 2 * A * B))
          for k in range(k0, k0 + count)]
    return SpectrumResult(lv, "closed_form", {"series": "inverse_square_plus_square", "eta": eta, "nu": nu})


def levels_inv_square(coeffs: CaseCoefficients, alpha: float, beta: float, m: float, R: float,
                      count: int) -> SpectrumResult:
    """Levels for ``U = alpha / r^2 + beta r^2`` by folding ``a, b, c`` into ``eta, nu`` and a shift."""
    a, b, c = coeffs.floats()
    s = 1.0 / (m * R ** 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        base = levels_general(a * s + alpha, c * s + beta, m, R, count)
    lv = [(k, e + b * s) for k, e in base.levels]
    return SpectrumResult(lv, "closed_form", dict(coeffs.to_dict(), potential="inv_square_plus_square",
                                                  alpha=alpha, beta=beta))


def _need_symmetric(coeffs: CaseCoefficients, what: str):
    if not coeffs.symmetric:
        raise ValueError(f"the exact {what} series needs a = c (cases 1, 2, 7, 8); "
                         f"case {coeffs.case_id} has a = {coeffs.a}, c = {coeffs.c}")


def levels_coulomb_twobody(coeffs: CaseCoefficients, gamma: float, m: float, R: float,
                           count: int) -> SpectrumResult:
    """Coulomb-analogue levels ``k = 1 .. count`` for symmetric cases."""
    _need_symmetric(coeffs, "Coulomb")
    _, b, c = coeffs.floats()
    w = math.sqrt(1 + 32 * c)
    lv = [(k, (0.5 * (k * k - k + 1) - 0.75 + 2 * c + b + (2 * k - 1) / 4 * w) / (m * R ** 2)
           - 2 * m * gamma ** 2 / (w + 2 * k - 1) ** 2) for k in range(1, count + 1)]
    return SpectrumResult(lv, "closed_form", dict(coeffs.to_dict(), potential="coulomb", gamma=gamma))


def levels_oscillator_twobody(coeffs: CaseCoefficients, omega: float, m: float, R: float,
                              count: int) -> SpectrumResult:
    """Oscillator-analogue levels ``k = 0 .. count-1`` for symmetric cases.

    The frequency factor is ``sqrt(1 + 1 / (4 omega^2 R^4 m))``, the same as in
    the one-body series these levels are obtained from.
    """
    _need_symmetric(coeffs, "oscillator")
    if omega <= 0:
        raise ValueError("omega must be positive")
    _, b, c = coeffs.floats()
    w = math.sqrt(1 + 32 * c)
    fac = math.sqrt(1 + 1 / (4 * omega ** 2 * R ** 4 * m))
    lv = []
    for k in range(count):
        q = 4 * k + 2 + w
        lv.append((k, (q * q - 16 * c + 8 * b - 3) / (8 * m * R ** 2) + omega / (2 * math.sqrt(m)) * q * fac))
    return SpectrumResult(lv, "closed_form", dict(coeffs.to_dict(), potential="oscillator", omega=omega))


def levels_onebody(kind: str, l: int, m: float, R: float, count: int, gamma: float = 0.0,
                   omega: float = 0.0) -> SpectrumResult:
    """One-particle radial levels: Coulomb ``k = 1, 2, ..``; oscillator ``k = 0, 1, ..``."""
    if l < 0 or int(l) != l:
        raise ValueError("l must be a nonnegative integer")
    u = 1.0 / (2 * m * R ** 2)
    if kind == "coulomb":
        lv = [(k, -u + (k + l) ** 2 * u - m * gamma ** 2 / (2 * (k + l) ** 2)) for k in range(1, count + 1)]
    elif kind == "oscillator":
        if omega <= 0:
            raise ValueError("omega must be positive")
        fac = math.sqrt(1 + 1 / (4 * omega ** 2 * R ** 4 * m))
        lv = []
        for k in range(count):
            N = 2 * k + l + 1.5
            lv.append((k, -u * (0.75 - N * N) + omega * N / math.sqrt(m) * fac))
    else:
        raise ValueError(f"kind must be 'coulomb' or 'oscillator', got {kind!r}")
    return SpectrumResult(lv, "closed_form", {"potential": kind, "l": l, "one_body": True})


def closed_form_levels(problem: RadialProblem, count: int) -> SpectrumResult:
    """Dispatch to the exact series matching the problem's potential."""
    p = problem.potential
    co = problem.coeffs
    if p.kind == "zero":
        return levels_inv_square(co, 0.0, 0.0, problem.m, problem.R, count)
    if p.kind == "inv_square_plus_square":
        return levels_inv_square(co, p.alpha, p.beta, problem.m, problem.R, count)
    if p.kind == "coulomb":
        return levels_coulomb_twobody(co, p.gamma, problem.m, problem.R, count)
    if p.kind == "oscillator":
        return levels_oscillator_twobody(co, p.omega, problem.m, problem.R, count)
    raise ValueError(f"no closed-form series for a {p.kind} potential")


# --------------------------------------------------------------------------
# grid solver

def first_index(problem: RadialProblem) -> int:
    """Label of the ground level in the closed-form series (1 for Coulomb, else 0)."""
    return 1 if problem.potential.kind == "coulomb" else 0


def _grid_levels(problem: RadialProblem, count: int, n: int) -> tuple[np.ndarray, float]:
    L = problem.interval()
    h = L / (n + 1)
    theta = h * np.arange(1, n + 1)
    u = problem.unit
    diag = 2 * u / h ** 2 + problem.theta_potential(theta) - u
    off = np.full(n - 1, -u / h ** 2)
    w = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, count - 1))
    return w, h


def grid_eigensolve(problem: RadialProblem, count: int, n_points: int = 8000,
                    rel_change_tol: float = 1e-5) -> SpectrumResult:
    """Lowest ``count`` eigenvalues on grids of ``n_points`` and ``2 n_points``, Richardson-extrapolated.

    Levels are labelled from :func:`first_index` so they line up with the
    closed-form series.

    Relative changes are measured against ``max(|E|, 1 / (2 m R^2))`` so that
    levels at or near zero are judged on the natural energy scale.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if n_points < 4 * count:
        raise ValueError("n_points too small for the requested number of levels")
    e1, h1 = _grid_levels(problem, count, n_points)
    e2, h2 = _grid_levels(problem, count, 2 * n_points)
    scale = np.maximum(np.abs(e2), problem.unit)
    change = np.abs(e2 - e1) / scale
    if np.any(change > rel_change_tol):
        worst = int(np.argmax(change))
        raise ConvergenceError(f"level {worst} changed by {change[worst]:.3g} (relative) between "
                               f"{n_points} and {2 * n_points} points")
    ext = (h1 ** 2 * e2 - h2 ** 2 * e1) / (h1 ** 2 - h2 ** 2)
    meta = dict(problem.coeffs.to_dict(), potential=problem.potential.kind, n_points=n_points,
                raw_coarse=e1.tolist(), raw_fine=e2.tolist())
    k0 = first_index(problem)
    return SpectrumResult([(k0 + i, e) for i, e in enumerate(ext.tolist())], f"grid({n_points})", meta)


def observed_order(problem: RadialProblem, count: int, n_points: int) -> np.ndarray:
    """Empirical convergence order of the raw grid levels from three refinements."""
    e1, _ = _grid_levels(problem, count, n_points)
    e2, _ = _grid_levels(problem, count, 2 * n_points + 1)
    e4, _ = _grid_levels(problem, count, 4 * n_points + 3)
    # h halves exactly with n -> 2n + 1
    return np.log2(np.abs(e1 - e2) / np.abs(e2 - e4))


@dataclass
class Comparison:
    rows: list[dict]

    @property
    def max_rel(self) -> float:
        return max((r["rel"] for r in self.rows), default=0.0)

    def to_dicts(self) -> list[dict]:
        return list(self.rows)


def compare_levels(closed: SpectrumResult, grid: SpectrumResult, unit: float) -> Comparison:
    """Pair levels by order and report absolute and scaled relative differences."""
    rows = []
    for (k, e), (_, g) in zip(closed.levels, grid.levels):
        rows.append({"k": k, "closed_form": e, "grid": g, "abs": abs(e - g),
                     "rel": abs(e - g) / max(abs(e), unit)})
    return Comparison(rows)
