"""Matrix realizations of su(2) + su(2) and the invariant operators D0..D3 on S^3.

Conventions
-----------
* Spin labels are stored doubled (``two_ell``) so half-integers stay exact.
* Carrier bases are ordered ``n = -ell, ..., +ell``; the tensor basis of
  ``U_l1 (x) V_l2`` is lexicographic with ``n1`` major.
* Ladder action::

      T0 psi_n = n psi_n
      T+ psi_n = -sqrt((l - n)(l + n + 1)) psi_{n+1}
      T- psi_n = -sqrt((l + n)(l - n + 1)) psi_{n-1}

* ``D0 = -i (T0 - W0)``.  Only ``D0**2 = -(T0 - W0)**2`` is fixed by the
  operator algebra; the sign is the one for which ``[D0, D1] = -2 D3`` holds
  with ``D3 = i (T- W+ - T+ W-)``.
* Residuals are max-abs-entry norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

TOL = 1e-12
CLUSTER_TOL = 1e-9


@dataclass(frozen=True, order=True)
class SpinLabel:
    two_ell: int

    def __post_init__(self):
        if int(self.two_ell) != self.two_ell or self.two_ell < 0:
            raise ValueError(f"two_ell must be a nonnegative integer, got {self.two_ell!r}")

    @classmethod
    def of(cls, ell) -> "SpinLabel":
        """Build from an integer/half-integer value (``0.5``, ``Fraction(3, 2)``, ``"5/2"``)."""
        two = Fraction(ell) * 2
        if two.denominator != 1:
            raise ValueError(f"{ell!r} is not an integer or half-integer")
        return cls(int(two))

    @property
    def ell(self) -> float:
        return self.two_ell / 2

    @property
    def dim(self) -> int:
        return self.two_ell + 1

    @property
    def is_integer(self) -> bool:
        return self.two_ell % 2 == 0

    def __str__(self):
        return str(self.two_ell // 2) if self.is_integer else f"{self.two_ell}/2"


@dataclass(frozen=True, order=True)
class IrrepPair:
    ell1: SpinLabel
    ell2: SpinLabel

    def __post_init__(self):
        if self.ell1.two_ell % 2 != self.ell2.two_ell % 2:
            raise ValueError(
                f"mixed-parity pair ({self.ell1}, {self.ell2}): "
                "ell1 and ell2 must be both integer or both half-integer")

    @classmethod
    def of(cls, ell1, ell2) -> "IrrepPair":
        return cls(SpinLabel.of(ell1), SpinLabel.of(ell2))

    @classmethod
    def doubled(cls, two_ell1: int, two_ell2: int) -> "IrrepPair":
        return cls(SpinLabel(two_ell1), SpinLabel(two_ell2))

    @property
    def dim(self) -> int:
        return self.ell1.dim * self.ell2.dim

    @property
    def is_integer(self) -> bool:
        return self.ell1.is_integer

    def index(self, two_n1: int, two_n2: int) -> int:
        """Position of ``psi_{n1} (x) phi_{n2}`` in the lexicographic tensor basis."""
        i1 = (two_n1 + self.ell1.two_ell) // 2
        i2 = (two_n2 + self.ell2.two_ell) // 2
        if not (0 <= i1 < self.ell1.dim and 0 <= i2 < self.ell2.dim):
            raise IndexError(f"weights ({two_n1}/2, {two_n2}/2) outside {self}")
        return i1 * self.ell2.dim + i2

    def __str__(self):
        return f"({self.ell1},{self.ell2})"


def valid_pairs(max_two_ell: int) -> list[IrrepPair]:
    """All same-parity pairs with ``2*ell_i <= max_two_ell``."""
    return [IrrepPair.doubled(a, b)
            for a in range(max_two_ell + 1)
            for b in range(max_two_ell + 1) if (a - b) % 2 == 0]


def spin_matrices(ell: SpinLabel) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(T0, T+, T-)`` on the ``2 ell + 1`` dimensional carrier space."""
    dim = ell.dim
    two_l = ell.two_ell
    t0 = np.zeros((dim, dim))
    tp = np.zeros((dim, dim))
    tm = np.zeros((dim, dim))
    for i in range(dim):
        two_n = 2 * i - two_l
        t0[i, i] = two_n / 2
        if i + 1 < dim:
            # (l - n)(l + n + 1) = (2l - 2n)(2l + 2n + 2) / 4, exact in integers
            tp[i + 1, i] = -math.sqrt((two_l - two_n) * (two_l + two_n + 2)) / 2
        if i > 0:
            tm[i - 1, i] = -math.sqrt((two_l + two_n) * (two_l - two_n + 2)) / 2
    return t0, tp, tm


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class OperatorSet:
    pair: IrrepPair
    T0: np.ndarray
    Tp: np.ndarray
    Tm: np.ndarray
    W0: np.ndarray
    Wp: np.ndarray
    Wm: np.ndarray
    D0: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    D3: np.ndarray

    @property
    def dim(self) -> int:
        return self.pair.dim

    @property
    def D0sq(self) -> np.ndarray:
        return self.D0 @ self.D0

    def casimir_sum(self) -> np.ndarray:
        """``{T+, T-} + {W+, W-}``."""
        return (self.Tp @ self.Tm + self.Tm @ self.Tp
                + self.Wp @ self.Wm + self.Wm @ self.Wp)

    def cross(self) -> np.ndarray:
        """``T+ W- + T- W+``."""
        return self.Tp @ self.Wm + self.Tm @ self.Wp


def build_operator_set(pair: IrrepPair, *, flip_d3: bool = False) -> OperatorSet:
    """Kronecker-product realization of T, W and D0..D3 on ``U_l1 (x) V_l2``.

    ``flip_d3`` negates D3; it exists only so verification tooling can be
    exercised against a known-bad operator set.
    """
    if not isinstance(pair, IrrepPair):
        raise TypeError("pair must be an IrrepPair")
    t0, tp, tm = spin_matrices(pair.ell1)
    w0, wp, wm = spin_matrices(pair.ell2)
    e1 = np.eye(pair.ell1.dim)
    e2 = np.eye(pair.ell2.dim)
    T0, Tp, Tm = (np.kron(x, e2) for x in (t0, tp, tm))
    W0, Wp, Wm = (np.kron(e1, x) for x in (w0, wp, wm))

    anti = Tp @ Tm + Tm @ Tp + Wp @ Wm + Wm @ Wp
    cross = Tp @ Wm + Tm @ Wp
    D0 = -1j * (T0 - W0)
    D1 = -0.5 * anti - cross
    D2 = -0.5 * anti + cross
    D3 = 1j * (Tm @ Wp - Tp @ Wm)
    if flip_d3:
        D3 = -D3
    return OperatorSet(pair, *(_frozen(x) for x in (T0, Tp, Tm, W0, Wp, Wm, D0, D1, D2, D3)))


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


# --------------------------------------------------------------------------
# K-invariant subspace T'

@dataclass(frozen=True)
class InvariantBasisVector:
    coefficients: np.ndarray
    pair: IrrepPair
    label: str
    two_j: int | None = None

    def __post_init__(self):
        self.coefficients.setflags(write=False)


def chi(pair: IrrepPair, two_j: int) -> np.ndarray:
    """``chi_j = psi_j (x) phi_{-j}`` as a dense vector."""
    v = np.zeros(pair.dim, dtype=complex)
    v[pair.index(two_j, -two_j)] = 1.0
    return v


def invariant_two_js(pair: IrrepPair) -> list[int]:
    m = min(pair.ell1.two_ell, pair.ell2.two_ell)
    return list(range(-m, m + 1, 2))


def invariant_subspace(pair: IrrepPair) -> list[InvariantBasisVector]:
    """Basis ``chi_j``, ``-min(l1, l2) <= j <= min(l1, l2)``, of the K-invariant subspace."""
    out = []
    for tj in invariant_two_js(pair):
        j = str(Fraction(tj, 2))
        out.append(InvariantBasisVector(chi(pair, tj), pair, f"chi_{j}", tj))
    return out


def invariant_indices(pair: IrrepPair) -> np.ndarray:
    return np.array([pair.index(tj, -tj) for tj in invariant_two_js(pair)], dtype=int)


def restrict(op: np.ndarray, pair: IrrepPair) -> np.ndarray:
    """Matrix of ``op`` on T' in the chi basis (T' is invariant, so this is a sub-block)."""
    idx = invariant_indices(pair)
    return np.asarray(op)[np.ix_(idx, idx)]


# --------------------------------------------------------------------------
# commutator relations

def _comm(a, b):
    return a @ b - b @ a


def _anti(a, b):
    return a @ b + b @ a


RELATIONS = (
    ("[D0,D1]+2D3", lambda o: _comm(o.D0, o.D1) + 2 * o.D3),
    ("[D0,D2]-2D3", lambda o: _comm(o.D0, o.D2) - 2 * o.D3),
    ("[D0,D3]-(D1-D2)", lambda o: _comm(o.D0, o.D3) - (o.D1 - o.D2)),
    ("[D1,D2]+2{D0,D3}", lambda o: _comm(o.D1, o.D2) + 2 * _anti(o.D0, o.D3)),
    ("[D1,D3]+{D0,D1}", lambda o: _comm(o.D1, o.D3) + _anti(o.D0, o.D1)),
    ("[D2,D3]-{D0,D2}", lambda o: _comm(o.D2, o.D3) - _anti(o.D0, o.D2)),
)


@dataclass
class CheckRecord:
    pair: str
    check: str
    residual: float
    tol: float = TOL
    group: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tol)

    def to_dict(self) -> dict:
        return {"pair": self.pair, "relation": self.check, "group": self.group,
                "residual": self.residual, "pass": self.passed}


@dataclass
class Report:
    records: list[CheckRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.records), default=0.0)

    def failures(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]

    def extend(self, other: "Report") -> "Report":
        self.records.extend(other.records)
        self.notes.extend(other.notes)
        return self

    def to_dicts(self) -> list[dict]:
        return [r.to_dict() for r in self.records]


def verify_commutators(ops: OperatorSet, tol: float = TOL, domain: str = "invariant") -> Report:
    """Residuals of the six quadratic commutator relations of D0..D3 on S^3.

    ``domain="invariant"`` measures each relation on T', the zero-weight
    block of ``T0 + W0`` where the operators act on functions of S^3.  The
    D's commute with ``T0 + W0`` so this block is preserved.
    ``domain="full"`` measures on the whole tensor space; there the last two
    relations pick up a term that vanishes only on T'.
    """
    if domain not in ("invariant", "full"):
        raise ValueError(f"domain must be 'invariant' or 'full', got {domain!r}")
    rep = Report()
    for name, fn in RELATIONS:
        m = fn(ops)
        if domain == "invariant":
            m = restrict(m, ops.pair)
        grp = "commutator" if domain == "invariant" else "commutator (full space)"
        rep.records.append(CheckRecord(str(ops.pair), name, max_abs(m), tol, grp))
    return rep


def verify_structure(ops: OperatorSet, tol: float = TOL) -> Report:
    """Identities tying D0..D3 to the ladder operators, plus Hermiticity on T'."""
    p = ops.pair
    rep = Report()
    add = lambda name, res: rep.records.append(CheckRecord(str(p), name, res, tol, "structure"))
    d = ops.T0 - ops.W0
    add("D0^2+(T0-W0)^2", max_abs(ops.D0sq + d @ d))
    add("T-W commute", max(max_abs(_comm(a, b)) for a in (ops.T0, ops.Tp, ops.Tm)
                           for b in (ops.W0, ops.Wp, ops.Wm)))
    add("-(T0-W0)^2-D0^2-D1-D2-casimir_sum",
        max_abs(-d @ d - ops.D0sq - ops.D1 - ops.D2 - ops.casimir_sum()))
    k = ops.T0 + ops.W0
    for v in invariant_subspace(p):
        add(f"(T0+W0){v.label}", max_abs(k @ v.coefficients))
        tj = v.two_j
        lam = 2 * (p.ell1.ell * (p.ell1.ell + 1) + p.ell2.ell * (p.ell2.ell + 1) - 2 * (tj / 2) ** 2)
        add(f"casimir_sum {v.label}", max_abs(ops.casimir_sum() @ v.coefficients - lam * v.coefficients))
    for name in ("D1", "D2", "D3"):
        m = restrict(getattr(ops, name), p)
        add(f"{name} hermitian on T'", max_abs(m - m.conj().T))
    m = restrict(ops.D0, p)
    add("D0 anti-hermitian on T'", max_abs(m + m.conj().T))
    return rep


# --------------------------------------------------------------------------
# the eight eigenvector series

@dataclass(frozen=True)
class SeriesVector:
    """One vector of the eight-series list, with the operator actions it must satisfy."""
    series: int
    pair: IrrepPair
    vector: np.ndarray
    d0sq: float
    d1: float
    d2: float
    d3_image: np.ndarray | None  # None when the image of D3 is not prescribed


def _series_vectors(pair: IrrepPair) -> list[SeriesVector]:
    t1, t2 = pair.ell1.two_ell, pair.ell2.two_ell
    l1, l2 = pair.ell1.ell, pair.ell2.ell
    out = []
    zero = np.zeros(pair.dim, dtype=complex)

    if pair.is_integer and t2 == 0:
        v = chi(pair, 0)
        e = -l1 * (l1 + 1)
        out.append(SeriesVector(1, pair, v, 0.0, e, e, zero))
    if pair.is_integer and t1 == 0:
        v = chi(pair, 0)
        e = -l2 * (l2 + 1)
        out.append(SeriesVector(2, pair, v, 0.0, e, e, zero))

    def half_series(lo: float, plus_id: int, minus_id: int):
        vp = chi(pair, 1) + chi(pair, -1)
        vm = chi(pair, 1) - chi(pair, -1)
        big = -(lo ** 2 + 2 * lo + 0.75)
        small = -(lo ** 2 - 0.25)
        c = lo + 0.5
        # plus vector: (D1, D2) = (big, small); minus vector: swapped
        out.append(SeriesVector(plus_id, pair, vp, -1.0, big, small, -1j * c * vm))
        out.append(SeriesVector(minus_id, pair, vm, -1.0, small, big, 1j * c * vp))

    if t1 == 1:
        half_series(l2, 3, 5)
    if t2 == 1:
        half_series(l1, 4, 6)

    if pair.is_integer and t1 == 2 and t2 >= 2:
        v = chi(pair, 2) - chi(pair, -2)
        e = -l2 * (l2 + 1)
        out.append(SeriesVector(7, pair, v, -4.0, e, e,
                                2j * math.sqrt(2 * l2 * (l2 + 1)) * chi(pair, 0)))
    if pair.is_integer and t2 == 2 and t1 >= 2:
        v = chi(pair, 2) - chi(pair, -2)
        e = -l1 * (l1 + 1)
        out.append(SeriesVector(8, pair, v, -4.0, e, e,
                                2j * math.sqrt(2 * l1 * (l1 + 1)) * chi(pair, 0)))
    return out


def series_vectors(pair: IrrepPair) -> list[SeriesVector]:
    """Vectors of the eight series that live in the representation ``pair``."""
    return _series_vectors(pair)


def applicable_series(pair: IrrepPair) -> list[int]:
    return sorted({s.series for s in _series_vectors(pair)})


def verify_eigen_series(pair: IrrepPair, series: Iterable[int] | None = None,
                        ops: OperatorSet | None = None, tol: float = TOL) -> Report:
    """Apply D0^2, D1, D2 (and D3, and D0 where prescribed) to each series vector."""
    ops = ops or build_operator_set(pair)
    wanted = set(series) if series is not None else None
    rep = Report()
    vecs = [s for s in _series_vectors(pair) if wanted is None or s.series in wanted]
    if not vecs:
        rep.notes.append(f"{pair}: not applicable")
        return rep
    for s in vecs:
        v = s.vector
        grp = f"series {s.series}"
        add = lambda name, res: rep.records.append(CheckRecord(str(pair), f"{grp}: {name}", res, tol, grp))
        add("D0^2", max_abs(ops.D0sq @ v - s.d0sq * v))
        add("D1", max_abs(ops.D1 @ v - s.d1 * v))
        add("D2", max_abs(ops.D2 @ v - s.d2 * v))
        if s.d3_image is not None:
            add("D3", max_abs(ops.D3 @ v - s.d3_image))
        if s.series in (1, 2):
            add("D0", max_abs(ops.D0 @ v))
    return rep


# --------------------------------------------------------------------------
# brute-force common eigenvectors on T'

def _clusters(values: np.ndarray, tol: float) -> list[np.ndarray]:
    order = np.argsort(values)
    groups, cur = [], [order[0]]
    for i in order[1:]:
        if abs(values[i] - values[cur[-1]]) <= tol * max(1.0, abs(values[i])):
            cur.append(i)
        else:
            groups.append(np.array(cur))
            cur = [i]
    groups.append(np.array(cur))
    return groups


def _null_space(m: np.ndarray, tol: float) -> np.ndarray:
    if m.shape[1] == 0:
        return m[:0, :0]
    _, s, vh = np.linalg.svd(m)
    scale = max(1.0, s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol * scale))
    return vh[rank:].conj().T


def _distinct_eigs(m: np.ndarray, tol: float) -> list[float]:
    w = np.linalg.eigvalsh(m)
    return [float(np.mean(w[g])) for g in _clusters(w, tol)]


@dataclass
class CommonEigenspace:
    d0sq: float
    d1: float
    d2: float
    basis: np.ndarray  # columns, in full tensor-space coordinates


def common_eigenvectors(ops: OperatorSet, tol: float = CLUSTER_TOL) -> list[CommonEigenspace]:
    """All common eigenspaces of D0^2, D1, D2 inside T'.

    D1 is diagonalized first; each eigenspace is then cut down to the vectors
    that are also eigenvectors of D2 and of D0^2.
    """
    p = ops.pair
    idx = invariant_indices(p)
    d0 = restrict(ops.D0sq, p).real
    d1 = restrict(ops.D1, p)
    d2 = restrict(ops.D2, p)
    w1, q1 = np.linalg.eigh(d1)
    lam2 = _distinct_eigs(d2, tol)
    lam0 = _distinct_eigs(d0, tol)
    found = []
    for g in _clusters(w1, tol):
        q = q1[:, g]
        e1 = float(np.mean(w1[g]))
        for e2 in lam2:
            c = _null_space((d2 - e2 * np.eye(len(idx))) @ q, tol)
            if c.shape[1] == 0:
                continue
            q2 = q @ c
            for e0 in lam0:
                c0 = _null_space((d0 - e0 * np.eye(len(idx))) @ q2, tol)
                if c0.shape[1] == 0:
                    continue
                sub = q2 @ c0
                full = np.zeros((p.dim, sub.shape[1]), dtype=complex)
                full[idx, :] = sub
                found.append(CommonEigenspace(e0, e1, e2, full))
    return found


def _in_span(v: np.ndarray, basis: np.ndarray) -> float:
    q, _ = np.linalg.qr(basis)
    return float(np.linalg.norm(v - q @ (q.conj().T @ v)) / np.linalg.norm(v))


def verify_series_completeness(pair: IrrepPair, tol: float = CLUSTER_TOL) -> Report:
    """Check that brute-force common eigenvectors are exactly those of the eight series.

    Records
    -------
    ``unexplained``: number of common-eigenspace dimensions not spanned by
    series vectors (must be 0). ``missing``: worst span residual of a series
    vector against the brute-force eigenspaces (must be ~0).
    """
    ops = build_operator_set(pair)
    spaces = common_eigenvectors(ops, tol)
    theory = _series_vectors(pair)
    rep = Report()
    unexplained = 0
    for sp in spaces:
        match = [s.vector for s in theory
                 if abs(s.d0sq - sp.d0sq) < 1e-7 and abs(s.d1 - sp.d1) < 1e-7 and abs(s.d2 - sp.d2) < 1e-7]
        rank = np.linalg.matrix_rank(np.column_stack(match), tol=1e-8) if match else 0
        unexplained += sp.basis.shape[1] - rank
    missing = 0.0
    for s in theory:
        res = min((_in_span(s.vector, sp.basis) for sp in spaces), default=1.0)
        missing = max(missing, res)
    rep.records.append(CheckRecord(str(pair), "completeness: unexplained common eigenvectors",
                                   float(unexplained), 0.5, "completeness"))
    rep.records.append(CheckRecord(str(pair), "completeness: series vector missed",
                                   missing, 1e-8, "completeness"))
    rep.notes.append(f"{pair}: {len(spaces)} common eigenspace(s), "
                     f"{len(theory)} series vector(s) from series {applicable_series(pair)}")
    return rep
