"""Lie–Poisson brackets on so*(4), so*(1,3) and their three-dimensional subalgebras.

The bracket of two functions on the dual of a Lie algebra with structure
constants ``[e_i, e_j] = sum_k c[i, j, k] e_k`` is::

    {f, g}(x) = sum_{ijk} c[i, j, k] x_k (df/dx_i)(dg/dx_j)

Coordinates on so*(4) and so*(1,3) are ``p1..p6``: ``p1..p3`` pair with the
rotation generators ``L`` and ``p4..p6`` with the remaining block.  On so*(4)
the split ``u = (p[:3] + p[3:]) / 2``, ``v = (p[:3] - p[3:]) / 2`` gives two
commuting copies of so*(3).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

Monomial = tuple[int, ...]


# --------------------------------------------------------------------------
# algebras

def _levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    for i, j, k in itertools.permutations(range(3)):
        eps[i, j, k] = np.linalg.det(np.eye(3)[[i, j, k]])
    return eps


EPS = _levi_civita()


@dataclass(frozen=True)
class LieAlgebraSpec:
    name: str
    structure_constants: np.ndarray  # c[i, j, k] = c^k_ij
    coordinate_names: tuple[str, ...]

    def __post_init__(self):
        c = np.array(self.structure_constants, dtype=float)
        n = len(self.coordinate_names)
        if c.shape != (n, n, n):
            raise ValueError(f"structure constants must have shape {(n, n, n)}, got {c.shape}")
        if np.max(np.abs(c + c.transpose(1, 0, 2)), initial=0.0) > 0:
            raise ValueError(f"{self.name}: structure constants are not antisymmetric")
        c.setflags(write=False)
        object.__setattr__(self, "structure_constants", c)

    @property
    def dim(self) -> int:
        return len(self.coordinate_names)

    def jacobi_residual(self) -> float:
        c = self.structure_constants
        # sum_m c^m_ij c^l_mk + cyclic
        t = (np.einsum("ijm,mkl->ijkl", c, c)
             + np.einsum("jkm,mil->ijkl", c, c)
             + np.einsum("kim,mjl->ijkl", c, c))
        return float(np.max(np.abs(t)))

    def poisson_tensor(self, x) -> np.ndarray:
        """``Pi_ij(x) = sum_k c[i, j, k] x_k``."""
        return np.einsum("ijk,k->ij", self.structure_constants, np.asarray(x, dtype=float))

    def var(self, name: str) -> "PolyFunction":
        return PolyFunction.variable(self.coordinate_names.index(name), self.dim)

    def vars(self) -> list["PolyFunction"]:
        return [PolyFunction.variable(i, self.dim) for i in range(self.dim)]


def _so4_like(sign_yy: float, name: str) -> LieAlgebraSpec:
    # [L_i, L_j] = eps L_k, [Y_i, Y_j] = sign_yy eps L_k, [L_i, Y_j] = eps Y_k
    c = np.zeros((6, 6, 6))
    c[:3, :3, :3] = EPS
    c[3:, 3:, :3] = sign_yy * EPS
    c[:3, 3:, 3:] = EPS
    c[3:, :3, 3:] = -EPS.transpose(1, 0, 2)
    return LieAlgebraSpec(name, c, tuple(f"p{i}" for i in range(1, 7)))


def _so3_like(sign: float, name: str) -> LieAlgebraSpec:
    # coordinates (p3, p4, p5): [p3,p4] = p5, [p4,p5] = sign p3, [p5,p3] = p4
    c = np.zeros((3, 3, 3))
    for (i, j, k), s in (((0, 1, 2), 1.0), ((1, 2, 0), sign), ((2, 0, 1), 1.0)):
        c[i, j, k] = s
        c[j, i, k] = -s
    return LieAlgebraSpec(name, c, ("p3", "p4", "p5"))


def _so4_uv() -> LieAlgebraSpec:
    c = np.zeros((6, 6, 6))
    c[:3, :3, :3] = EPS
    c[3:, 3:, 3:] = EPS
    return LieAlgebraSpec("so4_uv", c, ("u1", "u2", "u3", "v1", "v2", "v3"))


SO4 = _so4_like(+1.0, "so4")
SO13 = _so4_like(-1.0, "so13")
SO4_UV = _so4_uv()
SO3 = _so3_like(+1.0, "so3")
SO12 = _so3_like(-1.0, "so12")
ALGEBRAS = {a.name: a for a in (SO4, SO13, SO4_UV, SO3, SO12)}


# --------------------------------------------------------------------------
# polynomials

@dataclass(frozen=True)
class PolyFunction:
    """Real polynomial in ``nvars`` variables, stored as sorted ``(exponents, coeff)`` terms."""
    nvars: int
    terms: tuple[tuple[Monomial, float], ...] = ()

    @classmethod
    def from_dict(cls, nvars: int, d: Mapping[Monomial, float]) -> "PolyFunction":
        merged: dict[Monomial, float] = {}
        for mono, coef in d.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars or min(mono, default=0) < 0:
                raise ValueError(f"bad exponent tuple {mono} for {nvars} variables")
            merged[mono] = merged.get(mono, 0.0) + float(coef)
        return cls(nvars, tuple(sorted((m, c) for m, c in merged.items() if c != 0.0)))

    @classmethod
    def constant(cls, value: float, nvars: int) -> "PolyFunction":
        return cls.from_dict(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "PolyFunction":
        e = [0] * nvars
        e[i] = 1
        return cls.from_dict(nvars, {tuple(e): 1.0})

    def as_dict(self) -> dict[Monomial, float]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m, _ in self.terms), default=0)

    def _check(self, other: "PolyFunction"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _lift(self, other) -> "PolyFunction":
        if isinstance(other, PolyFunction):
            self._check(other)
            return other
        return PolyFunction.constant(float(other), self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        d = self.as_dict()
        for m, c in other.terms:
            d[m] = d.get(m, 0.0) + c
        return PolyFunction.from_dict(self.nvars, d)

    __radd__ = __add__

    def __neg__(self):
        return PolyFunction(self.nvars, tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        d: dict[Monomial, float] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                d[m] = d.get(m, 0.0) + c1 * c2
        return PolyFunction.from_dict(self.nvars, d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = PolyFunction.constant(1.0, self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, i: int) -> "PolyFunction":
        d = {}
        for m, c in self.terms:
            if m[i]:
                e = list(m)
                e[i] -= 1
                d[tuple(e)] = c * m[i]
        return PolyFunction.from_dict(self.nvars, d)

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.nvars:
            raise ValueError(f"point has {x.shape[-1]} coordinates, polynomial has {self.nvars} variables")
        out = np.zeros(x.shape[:-1])
        for m, c in self.terms:
            out = out + c * np.prod(x ** np.array(m), axis=-1)
        return out if out.ndim else float(out)

    def max_coeff(self) -> float:
        return max((abs(c) for _, c in self.terms), default=0.0)

    def substitute(self, images: list["PolyFunction"]) -> "PolyFunction":
        """Compose with a polynomial map: variable ``i`` is replaced by ``images[i]``."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        n = images[0].nvars
        out = PolyFunction.constant(0.0, n)
        for m, c in self.terms:
            t = PolyFunction.constant(c, n)
            for img, e in zip(images, m):
                t = t * img ** e
            out = out + t
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            mono = "*".join(f"x{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
            parts.append(f"{c:g}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def lie_poisson_bracket(f: PolyFunction, g: PolyFunction, alg: LieAlgebraSpec) -> PolyFunction:
    """Exact Lie–Poisson bracket ``sum c^k_ij x_k d_i f d_j g``."""
    if f.nvars != alg.dim or g.nvars != alg.dim:
        raise ValueError(f"polynomials in {f.nvars}/{g.nvars} variables do not match "
                         f"{alg.name} of dimension {alg.dim}")
    df = [f.diff(i) for i in range(alg.dim)]
    dg = [g.diff(j) for j in range(alg.dim)]
    out = PolyFunction.constant(0.0, alg.dim)
    c = alg.structure_constants
    for i, j in itertools.product(range(alg.dim), repeat=2):
        if df[i].is_zero or dg[j].is_zero:
            continue
        lin = {}
        for k in np.flatnonzero(c[i, j]):
            e = [0] * alg.dim
            e[k] = 1
            lin[tuple(e)] = c[i, j, k]
        if lin:
            out = out + PolyFunction.from_dict(alg.dim, lin) * df[i] * dg[j]
    return out


def numeric_bracket(f: Callable, g: Callable, alg: LieAlgebraSpec, x, h: float = 1e-5) -> float:
    """Lie–Poisson bracket of two callables at ``x`` by central differences."""
    x = np.asarray(x, dtype=float)

    def grad(fn):
        out = np.empty(alg.dim)
        for i in range(alg.dim):
            e = np.zeros(alg.dim)
            e[i] = h
            out[i] = (fn(x + e) - fn(x - e)) / (2 * h)
        return out

    return float(grad(f) @ alg.poisson_tensor(x) @ grad(g))


# --------------------------------------------------------------------------
# invariant tables

@dataclass
class RelationRecord:
    relation: str
    residual: float
    tol: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)

    def to_dict(self) -> dict:
        return {"relation": self.relation, "residual": self.residual, "pass": self.passed}


@dataclass
class TableReport:
    algebra: str
    records: list[RelationRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.records), default=0.0)

    def to_dicts(self) -> list[dict]:
        return [dict(algebra=self.algebra, **r.to_dict()) for r in self.records]


def invariant_polynomials(alg: LieAlgebraSpec) -> tuple[PolyFunction, ...]:
    """``P0 = p4, P1 = p5^2 + p6^2, P2 = p2^2 + p3^2, P3 = -p3 p5 + p2 p6``."""
    if alg.dim != 6:
        raise ValueError("invariant polynomials are defined on six-dimensional duals")
    p = alg.vars()
    return (p[3], p[4] ** 2 + p[5] ** 2, p[1] ** 2 + p[2] ** 2, -p[2] * p[4] + p[1] * p[5])


def invariant_table(which: str) -> list[tuple[int, int, Callable]]:
    """Right-hand sides of the brackets ``{P_i, P_j}`` as functions of ``(P0, .., P3)``."""
    if which == "spherical":
        return [
            (0, 1, lambda P: -2 * P[3]),
            (0, 2, lambda P: 2 * P[3]),
            (0, 3, lambda P: P[1] - P[2]),
            (1, 2, lambda P: -4 * P[0] * P[3]),
            (1, 3, lambda P: -2 * P[0] * P[1]),
            (2, 3, lambda P: 2 * P[0] * P[2]),
        ]
    if which == "hyperbolic":
        return [
            (0, 1, lambda P: 2 * P[3]),
            (0, 2, lambda P: 2 * P[3]),
            (0, 3, lambda P: P[1] + P[2]),
            (1, 2, lambda P: -4 * P[0] * P[3]),
            (1, 3, lambda P: -2 * P[0] * P[1]),
            (2, 3, lambda P: 2 * P[0] * P[2]),
        ]
    raise ValueError(f"which must be 'spherical' or 'hyperbolic', got {which!r}")


def restrict_to_slice(f: PolyFunction, var: int = 0) -> PolyFunction:
    """Restriction of ``f`` to the hyperplane ``x_var = 0``."""
    return PolyFunction.from_dict(f.nvars, {m: c for m, c in f.terms if m[var] == 0})


def verify_invariant_table(alg: LieAlgebraSpec, which: str) -> TableReport:
    """Compute all six ``{P_i, P_j}`` and subtract the tabulated right-hand sides.

    The P's are invariants of the stabilizer generated by ``p1``, and the
    table describes brackets on the reduced space ``p1 = 0``.  Each relation
    is therefore checked on that slice: the residual recorded is the largest
    coefficient of the difference after setting ``p1 = 0``.  Off the slice
    the differences are nonzero multiples of ``p1``.
    """
    P = invariant_polynomials(alg)
    rep = TableReport(f"{alg.name}/{which}")
    for i, j, rhs in invariant_table(which):
        diff = lie_poisson_bracket(P[i], P[j], alg) - rhs(P)
        rep.records.append(RelationRecord(f"{{P{i},P{j}}}", restrict_to_slice(diff).max_coeff()))
    return rep


def casimir_check(alg: LieAlgebraSpec, c: PolyFunction, tol: float = 1e-13) -> TableReport:
    """Bracket ``c`` with every coordinate function; all results must vanish."""
    rep = TableReport(alg.name)
    for name, x in zip(alg.coordinate_names, alg.vars()):
        rep.records.append(RelationRecord(f"{{C,{name}}}", lie_poisson_bracket(c, x, alg).max_coeff(), tol))
    return rep


def casimirs(alg: LieAlgebraSpec) -> dict[str, PolyFunction]:
    """Known quadratic Casimirs of the shipped algebras."""
    x = alg.vars()
    sq = lambda vs: sum((v ** 2 for v in vs), PolyFunction.constant(0.0, alg.dim))
    if alg is SO13:
        return {"I1": sq(x[:3]) - sq(x[3:]),
                "I2": x[0] * x[3] + x[1] * x[4] + x[2] * x[5]}
    if alg is SO4:
        return {"|u|^2": 0.25 * sq([a + b for a, b in zip(x[:3], x[3:])]),
                "|v|^2": 0.25 * sq([a - b for a, b in zip(x[:3], x[3:])])}
    if alg is SO4_UV:
        return {"|u|^2": sq(x[:3]), "|v|^2": sq(x[3:])}
    if alg is SO3:
        return {"p3^2+p4^2+p5^2": sq(x)}
    if alg is SO12:
        return {"p3^2-p4^2-p5^2": x[0] ** 2 - x[1] ** 2 - x[2] ** 2}
    raise ValueError(f"no Casimirs registered for {alg.name}")


# --------------------------------------------------------------------------
# orbit charts

@dataclass(frozen=True)
class DualPoint:
    coords: np.ndarray
    algebra: str = "so4"

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_uv(cls, u, v) -> "DualPoint":
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return cls(np.concatenate([u + v, u - v]), "so4")

    @property
    def u(self) -> np.ndarray:
        return (self.coords[:3] + self.coords[3:]) / 2

    @property
    def v(self) -> np.ndarray:
        return (self.coords[:3] - self.coords[3:]) / 2


def _s3_uv(mu, nu, u, psi, chi):
    su = np.sqrt(mu * mu - u * u)
    sv = np.sqrt(nu * nu - u * u)
    uu = np.array([u, su * np.sin(psi), su * np.cos(psi)])
    vv = np.array([-u, sv * np.sin(chi), sv * np.cos(chi)])
    return uu, vv


def orbit_chart_s3(mu: float, nu: float, u: float, psi: float, chi: float) -> DualPoint:
    """Point of the so*(4) orbit ``|u| = mu, |v| = nu`` with ``p1 = 0``.

    ``u`` is the common first component (``u1 = -v1 = u``); ``psi`` and ``chi``
    are the rotation angles of ``u`` and ``v`` about the first axis.
    """
    if mu < 0 or nu < 0:
        raise ValueError("mu and nu must be nonnegative")
    if mu == nu:
        raise ValueError("mu == nu: the orbit does not meet p1 = 0 transversally; "
                         "use the two-sphere reduction instead")
    if abs(u) > min(mu, nu):
        raise ValueError(f"|u| = {abs(u)} exceeds min(mu, nu) = {min(mu, nu)}")
    return DualPoint.from_uv(*_s3_uv(mu, nu, u, psi, chi))


def ad_star_k(point: DualPoint, xi: float) -> DualPoint:
    """Coadjoint action of the stabilizer: rotate both ``u`` and ``v`` by ``xi`` about axis 1."""
    c, s = math.cos(xi), math.sin(xi)
    rot = np.array([[1, 0, 0], [0, c, s], [0, -s, c]])
    return DualPoint.from_uv(rot @ point.u, rot @ point.v)


def kirillov_form(u, v, X, Y, mu: float, nu: float) -> float:
    """Orbit symplectic form on tangent vectors ``X = (du, dv)``, ``Y = (du', dv')``."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    return (np.dot(u, np.cross(X[:3], Y[:3])) / mu ** 2
            + np.dot(v, np.cross(X[3:], Y[3:])) / nu ** 2)


def chart_tangents_s3(mu, nu, u, psi, chi) -> np.ndarray:
    """Coordinate tangent vectors ``d/du, d/dpsi, d/dchi`` of the S^3 chart in (u, v) space.

    Complex-step differentiation, exact to rounding.
    """
    h = 1e-30
    base = np.array([u, psi, chi], dtype=complex)
    out = np.empty((3, 6))
    for i in range(3):
        z = base.copy()
        z[i] += 1j * h
        uu, vv = _s3_uv(mu, nu, *z)
        out[i] = np.concatenate([uu, vv]).imag / h
    return out


def symplectic_pullback_residual(mu, nu, u, psi, chi) -> float:
    """Max deviation of the pulled-back Kirillov form from ``du ^ d(psi - chi)``."""
    T = chart_tangents_s3(mu, nu, u, psi, chi)
    uu, vv = _s3_uv(mu, nu, u, psi, chi)
    target = {(0, 1): 1.0, (0, 2): -1.0, (1, 2): 0.0}
    return max(abs(kirillov_form(uu, vv, T[i], T[j], mu, nu) - t) for (i, j), t in target.items())


def h3_uv(mu: float, nu: float, p4: float) -> tuple[float, float]:
    """Positive branch of ``u^2 - v^2 = mu + p4^2``, ``u v = nu``."""
    a = mu + p4 * p4
    u = math.sqrt((a + math.sqrt(a * a + 4 * nu * nu)) / 2)
    return u, nu / u


def orbit_chart_h3(mu: float, nu: float, p4: float, psi: float, chi: float) -> DualPoint:
    """Point of the so*(1,3) orbit ``I1 = mu, I2 = nu`` with ``p1 = 0``."""
    if nu == 0:
        raise ValueError("nu = 0 lies on a different stratum; this chart needs nu != 0")
    u, v = h3_uv(mu, nu, p4)
    ch, sh = math.cosh(psi), math.sinh(psi)
    c, s = math.cos(chi), math.sin(chi)
    p2 = u * ch * c + v * sh * s
    p3 = v * sh * c - u * ch * s
    p5 = v * ch * c - u * sh * s
    p6 = -u * sh * c - v * ch * s
    return DualPoint(np.array([0.0, p2, p3, p4, p5, p6]), "so13")


def h3_angles(p) -> tuple[float, float]:
    """Recover ``(psi, chi)`` from a point produced by :func:`orbit_chart_h3`.

    ``(p2 - p6, p5 + p3)`` and ``(p2 + p6, p5 - p3)`` are ``(u, v)`` rotated by
    ``-chi`` and ``+chi`` and scaled by ``e^psi`` and ``e^-psi``.
    """
    p = np.asarray(p, dtype=float)
    p2, p3, p4, p5, p6 = p[1], p[2], p[3], p[4], p[5]
    psi = 0.25 * math.log(((p2 - p6) ** 2 + (p5 + p3) ** 2) / ((p2 + p6) ** 2 + (p5 - p3) ** 2))
    mu = p[0] ** 2 + p2 ** 2 + p3 ** 2 - p4 ** 2 - p5 ** 2 - p6 ** 2
    nu = p[0] * p4 + p2 * p5 + p3 * p6
    u, v = h3_uv(mu, nu, p4)
    chi = math.atan2(p5 - p3, p2 + p6) - math.atan2(v, u)
    return psi, math.remainder(chi, 2 * math.pi)
