"""Central potentials as functions of the chart coordinate r.

On the sphere ``r = tan(theta / 2)`` with ``theta`` the angular separation;
on the hyperbolic space ``r = tanh(rho / 2)``.  The Coulomb and oscillator
analogues are::

    sphere:      U_q = gamma/(2R) (r - 1/r)       U_o = 2 w^2 R^2 r^2 / (1 - r^2)^2
    hyperbolic:  U_q = -gamma/(2R) (r + 1/r)      U_o = 2 w^2 R^2 r^2 / (1 + r^2)^2

The hyperbolic pair is the image of the spherical pair under
``r -> -i r``, ``R -> i R``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit
from scipy.interpolate import PchipInterpolator

KINDS = ("zero", "coulomb", "oscillator", "inv_square_plus_square", "tabulated")

# kernel codes
P_ZERO, P_COULOMB_S, P_OSC_S, P_COULOMB_H, P_OSC_H, P_INVSQ, P_TAB = range(7)


@dataclass(frozen=True)
class PotentialSpec:
    """``kind`` is one of :data:`KINDS`.

    Parameters by kind: ``coulomb(gamma)``, ``oscillator(omega)``,
    ``inv_square_plus_square(alpha >= 0, beta >= 0)``, ``tabulated(r_samples, u_samples)``.
    """
    kind: str = "zero"
    gamma: float = 0.0
    omega: float = 0.0
    alpha: float = 0.0
    beta: float = 0.0
    r_samples: tuple[float, ...] = field(default=())
    u_samples: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "inv_square_plus_square" and (self.alpha < 0 or self.beta < 0):
            raise ValueError("inv_square_plus_square needs alpha >= 0 and beta >= 0")
        if self.kind == "tabulated":
            x = np.asarray(self.r_samples, dtype=float)
            y = np.asarray(self.u_samples, dtype=float)
            if x.ndim != 1 or x.shape != y.shape or x.size < 2:
                raise ValueError("tabulated potential needs matching 1-D r/U samples (at least 2)")
            if np.any(np.diff(x) <= 0):
                raise ValueError("tabulated r samples must be strictly increasing")
            object.__setattr__(self, "r_samples", tuple(map(float, x)))
            object.__setattr__(self, "u_samples", tuple(map(float, y)))

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def coulomb(cls, gamma: float):
        return cls("coulomb", gamma=float(gamma))

    @classmethod
    def oscillator(cls, omega: float):
        return cls("oscillator", omega=float(omega))

    @classmethod
    def inv_square_plus_square(cls, alpha: float, beta: float):
        return cls("inv_square_plus_square", alpha=float(alpha), beta=float(beta))

    @classmethod
    def tabulated(cls, r, u):
        return cls("tabulated", r_samples=tuple(r), u_samples=tuple(u))

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.kind == "coulomb":
            d["gamma"] = self.gamma
        elif self.kind == "oscillator":
            d["omega"] = self.omega
        elif self.kind == "inv_square_plus_square":
            d.update(alpha=self.alpha, beta=self.beta)
        elif self.kind == "tabulated":
            d.update(r=list(self.r_samples), u=list(self.u_samples))
        return d

    def kernel_args(self, space: str, R: float):
        """``(code, params, breakpoints, pchip_coefficients)`` for the compiled evaluator."""
        hyper = _is_hyper(space)
        tx = np.zeros(1)
        tc = np.zeros((4, 1))
        if self.kind == "zero":
            return P_ZERO, np.zeros(2), tx, tc
        if self.kind == "coulomb":
            return (P_COULOMB_H if hyper else P_COULOMB_S), np.array([self.gamma / (2 * R), 0.0]), tx, tc
        if self.kind == "oscillator":
            return (P_OSC_H if hyper else P_OSC_S), np.array([2 * self.omega ** 2 * R ** 2, 0.0]), tx, tc
        if self.kind == "inv_square_plus_square":
            return P_INVSQ, np.array([self.alpha, self.beta]), tx, tc
        interp = PchipInterpolator(np.array(self.r_samples), np.array(self.u_samples), extrapolate=True)
        return P_TAB, np.zeros(2), np.ascontiguousarray(interp.x), np.ascontiguousarray(interp.c)

    def __call__(self, r, space: str = "sphere", R: float = 1.0):
        """Value ``U(r)``; accepts arrays."""
        return self.value_and_derivative(r, space, R)[0]

    def derivative(self, r, space: str = "sphere", R: float = 1.0):
        return self.value_and_derivative(r, space, R)[1]

    def value_and_derivative(self, r, space: str = "sphere", R: float = 1.0):
        code, pp, tx, tc = self.kernel_args(space, R)
        r = np.asarray(r, dtype=float)
        flat = r.ravel()
        u = np.empty_like(flat)
        du = np.empty_like(flat)
        for i, x in enumerate(flat):
            u[i], du[i] = potential_eval(code, pp, tx, tc, x)
        if r.ndim == 0:
            return float(u[0]), float(du[0])
        return u.reshape(r.shape), du.reshape(r.shape)


def _is_hyper(space: str) -> bool:
    if space not in ("sphere", "hyperbolic"):
        raise ValueError(f"space must be 'sphere' or 'hyperbolic', got {space!r}")
    return space == "hyperbolic"


@njit(cache=True)
def potential_eval(code, pp, tx, tc, r):
    """Return ``(U(r), U'(r))``."""
    if code == P_ZERO:
        return 0.0, 0.0
    if code == P_COULOMB_S:
        g = pp[0]
        return g * (r - 1.0 / r), g * (1.0 + 1.0 / (r * r))
    if code == P_COULOMB_H:
        g = pp[0]
        return -g * (r + 1.0 / r), -g * (1.0 - 1.0 / (r * r))
    if code == P_OSC_S:
        k = pp[0]
        d = 1.0 - r * r
        return k * r * r / (d * d), 2.0 * k * r * (1.0 + r * r) / (d * d * d)
    if code == P_OSC_H:
        k = pp[0]
        d = 1.0 + r * r
        return k * r * r / (d * d), 2.0 * k * r * (1.0 - r * r) / (d * d * d)
    if code == P_INVSQ:
        a = pp[0]
        b = pp[1]
        return a / (r * r) + b * r * r, -2.0 * a / (r * r * r) + 2.0 * b * r
    # P_TAB: piecewise cubic in local coordinate
    n = tx.shape[0] - 1
    i = np.searchsorted(tx, r) - 1
    if i < 0:
        i = 0
    if i > n - 1:
        i = n - 1
    s = r - tx[i]
    c0 = tc[0, i]
    c1 = tc[1, i]
    c2 = tc[2, i]
    c3 = tc[3, i]
    return ((c0 * s + c1) * s + c2) * s + c3, (3.0 * c0 * s + 2.0 * c1) * s + c2
