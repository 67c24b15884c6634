"""Radial period of the integrable reduced system, by quadrature and from trajectories."""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar

from .model import SystemParams, Trajectory
from .poincare import Section, poincare_section


def _radial_factor(r, params: SystemParams):
    w = 1 + r * r if params.space == "sphere" else 1 - r * r
    return w * w / (8 * params.m * params.R ** 2)


def effective_potential(r, L: float, params: SystemParams):
    """``K(r) L^2 / r^2 + U(r)`` with ``K`` the radial kinetic factor."""
    return _radial_factor(r, params) * L * L / (r * r) + params.potential(r, params.space, params.R)


def turning_points(E: float, L: float, params: SystemParams) -> tuple[float, float]:
    hi_edge = 1.0 - 1e-12 if params.space == "hyperbolic" else 1e6
    V = lambda r: effective_potential(r, L, params)
    lo, hi = 1e-9, hi_edge
    opt = minimize_scalar(lambda lr: V(math.exp(lr)), bounds=(math.log(lo), math.log(hi)), method="bounded",
                          options={"xatol": 1e-12})
    rmin = math.exp(opt.x)
    if E <= V(rmin):
        raise ValueError(f"energy {E} is not above the effective-potential minimum {V(rmin)}")
    f = lambda r: E - V(r)
    if f(lo) > 0 or f(hi) > 0:
        raise ValueError("orbit is unbounded at this energy; no radial period")
    return brentq(f, lo, rmin, xtol=1e-15, rtol=1e-15), brentq(f, rmin, hi, xtol=1e-15, rtol=1e-15)


def integrable_radial_period(E: float, L: float, params: SystemParams) -> float:
    """Radial period ``2 * integral dr / rdot`` between turning points.

    With ``r = c + h sin(theta)`` the inverse-square-root endpoint
    singularities become a smooth integrand on ``(-pi/2, pi/2)``.
    """
    a, b = turning_points(E, L, params)
    c, h = (a + b) / 2, (b - a) / 2

    def integrand(th):
        r = c + h * math.sin(th)
        gap = (r - a) * (b - r)
        if gap <= 0:
            return 0.0
        G = (E - effective_potential(r, L, params)) / gap
        # dr / (2 K p_r), dr = h cos(th) dth, sqrt(gap) = h cos(th)
        return 1.0 / (2.0 * math.sqrt(_radial_factor(r, params)) * math.sqrt(max(G, 1e-300)))

    val, _ = quad(integrand, -math.pi / 2, math.pi / 2, epsabs=0, epsrel=1e-13, limit=400)
    return 2.0 * val


def measured_period(traj: Trajectory) -> float:
    """Mean spacing of successive upward zero crossings of ``p_r`` (pericentre passages)."""
    pts = poincare_section(traj, Section("p_r", 0.0, 1, None))
    if len(pts) < 2:
        raise ValueError("trajectory contains fewer than two pericentre passages")
    t = pts[:, 0]
    return float((t[-1] - t[0]) / (len(t) - 1))


def arclength(traj: Trajectory, params: SystemParams) -> np.ndarray:
    """Geodesic distance between the bodies: ``2 R arctan r`` (sphere) or ``2 R artanh r``."""
    r = traj.x[:, 0]
    if params.space == "hyperbolic":
        return 2 * params.R * np.arctanh(r)
    return 2 * params.R * np.arctan(r)
