"""Coefficient functions A, B, C of the reduced kinetic energy.

``coef_sphere`` and ``coef_hyper`` are compiled and also return r-derivatives,
which the integrator needs.  ``coeff_s_pair`` evaluates the independent
two-radius form used as a cross-check.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def coef_sphere(r, m1, m2, R):
    """``(A, B, C, dA/dr, dB/dr, dC/dr)`` on the sphere, ``r > 0``."""
    M = m1 + m2
    m = m1 * m2 / M
    kap = 2.0 * (m1 - m2) / M
    kz = (m1 - m2) / (4.0 * m1 * m2)
    kw = (m2 - m1) / (m1 * m2)
    r2 = r * r
    ir = 1.0 / r
    zeta = kap * math.atan(r)
    dzeta = kap / (1.0 + r2)
    cz = math.cos(zeta)
    sz = math.sin(zeta)

    X = (ir + r) ** 2 / (8.0 * m)
    dX = (1.0 + r2) * (r2 - 1.0) / (4.0 * m * r2 * r)
    Y = (ir * ir - r2) / (8.0 * m)
    dY = -(1.0 + r2 * r2) / (4.0 * m * r2 * r)
    Z = kz * (ir + r)
    dZ = kz * (1.0 - ir * ir)
    W = kw * (ir + r)
    dW = kw * (1.0 - ir * ir)
    V = (ir * ir - r2) / (2.0 * m)
    dV = -(ir * ir * ir + r) / m

    iR2 = 1.0 / (R * R)
    A = iR2 * (X + Y * cz + Z * sz)
    C = iR2 * (X - Y * cz - Z * sz)
    B = -0.25 * iR2 * (W * cz + V * sz)
    dYc = dY * cz - Y * dzeta * sz
    dZs = dZ * sz + Z * dzeta * cz
    dA = iR2 * (dX + dYc + dZs)
    dC = iR2 * (dX - dYc - dZs)
    dB = -0.25 * iR2 * (dW * cz - W * dzeta * sz + dV * sz + V * dzeta * cz)
    return A, B, C, dA, dB, dC


@njit(cache=True)
def coef_hyper(r, m1, m2, R):
    """``(A, B, C, dA/dr, dB/dr, dC/dr)`` on the hyperbolic space, ``0 < r < 1``."""
    M = m1 + m2
    m = m1 * m2 / M
    kap = 2.0 * (m1 - m2) / M
    kz = (m1 - m2) / (4.0 * m1 * m2)
    kw = (m2 - m1) / (m1 * m2)
    r2 = r * r
    ir = 1.0 / r
    zeta = kap * math.atanh(r)
    dzeta = kap / (1.0 - r2)
    cz = math.cosh(zeta)
    sz = math.sinh(zeta)

    X = (ir - r) ** 2 / (8.0 * m)
    dX = -(1.0 - r2) * (1.0 + r2) / (4.0 * m * r2 * r)
    Y = (ir * ir - r2) / (8.0 * m)
    dY = -(1.0 + r2 * r2) / (4.0 * m * r2 * r)
    Z = kz * (ir - r)
    dZ = kz * (-ir * ir - 1.0)
    W = kw * (ir - r)
    dW = kw * (-ir * ir - 1.0)
    V = (ir * ir - r2) / (2.0 * m)
    dV = -(ir * ir * ir + r) / m

    iR2 = 1.0 / (R * R)
    core = Y * cz - Z * sz
    dcore = dY * cz + Y * dzeta * sz - dZ * sz - Z * dzeta * cz
    A = iR2 * (X + core)
    C = -iR2 * (-X + core)
    B = -0.25 * iR2 * (W * cz + V * sz)
    dA = iR2 * (dX + dcore)
    dC = -iR2 * (-dX + dcore)
    dB = -0.25 * iR2 * (dW * cz + W * dzeta * sz + dV * sz + V * dzeta * cz)
    return A, B, C, dA, dB, dC


def _check_masses(m1, m2, R):
    if not (m1 > 0 and m2 > 0 and R > 0):
        raise ValueError(f"masses and radius must be positive, got m1={m1}, m2={m2}, R={R}")


def coeff_s(r: float, m1: float, m2: float, R: float) -> tuple[float, float, float]:
    """``(A_s, B_s, C_s)`` at ``r > 0``."""
    _check_masses(m1, m2, R)
    if not r > 0:
        raise ValueError(f"sphere coefficients need r > 0, got {r}")
    return coef_sphere(float(r), float(m1), float(m2), float(R))[:3]


def coeff_h(r: float, m1: float, m2: float, R: float) -> tuple[float, float, float]:
    """``(A_h, B_h, C_h)`` at ``0 < r < 1``."""
    _check_masses(m1, m2, R)
    if not 0 < r < 1:
        raise ValueError(f"hyperbolic coefficients need 0 < r < 1, got {r}")
    return coef_hyper(float(r), float(m1), float(m2), float(R))[:3]


def pair_radii(r, m1, m2):
    """Positions ``(r1, r2)`` of the two bodies on a meridian for separation coordinate ``r``."""
    M = m1 + m2
    a = np.arctan(r)
    return np.tan(m2 / M * a), -np.tan(m1 / M * a)


def coeff_s_pair(r, m1, m2, R):
    """``(A_s, B_s, C_s)`` from the two-radius form."""
    r1, r2 = pair_radii(r, m1, m2)
    p1, p2 = 1 + r1 ** 2, 1 + r2 ** 2
    den = R ** 2 * m1 * m2 * (r1 - r2) ** 2 * (1 + r1 * r2) ** 2
    A = (m1 * (1 - r1 ** 2) ** 2 * p2 ** 2 + m2 * p1 ** 2 * (1 - r2 ** 2) ** 2) / (4 * den)
    B = (m1 * r1 * (1 - r1 ** 2) * p2 ** 2 + m2 * r2 * (1 - r2 ** 2) * p1 ** 2) / (2 * den)
    C = (m1 * r1 ** 2 * p2 ** 2 + m2 * r2 ** 2 * p1 ** 2) / den
    return A, B, C


def coeff_s_complex(r, m1, m2, R):
    """The sphere r-form evaluated in complex arithmetic (for formal-substitution checks)."""
    r = np.asarray(r, dtype=complex)
    R = complex(R)
    M = m1 + m2
    m = m1 * m2 / M
    zeta = 2 * (m1 - m2) / M * np.arctan(r)
    X = (1 + r ** 2) ** 2 / (8 * m * r ** 2)
    Y = (1 - r ** 4) / (8 * m * r ** 2)
    Z = (1 + r ** 2) * (m1 - m2) / (4 * m1 * m2 * r)
    A = (X + Y * np.cos(zeta) + Z * np.sin(zeta)) / R ** 2
    C = (X - Y * np.cos(zeta) - Z * np.sin(zeta)) / R ** 2
    B = -((m2 - m1) / (m1 * m2 * r) * (1 + r ** 2) * np.cos(zeta)
          + (1 - r ** 4) / (2 * m * r ** 2) * np.sin(zeta)) / (4 * R ** 2)
    return A, B, C
