"""Compiled reduced Hamiltonians, their gradients and the implicit-midpoint loop.

State layouts
-------------
canonical variants: ``x = (r, p_r, phi, p_phi)``
Lie–Poisson variants: ``x = (r, p_r, p3, p4, p5)``

``prm`` holds ``(m1, m2, R, mu, nu, L, pot_code, pot_p0, pot_p1)``; see
``PRM_*`` below.  ``chart = 1`` means the sphere state stores
``(s, p_s) = (1/r, -r^2 p_r)`` instead of ``(r, p_r)``.  ``chart = 2`` is the
arclength chart of the geodesic variants: ``(sigma, p_sigma)`` with
``sigma = 2 arctan r`` (sphere) or ``2 artanh r`` (hyperbolic), in which the
kinetic energy is ``p_sigma^2 / (2 m R^2)``.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ..potentials import potential_eval
from .coefficients import coef_hyper, coef_sphere

SPHERE_GENERIC, SPHERE_S2, SPHERE_INTEGRABLE, SPHERE_GEODESIC = 0, 1, 2, 3
HYPER_GENERIC, HYPER_H2, HYPER_GEODESIC = 4, 5, 6

PRM_M1, PRM_M2, PRM_R, PRM_MU, PRM_NU, PRM_L, PRM_POT, PRM_P0, PRM_P1 = range(9)
NPRM = 9

EV_NONE, EV_COLLISION, EV_BOUNDARY, EV_CHART_SINGULAR, EV_NEWTON, EV_NAN, EV_ANTIPODAL = range(7)
EV_CHART_OUT, EV_CHART_IN = 7, 8
CHART_R, CHART_INV, CHART_ARC = 0, 1, 2

COLLISION_R = 1e-8
SWITCH_OUT_R = 1e3
HYPER_EDGE = 1.0 - 1e-12
NEWTON_TOL = 1e-13
NEWTON_MAXIT = 50


@njit(cache=True)
def state_dim(variant):
    if variant == SPHERE_S2 or variant == HYPER_H2:
        return 5
    return 4


@njit(cache=True)
def is_hyper(variant):
    return variant >= HYPER_GENERIC


@njit(cache=True)
def energy_grad_rp(variant, x, r, pr, prm, tx, tc, g):
    """Energy at ``x`` with radial pair ``(r, pr)``; ``g`` gets the gradient in (r, pr, ...)."""
    m1 = prm[PRM_M1]
    m2 = prm[PRM_M2]
    R = prm[PRM_R]
    m = m1 * m2 / (m1 + m2)
    a = 2.0 * R * R * (m1 + m2)
    U, dU = potential_eval(int(prm[PRM_POT]), prm[PRM_P0:PRM_P1 + 1], tx, tc, r)
    r2 = r * r
    hyper = is_hyper(variant)
    if hyper:
        w = 1.0 - r2
        K = w * w / (8.0 * m * R * R)
        dK = -r * w / (2.0 * m * R * R)
    else:
        w = 1.0 + r2
        K = w * w / (8.0 * m * R * R)
        dK = r * w / (2.0 * m * R * R)

    for i in range(g.shape[0]):
        g[i] = 0.0

    if variant == SPHERE_GEODESIC or variant == HYPER_GEODESIC:
        g[0] = dK * pr * pr + dU
        g[1] = 2.0 * K * pr
        return K * pr * pr + U

    if variant == SPHERE_INTEGRABLE:
        L2 = prm[PRM_L] * prm[PRM_L]
        q = pr * pr + L2 / r2
        g[0] = dK * q - 2.0 * K * L2 / (r2 * r) + dU
        g[1] = 2.0 * K * pr
        return K * q + U

    if hyper:
        A, B, C, dA, dB, dC = coef_hyper(r, m1, m2, R)
    else:
        A, B, C, dA, dB, dC = coef_sphere(r, m1, m2, R)

    if variant == SPHERE_S2 or variant == HYPER_H2:
        p3 = x[2]
        p4 = x[3]
        p5 = x[4]
        sb = -1.0 if variant == SPHERE_S2 else 1.0
        H = K * pr * pr + p4 * p4 / a + 0.5 * A * p3 * p3 + 0.5 * C * p5 * p5 + sb * B * p3 * p5 + U
        g[0] = dK * pr * pr + 0.5 * dA * p3 * p3 + 0.5 * dC * p5 * p5 + sb * dB * p3 * p5 + dU
        g[1] = 2.0 * K * pr
        g[2] = A * p3 + sb * B * p5
        g[3] = 2.0 * p4 / a
        g[4] = C * p5 + sb * B * p3
        return H

    phi = x[2]
    p = x[3]
    mu = prm[PRM_MU]
    nu = prm[PRM_NU]
    if variant == SPHERE_GENERIC:
        s = math.sqrt(max(mu * mu - p * p, 0.0))
        t = math.sqrt(max(nu * nu - p * p, 0.0))
        st = s * t
        dst = -p * (s * s + t * t) / st if st > 0.0 else 0.0
        E = mu * mu + nu * nu - 2.0 * p * p
        c = math.cos(phi)
        sn = math.sin(phi)
        Pa = E + 2.0 * st * c
        Pc = E - 2.0 * st * c
        H = K * pr * pr + 4.0 * p * p / a + 0.5 * A * Pa + 0.5 * C * Pc - 2.0 * B * st * sn + U
        g[0] = dK * pr * pr + 0.5 * dA * Pa + 0.5 * dC * Pc - 2.0 * dB * st * sn + dU
        g[1] = 2.0 * K * pr
        g[2] = -A * st * sn + C * st * sn - 2.0 * B * st * c
        g[3] = (8.0 * p / a + 0.5 * A * (-4.0 * p + 2.0 * dst * c)
                + 0.5 * C * (-4.0 * p - 2.0 * dst * c) - 2.0 * B * dst * sn)
        return H

    # HYPER_GENERIC
    q = 0.25 * mu + p * p
    S = math.sqrt(q * q + 0.25 * nu * nu)
    dS = 2.0 * p * q / S
    E = 0.5 * mu + 2.0 * p * p
    ch = math.cosh(phi)
    sh = math.sinh(phi)
    Pa = E + 2.0 * S * ch
    Pc = E - 2.0 * S * ch
    H = K * pr * pr + 4.0 * p * p / a + 0.5 * A * Pa - 0.5 * C * Pc - 2.0 * B * S * sh + U
    g[0] = dK * pr * pr + 0.5 * dA * Pa - 0.5 * dC * Pc - 2.0 * dB * S * sh + dU
    g[1] = 2.0 * K * pr
    g[2] = A * S * sh + C * S * sh - 2.0 * B * S * ch
    g[3] = (8.0 * p / a + 0.5 * A * (4.0 * p + 2.0 * dS * ch)
            - 0.5 * C * (4.0 * p - 2.0 * dS * ch) - 2.0 * B * dS * sh)
    return H


@njit(cache=True)
def arc_to_rp(variant, s, ps):
    if is_hyper(variant):
        r = math.tanh(0.5 * s)
        return r, 2.0 * ps / (1.0 - r * r)
    r = math.tan(0.5 * s)
    return r, 2.0 * ps / (1.0 + r * r)


@njit(cache=True)
def rp_to_arc(variant, r, pr):
    if is_hyper(variant):
        return 2.0 * math.atanh(r), 0.5 * pr * (1.0 - r * r)
    return 2.0 * math.atan(r), 0.5 * pr * (1.0 + r * r)


@njit(cache=True)
def to_rp(variant, x, chart, out):
    """Copy ``x`` into ``out`` with the radial pair expressed as ``(r, p_r)``."""
    for i in range(x.shape[0]):
        out[i] = x[i]
    if chart == CHART_INV:
        out[0] = 1.0 / x[0]
        out[1] = -x[0] * x[0] * x[1]
    elif chart == CHART_ARC:
        out[0], out[1] = arc_to_rp(variant, x[0], x[1])


@njit(cache=True)
def energy_grad(variant, x, chart, prm, tx, tc, g):
    """Energy and gradient in the stored coordinates (handles the inverted and arclength charts)."""
    if chart == CHART_R:
        return energy_grad_rp(variant, x, x[0], x[1], prm, tx, tc, g)
    if chart == CHART_ARC:
        r, _ = arc_to_rp(variant, x[0], x[1])
        w = 1.0 - r * r if is_hyper(variant) else 1.0 + r * r
        mR2 = prm[PRM_M1] * prm[PRM_M2] / (prm[PRM_M1] + prm[PRM_M2]) * prm[PRM_R] * prm[PRM_R]
        U, dU = potential_eval(int(prm[PRM_POT]), prm[PRM_P0:PRM_P1 + 1], tx, tc, r)
        for i in range(g.shape[0]):
            g[i] = 0.0
        g[0] = 0.5 * w * dU
        g[1] = x[1] / mR2
        return 0.5 * x[1] * x[1] / mR2 + U
    s = x[0]
    ps = x[1]
    r = 1.0 / s
    pr = -s * s * ps
    H = energy_grad_rp(variant, x, r, pr, prm, tx, tc, g)
    gr = g[0]
    gp = g[1]
    g[0] = -gr / (s * s) - 2.0 * s * ps * gp
    g[1] = -s * s * gp
    return H


@njit(cache=True)
def vector_field(variant, x, chart, prm, tx, tc, f, g):
    H = energy_grad(variant, x, chart, prm, tx, tc, g)
    f[0] = g[1]
    f[1] = -g[0]
    if variant == SPHERE_S2 or variant == HYPER_H2:
        sg = 1.0 if variant == SPHERE_S2 else -1.0
        p3 = x[2]
        p4 = x[3]
        p5 = x[4]
        # {p3,p4} = p5, {p4,p5} = sg p3, {p5,p3} = p4
        f[2] = p5 * g[3] - p4 * g[4]
        f[3] = -p5 * g[2] + sg * p3 * g[4]
        f[4] = p4 * g[2] - sg * p3 * g[3]
    elif variant == SPHERE_GENERIC or variant == HYPER_GENERIC:
        f[2] = g[3]
        f[3] = -g[2]
    else:
        f[2] = 0.0
        f[3] = 0.0
    return H


@njit(cache=True)
def _solve(J, b):
    return np.linalg.solve(J, b)


@njit(cache=True)
def midpoint_step(variant, x0, chart, prm, tx, tc, dt, x1):
    """One implicit-midpoint step from ``x0`` into ``x1``.  Returns Newton iterations, or -1."""
    n = x0.shape[0]
    f = np.empty(n)
    g = np.empty(n)
    fp = np.empty(n)
    fm = np.empty(n)
    xm = np.empty(n)
    J = np.empty((n, n))
    # Jacobian of the vector field at x0 by central differences
    for j in range(n):
        h = 1e-7 * (1.0 + abs(x0[j]))
        for i in range(n):
            xm[i] = x0[i]
        xm[j] = x0[j] + h
        vector_field(variant, xm, chart, prm, tx, tc, fp, g)
        xm[j] = x0[j] - h
        vector_field(variant, xm, chart, prm, tx, tc, fm, g)
        for i in range(n):
            J[i, j] = -0.5 * dt * (fp[i] - fm[i]) / (2.0 * h)
    for i in range(n):
        J[i, i] += 1.0
    for i in range(n):
        for j in range(n):
            if not np.isfinite(J[i, j]):
                return -1

    vector_field(variant, x0, chart, prm, tx, tc, f, g)
    for i in range(n):
        x1[i] = x0[i] + dt * f[i]
    res = np.empty(n)
    for it in range(NEWTON_MAXIT):
        for i in range(n):
            xm[i] = 0.5 * (x0[i] + x1[i])
        vector_field(variant, xm, chart, prm, tx, tc, f, g)
        rmax = 0.0
        xmax = 0.0
        for i in range(n):
            res[i] = x1[i] - x0[i] - dt * f[i]
            rmax = max(rmax, abs(res[i]))
            xmax = max(xmax, abs(x1[i]))
        if not (rmax == rmax) or rmax == np.inf:
            return -1
        if rmax <= NEWTON_TOL * (1.0 + xmax):
            return it
        d = _solve(J, res)
        for i in range(n):
            x1[i] -= d[i]
    return -1


@njit(cache=True)
def casimir(variant, x):
    if variant == SPHERE_S2:
        return x[2] * x[2] + x[3] * x[3] + x[4] * x[4]
    if variant == HYPER_H2:
        return x[2] * x[2] - x[3] * x[3] - x[4] * x[4]
    return 0.0


@njit(cache=True)
def _event_after(variant, x, chart, prm):
    """Event triggered by the state ``x`` (stored coordinates)."""
    for i in range(x.shape[0]):
        if not (x[i] == x[i]):
            return EV_NAN
    if chart == CHART_INV:
        if x[0] <= 0.0:
            return EV_ANTIPODAL
        return EV_NONE
    r = x[0]
    if chart == CHART_ARC:
        if not is_hyper(variant) and r >= math.pi:
            return EV_ANTIPODAL
        r, _ = arc_to_rp(variant, x[0], x[1])
    if r < COLLISION_R:
        return EV_COLLISION
    if is_hyper(variant) and r >= HYPER_EDGE:
        return EV_BOUNDARY
    if variant == SPHERE_GENERIC:
        lim = min(prm[PRM_MU], prm[PRM_NU])
        if abs(x[3]) >= lim:
            return EV_CHART_SINGULAR
    return EV_NONE


@njit(cache=True)
def classify_step(variant, x_prev, x_new, chart, prm):
    """Event for a step ``x_prev -> x_new``.

    In the arclength chart an infall that overshoots ``sigma = 0`` can land
    near ``sigma = pi`` (the sphere Coulomb term is pi-periodic there); a
    jump from the near half to past ``pi`` is reported as a collision.
    """
    ev = _event_after(variant, x_new, chart, prm)
    if ev == EV_ANTIPODAL and chart == CHART_ARC and x_prev[0] < 0.5 * math.pi:
        return EV_COLLISION
    return ev


@njit(cache=True)
def run(variant, x0, chart0, prm, tx, tc, dt, nsteps, stride, allow_switch):
    """Fixed-step loop.

    Returns ``(samples, sample_steps, sample_charts, nrec, max_dH, max_dC,
    halt_event, halt_step, switch_steps, switch_kinds, nswitch, final_x, final_chart)``.
    Recorded samples are always in ``(r, p_r, ...)`` coordinates.
    """
    n = x0.shape[0]
    nmax = nsteps // stride + 2
    samples = np.empty((nmax, n))
    steps = np.empty(nmax, dtype=np.int64)
    charts = np.empty(nmax, dtype=np.int64)
    sw_steps = np.empty(64, dtype=np.int64)
    sw_kinds = np.empty(64, dtype=np.int64)
    nsw = 0
    g = np.empty(n)
    x = x0.copy()
    x1 = np.empty(n)
    chart = chart0
    H0 = energy_grad(variant, x, chart, prm, tx, tc, g)
    C0 = casimir(variant, x)
    max_dH = 0.0
    max_dC = 0.0
    nrec = 0

    to_rp(variant, x, chart, samples[0])
    steps[0] = 0
    charts[0] = chart
    nrec = 1
    halt = EV_NONE
    halt_step = -1
    for k in range(1, nsteps + 1):
        it = midpoint_step(variant, x, chart, prm, tx, tc, dt, x1)
        if it < 0:
            ev = classify_step(variant, x, x1, chart, prm)
            if is_hyper(variant) and x[0] > 1.0 - 1e-4:
                ev = EV_BOUNDARY
            halt = ev if ev != EV_NONE and ev != EV_NAN else EV_NEWTON
            halt_step = k
            break
        ev = classify_step(variant, x, x1, chart, prm)
        if ev != EV_NONE:
            halt = ev
            halt_step = k
            break
        for i in range(n):
            x[i] = x1[i]
        # chart switching on the sphere
        if allow_switch and chart != CHART_ARC and not is_hyper(variant):
            if chart == 0 and x[0] > SWITCH_OUT_R:
                r = x[0]
                x[1] = -r * r * x[1]
                x[0] = 1.0 / r
                chart = 1
                if nsw < 64:
                    sw_steps[nsw] = k
                    sw_kinds[nsw] = EV_CHART_OUT
                    nsw += 1
            elif chart == 1 and x[0] > 1.0:
                s = x[0]
                x[1] = -s * s * x[1]
                x[0] = 1.0 / s
                chart = 0
                if nsw < 64:
                    sw_steps[nsw] = k
                    sw_kinds[nsw] = EV_CHART_IN
                    nsw += 1
        H = energy_grad(variant, x, chart, prm, tx, tc, g)
        max_dH = max(max_dH, abs(H - H0))
        max_dC = max(max_dC, abs(casimir(variant, x) - C0))
        if k % stride == 0 or k == nsteps:
            to_rp(variant, x, chart, samples[nrec])
            steps[nrec] = k
            charts[nrec] = chart
            nrec += 1
    if halt != EV_NONE and steps[nrec - 1] != halt_step - 1:
        to_rp(variant, x, chart, samples[nrec])
        steps[nrec] = halt_step - 1
        charts[nrec] = chart
        nrec += 1
    return (samples, steps, charts, nrec, max_dH, max_dC, halt, halt_step,
            sw_steps, sw_kinds, nsw, x, chart)
