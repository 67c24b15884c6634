"""Parameters, states and the Python face of the reduced two-body dynamics."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from ..potentials import PotentialSpec
from . import kernels as K

VARIANT_NAMES = {
    K.SPHERE_GENERIC: "sphere_generic",
    K.SPHERE_S2: "sphere_equal",
    K.SPHERE_INTEGRABLE: "sphere_integrable",
    K.SPHERE_GEODESIC: "sphere_geodesic",
    K.HYPER_GENERIC: "hyperbolic_generic",
    K.HYPER_H2: "hyperbolic_plane",
    K.HYPER_GEODESIC: "hyperbolic_geodesic",
}
EVENT_NAMES = {
    K.EV_COLLISION: "collision_approach",
    K.EV_BOUNDARY: "boundary_reached",
    K.EV_CHART_SINGULAR: "chart_singularity",
    K.EV_NEWTON: "newton_failure",
    K.EV_NAN: "nan_state",
    K.EV_ANTIPODAL: "antipodal_passage",
    K.EV_CHART_OUT: "chart_switch_inverted",
    K.EV_CHART_IN: "chart_switch_direct",
}
EQUAL_TOL = 1e-9


class ChartError(ValueError):
    """State outside the domain of its chart."""


class IntegrationError(RuntimeError):
    """Newton iteration of the implicit midpoint rule failed."""


@dataclass(frozen=True)
class SystemParams:
    m1: float
    m2: float
    R: float
    space: str = "sphere"
    potential: PotentialSpec = field(default_factory=PotentialSpec)

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0 and self.R > 0):
            raise ValueError(f"m1, m2, R must be positive (got {self.m1}, {self.m2}, {self.R})")
        if self.space not in ("sphere", "hyperbolic"):
            raise ValueError(f"space must be 'sphere' or 'hyperbolic', got {self.space!r}")

    @property
    def m(self) -> float:
        """Reduced mass."""
        return self.m1 * self.m2 / (self.m1 + self.m2)

    @property
    def a(self) -> float:
        return 2.0 * self.R ** 2 * (self.m1 + self.m2)


@dataclass(frozen=True)
class ReducedState:
    """Canonical reduced state ``(r, p_r, phi, p_phi)`` on the orbit labelled by ``(mu, nu)``."""
    r: float
    p_r: float
    phi: float = 0.0
    p_phi: float = 0.0
    mu: float = 0.0
    nu: float = 0.0

    def vector(self) -> np.ndarray:
        return np.array([self.r, self.p_r, self.phi, self.p_phi], dtype=float)


@dataclass(frozen=True)
class OrbitState:
    """State ``(r, p_r, p3, p4, p5)`` for the equal-Casimir sphere case and the ``nu = 0`` hyperbolic case."""
    r: float
    p_r: float
    p3: float
    p4: float
    p5: float

    def vector(self) -> np.ndarray:
        return np.array([self.r, self.p_r, self.p3, self.p4, self.p5], dtype=float)


State = ReducedState | OrbitState


def select_variant(state: State, params: SystemParams) -> int:
    """Pick the reduced Hamiltonian matching the space and Casimir stratum."""
    sphere = params.space == "sphere"
    if isinstance(state, OrbitState):
        return K.SPHERE_S2 if sphere else K.HYPER_H2
    if not isinstance(state, ReducedState):
        raise TypeError("state must be a ReducedState or an OrbitState")
    mu, nu = state.mu, state.nu
    if sphere:
        if mu < 0 or nu < 0:
            raise ChartError("sphere Casimir values mu, nu must be nonnegative")
        if mu == 0 and nu == 0:
            return K.SPHERE_GEODESIC
        if mu == 0 or nu == 0:
            return K.SPHERE_INTEGRABLE
        if abs(mu - nu) < EQUAL_TOL:
            raise ChartError("mu == nu: the orbit is not transversal to p1 = 0 and the (phi, p_phi) "
                             "chart does not apply; use OrbitState (motion on a two-sphere)")
        return K.SPHERE_GENERIC
    if nu != 0:
        return K.HYPER_GENERIC
    if mu == 0:
        return K.HYPER_GEODESIC
    raise ChartError("nu = 0 with mu != 0 needs OrbitState (motion on a hyperbolic plane)")


def check_domain(state: State, params: SystemParams, variant: int | None = None):
    variant = select_variant(state, params) if variant is None else variant
    r = state.r
    if params.space == "sphere" and not r > 0:
        raise ChartError(f"sphere chart needs r > 0, got {r}")
    if params.space == "hyperbolic" and not 0 < r < 1:
        raise ChartError(f"hyperbolic chart needs 0 < r < 1, got {r}")
    if variant == K.SPHERE_GENERIC:
        lim = min(state.mu, state.nu)
        if abs(state.p_phi) > lim:
            raise ChartError(f"|p_phi| = {abs(state.p_phi)} exceeds min(mu, nu) = {lim}")


def kernel_params(state: State, params: SystemParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    code, pp, tx, tc = params.potential.kernel_args(params.space, params.R)
    prm = np.zeros(K.NPRM)
    prm[K.PRM_M1] = params.m1
    prm[K.PRM_M2] = params.m2
    prm[K.PRM_R] = params.R
    if isinstance(state, ReducedState):
        prm[K.PRM_MU] = state.mu
        prm[K.PRM_NU] = state.nu
        prm[K.PRM_L] = max(state.mu, state.nu)
    prm[K.PRM_POT] = code
    prm[K.PRM_P0] = pp[0]
    prm[K.PRM_P1] = pp[1]
    return prm, tx, tc


GEODESIC_VARIANTS = (K.SPHERE_GEODESIC, K.HYPER_GEODESIC)


def _start_chart(variant: int, x: np.ndarray) -> tuple[int, np.ndarray]:
    """Geodesic variants run in the arclength chart, where the midpoint rule is exact for U = 0."""
    if variant not in GEODESIC_VARIANTS:
        return K.CHART_R, x
    y = x.copy()
    y[0], y[1] = K.rp_to_arc(variant, x[0], x[1])
    return K.CHART_ARC, y


def _pack(state: State, vec: np.ndarray) -> State:
    if isinstance(state, ReducedState):
        return replace(state, r=float(vec[0]), p_r=float(vec[1]), phi=float(vec[2]), p_phi=float(vec[3]))
    return OrbitState(*(float(v) for v in vec))


def hamiltonian(state: State, params: SystemParams) -> float:
    variant = select_variant(state, params)
    check_domain(state, params, variant)
    prm, tx, tc = kernel_params(state, params)
    x = state.vector()
    return float(K.energy_grad(variant, x, 0, prm, tx, tc, np.empty(x.size)))


def gradient(state: State, params: SystemParams) -> np.ndarray:
    """Partial derivatives of the reduced Hamiltonian in the state's coordinates."""
    variant = select_variant(state, params)
    check_domain(state, params, variant)
    prm, tx, tc = kernel_params(state, params)
    x = state.vector()
    g = np.empty(x.size)
    K.energy_grad(variant, x, 0, prm, tx, tc, g)
    if variant in (K.SPHERE_INTEGRABLE, K.SPHERE_GEODESIC, K.HYPER_GEODESIC):
        g[2:] = 0.0
    return g


def vector_field(state: State, params: SystemParams) -> np.ndarray:
    variant = select_variant(state, params)
    prm, tx, tc = kernel_params(state, params)
    x = state.vector()
    f = np.empty(x.size)
    K.vector_field(variant, x, 0, prm, tx, tc, f, np.empty(x.size))
    return f


def casimir_value(state: State, params: SystemParams) -> float:
    """Conserved orbit invariant of the Lie–Poisson variants (0 for canonical ones)."""
    return float(K.casimir(select_variant(state, params), state.vector()))


def flow_step(state: State, params: SystemParams, dt: float) -> State:
    """One implicit-midpoint step.  Negative ``dt`` steps backward in time."""
    if dt == 0:
        return state
    variant = select_variant(state, params)
    check_domain(state, params, variant)
    prm, tx, tc = kernel_params(state, params)
    chart, x0 = _start_chart(variant, state.vector())
    x1 = np.empty_like(x0)
    it = K.midpoint_step(variant, x0, chart, prm, tx, tc, float(dt), x1)
    if it < 0:
        raise IntegrationError(f"implicit midpoint Newton iteration did not converge in "
                               f"{K.NEWTON_MAXIT} iterations at {state}")
    y = np.empty_like(x1)
    K.to_rp(variant, x1, chart, y)
    out = _pack(state, y)
    ev = K.classify_step(variant, x0, x1, chart, prm)
    if ev in (K.EV_CHART_SINGULAR, K.EV_BOUNDARY, K.EV_NAN):
        raise ChartError(f"step left the chart domain: {EVENT_NAMES[ev]}")
    return out


@dataclass
class Event:
    kind: str
    step: int
    t: float

    def to_dict(self) -> dict:
        return {"event": self.kind, "step": self.step, "t": self.t}


@dataclass
class Trajectory:
    variant: str
    t: np.ndarray
    x: np.ndarray
    chart: np.ndarray
    energy: np.ndarray
    casimir: np.ndarray
    max_energy_drift: float
    max_casimir_drift: float
    events: list[Event]
    final_state: State
    dt: float

    @property
    def columns(self) -> list[str]:
        if self.x.shape[1] == 5:
            return ["t", "r", "p_r", "p3", "p4", "p5", "H", "casimir"]
        return ["t", "r", "p_r", "phi", "p_phi", "H", "casimir"]

    def table(self) -> np.ndarray:
        return np.column_stack([self.t, self.x, self.energy, self.casimir])

    @property
    def halted(self) -> Event | None:
        for e in self.events:
            if not e.kind.startswith("chart_switch"):
                return e
        return None

    def relative_energy_drift(self) -> float:
        return self.max_energy_drift / max(abs(self.energy[0]), 1e-300)


def integrate(state: State, params: SystemParams, t_end: float, dt: float, stride: int = 1,
              observers: Sequence[Callable[[float, State], None]] = (),
              chart_switch: bool = True) -> Trajectory:
    """Fixed-step implicit-midpoint integration from ``t = 0`` to ``t_end``.

    Samples are kept every ``stride`` steps.  Chart events halt the run and
    are listed in ``Trajectory.events``; the sphere inversion ``r -> 1/r``
    above ``r = 1e3`` is applied transparently and logged.  Geodesic
    variants are stepped in the arclength chart.  Observers are
    called on each recorded sample after the compiled loop finishes.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    variant = select_variant(state, params)
    check_domain(state, params, variant)
    prm, tx, tc = kernel_params(state, params)
    x0 = state.vector()
    chart0, xc = _start_chart(variant, x0)
    nsteps = int(round(t_end / dt)) if t_end > 0 else 0
    if nsteps and abs(nsteps * dt - t_end) > 1e-9 * max(1.0, t_end):
        raise ValueError(f"t_end = {t_end} is not a whole number of steps of dt = {dt}")
    (samples, steps, charts, nrec, max_dH, max_dC, halt, halt_step,
     sw_steps, sw_kinds, nsw, xf, chart_f) = K.run(
        variant, xc, chart0, prm, tx, tc, float(dt), nsteps, int(stride), bool(chart_switch))
    if halt == K.EV_NEWTON:
        raise IntegrationError(f"Newton iteration failed at step {halt_step} (t = {halt_step * dt})")
    samples = samples[:nrec].copy()
    t = steps[:nrec] * dt
    g = np.empty(x0.size)
    energy = np.array([K.energy_grad(variant, s, 0, prm, tx, tc, g) for s in samples])
    cas = np.array([K.casimir(variant, s) for s in samples])
    events = [Event(EVENT_NAMES[int(k)], int(s), float(s * dt)) for s, k in zip(sw_steps[:nsw], sw_kinds[:nsw])]
    if halt != K.EV_NONE:
        events.append(Event(EVENT_NAMES[int(halt)], int(halt_step), float(halt_step * dt)))
    final = samples[-1]
    traj = Trajectory(VARIANT_NAMES[variant], t, samples, charts[:nrec].copy(), energy, cas,
                      float(max_dH), float(max_dC), events, _pack(state, final), float(dt))
    for obs in observers:
        for ti, xi in zip(t, samples):
            obs(float(ti), _pack(state, xi))
    return traj
