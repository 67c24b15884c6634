"""Reduced classical two-body dynamics on S^3 and H^3."""

from .coefficients import coeff_h, coeff_s, coeff_s_pair, pair_radii
from .model import (ChartError, Event, IntegrationError, OrbitState, ReducedState, SystemParams,
                    Trajectory, casimir_value, flow_step, gradient, hamiltonian, integrate,
                    select_variant, vector_field, VARIANT_NAMES)
from .poincare import Section, poincare_section
from .periods import arclength, integrable_radial_period, measured_period

__all__ = [
    "coeff_h", "coeff_s", "coeff_s_pair", "pair_radii", "ChartError", "Event", "IntegrationError",
    "OrbitState", "ReducedState", "SystemParams", "Trajectory", "casimir_value", "flow_step",
    "gradient", "hamiltonian", "integrate", "select_variant", "vector_field", "VARIANT_NAMES",
    "Section", "poincare_section", "arclength", "integrable_radial_period", "measured_period",
]
