"""Poincaré sections of sampled trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Trajectory


@dataclass(frozen=True)
class Section:
    """Hypersurface ``variable = value`` (``variable mod modulus = value`` when ``modulus`` is set)."""
    variable: str = "phi"
    value: float = 0.0
    direction: int = 1  # +1 upward crossings, -1 downward, 0 both
    modulus: float | None = None

    @classmethod
    def phi(cls, value: float = 0.0, direction: int = 1) -> "Section":
        return cls("phi", value, direction, 2 * math.pi)

    @classmethod
    def p_phi(cls, value: float = 0.0, direction: int = 1) -> "Section":
        return cls("p_phi", value, direction, None)


def poincare_section(traj: Trajectory, section: Section, coords: tuple[str, str] = ("r", "p_r")) -> np.ndarray:
    """Crossings of ``section`` as an ``(n, 3)`` array of ``(t, coord0, coord1)``.

    Consecutive samples bracketing a crossing are linearly interpolated.
    With a modulus, the signed distance is wrapped into ``[-modulus/2, modulus/2)``
    and jumps across the wrap are ignored.
    """
    if section.direction not in (-1, 0, 1):
        raise ValueError("direction must be -1, 0 or 1")
    cols = traj.columns
    table = traj.table()
    if section.variable not in cols:
        raise ValueError(f"trajectory has no column {section.variable!r}; available {cols}")
    for c in coords:
        if c not in cols:
            raise ValueError(f"trajectory has no column {c!r}; available {cols}")
    v = table[:, cols.index(section.variable)] - section.value
    if section.modulus:
        M = section.modulus
        v = np.mod(v + M / 2, M) - M / 2
    a, b = v[:-1], v[1:]
    hit = (a < 0) & (b >= 0) if section.direction == 1 else \
        (a > 0) & (b <= 0) if section.direction == -1 else \
        ((a < 0) & (b >= 0)) | ((a > 0) & (b <= 0))
    if section.modulus:
        hit &= np.abs(b - a) < section.modulus / 2
    idx = np.flatnonzero(hit)
    if idx.size == 0:
        return np.empty((0, 3))
    w = (a[idx] / (a[idx] - b[idx]))[:, None]
    sel = [cols.index("t"), cols.index(coords[0]), cols.index(coords[1])]
    lo = table[idx][:, sel]
    hi = table[idx + 1][:, sel]
    return lo + w * (hi - lo)
