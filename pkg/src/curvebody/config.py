"""Plain-text run configuration.

One ``key = value`` pair per line, ``#`` starts a comment, keys may be dotted
(``potential.kind``).  Lists are comma separated.  Every command has a fixed
key schema; unknown keys are rejected.  :func:`dump_config` writes the
canonical form (sorted keys, ``repr`` floats), so parse -> dump -> parse is the
identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .dynamics import OrbitState, ReducedState, Section, SystemParams
from .potentials import KINDS, PotentialSpec


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("true", "yes", "1", "on"):
        return True
    if v in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _floats(s: str) -> tuple[float, ...]:
    return tuple(float(x) for x in s.split(",") if x.strip())


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(",") if x.strip())


def _strs(s: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in s.split(",") if x.strip())


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, tuple):
        return ", ".join(_fmt(x) for x in v)
    return str(v)


# key -> (parser, default); a default of None marks a required key
_POTENTIAL = {
    "potential.kind": (str, "zero"),
    "potential.gamma": (float, 0.0),
    "potential.omega": (float, 0.0),
    "potential.alpha": (float, 0.0),
    "potential.beta": (float, 0.0),
    "potential.r": (_floats, ()),
    "potential.u": (_floats, ()),
}
_DYNAMICS = {
    "space": (str, "sphere"),
    "m1": (float, 1.0),
    "m2": (float, 1.0),
    "R": (float, 1.0),
    **_POTENTIAL,
    "state.kind": (str, "reduced"),
    "state.r": (float, None),
    "state.p_r": (float, 0.0),
    "state.phi": (float, 0.0),
    "state.p_phi": (float, 0.0),
    "state.mu": (float, 0.0),
    "state.nu": (float, 0.0),
    "state.p3": (float, 0.0),
    "state.p4": (float, 0.0),
    "state.p5": (float, 0.0),
    "dt": (float, 1e-3),
    "t_end": (float, None),
    "stride": (int, 1),
    "chart_switch": (_bool, True),
}
SCHEMAS: dict[str, dict] = {
    "algebra": {
        "max_two_ell": (int, 5),
        "tol": (float, 1e-12),
    },
    "spectrum": {
        "m": (float, 1.0),
        "R": (float, 1.0),
        **_POTENTIAL,
        "cases": (_ints, (1,)),
        "ells": (_strs, ("0",)),
        "count": (int, 5),
        "n_points": (int, 8000),
        "method": (str, "both"),
        "tol": (float, 1e-6),
    },
    "simulate": {
        **_DYNAMICS,
        "period": (_bool, False),
    },
    "poincare": {
        **_DYNAMICS,
        "section.variable": (str, "phi"),
        "section.value": (float, 0.0),
        "section.direction": (int, 1),
        "section.coords": (_strs, ("r", "p_r")),
        "ensemble.size": (int, 1),
        "ensemble.spread": (float, 0.0),
    },
}


@dataclass
class RunConfig:
    """Validated key/value map for one command; defaults filled in."""
    command: str
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def to_text(self) -> str:
        return dump_config(self)


def parse_config(text: str, command: str) -> RunConfig:
    if command not in SCHEMAS:
        raise ConfigError(f"unknown command {command!r}")
    schema = SCHEMAS[command]
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in schema:
            raise ConfigError(f"line {lineno}: unknown key {key!r} for '{command}'")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = val
    values = {}
    for key, (conv, default) in schema.items():
        if key in raw:
            try:
                values[key] = conv(raw[key])
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {exc}") from None
        elif default is None:
            raise ConfigError(f"missing required key {key!r}")
        else:
            values[key] = default
    cfg = RunConfig(command, values)
    _validate(cfg)
    return cfg


def load_config(path: str | Path, command: str) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, command)


def dump_config(cfg: RunConfig) -> str:
    return "".join(f"{k} = {_fmt(cfg.values[k])}\n" for k in sorted(cfg.values))


def _require(ok: bool, msg: str):
    if not ok:
        raise ConfigError(msg)


def _validate(cfg: RunConfig):
    v = cfg.values
    for key in ("m1", "m2", "m", "R", "dt"):
        if key in v:
            _require(v[key] > 0 and math.isfinite(v[key]), f"{key} must be positive, got {v[key]}")
    for key in ("count", "n_points", "stride", "ensemble.size"):
        if key in v:
            _require(v[key] >= 1, f"{key} must be >= 1, got {v[key]}")
    if "max_two_ell" in v:
        _require(v["max_two_ell"] >= 0, "max_two_ell must be >= 0")
    if "t_end" in v:
        _require(v["t_end"] >= 0, "t_end must be >= 0")
    if "space" in v:
        _require(v["space"] in ("sphere", "hyperbolic"), f"space must be sphere or hyperbolic, got {v['space']!r}")
    if "state.kind" in v:
        _require(v["state.kind"] in ("reduced", "orbit"), "state.kind must be reduced or orbit")
    if "potential.kind" in v:
        _require(v["potential.kind"] in KINDS, f"potential.kind must be one of {KINDS}")
        try:
            potential_from_config(cfg)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if "method" in v:
        _require(v["method"] in ("both", "closed_form", "grid"), "method must be both, closed_form or grid")
    if "cases" in v:
        _require(all(1 <= c <= 8 for c in v["cases"]), "cases must lie in 1..8")
    if "section.direction" in v:
        _require(v["section.direction"] in (-1, 0, 1), "section.direction must be -1, 0 or 1")
        _require(len(v["section.coords"]) == 2, "section.coords needs exactly two names")
        _require(v["ensemble.spread"] >= 0, "ensemble.spread must be >= 0")


def potential_from_config(cfg: RunConfig) -> PotentialSpec:
    v = cfg.values
    kind = v["potential.kind"]
    if kind == "coulomb":
        return PotentialSpec.coulomb(v["potential.gamma"])
    if kind == "oscillator":
        return PotentialSpec.oscillator(v["potential.omega"])
    if kind == "inv_square_plus_square":
        return PotentialSpec.inv_square_plus_square(v["potential.alpha"], v["potential.beta"])
    if kind == "tabulated":
        return PotentialSpec.tabulated(v["potential.r"], v["potential.u"])
    return PotentialSpec.zero()


def params_from_config(cfg: RunConfig) -> SystemParams:
    v = cfg.values
    return SystemParams(v["m1"], v["m2"], v["R"], v["space"], potential_from_config(cfg))


def state_from_config(cfg: RunConfig) -> ReducedState | OrbitState:
    v = cfg.values
    if v["state.kind"] == "orbit":
        return OrbitState(v["state.r"], v["state.p_r"], v["state.p3"], v["state.p4"], v["state.p5"])
    return ReducedState(v["state.r"], v["state.p_r"], v["state.phi"], v["state.p_phi"],
                        v["state.mu"], v["state.nu"])


def section_from_config(cfg: RunConfig) -> Section:
    v = cfg.values
    var = v["section.variable"]
    modulus = 2 * math.pi if var == "phi" else None
    return Section(var, v["section.value"], v["section.direction"], modulus)
