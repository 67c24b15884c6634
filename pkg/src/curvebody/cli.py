"""Command-line entry point ``curvebody``.

Subcommands::

    curvebody algebra verify [--max-two-ell N]
    curvebody spectrum  --config FILE
    curvebody simulate  --config FILE
    curvebody poincare  --config FILE

Common flags: ``--config``, ``--seed``, ``--out`` (output directory, default
``.``), ``--format csv|json``.  ``CURVEBODY_THREADS`` caps the worker pool.
Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from pathlib import Path

import numpy as np

from . import liepoisson as lp
from . import repkit, spectral
from .config import (ConfigError, RunConfig, load_config, params_from_config, parse_config,
                     potential_from_config, section_from_config, state_from_config)
from .dynamics import (ChartError, IntegrationError, OrbitState, ReducedState, arclength, hamiltonian,
                       integrable_radial_period, integrate, measured_period, poincare_section)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
FLOAT_FMT = "%.17g"


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return FLOAT_FMT % x
    return str(x)


def write_csv(path: Path, header: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    path.write_text(buf.getvalue())


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def worker_count() -> int:
    raw = os.environ.get("CURVEBODY_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"CURVEBODY_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError("CURVEBODY_THREADS must be >= 1")
    return n


def pool_map(fn, items: list) -> list:
    """Ordered parallel map; results come back in input order."""
    n = min(worker_count(), max(len(items), 1))
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def _config(args, command: str) -> RunConfig:
    if args.config:
        return load_config(args.config, command)
    return parse_config("", command)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _err(msg: str) -> None:
    print(f"curvebody: {msg}", file=sys.stderr)


# --------------------------------------------------------------------------
# algebra verify

def _verify_pair(task):
    pair, tol, flip = task
    ops = repkit.build_operator_set(pair, flip_d3=flip)
    rep = repkit.verify_commutators(ops, tol=tol)
    rep.extend(repkit.verify_eigen_series(pair, ops=ops, tol=tol))
    return rep


def cmd_algebra_verify(args) -> int:
    cfg = _config(args, "algebra")
    max_two_ell = cfg["max_two_ell"] if args.max_two_ell is None else args.max_two_ell
    if max_two_ell < 0:
        raise ConfigError("max_two_ell must be >= 0")
    tol = cfg["tol"]
    flip = args.inject_fault == "d3-sign"
    pairs = repkit.valid_pairs(max_two_ell)
    reports = pool_map(_verify_pair, [(p, tol, flip) for p in pairs])
    lines = [d for rep in reports for d in rep.to_dicts()]
    failed = [(r.pair, r.check) for rep in reports for r in rep.failures()]
    for name in ("spherical", "hyperbolic"):
        alg = lp.SO4 if name == "spherical" else lp.SO13
        tab = lp.verify_invariant_table(alg, name)
        lines += [dict(d, group="poisson table") for d in tab.to_dicts()]
        failed += [(tab.algebra, r.relation) for r in tab.records if not r.passed]
    for alg in (lp.SO4, lp.SO13):
        for cname, c in lp.casimirs(alg).items():
            rep = lp.casimir_check(alg, c)
            lines += [dict(d, group=f"casimir {cname}") for d in rep.to_dicts()]
            failed += [(alg.name, f"{cname}: {r.relation}") for r in rep.records if not r.passed]
    text = "".join(json.dumps(d, sort_keys=True) + "\n" for d in lines)
    sys.stdout.write(text)
    if args.out:
        (_out_dir(args) / "algebra_report.jsonl").write_text(text)
    if failed:
        names = sorted({rel for _, rel in failed})
        _err(f"{len(failed)} of {len(lines)} checks failed; relations: {', '.join(names)}")
        for where, rel in failed[:20]:
            _err(f"  FAILED {rel} at {where}")
        return EXIT_FAIL
    print(f"curvebody: {len(lines)} checks passed over {len(pairs)} irrep pairs", file=sys.stderr)
    return EXIT_OK


# --------------------------------------------------------------------------
# spectrum

def _spectrum_task(task):
    problem, count, n_points, method = task
    closed = spectral.closed_form_levels(problem, count) if method in ("both", "closed_form") else None
    grid = spectral.grid_eigensolve(problem, count, n_points) if method in ("both", "grid") else None
    return closed, grid


def cmd_spectrum(args) -> int:
    cfg = _config(args, "spectrum")
    pot = potential_from_config(cfg)
    method = cfg["method"]
    problems = []
    for case, ell in product(cfg["cases"], cfg["ells"]):
        try:
            co = spectral.case_coefficients(case, ell)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        problems.append(spectral.RadialProblem(co, pot, cfg["m"], cfg["R"]))
    if method != "grid":
        for pr in problems:
            try:
                spectral.closed_form_levels(pr, 1)
            except ValueError as exc:
                raise ConfigError(f"case {pr.coeffs.case_id}, ell {pr.coeffs.ell}: {exc}") from None
    try:
        results = pool_map(_spectrum_task, [(pr, cfg["count"], cfg["n_points"], method) for pr in problems])
    except spectral.ConvergenceError as exc:
        _err(f"grid did not converge: {exc}")
        return EXIT_FAIL

    rows, docs, worst = [], [], 0.0
    for pr, (closed, grid) in zip(problems, results):
        co = pr.coeffs
        base = [co.case_id, str(co.ell), pot.kind]
        doc = {"case": co.case_id, "ell": str(co.ell), "potential": pot.to_dict(), "m": pr.m, "R": pr.R}
        if closed is not None:
            doc["closed_form"] = closed.to_dict()["levels"]
        if grid is not None:
            doc["grid"] = grid.to_dict()["levels"]
            doc["n_points"] = cfg["n_points"]
        if closed is not None and grid is not None:
            cmp = spectral.compare_levels(closed, grid, pr.unit)
            worst = max(worst, cmp.max_rel)
            doc["comparison"] = cmp.to_dicts()
            rows += [base + [r["k"], r["closed_form"], r["grid"], r["abs"], r["rel"]] for r in cmp.rows]
        else:
            res = closed or grid
            rows += [base + ([k, e, "", "", ""] if closed else [k, "", e, "", ""]) for k, e in res.levels]
        docs.append(doc)

    out = _out_dir(args)
    if args.format == "json":
        write_json(out / "spectrum.json", {"method": method, "seed": args.seed, "spectra": docs})
    else:
        write_csv(out / "spectrum.csv", ["case", "ell", "potential", "k", "closed_form", "grid", "abs", "rel"], rows)
    for row in rows:
        print(",".join(_fmt(v) for v in row))
    if method == "both" and worst > cfg["tol"]:
        _err(f"closed form and grid disagree: max relative difference {worst:.3g} > {cfg['tol']:g}")
        return EXIT_FAIL
    return EXIT_OK


# --------------------------------------------------------------------------
# dynamics

def _chart_message(exc: Exception) -> str:
    msg = str(exc)
    if "OrbitState" in msg:
        msg += "; in the config set state.kind = orbit and give p3, p4, p5"
    return msg


def _trajectory_rows(traj):
    return traj.table().tolist()


def _write_events(path: Path, traj) -> None:
    path.write_text("".join(json.dumps(e.to_dict(), sort_keys=True) + "\n" for e in traj.events))


def cmd_simulate(args) -> int:
    cfg = _config(args, "simulate")
    params = params_from_config(cfg)
    state = state_from_config(cfg)
    try:
        H0 = hamiltonian(state, params)
        traj = integrate(state, params, cfg["t_end"], cfg["dt"], cfg["stride"],
                         chart_switch=cfg["chart_switch"])
    except ChartError as exc:
        raise ConfigError(_chart_message(exc)) from None
    except IntegrationError as exc:
        _err(str(exc))
        return EXIT_FAIL

    out = _out_dir(args)
    if args.format == "json":
        write_json(out / "trajectory.json", {"columns": traj.columns, "rows": _trajectory_rows(traj)})
    else:
        write_csv(out / "trajectory.csv", traj.columns, _trajectory_rows(traj))
    _write_events(out / "events.jsonl", traj)

    summary = {
        "variant": traj.variant, "seed": args.seed, "steps": int(round(traj.t[-1] / traj.dt)),
        "t_final": float(traj.t[-1]), "energy": H0,
        "energy_drift": traj.max_energy_drift, "relative_energy_drift": traj.relative_energy_drift(),
        "casimir_drift": traj.max_casimir_drift, "events": [e.to_dict() for e in traj.events],
    }
    if traj.variant.endswith("geodesic") and len(traj.t) > 2:
        s = arclength(traj, params)
        fit = np.polyfit(traj.t, s, 1)
        summary["arclength_rate"] = float(fit[0])
        summary["arclength_linear_residual"] = float(np.max(np.abs(np.polyval(fit, traj.t) - s)))
    if cfg["period"]:
        summary["period"] = _period_report(state, params, traj, H0)
    write_json(out / "summary.json", summary)
    print(json.dumps(summary, sort_keys=True))
    halt = traj.halted
    if halt is not None:
        _err(f"integration halted at t = {halt.t:g}: {halt.kind}")
    return EXIT_OK


def _period_report(state, params, traj, H0) -> dict:
    if traj.variant != "sphere_integrable" and not traj.variant.endswith("geodesic"):
        raise ConfigError("period = true needs an integrable configuration (mu = 0 or nu = 0 on the sphere)")
    L = max(state.mu, state.nu)
    rep = {"L": L}
    try:
        rep["quadrature"] = integrable_radial_period(H0, L, params)
    except ValueError as exc:
        rep["quadrature_error"] = str(exc)
    try:
        rep["measured"] = measured_period(traj)
    except ValueError as exc:
        rep["measured_error"] = str(exc)
    if "quadrature" in rep and "measured" in rep:
        rep["relative_difference"] = abs(rep["measured"] - rep["quadrature"]) / rep["quadrature"]
    return rep


def _ensemble_states(state, size: int, spread: float, seed: int | None) -> list:
    rng = np.random.default_rng(seed)
    states = [state]
    for _ in range(size - 1):
        dr, dp = rng.uniform(-spread, spread, 2)
        if isinstance(state, OrbitState):
            states.append(OrbitState(state.r + dr, state.p_r + dp, state.p3, state.p4, state.p5))
        else:
            states.append(ReducedState(state.r + dr, state.p_r + dp, state.phi, state.p_phi, state.mu, state.nu))
    return states


def cmd_poincare(args) -> int:
    cfg = _config(args, "poincare")
    params = params_from_config(cfg)
    section = section_from_config(cfg)
    coords = tuple(cfg["section.coords"])
    states = _ensemble_states(state_from_config(cfg), cfg["ensemble.size"], cfg["ensemble.spread"], args.seed)

    def run(st):
        traj = integrate(st, params, cfg["t_end"], cfg["dt"], cfg["stride"], chart_switch=cfg["chart_switch"])
        return traj, poincare_section(traj, section, coords)

    try:
        for st in states:
            hamiltonian(st, params)
        results = pool_map(run, states)
    except ChartError as exc:
        raise ConfigError(_chart_message(exc)) from None
    except IntegrationError as exc:
        _err(str(exc))
        return EXIT_FAIL
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    header = ["member", "t", *coords]
    rows = [[i, *pt] for i, (_, pts) in enumerate(results) for pt in pts.tolist()]
    out = _out_dir(args)
    if args.format == "json":
        write_json(out / "section.json", {"columns": header, "rows": rows})
    else:
        write_csv(out / "section.csv", header, rows)
    summary = {"seed": args.seed, "members": len(states), "points": len(rows),
               "per_member": [len(p) for _, p in results],
               "events": [[e.to_dict() for e in t.events] for t, _ in results]}
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="plain-text key = value config file")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized ensembles (default 0)")
    common.add_argument("--out", default=".", help="output directory (default: current directory)")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")

    ap = argparse.ArgumentParser(prog="curvebody", description="Two-body problem on S^3 and H^3: "
                                 "algebra checks, spectra and reduced dynamics.")
    sub = ap.add_subparsers(dest="command", required=True)
    alg = sub.add_parser("algebra", help="operator algebra checks")
    alg_sub = alg.add_subparsers(dest="action", required=True)
    ver = alg_sub.add_parser("verify", parents=[common], help="verify commutators, eigen-series and Poisson tables")
    ver.add_argument("--max-two-ell", type=int, default=None, help="largest 2*ell per factor (default from config, 5)")
    ver.add_argument("--inject-fault", choices=("d3-sign",), default=None, help=argparse.SUPPRESS)
    ver.set_defaults(func=cmd_algebra_verify, out=None)
    for name, fn, hlp in (("spectrum", cmd_spectrum, "closed-form and grid energy levels"),
                          ("simulate", cmd_simulate, "integrate the reduced dynamics"),
                          ("poincare", cmd_poincare, "Poincaré section of one or more trajectories")):
        p = sub.add_parser(name, parents=[common], help=hlp)
        p.set_defaults(func=fn)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        _err(f"config error: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
