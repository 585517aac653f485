"""Command-line driver: ``ddgate spectra|evolve|optimize|preset``.

Exit codes: 0 success, 2 configuration or I/O error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pydantic

from . import __version__
from .config import PRESETS, RunConfig, load_config, preset
from .core import (PAIRS, DDGateError, DiscreteModes, QuadratureError, UnsupportedVariantError,
                   evaluate_spectral_density, kelvin_to_angular_frequency, mhz_to_angular, ns_to_us,
                   us_to_ns)
from .dynamics import (aleph_integrand, im_functional, re_functional, reduced_density_matrix,
                       trajectory)
from .entanglement import concurrence, cz_target, state_fidelity
from .optimize import OptimizationProblem, optimize
from .pulses import Family, filter_f_omega

__all__ = ["main", "spectra_table", "evolve_table", "optimize_report", "SPECTRA_COLUMNS", "EVOLVE_COLUMNS"]

SPECTRA_COLUMNS = ("omega", "J", "f_abs2", "Im_functional", "Re_functional", "aleph",
                   "G_P", "G_D", "G_S", "G_PS", "G_DS")

_RHO_COLUMNS = tuple(f"rho_{n}{m}_{part}" for n in range(1, 5) for m in range(1, 5) for part in ("re", "im"))
EVOLVE_COLUMNS = (("t", "M", "theta", "upsilon") + tuple(f"upsilon_{n}{m}" for n, m in PAIRS)
                  + ("concurrence", "fidelity") + _RHO_COLUMNS)


def _fmt(value) -> str:
    # shortest round-trip representation keeps output byte-stable
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _csv(header: Sequence[str], rows) -> str:
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")
    return out.getvalue()


def _no_dd(config: RunConfig) -> RunConfig:
    sched = config.schedule.model_copy(update={"family": Family.FREE, "n_pulses": 0, "pulse_times_ns": None})
    return config.model_copy(update={"schedule": sched})


def spectra_table(config: RunConfig) -> Tuple[Tuple[str, ...], np.ndarray]:
    """Columns of :data:`SPECTRA_COLUMNS` on a log-spaced grid (omega in rad/us)."""
    topo = config.topology()
    if isinstance(topo.j, DiscreteModes) or isinstance(topo.cross, DiscreteModes):
        raise UnsupportedVariantError("spectra need a continuous spectral density")
    schedule = config.pulse_schedule()
    m = config.schedule.m
    conv = config.frequency_convention
    w = np.geomspace(mhz_to_angular(config.spectra.omega_min_mhz, conv),
                     mhz_to_angular(config.spectra.omega_max_mhz, conv), config.spectra.points)
    jw = np.asarray(evaluate_spectral_density(topo.j, w), dtype=float)
    jbar = np.asarray(evaluate_spectral_density(topo.cross, w), dtype=float)
    f2 = np.abs(filter_f_omega(schedule, w)) ** 2
    im = im_functional(schedule, w)
    re = re_functional(schedule, m, w)
    aleph = aleph_integrand(schedule, m, w)
    coth = 1.0 / np.tanh(0.5 * w / kelvin_to_angular_frequency(config.temperature_k))
    phase = (-2.0 * m * im + aleph) / w ** 2
    decay = coth * re / w ** 2
    table = np.column_stack([w, jw, f2, im, re, aleph, 10.0 * phase, 10.0 * decay, 0.1 * jw,
                             jbar * phase, jw * decay])
    return SPECTRA_COLUMNS, table


def evolve_table(config: RunConfig) -> Tuple[Tuple[str, ...], List[list]]:
    """Trajectory rows at t = Delta .. M Delta (t in us)."""
    schedule = config.pulse_schedule()
    records = trajectory(schedule, config.schedule.m, config.topology(), config.temperature_k,
                         config.quadrature_spec())
    psi0 = config.initial_state.vector()
    rho0 = np.outer(psi0, psi0.conj())
    rows = []
    for rec in records:
        rho = reduced_density_matrix(rho0, rec)
        target = cz_target(psi0, 1.0 if rec.theta >= 0 else -1.0)
        row = [rec.t, rec.m, rec.theta, rec.upsilon]
        row += [rec.decay[n - 1, k - 1] for n, k in PAIRS]
        row += [concurrence(rho), state_fidelity(rho, target)]
        for v in rho.ravel():
            row += [v.real, v.imag]
        rows.append(row)
    return EVOLVE_COLUMNS, rows


def optimize_report(config: RunConfig) -> dict:
    """Run the schedule search described by ``config.optimize``; JSON-ready dict."""
    opt = config.optimize
    family = config.schedule.family if config.schedule.family is not Family.FREE else Family.UDD
    if family is Family.CUSTOM:
        family = Family.UDD
    period = ns_to_us(config.schedule.period_ns)
    seeds = ((config.schedule.n_pulses, period),) if opt.seed_with_schedule else ()
    problem = OptimizationProblem(
        topology=config.topology(), temperature=config.temperature_k, n_pulses=tuple(opt.n_pulses),
        period_range=tuple(ns_to_us(p) for p in opt.period_ns), m_max=opt.m_max, family=family,
        objective=opt.objective, fidelity_threshold=opt.fidelity_threshold,
        time_budget=None if opt.time_budget_ns is None else ns_to_us(opt.time_budget_ns),
        n_grid=opt.n_grid, top_q=opt.top_q, refine_iterations=opt.refine_iterations,
        initial_state=tuple(config.initial_state.vector()), seeds=seeds,
        quadrature=config.quadrature_spec(), workers=opt.workers)
    report = optimize(problem)
    return {
        "objective": problem.objective.value,
        "diagnostic": report.diagnostic,
        "evaluations": report.evaluations,
        "candidates": [
            {"rank": i + 1, "family": c.schedule.family.value, "n_pulses": c.schedule.n_pulses,
             "period_ns": us_to_ns(c.schedule.period), "m": c.m, "score": c.score,
             "metrics": {k: (None if v is None else float(v)) for k, v in c.metrics.items()}}
            for i, c in enumerate(report.candidates)
        ],
    }


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ddgate", description="Two-qubit dephasing under dynamical decoupling.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("spectra", "filter and spectral functions on a frequency grid (CSV)"),
                        ("evolve", "phase, decay, concurrence and the density matrix vs time (CSV)"),
                        ("optimize", "rank pulse schedules (JSON report)")):
        s = sub.add_parser(name, help=help_)
        src = s.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", type=Path, help="JSON run configuration")
        src.add_argument("--preset", choices=sorted(PRESETS), help="built-in parameter set")
        s.add_argument("--out", type=Path, help="output file (default: config output.path or stdout)")
        s.add_argument("--convention", choices=("angular", "ordinary"), help="override frequency convention")
        s.add_argument("--no-dd", action="store_true", help="replace the schedule by free evolution")
    s = sub.add_parser("preset", help="print a built-in configuration as JSON")
    s.add_argument("name", help=f"one of: {', '.join(sorted(PRESETS))}")
    s.add_argument("--out", type=Path)
    return p


def _resolve(args) -> RunConfig:
    config = load_config(args.config) if args.config else preset(args.preset)
    if args.convention:
        data = config.model_dump(mode="json")
        data["frequency_convention"] = args.convention
        config = RunConfig.model_validate(data)
    if args.no_dd:
        config = _no_dd(config)
    return config


def _emit(text: str, path: Optional[Path]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "preset":
            _emit(preset(args.name).to_json(), args.out)
            return 0
        config = _resolve(args)
        out = args.out or (Path(config.output.path) if config.output.path else None)
        if args.command == "spectra":
            header, table = spectra_table(config)
            _emit(_csv(header, table), out)
        elif args.command == "evolve":
            header, rows = evolve_table(config)
            _emit(_csv(header, rows), out)
        else:
            _emit(json.dumps(optimize_report(config), indent=2) + "\n", out)
    except QuadratureError as exc:
        print(f"ddgate: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (pydantic.ValidationError, DDGateError, ValueError, OSError) as exc:
        print(f"ddgate: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"ddgate: numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
