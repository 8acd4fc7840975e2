"""Scenario-level commands returning JSON-compatible run reports."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional

import numpy as np

from . import linalg
from .classifier import classify_generator
from .generator import KossakowskiForm, evolve_exact, stationary_states
from .jsonio import decode_array, encode_array
from .linalg import TOL_NULL
from .noise import minimal_reduction
from .operators import bloch_vector, gell_mann_basis
from .scenarios import LEAKAGE_WARNING, Scenario, leakage, resolve_scenario
from .trajectory import EnsembleResult, compare_to_exact, run_ensemble, run_trajectory

CSV_FORMAT = "{:.17g}"


def _fmt(x) -> str:
    return CSV_FORMAT.format(float(x))


def write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def ensemble_table(scenario: Scenario, ens: EnsembleResult) -> tuple[list[str], list[list[float]]]:
    """Fixed column order: qubits get Bloch components, other systems get populations."""
    if scenario.dim == 2 and not scenario.is_oscillator:
        header = ["t", "x1", "x2", "x3", "mean_norm_sq"]
        rows = [[t, *bloch_vector(rho), n] for t, rho, n in zip(ens.times, ens.rho_series, ens.mean_norm_sq)]
    else:
        header = ["t"] + [f"p{k}" for k in range(scenario.dim)] + ["mean_norm_sq"]
        rows = [[t, *np.diag(rho).real, n] for t, rho, n in zip(ens.times, ens.rho_series, ens.mean_norm_sq)]
        if scenario.is_oscillator:
            header.append("leakage")
            for row, rho in zip(rows, ens.rho_series):
                row.append(leakage(rho))
    return header, rows


def classify(scenario: Scenario, tol: float = TOL_NULL) -> dict:
    report = classify_generator(scenario.generator(), tol)
    return {
        "scenario": scenario.name,
        "classification": report.to_dict(),
        "passed": report.consistent,
    }


def _run(scenario: Scenario, dt, n_traj, seed):
    plan = scenario.sse_plan(dt=dt, seed=seed)
    m = scenario.plan.n_traj if n_traj is None else int(n_traj)
    if m < 1:
        raise ValueError("number of trajectories must be >= 1")
    return plan, run_ensemble(plan, scenario.psi0(), m)


def _leakage_block(scenario: Scenario, series) -> Optional[dict]:
    if not scenario.is_oscillator:
        return None
    values = [leakage(r) for r in series]
    return {"max": max(values), "final": values[-1], "threshold": LEAKAGE_WARNING}


def simulate(scenario: Scenario, out_dir, dt: float | None = None, n_traj: int | None = None,
             seed: int | None = None, traj_dump: bool = False) -> dict:
    """Run the ensemble and write ``ensemble.csv`` (and ``trajectory.csv`` with ``traj_dump``)."""
    plan, ens = _run(scenario, dt, n_traj, seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header, rows = ensemble_table(scenario, ens)
    files = {"ensemble": str(out / "ensemble.csv")}
    write_csv(files["ensemble"], header, rows)
    warnings = []
    if traj_dump:
        rec = run_trajectory(plan, scenario.psi0(), 0)
        files["trajectory"] = str(out / "trajectory.csv")
        write_csv(files["trajectory"], ["t", "norm_sq"], zip(rec.times, rec.norms_sq))
    leak = _leakage_block(scenario, ens.rho_series)
    if leak is not None and leak["max"] > LEAKAGE_WARNING:
        warnings.append(f"Fock truncation leakage {leak['max']:.3g} exceeds {LEAKAGE_WARNING}")
    per_traj_std = ens.norms_sq.std(axis=1)
    report = {
        "scenario": scenario.name,
        "seed": plan.seed,
        "scheme": plan.scheme.value,
        "dt": plan.dt,
        "n_traj": ens.n_traj,
        "trajectory_summary": {
            "max_abs_mean_norm_sq_deviation": float(np.abs(ens.mean_norm_sq - 1).max()),
            "max_per_trajectory_norm_sq_std": float(per_traj_std.max()),
            "mean_per_trajectory_norm_sq_std": float(per_traj_std.mean()),
        },
        "leakage": leak,
        "warnings": warnings,
        "files": files,
        "passed": True,
    }
    (out / "report.json").write_text(json.dumps(report, indent=2))
    return report


def compare(scenario: Scenario, dt: float | None = None, n_traj: int | None = None,
            seed: int | None = None, tol: float | None = None, exact_only: bool = False) -> dict:
    """Ensemble vs. exact evolution on the same grid, plus the stationary-state comparison."""
    tol = scenario.tolerance if tol is None else tol
    G = scenario.generator()
    rho0 = scenario.rho0()
    plan = scenario.sse_plan(dt=dt, seed=seed)
    exact = evolve_exact(G, rho0, plan.times)
    states = stationary_states(G)
    report = {
        "scenario": scenario.name,
        "tolerance": tol,
        "exact": {
            "max_trace_error": float(max(abs(np.trace(r) - 1) for r in exact)),
            "final_populations": np.diag(exact[-1]).real.tolist(),
        },
        "stationary": {"n_states": len(states)},
        "warnings": [],
    }
    checks = {"exact_trace_preserved": report["exact"]["max_trace_error"] <= 1e-9}
    if len(states) == 1:
        report["stationary"]["state"] = encode_array(states[0])
        report["stationary"]["exact_final_distance"] = linalg.trace_distance(exact[-1], states[0])
    leak = _leakage_block(scenario, exact)
    if leak is not None:
        report["leakage"] = leak
        if leak["max"] > LEAKAGE_WARNING:
            report["warnings"].append(f"Fock truncation leakage {leak['max']:.3g} exceeds {LEAKAGE_WARNING}")
    if not exact_only:
        _, ens = _run(scenario, dt, n_traj, seed)
        dist = compare_to_exact(ens, G, rho0)
        report["ensemble"] = {
            "n_traj": ens.n_traj,
            "seed": plan.seed,
            "max_trace_distance": float(dist.max()),
            "final_trace_distance": float(dist[-1]),
            "max_abs_mean_norm_sq_deviation": float(np.abs(ens.mean_norm_sq - 1).max()),
        }
        checks["ensemble_within_tolerance"] = bool(dist.max() <= tol)
        if len(states) == 1:
            d_stat = linalg.trace_distance(ens.rho_series[-1], states[0])
            report["stationary"]["ensemble_final_distance"] = d_stat
    report["checks"] = checks
    report["passed"] = all(checks.values())
    return report


def covariance_from_scenario(scenario: Scenario) -> tuple[np.ndarray, int]:
    """Kossakowski matrix of the scenario's Lindblad operators in a Gell-Mann basis."""
    G = scenario.generator()
    traceless = all(abs(np.trace(L)) < 1e-12 for L in G.lindblads)
    basis = gell_mann_basis(G.dim, include_identity=not traceless)
    return KossakowskiForm.from_generator(G, basis).matrix, len(basis)


def load_covariance(ref: str) -> np.ndarray:
    """Covariance from a JSON matrix file (``covariance`` or ``coeffs`` key, or a bare
    matrix) or from a scenario reference."""
    path = Path(ref)
    if path.suffix == ".json" and path.exists():
        data = json.loads(path.read_text())
        if isinstance(data, dict) and "name" in data and "lindblads" in data:
            return covariance_from_scenario(Scenario.from_dict(data))[0]
        if isinstance(data, dict) and "covariance" in data:
            return decode_array(data["covariance"], ndim=2)
        if isinstance(data, dict) and "coeffs" in data:
            c = decode_array(data["coeffs"], ndim=2)
            return c.conj().T @ c
        if isinstance(data, list):
            return decode_array(data, ndim=2)
        raise ValueError(f"{ref}: expected 'covariance', 'coeffs' or a bare matrix")
    return covariance_from_scenario(resolve_scenario(ref))[0]


def noise_reduce(a) -> dict:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    red = minimal_reduction(a)
    roundtrip = float(np.linalg.norm(red.covariance() - a))
    return {
        "gammas": red.gammas.tolist(),
        "unitary": encode_array(red.unitary),
        "chosen_b": encode_array(red.chosen_b),
        "active_count": red.active_count,
        "naive_real_noise_count": 2 * a.shape[0],
        "roundtrip_error": roundtrip,
        "passed": roundtrip <= 1e-10 * max(1.0, float(np.linalg.norm(a))),
    }
