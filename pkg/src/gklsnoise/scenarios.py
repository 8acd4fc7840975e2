"""Builtin model zoo and scenario documents.

A scenario document is JSON.  Complex numbers are ``[re, im]`` pairs and
custom matrices are row-major nested lists of such pairs::

    {
      "name": "thermal_qubit",
      "dim": 2,
      "hamiltonian": [{"kind": "pauli", "index": 3, "coefficient": [0.5, 0.0]}],
      "lindblads": [{"kind": "sigma_minus", "coefficient": [1.414, 0.0]}, ...],
      "initial_state": {"kind": "basis", "index": 0},
      "plan": {"scheme": "ito_euler", "dt": 0.001, "t_final": 2.0,
               "n_traj": 10000, "seed": 2017, "record_stride": 10},
      "tolerance": 0.05,
      "params": {"gamma_prime": 1.0, "n": 1.0, ...}
    }

Operator kinds: ``pauli`` (with ``index`` 0..3), ``sigma_plus``,
``sigma_minus``, ``annihilation``, ``creation``, ``number`` and ``custom``
(with ``matrix``).  Oscillator kinds are built on ``d_max = dim`` Fock levels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Optional

import numpy as np

from . import operators as ops
from .errors import ScenarioError
from .generator import GklsGenerator
from .jsonio import decode_array, decode_complex, encode_array, encode_complex
from .trajectory import Scheme, SsePlan

QUBIT_KINDS = {"pauli", "sigma_plus", "sigma_minus"}
OSCILLATOR_KINDS = {"annihilation", "creation", "number"}
OPERATOR_KINDS = QUBIT_KINDS | OSCILLATOR_KINDS | {"custom"}
LEAKAGE_WARNING = 0.01


@dataclass
class OperatorSpec:
    kind: str
    coefficient: complex = 1.0
    index: Optional[int] = None
    matrix: Optional[list] = None

    def build(self, dim: int) -> np.ndarray:
        if self.kind not in OPERATOR_KINDS:
            raise ScenarioError(f"unknown operator kind {self.kind!r}")
        if self.kind in QUBIT_KINDS and dim != 2:
            raise ScenarioError(f"operator kind {self.kind!r} requires dim = 2, got {dim}")
        if self.kind == "pauli":
            if self.index not in (0, 1, 2, 3):
                raise ScenarioError("pauli operator needs an index in 0..3")
            base = ops.pauli(self.index)
        elif self.kind == "sigma_plus":
            base = ops.SIGMA_PLUS
        elif self.kind == "sigma_minus":
            base = ops.SIGMA_MINUS
        elif self.kind == "annihilation":
            base = ops.destroy(dim)
        elif self.kind == "creation":
            base = ops.create(dim)
        elif self.kind == "number":
            base = ops.number(dim)
        else:
            if self.matrix is None:
                raise ScenarioError("custom operator needs a matrix")
            base = decode_array(self.matrix, ndim=2)
            if base.shape != (dim, dim):
                raise ScenarioError(f"custom matrix of shape {base.shape} for dim {dim}")
        return complex(self.coefficient) * np.array(base, dtype=complex)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "coefficient": encode_complex(self.coefficient)}
        if self.index is not None:
            out["index"] = self.index
        if self.matrix is not None:
            out["matrix"] = self.matrix
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "OperatorSpec":
        try:
            return cls(kind=data["kind"],
                       coefficient=decode_complex(data.get("coefficient", 1.0)),
                       index=data.get("index"),
                       matrix=data.get("matrix"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"malformed operator spec {data!r}: {exc}") from exc


@dataclass
class PlanSpec:
    scheme: str = Scheme.ITO_EULER.value
    dt: float = 1e-3
    t_final: float = 1.0
    n_traj: int = 10_000
    seed: int = 2017
    record_stride: int = 10


@dataclass
class Scenario:
    name: str
    dim: int
    hamiltonian: list
    lindblads: list
    initial_state: dict
    plan: PlanSpec = field(default_factory=PlanSpec)
    tolerance: float = 0.05
    d_max: Optional[int] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.dim < 1:
            raise ScenarioError("dim must be positive")
        if self.d_max is not None and self.d_max < 2:
            raise ScenarioError("oscillator scenarios need d_max >= 2")
        for key in ("gamma", "gamma_prime", "n"):
            if key in self.params and self.params[key] < 0:
                raise ScenarioError(f"{key} must be non-negative")
        if self.params.get("beta") is not None and not self.params["beta"] > 0:
            raise ScenarioError("beta must be positive")

    @property
    def is_oscillator(self) -> bool:
        return self.d_max is not None

    def hamiltonian_matrix(self) -> np.ndarray:
        H = np.zeros((self.dim, self.dim), dtype=complex)
        for spec in self.hamiltonian:
            H += spec.build(self.dim)
        return H

    def lindblad_matrices(self) -> list[np.ndarray]:
        return [spec.build(self.dim) for spec in self.lindblads]

    def generator(self) -> GklsGenerator:
        return GklsGenerator(self.hamiltonian_matrix(), tuple(self.lindblad_matrices()))

    def psi0(self) -> np.ndarray:
        spec = self.initial_state
        kind = spec.get("kind")
        if kind == "basis":
            psi = ops.basis_state(self.dim, int(spec["index"]))
        elif kind == "vector":
            psi = decode_array(spec["amplitudes"], ndim=1)
            if psi.shape != (self.dim,):
                raise ScenarioError(f"initial amplitudes of shape {psi.shape} for dim {self.dim}")
            norm = np.linalg.norm(psi)
            if norm == 0:
                raise ScenarioError("initial state is the zero vector")
            psi = psi / norm
        else:
            raise ScenarioError(f"unknown initial state kind {kind!r}")
        return psi

    def rho0(self) -> np.ndarray:
        psi = self.psi0()
        return np.outer(psi, psi.conj())

    def sse_plan(self, dt: float | None = None, seed: int | None = None) -> SsePlan:
        p = self.plan
        return SsePlan(self.generator(), Scheme(p.scheme), dt if dt is not None else p.dt,
                       p.t_final, p.record_stride, p.seed if seed is None else seed)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "d_max": self.d_max,
            "hamiltonian": [s.to_dict() for s in self.hamiltonian],
            "lindblads": [s.to_dict() for s in self.lindblads],
            "initial_state": self.initial_state,
            "plan": asdict(self.plan),
            "tolerance": self.tolerance,
            "params": self.params,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        try:
            plan = PlanSpec(**data.get("plan", {}))
            Scheme(plan.scheme)
            return cls(
                name=str(data["name"]),
                dim=int(data["dim"]),
                d_max=data.get("d_max"),
                hamiltonian=[OperatorSpec.from_dict(s) for s in data.get("hamiltonian", [])],
                lindblads=[OperatorSpec.from_dict(s) for s in data.get("lindblads", [])],
                initial_state=dict(data["initial_state"]),
                plan=plan,
                tolerance=float(data.get("tolerance", 0.05)),
                params=dict(data.get("params", {})),
            )
        except ScenarioError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"malformed scenario document: {exc}") from exc


def save_scenario(scenario: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario.to_dict(), indent=2))


def load_scenario(path) -> Scenario:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ScenarioError("scenario document must be a JSON object")
    return Scenario.from_dict(data)


def thermal_occupation(beta_omega: float) -> float:
    """Bose occupation ``n = 1 / (exp(beta Omega) - 1)``."""
    return 1.0 / math.expm1(beta_omega)


def _check_rates(**rates) -> None:
    for key, value in rates.items():
        if not value >= 0:
            raise ScenarioError(f"{key} must be non-negative, got {value}")


def _superposition(dim: int, indices) -> dict:
    amps = np.zeros(dim, dtype=complex)
    amps[list(indices)] = 1.0 / math.sqrt(len(indices))
    return {"kind": "vector", "amplitudes": encode_array(amps)}


def phase_damping_qubit(gamma: float = 1.0, omega: float = 0.0) -> Scenario:
    _check_rates(gamma=gamma)
    ham = [OperatorSpec("pauli", omega, index=1)] if omega else []
    return Scenario(
        name="phase_damping_qubit", dim=2, hamiltonian=ham,
        lindblads=[OperatorSpec("pauli", math.sqrt(gamma), index=3)],
        initial_state=_superposition(2, [0, 1]),
        plan=PlanSpec(t_final=2.0),
        params={"gamma": gamma, "omega": omega},
    )


def energy_damping_qubit(gamma_prime: float = 1.0, omega: float = 1.0) -> Scenario:
    _check_rates(gamma_prime=gamma_prime)
    return Scenario(
        name="energy_damping_qubit", dim=2,
        hamiltonian=[OperatorSpec("pauli", omega / 2, index=3)],
        lindblads=[OperatorSpec("sigma_minus", math.sqrt(gamma_prime))],
        initial_state={"kind": "basis", "index": 0},
        plan=PlanSpec(t_final=5.0),
        params={"gamma_prime": gamma_prime, "omega": omega},
    )


def thermal_qubit(gamma_prime: float = 1.0, gamma: float = 0.2, omega: float = 1.0,
                  beta: float | None = None, minus_i_phases: bool = False) -> Scenario:
    """Two-level atom in a thermal field with extra dephasing.

    The default ``beta = ln(2) / omega`` gives ``n = 1``.  With
    ``minus_i_phases`` the decay and pumping operators carry the global factor
    ``-i``; this changes neither the generator nor any verdict.
    """
    _check_rates(gamma_prime=gamma_prime, gamma=gamma)
    if beta is None:
        beta = math.log(2.0) / omega
    if not beta > 0:
        raise ScenarioError(f"beta must be positive, got {beta}")
    n = thermal_occupation(beta * omega)
    phase = -1j if minus_i_phases else 1.0
    return Scenario(
        name="thermal_qubit", dim=2,
        hamiltonian=[OperatorSpec("pauli", omega / 2, index=3)],
        lindblads=[
            OperatorSpec("sigma_minus", phase * math.sqrt(gamma_prime * (1 + n))),
            OperatorSpec("sigma_plus", phase * math.sqrt(gamma_prime * n)),
            OperatorSpec("pauli", math.sqrt(gamma), index=3),
        ],
        initial_state={"kind": "basis", "index": 0},
        # populations relax at rate gamma' (2n + 1); the linear unraveling's
        # Monte Carlo variance grows with time, so the horizon stays short
        plan=PlanSpec(t_final=2.0),
        params={"gamma_prime": gamma_prime, "gamma": gamma, "omega": omega, "beta": beta, "n": n},
    )


def osc_phase_damping(gamma: float = 0.5, omega: float = 1.0, d_max: int = 12) -> Scenario:
    _check_rates(gamma=gamma)
    return Scenario(
        name="osc_phase_damping", dim=d_max, d_max=d_max,
        hamiltonian=[OperatorSpec("number", omega)],
        lindblads=[OperatorSpec("number", math.sqrt(gamma))],
        initial_state=_superposition(d_max, [0, 1, 2]),
        plan=PlanSpec(t_final=2.0),
        params={"gamma": gamma, "omega": omega},
    )


def osc_energy_damping(gamma_prime: float = 1.0, omega: float = 1.0, d_max: int = 12) -> Scenario:
    _check_rates(gamma_prime=gamma_prime)
    start = min(2, d_max - 1)
    return Scenario(
        name="osc_energy_damping", dim=d_max, d_max=d_max,
        hamiltonian=[OperatorSpec("number", omega)],
        lindblads=[OperatorSpec("annihilation", math.sqrt(gamma_prime))],
        initial_state={"kind": "basis", "index": start},
        plan=PlanSpec(t_final=5.0),
        params={"gamma_prime": gamma_prime, "omega": omega},
    )


def osc_thermal(gamma_prime: float = 1.0, gamma: float = 0.1, omega: float = 1.0,
                n: float = 0.5, d_max: int = 12) -> Scenario:
    _check_rates(gamma_prime=gamma_prime, gamma=gamma, n=n)
    beta = math.log1p(1.0 / n) / omega if n > 0 else None
    return Scenario(
        name="osc_thermal", dim=d_max, d_max=d_max,
        hamiltonian=[OperatorSpec("number", omega)],
        lindblads=[
            OperatorSpec("annihilation", math.sqrt(gamma_prime * (1 + n))),
            OperatorSpec("creation", math.sqrt(gamma_prime * n)),
            OperatorSpec("number", math.sqrt(gamma)),
        ],
        initial_state={"kind": "basis", "index": min(2, d_max - 1)},
        # pumping through a^dag makes trajectory norms heavy-tailed
        plan=PlanSpec(t_final=0.5, n_traj=40000),
        params={"gamma_prime": gamma_prime, "gamma": gamma, "omega": omega, "n": n, "beta": beta},
    )


BUILTIN = {
    "phase_damping_qubit": phase_damping_qubit,
    "energy_damping_qubit": energy_damping_qubit,
    "thermal_qubit": thermal_qubit,
    "osc_phase_damping": osc_phase_damping,
    "osc_energy_damping": osc_energy_damping,
    "osc_thermal": osc_thermal,
}


def build_scenario(name: str, **params) -> Scenario:
    try:
        factory = BUILTIN[name]
    except KeyError:
        raise ScenarioError(f"unknown builtin scenario {name!r}; choose from {sorted(BUILTIN)}") from None
    return factory(**params)


def resolve_scenario(ref: str) -> Scenario:
    """Builtin name or path to a scenario document."""
    if ref in BUILTIN:
        return build_scenario(ref)
    if not Path(ref).exists():
        raise ScenarioError(f"{ref!r} is neither a builtin scenario {sorted(BUILTIN)} nor a file")
    return load_scenario(ref)


def leakage(rho) -> float:
    """Population of the highest Fock level."""
    rho = np.asarray(rho)
    return float(rho[-1, -1].real)
