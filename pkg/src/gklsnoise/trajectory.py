"""Linear stochastic Schrodinger equations and ensemble averaging.

Three integrators for ``dpsi = -i(H1 - i H2) psi dt - i sum_k L_k psi dW_k``:

* ``ITO_EULER``: Euler-Maruyama on the Ito form with ``H2 = 1/2 sum L_k^dag L_k``.
* ``STRATONOVICH_HEUN``: Heun predictor-corrector on the Stratonovich form.
* ``EXACT_UNITARY``: ``psi -> exp(-i(H1 dt + sum L_k dW_k)) psi``, only for
  Hermitian ``L_k``; norm is conserved in every realization.

States are never renormalized, and ensemble averages use the raw ``|psi><psi|``
so that the trace of the average is the mean squared norm.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from . import linalg
from .errors import DimensionMismatch, NonHermitianLindblad
from .generator import GklsGenerator, StratonovichForm, evolve_exact, h2_ito, to_stratonovich
from .linalg import TOL_HERM
from .noise import WienerBatch, box_muller, make_rng

DEFAULT_BATCH = 500
NOISE_CHUNK = 256


class Scheme(str, enum.Enum):
    ITO_EULER = "ito_euler"
    STRATONOVICH_HEUN = "stratonovich_heun"
    EXACT_UNITARY = "exact_unitary"


def _increments(dW) -> np.ndarray:
    if isinstance(dW, WienerBatch):
        return dW.increments
    return np.asarray(dW, dtype=float)


def _check_shapes(psi: np.ndarray, ops, dW: np.ndarray) -> None:
    d = psi.shape[-1]
    for L in ops:
        if L.shape != (d, d):
            raise DimensionMismatch(f"operator {L.shape} does not act on states of dimension {d}")
    if dW.shape[-1] != len(ops):
        raise DimensionMismatch(f"{dW.shape[-1]} noise increments for {len(ops)} channels")


def _noise_term(psi: np.ndarray, ops, dW: np.ndarray) -> np.ndarray:
    """``-i sum_k dW_k L_k psi`` for single or batched ``psi``."""
    out = np.zeros_like(psi)
    for k, L in enumerate(ops):
        out += dW[..., k, None] * (psi @ L.T)
    return -1j * out


def ito_step(psi, G: GklsGenerator, dW, dt: float) -> np.ndarray:
    """One Euler-Maruyama step of the Ito SSE (no renormalization).

    ``psi`` may be a single state ``(d,)`` or a batch ``(M, d)`` with matching
    increments ``(N,)`` or ``(M, N)``.
    """
    psi = np.asarray(psi, dtype=complex)
    dW = _increments(dW)
    if psi.shape[-1] != G.dim:
        raise DimensionMismatch(f"state of dimension {psi.shape[-1]} for generator of dimension {G.dim}")
    _check_shapes(psi, G.lindblads, dW)
    A = -1j * G.hamiltonian - h2_ito(G)
    return psi + dt * (psi @ A.T) + _noise_term(psi, G.lindblads, dW)


def stratonovich_step(psi, S: StratonovichForm, dW, dt: float) -> np.ndarray:
    """One Heun predictor-corrector step of the Stratonovich SSE."""
    psi = np.asarray(psi, dtype=complex)
    dW = _increments(dW)
    _check_shapes(psi, S.lindblads, dW)
    A = -1j * S.effective_hamiltonian

    def incr(state):
        return dt * (state @ A.T) + _noise_term(state, S.lindblads, dW)

    k1 = incr(psi)
    k2 = incr(psi + k1)
    return psi + 0.5 * (k1 + k2)


def _require_hermitian(ops, tol: float = TOL_HERM) -> None:
    for k, L in enumerate(ops):
        if not linalg.is_hermitian(L, tol):
            raise NonHermitianLindblad(
                f"Lindblad operator {k} is not Hermitian; the noise Hamiltonian would not be Hermitian")


def exact_unitary_step(psi, H1, lindblads, dW, dt: float) -> np.ndarray:
    """``exp(-i(H1 dt + sum_k L_k dW_k)) psi`` for Hermitian ``L_k``."""
    psi = np.asarray(psi, dtype=complex)
    H1 = linalg.as_operator(H1)
    ops = tuple(linalg.as_operator(L) for L in lindblads)
    dW = _increments(dW)
    _check_shapes(psi, ops, dW)
    _require_hermitian(ops)
    return _unitary_apply(psi, H1, ops, dW, dt)


def _unitary_apply(psi, H1, ops, dW, dt):
    K = H1 * dt + sum((dW[..., k, None, None] * L for k, L in enumerate(ops)),
                      np.zeros(dW.shape[:-1] + H1.shape, dtype=complex))
    K = 0.5 * (K + np.swapaxes(K.conj(), -1, -2))
    w, V = np.linalg.eigh(K)
    # psi' = V exp(-i w) V^dag psi
    coeff = np.einsum("...ji,...j->...i", V.conj(), psi)
    return np.einsum("...ij,...j->...i", V, np.exp(-1j * w) * coeff)


@dataclass(frozen=True, eq=False)
class SsePlan:
    generator: GklsGenerator
    scheme: Scheme = Scheme.ITO_EULER
    dt: float = 1e-3
    t_final: float = 1.0
    record_stride: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_final >= self.dt:
            raise ValueError(f"t_final ({self.t_final}) must be at least dt ({self.dt})")
        if int(self.record_stride) < 1:
            raise ValueError("record_stride must be >= 1")
        if self.scheme is Scheme.EXACT_UNITARY:
            _require_hermitian(self.generator.lindblads)

    @property
    def n_steps(self) -> int:
        return int(math.ceil(self.t_final / self.dt - 1e-9))

    @property
    def record_steps(self) -> np.ndarray:
        steps = np.arange(0, self.n_steps + 1, int(self.record_stride))
        if steps[-1] != self.n_steps:
            steps = np.append(steps, self.n_steps)
        return steps

    @property
    def times(self) -> np.ndarray:
        return self.record_steps * self.dt


@dataclass
class TrajectoryRecord:
    times: np.ndarray
    states: np.ndarray
    norms_sq: np.ndarray
    seed_used: tuple


@dataclass
class EnsembleResult:
    n_traj: int
    times: np.ndarray
    rho_series: np.ndarray
    mean_norm_sq: np.ndarray
    norms_sq: Optional[np.ndarray] = field(default=None, repr=False)


def _stepper(plan: SsePlan):
    G, dt = plan.generator, plan.dt
    ops = G.lindblads
    if plan.scheme is Scheme.ITO_EULER:
        A = np.eye(G.dim) + dt * (-1j * G.hamiltonian - h2_ito(G))
        At = A.T.copy()

        def step(psi, dW):
            return psi @ At + _noise_term(psi, ops, dW)
    elif plan.scheme is Scheme.STRATONOVICH_HEUN:
        S = to_stratonovich(G)

        def step(psi, dW):
            return stratonovich_step(psi, S, dW, dt)
    else:
        H1 = G.hamiltonian

        def step(psi, dW):
            return _unitary_apply(psi, H1, ops, dW, dt)
    return step


def _integrate(plan: SsePlan, psi0: np.ndarray, indices: range) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(record_index, batch_states)`` for the trajectories in ``indices``."""
    n_ch = plan.generator.n_channels
    rngs = [make_rng(plan.seed, i) for i in indices]
    psi = np.tile(psi0, (len(rngs), 1))
    step = _stepper(plan)
    sqrt_dt = math.sqrt(plan.dt)
    record_steps = plan.record_steps
    r = 0
    yield r, psi
    r += 1
    n = 0
    while n < plan.n_steps:
        chunk = min(NOISE_CHUNK, plan.n_steps - n)
        if n_ch:
            noise = np.stack([box_muller(g, n_ch, (chunk,)) for g in rngs], axis=1) * sqrt_dt
        else:
            noise = np.zeros((chunk, len(rngs), 0))
        for j in range(chunk):
            psi = step(psi, noise[j])
            n += 1
            if r < len(record_steps) and n == record_steps[r]:
                yield r, psi
                r += 1


def _validate_psi0(plan: SsePlan, psi0) -> np.ndarray:
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (plan.generator.dim,):
        raise DimensionMismatch(f"initial state of shape {psi0.shape} for dimension {plan.generator.dim}")
    if abs(linalg.norm_sq(psi0) - 1.0) > 1e-10:
        raise ValueError("initial state must be normalized")
    return psi0


def run_trajectory(plan: SsePlan, psi0, index: int = 0) -> TrajectoryRecord:
    """Single raw trajectory driven by the same stream as member ``index`` of :func:`run_ensemble`.

    Values agree with the ensemble member up to rounding differences between
    batched and single-state matrix products.
    """
    psi0 = _validate_psi0(plan, psi0)
    states = np.empty((len(plan.record_steps), plan.generator.dim), dtype=complex)
    for r, psi in _integrate(plan, psi0, range(index, index + 1)):
        states[r] = psi[0]
    norms = np.sum(np.abs(states) ** 2, axis=1)
    return TrajectoryRecord(plan.times, states, norms, (plan.seed, index))


def run_ensemble(plan: SsePlan, psi0, n_traj: int, batch_size: int = DEFAULT_BATCH) -> EnsembleResult:
    """Average ``|psi><psi|`` over ``n_traj`` trajectories with independent child streams.

    Trajectory ``i`` always uses stream ``(plan.seed, i)``; batches are summed
    in index order, so the result is deterministic for given
    ``(plan, n_traj, batch_size)``.
    """
    if int(n_traj) < 1:
        raise ValueError("n_traj must be >= 1")
    psi0 = _validate_psi0(plan, psi0)
    d = plan.generator.dim
    n_rec = len(plan.record_steps)
    rho_sum = np.zeros((n_rec, d, d), dtype=complex)
    norms = np.empty((n_traj, n_rec))
    for start in range(0, n_traj, batch_size):
        idx = range(start, min(start + batch_size, n_traj))
        for r, psi in _integrate(plan, psi0, idx):
            rho_sum[r] += psi.T @ psi.conj()
            norms[idx.start:idx.stop, r] = np.sum(np.abs(psi) ** 2, axis=1)
    rho = rho_sum / n_traj
    rho = 0.5 * (rho + np.swapaxes(rho.conj(), -1, -2))
    mean_norm = np.trace(rho, axis1=1, axis2=2).real
    return EnsembleResult(n_traj, plan.times, rho, mean_norm, norms)


def compare_to_exact(ens: EnsembleResult, G: GklsGenerator, rho0, times=None) -> np.ndarray:
    """Trace distance between the ensemble average and ``exp(t L_tot) rho0`` at each recorded time."""
    if times is not None and not np.allclose(np.asarray(times), ens.times, rtol=0, atol=1e-12):
        raise ValueError("time grid of the ensemble does not match the requested grid")
    exact = evolve_exact(G, rho0, ens.times)
    return np.array([linalg.trace_distance(r, e) for r, e in zip(ens.rho_series, exact)])
