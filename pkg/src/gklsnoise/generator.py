"""GKLS generators, their duals, and the Ito/Stratonovich Hamiltonians.

The generator is

    d rho/dt = -i[H1, rho] - 1/2 sum_k ({L_k^dag L_k, rho} - 2 L_k rho L_k^dag)

with the dissipative part written ``D`` below and its Heisenberg-picture dual
``D#`` defined by ``Tr[(D rho) A] = Tr[rho (D# A)]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Sequence, Union

import numpy as np

from . import linalg
from .errors import DimensionMismatch
from .linalg import TOL_HERM, TOL_NULL, dagger


def _frozen(A) -> np.ndarray:
    A = np.array(A, dtype=complex)
    A.flags.writeable = False
    return A


@dataclass(frozen=True, eq=False)
class GklsGenerator:
    """Hamiltonian ``H1`` plus an ordered list of Lindblad operators ``L_k``.

    More than ``d**2 - 1`` channels are accepted; ``exceeds_channel_bound``
    flags such (necessarily redundant) descriptions.
    """

    hamiltonian: np.ndarray
    lindblads: tuple = field(default_factory=tuple)

    def __post_init__(self):
        H = linalg.as_operator(self.hamiltonian)
        if not linalg.is_hermitian(H, TOL_HERM):
            raise ValueError("Hamiltonian must be Hermitian")
        ops = tuple(_frozen(linalg.as_operator(L)) for L in self.lindblads)
        for L in ops:
            if L.shape != H.shape:
                raise DimensionMismatch(
                    f"Lindblad operator of shape {L.shape} does not match Hamiltonian {H.shape}")
        object.__setattr__(self, "hamiltonian", _frozen(H))
        object.__setattr__(self, "lindblads", ops)

    @classmethod
    def dissipative(cls, lindblads: Sequence, dim: int | None = None) -> "GklsGenerator":
        """Generator with ``H1 = 0``."""
        if dim is None:
            if not lindblads:
                raise ValueError("dim is required when there are no Lindblad operators")
            dim = np.asarray(lindblads[0]).shape[0]
        return cls(np.zeros((dim, dim), dtype=complex), tuple(lindblads))

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    @property
    def n_channels(self) -> int:
        return len(self.lindblads)

    @property
    def exceeds_channel_bound(self) -> bool:
        return self.n_channels > self.dim ** 2 - 1

    def with_hamiltonian(self, H) -> "GklsGenerator":
        return GklsGenerator(H, self.lindblads)

    @cached_property
    def dissipator_superop(self) -> np.ndarray:
        d = self.dim
        S = np.zeros((d * d, d * d), dtype=complex)
        for L in self.lindblads:
            LdL = dagger(L) @ L
            S += linalg.sprepost(L, dagger(L)) - 0.5 * (linalg.spre(LdL) + linalg.spost(LdL))
        return S

    @cached_property
    def dual_dissipator_superop(self) -> np.ndarray:
        d = self.dim
        S = np.zeros((d * d, d * d), dtype=complex)
        for L in self.lindblads:
            LdL = dagger(L) @ L
            S += linalg.sprepost(dagger(L), L) - 0.5 * (linalg.spre(LdL) + linalg.spost(LdL))
        return S

    @cached_property
    def hamiltonian_superop(self) -> np.ndarray:
        H = self.hamiltonian
        return -1j * (linalg.spre(H) - linalg.spost(H))

    @cached_property
    def liouvillian(self) -> np.ndarray:
        """Superoperator of the full generator (Hamiltonian plus dissipator)."""
        return self.hamiltonian_superop + self.dissipator_superop


@dataclass(frozen=True, eq=False)
class StratonovichForm:
    """Hamiltonians of the Stratonovich SSE ``dpsi = -i(H1S - i H2S) psi dt - i sum L_k psi o dW_k``."""

    h1s: np.ndarray
    h2s: np.ndarray
    lindblads: tuple

    @property
    def effective_hamiltonian(self) -> np.ndarray:
        return self.h1s - 1j * self.h2s

    def ito_effective_hamiltonian(self) -> np.ndarray:
        """Recover ``H1 - i H2`` of the Ito form by removing the ``(i/2) sum L_k^2`` shift."""
        shift = sum((L @ L for L in self.lindblads), np.zeros_like(self.h1s))
        return self.effective_hamiltonian - 0.5j * shift


def _check_dim(G: GklsGenerator, A) -> np.ndarray:
    A = linalg.as_operator(A)
    if A.shape != G.hamiltonian.shape:
        raise DimensionMismatch(f"operand of shape {A.shape} does not match generator dimension {G.dim}")
    return A


def apply(G: GklsGenerator, rho, include_hamiltonian: bool = True) -> np.ndarray:
    """Time derivative ``d rho / dt`` under ``G``."""
    rho = _check_dim(G, rho)
    out = np.zeros_like(rho)
    if include_hamiltonian:
        out += -1j * linalg.commutator(G.hamiltonian, rho)
    for L in G.lindblads:
        Ld = dagger(L)
        out += L @ rho @ Ld - 0.5 * linalg.anticommutator(Ld @ L, rho)
    return out


def apply_dual(G: GklsGenerator, A, include_hamiltonian: bool = True) -> np.ndarray:
    """Heisenberg-picture generator acting on an observable ``A``."""
    A = _check_dim(G, A)
    out = np.zeros_like(A)
    if include_hamiltonian:
        out += 1j * linalg.commutator(G.hamiltonian, A)
    for L in G.lindblads:
        Ld = dagger(L)
        out += Ld @ A @ L - 0.5 * linalg.anticommutator(Ld @ L, A)
    return out


def h2_ito(G: GklsGenerator) -> np.ndarray:
    """``H2 = 1/2 sum_k L_k^dag L_k``, the anti-Hermitian drift that conserves probability on average."""
    H2 = np.zeros((G.dim, G.dim), dtype=complex)
    for L in G.lindblads:
        H2 += dagger(L) @ L
    return 0.5 * H2


def to_stratonovich(G: GklsGenerator) -> StratonovichForm:
    """Convert the Ito SSE of ``G`` to Stratonovich form."""
    sq = np.zeros((G.dim, G.dim), dtype=complex)
    for L in G.lindblads:
        sq += L @ L
    im_part = (sq - dagger(sq)) / 2j
    re_part = (sq + dagger(sq)) / 2
    h1s = G.hamiltonian - 0.5 * im_part
    h2s = h2_ito(G) - 0.5 * re_part
    return StratonovichForm(_frozen(linalg.hermitian_part(h1s)),
                            _frozen(linalg.hermitian_part(h2s)), G.lindblads)


def superops_equal(A, B, tol: float = TOL_NULL) -> bool:
    """Frobenius equality with relative tolerance ``tol * max(1, ||A||_F)``."""
    A, B = np.asarray(A), np.asarray(B)
    return bool(np.linalg.norm(A - B) <= tol * max(1.0, np.linalg.norm(A)))


def is_self_dual(G: GklsGenerator, tol: float = TOL_NULL) -> bool:
    """Whether the dissipative part equals its dual (the Hamiltonian part is ignored)."""
    return superops_equal(G.dissipator_superop, G.dual_dissipator_superop, tol)


MapLike = Union[GklsGenerator, np.ndarray, Callable[[np.ndarray], np.ndarray]]


def is_trace_preserving(G: MapLike, tol: float = TOL_HERM, dim: int | None = None) -> bool:
    """Check that the dual annihilates the identity.

    ``G`` may be a :class:`GklsGenerator`, a superoperator matrix, or a linear
    callable on d x d matrices (then ``dim`` is required).
    """
    if isinstance(G, GklsGenerator):
        residual = apply_dual(G, np.eye(G.dim))
        scale = max(1.0, np.linalg.norm(G.liouvillian))
        return bool(np.linalg.norm(residual) <= tol * scale)
    if callable(G):
        if dim is None:
            raise ValueError("dim is required for a callable map")
        S = linalg.superop_of_map(G, dim)
    else:
        S = np.asarray(G, dtype=complex)
    d = int(round(np.sqrt(S.shape[0])))
    residual = dagger(S) @ linalg.vec(np.eye(d))
    return bool(np.linalg.norm(residual) <= tol * max(1.0, np.linalg.norm(S)))


def evolve_exact(G: GklsGenerator, rho0, times: Sequence[float]) -> list[np.ndarray]:
    """``rho(t) = exp(t L_tot) rho0`` at each requested time.

    Times must be sorted and non-negative.  Consecutive snapshots are obtained
    by propagating with ``exp((t_{i+1} - t_i) L_tot)``; propagators are reused
    across equal gaps.
    """
    rho0 = _check_dim(G, rho0)
    times = np.asarray(times, dtype=float)
    if times.size and (times[0] < 0 or np.any(np.diff(times) < 0)):
        raise ValueError("times must be sorted and non-negative")
    S = G.liouvillian
    cache: dict[float, np.ndarray] = {}

    def propagator(gap: float) -> np.ndarray:
        key = float(np.round(gap, 15))
        if key not in cache:
            cache[key] = linalg.expm(S, gap)
        return cache[key]

    out = []
    v = linalg.vec(rho0)
    t_prev = 0.0
    for t in times:
        gap = t - t_prev
        if gap > 0:
            v = propagator(gap) @ v
        t_prev = t
        out.append(linalg.unvec(v, G.dim).copy())
    return out


def kernel_projector(S, tol: float = TOL_NULL) -> np.ndarray:
    """Spectral projector onto the kernel of a superoperator with semisimple zero eigenvalue.

    Built from right and left kernel bases as ``R (Lh R)^-1 Lh``.  For a GKLS
    generator this is the long-time (Cesaro-averaged) limit of ``exp(t L_tot)``,
    so it maps states to stationary states.
    """
    S = np.asarray(S, dtype=complex)
    right = np.stack([linalg.vec(K) for K in linalg.null_space(S, tol)], axis=1)
    left = np.stack([linalg.vec(K) for K in linalg.null_space(dagger(S), tol)], axis=1)
    return right @ np.linalg.solve(dagger(left) @ right, dagger(left))


def _probe_states(dim: int):
    for j in range(dim):
        yield np.eye(dim, dtype=complex)[j]
    for j in range(dim):
        for k in range(j + 1, dim):
            for phase in (1.0, 1j):
                psi = np.zeros(dim, dtype=complex)
                psi[j], psi[k] = 1.0, phase
                yield psi / np.sqrt(2.0)


def stationary_states(G: GklsGenerator, tol: float = TOL_NULL) -> list[np.ndarray]:
    """Physical stationary states spanning the kernel of the full generator.

    A one-dimensional kernel element is Hermitized and trace-normalized.  For a
    degenerate kernel a basis of states is returned (not a unique state): the
    kernel projector is applied to pure probe states and a linearly independent
    subset is kept, so every returned element is positive with unit trace.
    """
    d = G.dim
    kernel = linalg.null_space(G.liouvillian, tol)
    if not kernel:
        return []
    if len(kernel) == 1:
        K = kernel[0]
        tr = np.trace(K)
        if abs(tr) <= 1e-12:
            return []
        return [linalg.hermitian_part(K / tr)]
    P0 = kernel_projector(G.liouvillian, tol)
    states: list[np.ndarray] = []
    coords = np.zeros((0, 2 * d * d))
    for psi in _probe_states(d):
        rho = linalg.hermitian_part(linalg.apply_superop(P0, linalg.projector(psi)))
        rho = rho / np.trace(rho).real
        x = np.concatenate([rho.real.ravel(), rho.imag.ravel()])
        trial = np.vstack([coords, x])
        if np.linalg.matrix_rank(trial, tol=1e-8) > coords.shape[0]:
            coords = trial
            states.append(rho)
        if len(states) == len(kernel):
            break
    return states


@dataclass(frozen=True, eq=False)
class KossakowskiForm:
    """Dissipator expanded in a Hermitian operator basis with coefficient matrix ``a``.

    ``D rho = -1/2 sum_ij a_ij ({l_i l_j, rho} - 2 l_j rho l_i)``.
    """

    basis: tuple
    matrix: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(_frozen(b) for b in self.basis))
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        m = len(self.basis)
        if self.matrix.shape != (m, m):
            raise DimensionMismatch(f"coefficient matrix {self.matrix.shape} does not match basis size {m}")

    @property
    def dim(self) -> int:
        return self.basis[0].shape[0]

    @classmethod
    def from_generator(cls, G: GklsGenerator, basis: Sequence[np.ndarray]) -> "KossakowskiForm":
        from .operators import expand_in_basis

        c = np.array([expand_in_basis(L, list(basis)) for L in G.lindblads]).reshape(G.n_channels, len(basis))
        return cls(tuple(basis), c.conj().T @ c)

    def superop(self) -> np.ndarray:
        d = self.dim
        S = np.zeros((d * d, d * d), dtype=complex)
        for i, li in enumerate(self.basis):
            for j, lj in enumerate(self.basis):
                aij = self.matrix[i, j]
                if aij == 0:
                    continue
                prod = li @ lj
                S += aij * (linalg.sprepost(lj, li) - 0.5 * (linalg.spre(prod) + linalg.spost(prod)))
        return S

    def to_generator(self, hamiltonian=None, tol: float = 1e-12) -> GklsGenerator:
        """Diagonal form: ``L_k = sqrt(g_k) sum_j U_kj l_j`` from ``a = U^dag diag(g) U``."""
        g, V = np.linalg.eigh(linalg.hermitian_part(self.matrix))
        U = dagger(V)
        ops = []
        scale = max(1.0, float(np.abs(g).max()) if g.size else 1.0)
        for k in range(len(g)):
            if g[k] <= tol * scale:
                continue
            ops.append(np.sqrt(g[k]) * sum(U[k, j] * lam for j, lam in enumerate(self.basis)))
        H = np.zeros((self.dim, self.dim), dtype=complex) if hamiltonian is None else hamiltonian
        return GklsGenerator(H, tuple(ops))
