"""Dephasing vs. decay taxonomy of GKLS channels.

A single channel ``L`` is dephasing when some orthonormal basis ``|e_n>`` has
every projector ``|e_n><e_n|`` annihilated by the channel; that happens exactly
when ``L`` is normal.  A single channel is self-dual exactly when
``L^dag = exp(i alpha) L``.  A self-dual multichannel dissipator can always be
rewritten with Hermitian Lindblad operators ``X_k, Y_k`` where
``L_k = X_k + i Y_k``, i.e. as a sum of dephasing channels driven by classical
(real, Hermitian-coupled) noise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from . import linalg
from .errors import NotSelfDual
from .jsonio import encode_array
from .generator import GklsGenerator, apply, is_self_dual, superops_equal, to_stratonovich
from .linalg import TOL_HERM, TOL_NULL, dagger


class ChannelKind(str, enum.Enum):
    DEPHASING = "Dephasing"
    DECAY = "Decay"


@dataclass
class ChannelVerdict:
    kind: ChannelKind
    stable_basis: Optional[list] = None
    self_dual_phase: Optional[float] = None
    certificate_residual: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "stable_basis": None if self.stable_basis is None
            else [encode_array(v) for v in self.stable_basis],
            "self_dual_phase": self.self_dual_phase,
            "certificate_residual": self.certificate_residual,
        }


@dataclass
class ClassificationReport:
    generator_self_dual: bool
    per_channel: list
    hermitian_decomposition: Optional[list]
    classical_noise_dilation: bool
    channels_commuting: bool
    lindblads_hermitian: bool
    h2s_norm: float
    consistent: bool = True
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "generator_self_dual": self.generator_self_dual,
            "classical_noise_dilation": self.classical_noise_dilation,
            "lindblads_hermitian": self.lindblads_hermitian,
            "stratonovich_h2s_norm": self.h2s_norm,
            "channels_commuting": self.channels_commuting,
            "per_channel": [v.to_dict() for v in self.per_channel],
            "hermitian_decomposition": None if self.hermitian_decomposition is None
            else [encode_array(X) for X in self.hermitian_decomposition],
            "consistent": self.consistent,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class PhaseFit:
    """Result of :func:`self_dual_phase`.

    ``alpha`` is ``None`` when no phase exists; ``degenerate`` marks the zero
    operator, for which every phase works and none is reported.
    """

    alpha: Optional[float]
    degenerate: bool = False

    @property
    def found(self) -> bool:
        return self.alpha is not None


def _canonical_angle(alpha: float) -> float:
    alpha = float(np.angle(np.exp(1j * alpha)))
    return np.pi if alpha <= -np.pi else alpha


def self_dual_phase(L, tol: float = TOL_HERM) -> PhaseFit:
    """Find ``alpha`` in (-pi, pi] with ``L^dag = exp(i alpha) L``.

    The phase is read off the largest-magnitude entry and then verified on the
    whole matrix.
    """
    L = linalg.as_operator(L)
    scale = np.linalg.norm(L)
    if scale == 0.0:
        return PhaseFit(None, degenerate=True)
    p, q = np.unravel_index(np.argmax(np.abs(L)), L.shape)
    ratio = np.conj(L[q, p]) / L[p, q]
    if abs(abs(ratio) - 1.0) > np.sqrt(tol):
        return PhaseFit(None)
    alpha = _canonical_angle(np.angle(ratio))
    if np.linalg.norm(dagger(L) - np.exp(1j * alpha) * L) > tol * max(1.0, scale):
        return PhaseFit(None)
    return PhaseFit(alpha)


def _channel_residual(L: np.ndarray, basis: list) -> float:
    G = GklsGenerator.dissipative([L])
    return max(np.linalg.norm(apply(G, linalg.projector(e))) for e in basis)


def classify_single(L, tol: float = TOL_HERM) -> ChannelVerdict:
    """Dephasing iff ``L`` is normal; the stable basis is an eigenbasis of ``L``.

    For degenerate eigenvalues any orthonormal basis of each eigenspace is
    stable; the one returned comes from a complex Schur decomposition, which is
    unitary and diagonal for normal input.
    """
    L = linalg.as_operator(L)
    phase = self_dual_phase(L, tol)
    alpha = phase.alpha
    if not linalg.is_normal(L, tol):
        return ChannelVerdict(ChannelKind.DECAY, None, alpha)
    _, Z = scipy.linalg.schur(L, output="complex")
    basis = [Z[:, n].copy() for n in range(L.shape[0])]
    residual = _channel_residual(L, basis)
    return ChannelVerdict(ChannelKind.DEPHASING, basis, alpha, residual)


def hermitian_components(L) -> tuple[np.ndarray, np.ndarray]:
    """``(X, Y)`` Hermitian with ``L = X + i Y``."""
    L = linalg.as_operator(L)
    return 0.5 * (L + dagger(L)), (L - dagger(L)) / 2j


def decompose_self_dual(G: GklsGenerator, tol: float = TOL_NULL) -> list[np.ndarray]:
    """Hermitian Lindblad operators reproducing the dissipator of a self-dual ``G``.

    Returns ``X_k`` and ``Y_k`` for each ``L_k = X_k + i Y_k``, dropping zero
    members.  Raises :class:`NotSelfDual` if ``G`` is not self-dual.
    """
    if not is_self_dual(G, tol):
        raise NotSelfDual("dissipator is not self-dual; no Hermitian decomposition exists")
    scale = max([1.0] + [np.linalg.norm(L) for L in G.lindblads])
    out = []
    for L in G.lindblads:
        for part in hermitian_components(L):
            if np.linalg.norm(part) > 1e-14 * scale:
                out.append(part)
    return out


def _mutually_commuting(ops, tol: float) -> bool:
    for i, A in enumerate(ops):
        for B in ops[i + 1:]:
            scale = max(1.0, np.linalg.norm(A) * np.linalg.norm(B))
            if np.linalg.norm(linalg.commutator(A, B)) > tol * scale:
                return False
    return True


def classify_generator(G: GklsGenerator, tol: float = TOL_NULL) -> ClassificationReport:
    """Self-duality, per-channel verdicts and, if self-dual, the Hermitian decomposition.

    A joint stable basis is never claimed; ``channels_commuting`` only reports
    whether the Lindblad operators commute pairwise.
    """
    self_dual = is_self_dual(G, tol)
    verdicts = [classify_single(L, TOL_HERM) for L in G.lindblads]
    lindblads_hermitian = all(linalg.is_hermitian(L, TOL_HERM) for L in G.lindblads)
    h2s_norm = float(np.linalg.norm(to_stratonovich(G).h2s))
    decomposition = None
    notes = []
    consistent = True
    if self_dual:
        try:
            decomposition = decompose_self_dual(G, tol)
        except NotSelfDual:
            consistent = False
            notes.append("self-dual check passed but decomposition rejected the generator")
        else:
            rebuilt = GklsGenerator.dissipative(decomposition, G.dim)
            if not superops_equal(G.dissipator_superop, rebuilt.dissipator_superop, tol):
                consistent = False
                notes.append("Hermitian decomposition does not rebuild the dissipator")
    if lindblads_hermitian and not self_dual:
        consistent = False
        notes.append("Hermitian Lindblad operators but dissipator reported non-self-dual")
    if G.exceeds_channel_bound:
        notes.append(f"{G.n_channels} channels exceed d^2 - 1 = {G.dim ** 2 - 1}; description is redundant")
    for L, verdict in zip(G.lindblads, verdicts):
        residual = verdict.certificate_residual
        if residual is not None and residual > 1e-9 * max(1.0, np.linalg.norm(L) ** 2):
            notes.append(f"stable-basis residual {residual:.3g}")
    dilation = self_dual and decomposition is not None
    return ClassificationReport(
        generator_self_dual=self_dual,
        per_channel=verdicts,
        hermitian_decomposition=decomposition,
        classical_noise_dilation=dilation,
        channels_commuting=_mutually_commuting(list(G.lindblads), TOL_HERM),
        lindblads_hermitian=lindblads_hermitian,
        h2s_norm=h2s_norm,
        consistent=consistent,
        notes=notes,
    )
