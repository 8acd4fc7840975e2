"""Gaussian noise: real Wiener increments and correlated complex increments.

Random streams
--------------
Every stream is a PCG64 generator seeded through ``numpy.random.SeedSequence``.
The stream for trajectory ``i`` of a run seeded with ``seed`` is

    SeedSequence(seed, spawn_key=(i,))

so trajectories are independent of each other and of scheduling order.
Gaussian variates are produced by Box-Muller from the stream's uniform doubles:
each pair ``(u1, u2)`` gives ``r cos(2 pi u2)`` and ``r sin(2 pi u2)`` with
``r = sqrt(-2 log(1 - u1))``.  A draw of ``n`` variates consumes
``ceil(n / 2)`` pairs and drops the surplus sine term when ``n`` is odd.

Complex noises
--------------
``dZ_j = sum_k c_kj dW_k`` has covariance ``<dZ_i^* dZ_j> = a_ij dt`` and
relation matrix ``<dZ_i dZ_j> = b_ij dt`` with ``a = c^dag c`` and
``b = c^T c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import TOL_PSD, dagger

PINV_RTOL = 1e-10


def make_rng(seed: int, index: Optional[int] = None) -> np.random.Generator:
    """Stream for ``seed``, or its child stream number ``index``."""
    if index is None:
        ss = np.random.SeedSequence(seed)
    else:
        ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))


def box_muller(rng: np.random.Generator, n: int, leading: tuple = ()) -> np.ndarray:
    """Standard normals of shape ``leading + (n,)``; one Box-Muller block per trailing vector."""
    pairs = (n + 1) // 2
    u = rng.random(leading + (pairs, 2))
    r = np.sqrt(-2.0 * np.log1p(-u[..., 0]))
    theta = 2.0 * np.pi * u[..., 1]
    z = np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)
    return z.reshape(leading + (2 * pairs,))[..., :n]


@dataclass(frozen=True)
class WienerBatch:
    n_channels: int
    dt: float
    increments: np.ndarray


def sample_wiener(n_channels: int, dt: float, rng: np.random.Generator) -> WienerBatch:
    """Independent increments with mean 0 and variance ``dt``; advances ``rng``."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    dW = np.sqrt(dt) * box_muller(rng, n_channels)
    return WienerBatch(n_channels, dt, dW)


def wiener_path(n_steps: int, n_channels: int, dt: float, rng: np.random.Generator) -> np.ndarray:
    """``(n_steps, n_channels)`` increments, identical to ``n_steps`` calls of :func:`sample_wiener`."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    return np.sqrt(dt) * box_muller(rng, n_channels, (n_steps,))


@dataclass(frozen=True, eq=False)
class ComplexNoiseModel:
    covariance: np.ndarray
    relation: np.ndarray
    coeffs: Optional[np.ndarray] = None

    @property
    def m(self) -> int:
        return self.covariance.shape[0]


def model_from_coeffs(c) -> ComplexNoiseModel:
    """``a = c^dag c`` (covariance) and ``b = c^T c`` (relation matrix)."""
    c = np.atleast_2d(np.asarray(c, dtype=complex))
    a = dagger(c) @ c
    b = c.T @ c
    model = ComplexNoiseModel(0.5 * (a + dagger(a)), 0.5 * (b + b.T), c)
    if not check_picinbono(model.covariance, model.relation):
        raise AssertionError("model built from coefficients violates Picinbono's condition")
    return model


def _support_pinv(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pseudo-inverse on the support of Hermitian ``a`` and the projector onto that support."""
    w, v = np.linalg.eigh(0.5 * (a + dagger(a)))
    wmax = np.abs(w).max() if w.size else 0.0
    keep = w > PINV_RTOL * wmax if wmax > 0 else np.zeros_like(w, dtype=bool)
    vk = v[:, keep]
    return (vk / w[keep]) @ dagger(vk), vk @ dagger(vk)


def check_picinbono(a, b, tol: float = TOL_PSD) -> bool:
    """Whether ``(a, b)`` is the covariance/relation pair of some complex Gaussian vector.

    With ``a_ij = <Z_i^* Z_j>`` the second-moment matrix of ``(Z^*, Z)`` is
    ``[[a, b^*], [b, a^*]]``; it is positive semi-definite iff ``a >= 0``,
    ``range(b^*)`` lies in the support of ``a`` and ``a^* - b a^+ b^* >= 0``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.shape != a.shape:
        raise ValueError(f"shape mismatch: a {a.shape}, b {b.shape}")
    scale = max(1.0, np.linalg.norm(a))
    if np.linalg.norm(a - dagger(a)) > tol * scale or np.linalg.norm(b - b.T) > tol * scale:
        return False
    if np.linalg.eigvalsh(0.5 * (a + dagger(a))).min() < -tol * scale:
        return False
    a_pinv, proj = _support_pinv(a)
    if np.linalg.norm(b.conj() - proj @ b.conj()) > np.sqrt(tol) * scale:
        return False
    schur = a.conj() - b @ a_pinv @ b.conj()
    return bool(np.linalg.eigvalsh(0.5 * (schur + dagger(schur))).min() >= -tol * scale)


@dataclass(frozen=True, eq=False)
class MinimalReduction:
    """``a_ij = sum_k g_k U*_ki U_kj`` with the matching relation ``b_ij = sum_k g_k U_ki U_kj``."""

    unitary: np.ndarray
    gammas: np.ndarray
    chosen_b: np.ndarray
    active_count: int

    def covariance(self) -> np.ndarray:
        return dagger(self.unitary) @ np.diag(self.gammas) @ self.unitary

    def as_model(self) -> ComplexNoiseModel:
        """Noise model driven by the ``active_count`` real noises only."""
        g = self.gammas[: self.active_count]
        c = np.sqrt(g)[:, None] * self.unitary[: self.active_count]
        return ComplexNoiseModel(self.covariance(), self.chosen_b, c)

    def rotated(self, dZ) -> np.ndarray:
        """Map increments to the frame where they equal ``sqrt(g_k) dW_k`` (real)."""
        return self.unitary.conj() @ np.asarray(dZ)


class NotPositiveSemidefinite(ValueError):
    def __init__(self, eigenvalue: float):
        super().__init__(f"covariance matrix is not positive semi-definite (eigenvalue {eigenvalue:.6g})")
        self.eigenvalue = eigenvalue


def minimal_reduction(a, tol: float = TOL_PSD) -> MinimalReduction:
    """Diagonalize the covariance and pick the relation matrix that uses ``rank(a)`` real noises.

    Eigenvalues are sorted in descending order; each eigenvector's phase is
    fixed by making its largest-magnitude component real and positive, so the
    returned unitary is reproducible.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"covariance must be square, got {a.shape}")
    scale = max(1.0, np.linalg.norm(a))
    if np.linalg.norm(a - dagger(a)) > tol * scale:
        raise ValueError("covariance matrix is not Hermitian")
    w, v = np.linalg.eigh(0.5 * (a + dagger(a)))
    if w.size and w.min() < -tol * scale:
        raise NotPositiveSemidefinite(float(w.min()))
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    for k in range(v.shape[1]):
        j = np.argmax(np.abs(v[:, k]))
        if abs(v[j, k]) > 0:
            v[:, k] *= np.conj(v[j, k]) / abs(v[j, k])
    gammas = np.clip(w, 0.0, None)
    active = int(np.sum(gammas > tol * scale))
    gammas[active:] = 0.0
    U = dagger(v)
    chosen_b = U.T @ np.diag(gammas) @ U
    return MinimalReduction(U, gammas, chosen_b, active)


def sample_complex(model: ComplexNoiseModel, dt: float, rng: np.random.Generator) -> np.ndarray:
    """``dZ = c^T dW`` for a fresh batch of ``N`` real Wiener increments."""
    if model.coeffs is None:
        raise ValueError("model has no coefficient matrix; build it with model_from_coeffs or as_model()")
    c = model.coeffs
    dW = sample_wiener(c.shape[0], dt, rng).increments
    return c.T @ dW
