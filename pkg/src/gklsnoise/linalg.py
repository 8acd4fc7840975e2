"""Dense complex linear algebra and superoperator machinery.

Operators, state vectors and density matrices are plain ``numpy`` arrays of
complex dtype.  Superoperators act on *column-stacked* density matrices:
``vec(rho) = rho.reshape(-1, order="F")``, so that

    vec(A @ rho @ B) = kron(B.T, A) @ vec(rho).

This convention is used everywhere in the package.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch

TOL_HERM = 1e-10
TOL_NORM = 1e-10
TOL_PSD = 1e-9
TOL_NULL = 1e-9


def as_operator(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"operator must be square, got shape {A.shape}")
    return A


def _check_same_dim(*ops: np.ndarray) -> None:
    shapes = {op.shape for op in ops}
    if len(shapes) != 1:
        raise DimensionMismatch(f"dimension mismatch: {sorted(shapes)}")


def dagger(A) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(A).conj().T


def commutator(A, B) -> np.ndarray:
    A, B = as_operator(A), as_operator(B)
    _check_same_dim(A, B)
    return A @ B - B @ A


def anticommutator(A, B) -> np.ndarray:
    A, B = as_operator(A), as_operator(B)
    _check_same_dim(A, B)
    return A @ B + B @ A


def is_hermitian(A, tol: float = TOL_HERM) -> bool:
    """``||A - A^dag||_F <= tol * max(1, ||A||_F)``."""
    A = as_operator(A)
    scale = max(1.0, np.linalg.norm(A))
    return bool(np.linalg.norm(A - dagger(A)) <= tol * scale)


def is_normal(A, tol: float = TOL_HERM) -> bool:
    """``||A A^dag - A^dag A||_F <= tol * max(1, ||A||_F^2)``."""
    A = as_operator(A)
    scale = max(1.0, np.linalg.norm(A) ** 2)
    return bool(np.linalg.norm(commutator(A, dagger(A))) <= tol * scale)


def vec(rho) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v, dim: int | None = None) -> np.ndarray:
    v = np.asarray(v)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise DimensionMismatch(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape((dim, dim), order="F")


def elementary_basis(dim: int) -> list[np.ndarray]:
    """Matrix units ``E_j`` ordered so that ``vec(E_j)`` is the j-th unit vector."""
    basis = []
    for j in range(dim * dim):
        e = np.zeros(dim * dim, dtype=complex)
        e[j] = 1.0
        basis.append(unvec(e, dim))
    return basis


def superop_of_map(f: Callable[[np.ndarray], np.ndarray], dim: int) -> np.ndarray:
    """Matrix of a linear map on d x d matrices (column j = vec(f(E_j)))."""
    cols = [vec(as_operator(f(E))) for E in elementary_basis(dim)]
    return np.stack(cols, axis=1)


def spre(A) -> np.ndarray:
    """Superoperator of ``rho -> A rho``."""
    A = as_operator(A)
    return np.kron(np.eye(A.shape[0]), A)


def spost(B) -> np.ndarray:
    """Superoperator of ``rho -> rho B``."""
    B = as_operator(B)
    return np.kron(B.T, np.eye(B.shape[0]))


def sprepost(A, B) -> np.ndarray:
    """Superoperator of ``rho -> A rho B``."""
    A, B = as_operator(A), as_operator(B)
    _check_same_dim(A, B)
    return np.kron(B.T, A)


def apply_superop(S, rho) -> np.ndarray:
    rho = as_operator(rho)
    return unvec(np.asarray(S) @ vec(rho), rho.shape[0])


def expm(M, t: float = 1.0) -> np.ndarray:
    """Matrix exponential ``exp(t M)`` of an operator or superoperator.

    Uses scaling and squaring with Pade approximants, which stays accurate for
    the non-normal matrices typical of Liouvillians.
    """
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)) or not np.isfinite(t):
        raise ValueError("expm requires finite entries")
    return scipy.linalg.expm(t * M)


def null_space(M, tol: float = TOL_NULL) -> list[np.ndarray]:
    """Orthonormal kernel basis of a superoperator, each element un-vectorized.

    A singular value counts as zero when it is ``<= tol * sigma_max``.  The
    zero matrix has the whole space as its kernel.
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[1]
    dim = int(round(np.sqrt(n)))
    _, s, vh = np.linalg.svd(M)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > tol * smax))
    kernel = vh[rank:].conj()
    return [unvec(v, dim) for v in kernel]


def hermitian_part(A) -> np.ndarray:
    A = np.asarray(A)
    return 0.5 * (A + dagger(A))


def trace_distance(rho, sigma) -> float:
    """``1/2 ||rho - sigma||_1`` for Hermitian arguments."""
    diff = hermitian_part(as_operator(rho) - as_operator(sigma))
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def is_density_matrix(rho, tol_herm: float = TOL_HERM, tol_trace: float = TOL_NORM,
                      tol_psd: float = TOL_PSD) -> bool:
    rho = as_operator(rho)
    if not is_hermitian(rho, tol_herm):
        return False
    if abs(np.trace(rho) - 1.0) > tol_trace:
        return False
    return bool(np.linalg.eigvalsh(hermitian_part(rho)).min() >= -tol_psd)


def choi_matrix(S) -> np.ndarray:
    """Choi matrix ``sum_ij E_ij (x) Phi(E_ij)`` of a superoperator ``Phi``."""
    S = np.asarray(S)
    dim = int(round(np.sqrt(S.shape[0])))
    choi = np.zeros((dim * dim, dim * dim), dtype=complex)
    for E in elementary_basis(dim):
        choi += np.kron(E, apply_superop(S, E))
    return choi


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def norm_sq(psi) -> float:
    psi = np.asarray(psi)
    return float(np.vdot(psi, psi).real)
