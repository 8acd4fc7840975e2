"""Standard operators.

Qubit convention: basis ``(|excited>, |ground>) = (|0>, |1>)`` with
``sigma_3 |excited> = +|excited>`` and ``sigma_- |excited> = |ground>``.
Oscillators use the truncated Fock basis ``|0>, ..., |d_max - 1>`` with
``a |n> = sqrt(n) |n - 1>``.
"""

from __future__ import annotations

import numpy as np

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = 0.5 * (SIGMA_1 + 1j * SIGMA_2)
SIGMA_MINUS = 0.5 * (SIGMA_1 - 1j * SIGMA_2)
P_PLUS = SIGMA_PLUS @ SIGMA_MINUS
P_MINUS = SIGMA_MINUS @ SIGMA_PLUS

for _m in (SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3, SIGMA_PLUS, SIGMA_MINUS, P_PLUS, P_MINUS):
    _m.flags.writeable = False


def pauli(alpha: int) -> np.ndarray:
    """Pauli matrix ``sigma_alpha`` for alpha in 0..3 (``sigma_0`` is the identity)."""
    if alpha not in (0, 1, 2, 3):
        raise ValueError(f"Pauli index must be 0..3, got {alpha}")
    return (SIGMA_0, SIGMA_1, SIGMA_2, SIGMA_3)[alpha].copy()


def destroy(d_max: int) -> np.ndarray:
    """Truncated annihilation operator on ``d_max`` Fock levels."""
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    return np.diag(np.sqrt(np.arange(1, d_max)), k=1).astype(complex)


def create(d_max: int) -> np.ndarray:
    return destroy(d_max).conj().T


def number(d_max: int) -> np.ndarray:
    return np.diag(np.arange(d_max)).astype(complex)


def basis_state(dim: int, index: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dimension {dim}")
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def bloch_vector(rho) -> np.ndarray:
    """``x_alpha = Tr(rho sigma_alpha)`` for alpha = 1, 2, 3."""
    rho = np.asarray(rho)
    return np.array([np.trace(rho @ s).real for s in (SIGMA_1, SIGMA_2, SIGMA_3)])


def gell_mann_basis(dim: int, include_identity: bool = False) -> list[np.ndarray]:
    """Generalized Gell-Mann matrices, normalized to ``Tr(l_i l_j) = 2 delta_ij``.

    Ordered as symmetric, antisymmetric and diagonal families, so that for
    ``dim = 2`` the result is ``[sigma_1, sigma_2, sigma_3]``.  With
    ``include_identity`` the scaled identity ``sqrt(2/d) 1`` is prepended and the
    list spans all d x d matrices.
    """
    basis = []
    if include_identity:
        basis.append(np.sqrt(2.0 / dim) * np.eye(dim, dtype=complex))
    for j in range(dim):
        for k in range(j + 1, dim):
            sym = np.zeros((dim, dim), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            anti = np.zeros((dim, dim), dtype=complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            basis.extend([sym, anti])
    for l in range(1, dim):
        diag = np.zeros(dim, dtype=complex)
        diag[:l] = 1.0
        diag[l] = -l
        basis.append(np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag))
    return basis


def expand_in_basis(A, basis: list[np.ndarray], tol: float = 1e-10) -> np.ndarray:
    """Coefficients ``c_j`` with ``A = sum_j c_j basis[j]`` for a trace-orthogonal basis.

    Raises ``ValueError`` if ``A`` is not in the span of ``basis``.
    """
    A = np.asarray(A, dtype=complex)
    coeffs = np.array([np.trace(lam @ A) / np.trace(lam @ lam).real for lam in basis])
    residual = A - sum(c * lam for c, lam in zip(coeffs, basis))
    if np.linalg.norm(residual) > tol * max(1.0, np.linalg.norm(A)):
        raise ValueError("operator is not in the span of the basis")
    return coeffs
