"""Random operators and independent oracles shared by the test modules.

The oracles avoid the package's vectorization helpers on purpose: they apply
maps entrywise or through eigendecompositions so that a bug in the
Kronecker-product conventions cannot cancel out.
"""

import numpy as np

from gklsnoise.generator import GklsGenerator


def random_complex(rng, d, scale=1.0):
    return scale * (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)


def random_hermitian(rng, d, scale=1.0):
    A = random_complex(rng, d, scale)
    return 0.5 * (A + A.conj().T)


def random_unitary(rng, d):
    Q, R = np.linalg.qr(random_complex(rng, d))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_normal(rng, d):
    U = random_unitary(rng, d)
    z = rng.normal(size=d) + 1j * rng.normal(size=d)
    return U @ np.diag(z) @ U.conj().T


def random_density(rng, d):
    A = random_complex(rng, d)
    rho = A @ A.conj().T
    return rho / np.trace(rho)


def random_state(rng, d):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def random_generator(rng, d=None, n=None, kind="generic"):
    """Random GKLS generator; ``kind`` is ``generic``, ``hermitian`` or ``mixed``."""
    d = int(rng.integers(2, 5)) if d is None else d
    n = int(rng.integers(1, 4)) if n is None else n
    H = random_hermitian(rng, d)
    if kind == "hermitian":
        Ls = [random_hermitian(rng, d) for _ in range(n)]
    elif kind == "mixed":
        Ls = [random_hermitian(rng, d) if rng.random() < 0.5 else random_complex(rng, d) for _ in range(n)]
    else:
        Ls = [random_complex(rng, d) for _ in range(n)]
    return GklsGenerator(H, Ls)


def lindblad_rhs(H, Ls, rho):
    """``-i[H, rho] + sum_k (L rho L^dag - 1/2 {L^dag L, rho})`` written out."""
    out = -1j * (H @ rho - rho @ H)
    for L in Ls:
        Ld = L.conj().T
        out = out + L @ rho @ Ld - 0.5 * (Ld @ L @ rho + rho @ Ld @ L)
    return out


def lindblad_dual_rhs(Ls, A):
    out = np.zeros_like(A, dtype=complex)
    for L in Ls:
        Ld = L.conj().T
        out = out + Ld @ A @ L - 0.5 * (Ld @ L @ A + A @ Ld @ L)
    return out


def superop_entrywise(f, d):
    """Matrix of ``f`` in the column-stacked elementary basis, built entry by entry."""
    S = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d):
        for i in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            FE = f(E)
            for q in range(d):
                for p in range(d):
                    S[q * d + p, j * d + i] = FE[p, q]
    return S


def expm_eig(M, t=1.0):
    """Matrix exponential through an eigendecomposition; valid for diagonalizable input."""
    w, V = np.linalg.eig(t * np.asarray(M, dtype=complex))
    return V @ np.diag(np.exp(w)) @ np.linalg.inv(V)


def trace_distance(a, b):
    return 0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum()
