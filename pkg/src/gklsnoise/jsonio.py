"""JSON encoding of complex arrays as ``[re, im]`` pairs (row-major)."""

from __future__ import annotations

import numpy as np


def encode_complex(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def encode_array(A) -> list:
    A = np.asarray(A, dtype=complex)
    if A.ndim == 0:
        return encode_complex(A)
    return [encode_array(row) for row in A]


def decode_complex(x) -> complex:
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x):
        return complex(x[0], x[1])
    raise ValueError(f"expected a number or an [re, im] pair, got {x!r}")


def decode_array(data, ndim: int | None = None) -> np.ndarray:
    """Inverse of :func:`encode_array`; plain real numbers are also accepted.

    Without ``ndim`` a trailing length-2 list is always read as ``[re, im]``.
    With ``ndim`` the expected rank decides: a real array of rank ``ndim`` is
    taken as is, one of rank ``ndim + 1`` with trailing length 2 as pairs.
    """
    if ndim is not None:
        try:
            arr = np.asarray(data, dtype=float)
        except (TypeError, ValueError):
            arr = None
        if arr is not None and arr.ndim == ndim:
            return arr.astype(complex)
        if arr is not None and arr.ndim == ndim + 1 and arr.shape[-1] == 2:
            return arr[..., 0] + 1j * arr[..., 1]

    def walk(x):
        try:
            return decode_complex(x)
        except ValueError:
            if not isinstance(x, (list, tuple)):
                raise
            return [walk(v) for v in x]

    out = np.array(walk(data), dtype=complex)
    if ndim is not None and out.ndim != ndim:
        raise ValueError(f"expected an array of rank {ndim}, got shape {out.shape}")
    return out
