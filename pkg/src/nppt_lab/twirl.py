"""Diagonal and isotropic twirls.

The continuous average over U_theta (x) U_theta* is a pinching: entry
<ij|X|kl> picks up exp(i(t_i - t_j - t_k + t_l)), which averages to zero
unless (i=k, j=l) or (i=j, k=l).  :func:`diagonal_twirl` applies that
pattern directly; :func:`diagonal_twirl_oracle` averages explicit
conjugations over a finite angle grid and shares no code with it.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import kernels
from .linalg import DimensionError, HermitianOperator

__all__ = [
    "diagonal_twirl",
    "diagonal_twirl_oracle",
    "n_copy_diagonal_twirl",
    "isotropic_twirl",
    "is_diagonal_invariant",
]


def _copy_structure(x: HermitianOperator) -> tuple[int, int]:
    """Return (d, n) for an operator laid out as A1,B1,...,An,Bn with equal dims."""
    dims = x.dims
    if len(dims) % 2:
        raise DimensionError("operator is not made of A,B copy pairs")
    d = dims[0].dim
    for c in range(len(dims) // 2):
        a, b = dims[2 * c], dims[2 * c + 1]
        if a.side != "A" or b.side != "B" or a.copy != b.copy:
            raise DimensionError("dims must be ordered A1,B1,A2,B2,...")
        if a.dim != d or b.dim != d:
            raise DimensionError("all local dimensions must be equal")
    return d, len(dims) // 2


def diagonal_twirl(x: HermitianOperator) -> HermitianOperator:
    d, n = _copy_structure(x)
    if n != 1:
        raise DimensionError("single A,B pair expected; use n_copy_diagonal_twirl")
    return HermitianOperator(x.dims, kernels.pinch(x.matrix, d, 1))


def n_copy_diagonal_twirl(x: HermitianOperator) -> HermitianOperator:
    d, n = _copy_structure(x)
    return HermitianOperator(x.dims, kernels.pinch(x.matrix, d, n))


def is_diagonal_invariant(x: HermitianOperator, atol: float = 1e-12) -> bool:
    d, n = _copy_structure(x)
    return kernels.off_pattern_max(x.matrix, d, n) <= atol


def diagonal_twirl_oracle(x: HermitianOperator, q: int = 5) -> HermitianOperator:
    """Average of (U (x) U*) X (U (x) U*)^dagger over the grid theta_k in 2*pi*Z/q.

    Every phase exponent has per-angle coefficients in {-2, ..., 2}, so any
    grid with q >= 5 reproduces the continuous average exactly.
    """
    if q < 5:
        raise ValueError("q must be >= 5 to avoid aliasing")
    d, n = _copy_structure(x)
    if n != 1:
        raise DimensionError("oracle is defined for a single copy")
    grid = np.exp(2j * np.pi * np.arange(q) / q)
    acc = np.zeros_like(x.matrix)
    for phases in itertools.product(range(q), repeat=d):
        u = grid[list(phases)]
        v = np.kron(u, u.conj())  # diagonal of U (x) U*
        acc += v[:, None] * x.matrix * v.conj()[None, :]
    acc /= q ** d
    acc = (acc + acc.conj().T) / 2
    return HermitianOperator(x.dims, acc)


def isotropic_twirl(x: HermitianOperator) -> HermitianOperator:
    """Projection onto span{Id, P} (average over U (x) U* for all unitaries U)."""
    d, n = _copy_structure(x)
    if n != 1:
        raise DimensionError("single A,B pair expected")
    idx = [k * d + k for k in range(d)]
    tr = np.trace(x.matrix).real
    tr_p = x.matrix[np.ix_(idx, idx)].sum().real / d
    a = (tr - tr_p) / (d * d - 1)
    b = (d * d * tr_p - tr) / (d * d - 1)
    m = a * np.eye(d * d, dtype=complex)
    m[np.ix_(idx, idx)] += b / d
    return HermitianOperator(x.dims, m)
