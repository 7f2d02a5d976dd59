"""Dense complex linear algebra over labelled tensor-product spaces.

Every operator carries a tuple of :class:`Subsystem` labels.  The canonical
ordering is copy-major, side-minor (A1, B1, A2, B2, ...); anything that
needs the A^n | B^n cut goes through :func:`permute_copies` or
:class:`BipartiteCut` explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "Subsystem",
    "HermitianOperator",
    "StateVector",
    "BipartiteCut",
    "DimensionError",
    "NotHermitianError",
    "tensor_product",
    "tensor_power",
    "partial_transpose",
    "permute_copies",
    "eigh",
    "schmidt_decompose",
    "expectation",
    "single_copy_dims",
]

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-12
MAX_DIM = 4096


class DimensionError(ValueError):
    """Mismatched or unsupported subsystem dimensions."""


class NotHermitianError(ValueError):
    """Matrix is not self-adjoint within tolerance."""


class Subsystem(NamedTuple):
    side: str  # "A" or "B"
    copy: int
    dim: int


def single_copy_dims(d: int, copy: int = 1) -> tuple[Subsystem, Subsystem]:
    return (Subsystem("A", copy, d), Subsystem("B", copy, d))


def _check_dims(dims: Sequence[Subsystem]) -> tuple[Subsystem, ...]:
    dims = tuple(Subsystem(*s) for s in dims)
    if not dims:
        raise DimensionError("at least one subsystem is required")
    for s in dims:
        if s.side not in ("A", "B"):
            raise DimensionError(f"unknown side {s.side!r}")
        if s.dim < 1:
            raise DimensionError(f"local dimension must be positive, got {s.dim}")
    if len(set((s.side, s.copy) for s in dims)) != len(dims):
        raise DimensionError("duplicate (side, copy) label")
    total = prod(s.dim for s in dims)
    if total > MAX_DIM:
        raise DimensionError(f"product dimension {total} exceeds {MAX_DIM}")
    return dims


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Self-adjoint matrix with subsystem labels.

    Inputs that fail the Hermiticity check are rejected rather than
    symmetrized.
    """

    dims: tuple[Subsystem, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        m = _frozen(self.matrix)
        n = prod(s.dim for s in dims)
        if m.shape != (n, n):
            raise DimensionError(f"matrix shape {m.shape} does not match dims (size {n})")
        dev = np.max(np.abs(m - m.conj().T)) if n else 0.0
        if dev > HERMITIAN_TOL:
            raise NotHermitianError(f"max |X - X^H| = {dev:.3e} exceeds {HERMITIAN_TOL}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", m)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def local_dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.dims)

    @property
    def n_copies(self) -> int:
        return len({s.copy for s in self.dims})

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def allclose(self, other: "HermitianOperator", atol: float = 1e-12) -> bool:
        return self.dims == other.dims and bool(
            np.max(np.abs(self.matrix - other.matrix), initial=0.0) <= atol
        )

    @classmethod
    def identity(cls, dims: Sequence[Subsystem]) -> "HermitianOperator":
        dims = _check_dims(dims)
        return cls(dims, np.eye(prod(s.dim for s in dims), dtype=complex))


@dataclass(frozen=True, eq=False)
class StateVector:
    dims: tuple[Subsystem, ...]
    vector: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        v = _frozen(np.ravel(self.vector))
        if v.shape[0] != prod(s.dim for s in dims):
            raise DimensionError("vector length does not match dims")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state vector norm {norm!r} differs from 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "vector", v)

    @classmethod
    def normalized(cls, dims: Sequence[Subsystem], vector) -> "StateVector":
        v = np.asarray(vector, dtype=complex).ravel()
        return cls(tuple(dims), v / np.linalg.norm(v))

    def projector(self) -> HermitianOperator:
        v = self.vector
        m = np.outer(v, v.conj())
        # outer(v, v*) is Hermitian only up to rounding in the product order
        m = (m + m.conj().T) / 2
        return HermitianOperator(self.dims, m)


@dataclass(frozen=True)
class BipartiteCut:
    """Partition of the subsystems into an A-group and a B-group.

    ``a_group``/``b_group`` index into ``dims``; the flattened A (B) index
    runs over the group's subsystems in the listed order, last one fastest.
    """

    dims: tuple[Subsystem, ...]
    a_group: tuple[int, ...]
    b_group: tuple[int, ...]

    def __post_init__(self):
        dims = _check_dims(self.dims)
        object.__setattr__(self, "dims", dims)
        a, b = tuple(self.a_group), tuple(self.b_group)
        if sorted(a + b) != list(range(len(dims))):
            raise DimensionError("every subsystem must appear in exactly one group")
        if not a or not b:
            raise DimensionError("both groups must be non-empty")
        object.__setattr__(self, "a_group", a)
        object.__setattr__(self, "b_group", b)

    @classmethod
    def by_side(cls, dims: Sequence[Subsystem]) -> "BipartiteCut":
        """The A^n | B^n cut, copies in increasing order on each side."""
        dims = _check_dims(dims)
        a = sorted((i for i, s in enumerate(dims) if s.side == "A"), key=lambda i: dims[i].copy)
        b = sorted((i for i, s in enumerate(dims) if s.side == "B"), key=lambda i: dims[i].copy)
        return cls(dims, tuple(a), tuple(b))

    @property
    def order(self) -> tuple[int, ...]:
        return self.a_group + self.b_group

    @property
    def a_dim(self) -> int:
        return prod(self.dims[i].dim for i in self.a_group)

    @property
    def b_dim(self) -> int:
        return prod(self.dims[i].dim for i in self.b_group)

    @property
    def a_dims(self) -> tuple[Subsystem, ...]:
        return tuple(self.dims[i] for i in self.a_group)

    @property
    def b_dims(self) -> tuple[Subsystem, ...]:
        return tuple(self.dims[i] for i in self.b_group)

    def index_maps(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat index of each (a, b) pair in the original ordering.

        Returns arrays ``rows`` and ``cols`` of shape (a_dim, b_dim) such that
        entry ``[a, b]`` is the position in ``dims`` ordering; the map is a
        bijection onto ``range(a_dim * b_dim)``.
        """
        local = [s.dim for s in self.dims]
        flat = np.arange(prod(local)).reshape(local)
        grid = flat.transpose(self.order).reshape(self.a_dim, self.b_dim)
        return grid, grid.T

    def to_matrix(self, vector: np.ndarray) -> np.ndarray:
        local = [s.dim for s in self.dims]
        t = np.asarray(vector).reshape(local)
        return t.transpose(self.order).reshape(self.a_dim, self.b_dim)

    def from_matrix(self, mat: np.ndarray) -> np.ndarray:
        group_dims = [self.dims[i].dim for i in self.order]
        t = np.asarray(mat).reshape(group_dims)
        return t.transpose(np.argsort(self.order)).reshape(-1)


def tensor_product(x: HermitianOperator, y: HermitianOperator) -> HermitianOperator:
    """Kronecker product; copy indices of ``y`` are shifted past those of ``x``."""
    offset = max(s.copy for s in x.dims)
    shift = offset - min(s.copy for s in y.dims) + 1
    ydims = tuple(Subsystem(s.side, s.copy + shift, s.dim) for s in y.dims)
    return HermitianOperator(x.dims + ydims, np.kron(x.matrix, y.matrix))


def tensor_power(x: HermitianOperator, n: int) -> HermitianOperator:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"tensor power needs n >= 1, got {n!r}")
    out = x
    for _ in range(n - 1):
        out = tensor_product(out, x)
    return out


def _as_tensor(op: HermitianOperator) -> np.ndarray:
    local = op.local_dims
    return op.matrix.reshape(local + local)


def partial_transpose(x: HermitianOperator, side: str = "B") -> HermitianOperator:
    """Transpose the row/column indices of every subsystem on ``side``."""
    targets = [i for i, s in enumerate(x.dims) if s.side == side]
    if not targets:
        raise DimensionError(f"operator has no subsystem on side {side!r}")
    k = len(x.dims)
    axes = list(range(2 * k))
    for i in targets:
        axes[i], axes[k + i] = axes[k + i], axes[i]
    t = _as_tensor(x).transpose(axes)
    return HermitianOperator(x.dims, t.reshape(x.size, x.size))


def permute_copies(x: HermitianOperator, new_order: Sequence[int]) -> HermitianOperator:
    """Reorder the tensor factors: output factor ``m`` is input factor ``new_order[m]``."""
    k = len(x.dims)
    order = [int(i) for i in new_order]
    if sorted(order) != list(range(k)):
        raise ValueError(f"{list(new_order)!r} is not a permutation of range({k})")
    t = _as_tensor(x).transpose(order + [k + i for i in order])
    dims = tuple(x.dims[i] for i in order)
    return HermitianOperator(dims, t.reshape(x.size, x.size))


def eigh(x: HermitianOperator) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""
    m = x.matrix
    dev = np.max(np.abs(m - m.conj().T), initial=0.0)
    if dev > HERMITIAN_TOL:
        raise NotHermitianError(f"max |X - X^H| = {dev:.3e}")
    return np.linalg.eigh(m)


def schmidt_decompose(v: StateVector, cut: BipartiteCut | None = None):
    """Singular values (descending) and the matching A and B bases.

    The full decomposition is returned; negligible values are kept so that
    ``sum_k s_k a_k (x) b_k`` reconstructs ``v`` exactly up to rounding.
    Basis vectors are the columns of the returned arrays.
    """
    if cut is None:
        cut = BipartiteCut.by_side(v.dims)
    elif cut.dims != v.dims:
        raise DimensionError("cut and vector dims differ")
    mat = cut.to_matrix(v.vector)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    return s, u, vh.T


def expectation(w: HermitianOperator, v: StateVector) -> float:
    """Real part of <v|W|v>; the imaginary residue is checked."""
    if w.dims != v.dims:
        if w.size != v.vector.shape[0]:
            raise DimensionError("operator and vector sizes differ")
        raise DimensionError("operator and vector carry different subsystem labels")
    val = np.vdot(v.vector, w.matrix @ v.vector)
    scale = max(1.0, float(np.max(np.abs(w.matrix), initial=0.0)))
    if abs(val.imag) > 1e-10 * scale:
        raise ArithmeticError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)
