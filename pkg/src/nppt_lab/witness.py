"""Schmidt-rank-2 minimization of <psi|W|psi> and the extremal-set recursion.

Two independent routes to the same quantity:

* :func:`seesaw_min` minimizes over *all* Schmidt-rank-2 vectors by
  alternating exact eigenproblems (fix a 2-dim subspace on one side, take the
  lowest eigenvector of the compressed operator, move to the other side).
* :func:`extremal_min` minimizes only over the claimed extremals of the
  twirled set (computational basis products, Type-I and Type-II states)
  using the closed-form 2x2 reductions.

:func:`compare` runs both on ``w^{(x)n}`` and flags a negative gap.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import kernels
from .linalg import (
    BipartiteCut,
    DimensionError,
    HermitianOperator,
    StateVector,
    expectation,
    permute_copies,
    single_copy_dims,
    tensor_power,
)
from .twirl import is_diagonal_invariant

__all__ = [
    "SchmidtRank2Vector",
    "SeesawConfig",
    "SeesawResult",
    "ComparisonReport",
    "assemble",
    "seesaw_min",
    "check_schwartz",
    "typeII_expectation",
    "type2_vector",
    "extremal_min",
    "two_positive_closed_form",
    "compare",
    "max_circle_fidelity",
    "thread_count",
]

GAP_TOL = 1e-6
TIE_TOL = 1e-12
PERTURBATION = 0.05


@dataclass(frozen=True, eq=False)
class SchmidtRank2Vector:
    """sum_pq coeff[p, q] |a_p> (x) |b_q> across ``cut``.

    ``a_pair`` and ``b_pair`` hold the two vectors as columns.
    """

    cut: BipartiteCut
    a_pair: np.ndarray
    b_pair: np.ndarray
    coeff: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a_pair, dtype=complex)
        b = np.asarray(self.b_pair, dtype=complex)
        c = np.asarray(self.coeff, dtype=complex)
        if a.shape != (self.cut.a_dim, 2) or b.shape != (self.cut.b_dim, 2):
            raise DimensionError("pair shapes do not match the cut")
        if c.shape != (2, 2):
            raise DimensionError("coefficient matrix must be 2x2")
        for name, pair in (("a_pair", a), ("b_pair", b)):
            gram = pair.conj().T @ pair
            if np.max(np.abs(gram - np.eye(2))) > 1e-10:
                raise ValueError(f"{name} is not orthonormal")
        if abs(np.linalg.norm(c) - 1.0) > 1e-10:
            raise ValueError("coefficient matrix must have unit Frobenius norm")
        for name, arr in (("a_pair", a), ("b_pair", b), ("coeff", c)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def matrix(self) -> np.ndarray:
        return self.a_pair @ self.coeff @ self.b_pair.T

    @classmethod
    def from_matrix(cls, cut: BipartiteCut, mat: np.ndarray) -> "SchmidtRank2Vector":
        """Truncate a (dA, dB) coefficient matrix to its two leading Schmidt terms."""
        u, s, vh = np.linalg.svd(mat)
        if s.shape[0] < 2:
            raise DimensionError("both sides need dimension >= 2")
        coeff = np.diag(s[:2]).astype(complex)
        coeff /= np.linalg.norm(coeff)
        return cls(cut, u[:, :2], vh[:2].T, coeff)


def assemble(v: SchmidtRank2Vector) -> StateVector:
    vec = v.cut.from_matrix(v.matrix())
    return StateVector.normalized(v.cut.dims, vec)


@dataclass(frozen=True)
class SeesawConfig:
    restarts: int = 50
    max_iterations: int = 500
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class SeesawResult:
    value: float
    witness: SchmidtRank2Vector
    trace: list[list[float]]
    iterations: list[int]
    converged: list[bool]
    best_restart: int

    def __iter__(self):
        # unpacks as (min_value, witness, trace)
        return iter((self.value, self.witness, self.trace))


def thread_count(threads: int | None = None) -> int:
    """Worker count: explicit value, else NPPT_LAB_THREADS, else CPU count."""
    if threads is None:
        env = os.environ.get("NPPT_LAB_THREADS", "").strip()
        threads = int(env) if env else 0
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


def _haar_pair(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, 2)) + 1j * rng.standard_normal((dim, 2))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _coordinate_pair(dim: int, idx: Sequence[int]) -> np.ndarray:
    q = np.zeros((dim, 2), dtype=complex)
    q[idx[0], 0] = 1.0
    q[idx[1], 1] = 1.0
    return q


def _start_subspace(cfg: SeesawConfig, r: int, dim: int, pair_order: list) -> np.ndarray:
    """Starting A-side subspace for restart ``r``.

    Restarts cycle through three kinds: exact coordinate pairs (visiting every
    pair of basis vectors once, in a seed-shuffled order), coordinate pairs
    with a small random tilt, and Haar-random subspaces.
    """
    rng = np.random.default_rng([cfg.seed, r])
    kind = r % 3
    if kind == 0 and r // 3 < len(pair_order):
        return _coordinate_pair(dim, pair_order[r // 3])
    if kind == 2:
        return _haar_pair(rng, dim)
    idx = rng.choice(dim, size=2, replace=False)
    q = _coordinate_pair(dim, idx)
    if kind == 1:
        q = q + PERTURBATION * (rng.standard_normal((dim, 2)) + 1j * rng.standard_normal((dim, 2)))
        q, _ = np.linalg.qr(q)
    return q


def _lowest(h: np.ndarray) -> tuple[float, np.ndarray]:
    vals, vecs = np.linalg.eigh(h)
    return float(vals[0]), vecs[:, 0]


def _run_restart(w4: np.ndarray, q_a: np.ndarray, cfg: SeesawConfig):
    d_a, d_b = w4.shape[0], w4.shape[1]
    trace: list[float] = []
    q, side = q_a, "A"
    psi = None
    converged = False
    for _ in range(cfg.max_iterations):
        if side == "A":
            t = np.tensordot(q.conj(), w4, axes=(0, 0))  # (2, dB, dA, dB)
            h = np.tensordot(t, q, axes=(2, 0)).transpose(0, 1, 3, 2).reshape(2 * d_b, 2 * d_b)
            val, vec = _lowest(h)
            psi = q @ vec.reshape(2, d_b)
            _, _, vh = np.linalg.svd(psi)
            q, side = vh[:2].T, "B"
        else:
            t = np.tensordot(w4, q.conj(), axes=(1, 0))  # (dA, dA, dB, 2)
            h = np.tensordot(t, q, axes=(2, 0)).transpose(0, 2, 1, 3).reshape(2 * d_a, 2 * d_a)
            val, vec = _lowest(h)
            psi = vec.reshape(d_a, 2) @ q.T
            u, _, _ = np.linalg.svd(psi)
            q, side = u[:, :2], "A"
        trace.append(val)
        if len(trace) > 1 and abs(trace[-2] - val) < cfg.tol:
            converged = True
            break
    return trace, psi, converged


def seesaw_min(
    w: HermitianOperator,
    cut: BipartiteCut | None = None,
    cfg: SeesawConfig = SeesawConfig(),
    threads: int | None = None,
) -> SeesawResult:
    """Minimize <psi|W|psi> over Schmidt-rank-2 vectors across ``cut``.

    Restarts run independently (optionally in threads) and are merged by
    minimum; values within ``TIE_TOL`` of the best count as ties and go to
    the lowest restart index, so output does not depend on scheduling.
    """
    if cut is None:
        cut = BipartiteCut.by_side(w.dims)
    elif cut.dims != w.dims:
        raise DimensionError("cut does not partition the operator's dims")
    d_a, d_b = cut.a_dim, cut.b_dim
    if d_a < 2 or d_b < 2:
        raise DimensionError("both sides of the cut need dimension >= 2")
    wp = permute_copies(w, cut.order)
    w4 = np.ascontiguousarray(wp.matrix.reshape(d_a, d_b, d_a, d_b))

    pairs = list(itertools.combinations(range(d_a), 2))
    order = np.random.default_rng([cfg.seed, 2**32]).permutation(len(pairs))
    pair_order = [pairs[k] for k in order]

    def task(r):
        return _run_restart(w4, _start_subspace(cfg, r, d_a, pair_order), cfg)

    workers = min(thread_count(threads), cfg.restarts)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(task, range(cfg.restarts)))
    else:
        runs = [task(r) for r in range(cfg.restarts)]

    finals = [tr[-1] for tr, _, _ in runs]
    lowest = min(finals)
    scale = max(1.0, abs(lowest))
    best = next(r for r, v in enumerate(finals) if v <= lowest + TIE_TOL * scale)
    witness = SchmidtRank2Vector.from_matrix(cut, runs[best][1])
    value = expectation(w, assemble(witness))
    return SeesawResult(
        value=value,
        witness=witness,
        trace=[tr for tr, _, _ in runs],
        iterations=[len(tr) for tr, _, _ in runs],
        converged=[c for _, _, c in runs],
        best_restart=best,
    )


def _single_copy(w: HermitianOperator) -> int:
    dims = w.dims
    if len(dims) != 2 or dims[0].side != "A" or dims[1].side != "B" or dims[0].dim != dims[1].dim:
        raise DimensionError("a single A,B copy with equal local dimensions is required")
    return dims[0].dim


def _require_invariant(w: HermitianOperator) -> int:
    d = _single_copy(w)
    if not is_diagonal_invariant(w):
        raise ValueError("operator is not invariant under the diagonal twirl")
    return d


def _corr_block(w: HermitianOperator, d: int) -> np.ndarray:
    idx = [k * d + k for k in range(d)]
    return w.matrix[np.ix_(idx, idx)]


def _pair_psd(a: float, b: float, c: complex) -> bool:
    return a >= 0 and b >= 0 and c.real * c.real + c.imag * c.imag <= a * b


def check_schwartz(w: HermitianOperator, k: int, l: int) -> bool:
    """|<kk|W|ll>| <= sqrt(<kk|W|kk> <ll|W|ll>) with nonnegative diagonals."""
    if k == l:
        raise ValueError("k and l must differ")
    d = _require_invariant(w)
    m = _corr_block(w, d)
    return _pair_psd(m[k, k].real, m[l, l].real, complex(m[k, l]))


def two_positive_closed_form(w: HermitianOperator) -> bool:
    d = _require_invariant(w)
    if np.any(np.diag(w.matrix).real < 0):
        return False
    m = _corr_block(w, d)
    return all(
        _pair_psd(m[k, k].real, m[l, l].real, complex(m[k, l]))
        for k in range(d)
        for l in range(k + 1, d)
    )


def _basis_index(d: int, pairs: Sequence[tuple[int, int]]) -> int:
    idx = 0
    for k, l in pairs:
        idx = idx * d * d + k * d + l
    return idx


def _product_element(w: np.ndarray, d: int, x, y) -> complex:
    """<x|w^{(x)m}|y> for m-copy basis states given as per-copy (A, B) pairs."""
    val = 1.0 + 0j
    for (a, b), (c, e) in zip(x, y):
        val *= w[a * d + b, c * d + e]
    return val


def typeII_expectation(
    w: HermitianOperator,
    phi1: Sequence[tuple[int, int]],
    phi2: Sequence[tuple[int, int]],
    i: int,
    j: int,
    a: complex,
    b: complex,
) -> float:
    """<Psi|w^{(x)n}|Psi> for Psi = a|phi1>|ii> + b|phi2>|jj>, by the four-term formula.

    ``phi1`` and ``phi2`` are (n-1)-copy computational basis states listed as
    per-copy (A index, B index) pairs; their matrix elements factor into
    products of single-copy entries.
    """
    d = _single_copy(w)
    if len(phi1) != len(phi2):
        raise ValueError("phi1 and phi2 must span the same number of copies")
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-10:
        raise ValueError("coefficients must satisfy |a|^2 + |b|^2 = 1")
    m = w.matrix
    ii, jj = i * d + i, j * d + j
    e11 = _product_element(m, d, phi1, phi1)
    e22 = _product_element(m, d, phi2, phi2)
    e12 = _product_element(m, d, phi1, phi2)
    e21 = _product_element(m, d, phi2, phi1)
    val = (
        abs(a) ** 2 * e11 * m[ii, ii]
        + abs(b) ** 2 * e22 * m[jj, jj]
        + np.conj(a) * b * e12 * m[ii, jj]
        + a * np.conj(b) * e21 * m[jj, ii]
    )
    return float(val.real)


def type2_vector(
    d: int,
    phi1: Sequence[tuple[int, int]],
    phi2: Sequence[tuple[int, int]],
    i: int,
    j: int,
    a: complex,
    b: complex,
) -> StateVector:
    """The n-copy vector a|phi1>|ii> + b|phi2>|jj> in A1,B1,...,An,Bn order."""
    n = len(phi1) + 1
    x = _basis_index(d, list(phi1) + [(i, i)])
    y = _basis_index(d, list(phi2) + [(j, j)])
    if x == y:
        raise ValueError("the two branches coincide")
    v = np.zeros(d ** (2 * n), dtype=complex)
    v[x] = a
    v[y] = b
    dims = tuple(s for c in range(1, n + 1) for s in single_copy_dims(d, c))
    return StateVector(dims, v)


def _extremal_levels(w: HermitianOperator, n: int) -> list[tuple[float, float]]:
    d = _require_invariant(w)
    if n < 1:
        raise ValueError("n must be >= 1")
    diag = np.diag(w.matrix).real
    m = _corr_block(w, d)
    levels = []
    lo_prev, hi_prev = 1.0, 1.0  # zero copies: the empty product
    prev_matrix = np.ones((1, 1), dtype=complex)
    for level in range(1, n + 1):
        # Type I (and rank-1 products): an (level-1)-copy extremal times |ij>
        cand = np.concatenate([lo_prev * diag, hi_prev * diag])
        lo, hi = float(cand.min()), float(cand.max())
        # Type II: phi1 (x) |ii> + phi2 (x) |jj>
        lo2, hi2, _ = kernels.type2_extremes(np.diag(prev_matrix).real, prev_matrix, m)
        lo, hi = min(lo, lo2), max(hi, hi2)
        levels.append((lo, hi))
        lo_prev, hi_prev = lo, hi
        if level < n:
            prev_matrix = tensor_power(w, level).matrix
    return levels


def extremal_min(w: HermitianOperator, n: int) -> float:
    """Minimum of <Psi|w^{(x)n}|Psi> over the enumerated extremal states.

    Built level by level: Type-I values are an (n-1)-copy extremal value
    times a diagonal entry (both the minimum and maximum of the previous
    level are tracked so negative diagonal entries are handled), Type-II
    values are the lowest eigenvalues of the 2x2 compressions onto
    {|phi1, ii>, |phi2, jj>}.
    """
    return _extremal_levels(w, n)[-1][0]


def max_circle_fidelity(v: StateVector) -> float:
    """max over k<l, delta, global phase of |<psi|(|kk> + e^{i delta}|ll>)/sqrt2|^2."""
    cut = BipartiteCut.by_side(v.dims)
    c = np.abs(np.diag(cut.to_matrix(v.vector)))
    best = 0.0
    for k, l in itertools.combinations(range(c.shape[0]), 2):
        best = max(best, (c[k] + c[l]) ** 2 / 2)
    return float(best)


@dataclass
class ComparisonReport:
    d: int
    n: int
    alpha_or_family: Any
    seesaw_min: float
    extremal_min: float
    gap: float
    flag: bool
    restarts: int
    seed: int
    iterations_per_restart: list[int]
    witness: SchmidtRank2Vector | None = None
    trace: list[list[float]] = field(default_factory=list)
    converged_restarts: int = 0
    wall_ms: float = 0.0
    gap_tolerance: float = GAP_TOL

    def __post_init__(self):
        if self.gap != self.seesaw_min - self.extremal_min:
            raise ValueError("gap does not equal seesaw_min - extremal_min")
        if self.flag != (self.gap < -self.gap_tolerance):
            raise ValueError("flag inconsistent with gap and tolerance")

    @property
    def distillable_witness(self) -> bool:
        return self.seesaw_min < -self.gap_tolerance

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "d": self.d,
            "n": self.n,
            "alpha_or_family": self.alpha_or_family,
            "seesaw_min": self.seesaw_min,
            "extremal_min": self.extremal_min,
            "gap": self.gap,
            "flag": self.flag,
            "distillable_witness": self.distillable_witness,
            "restarts": self.restarts,
            "seed": self.seed,
            "iterations_per_restart": list(self.iterations_per_restart),
            "converged_restarts": self.converged_restarts,
            "wall_ms": self.wall_ms,
        }


def compare(
    w: HermitianOperator,
    n: int,
    cfg: SeesawConfig = SeesawConfig(),
    label: Any = None,
    threads: int | None = None,
) -> ComparisonReport:
    """Run the unconstrained and extremal-set minimizations on ``w^{(x)n}``."""
    start = time.perf_counter()
    d = _require_invariant(w)
    ext = extremal_min(w, n)
    big = tensor_power(w, n)
    res = seesaw_min(big, BipartiteCut.by_side(big.dims), cfg, threads=threads)
    gap = res.value - ext
    return ComparisonReport(
        d=d,
        n=n,
        alpha_or_family=label,
        seesaw_min=res.value,
        extremal_min=ext,
        gap=gap,
        flag=gap < -GAP_TOL,
        restarts=cfg.restarts,
        seed=cfg.seed,
        iterations_per_restart=res.iterations,
        witness=res.witness,
        trace=res.trace,
        converged_restarts=sum(res.converged),
        wall_ms=round((time.perf_counter() - start) * 1e3, 3),
    )


def analytic_one_copy_min(alpha: float) -> float | None:
    """Rank-2 minimum of the Werner partial transpose for alpha >= 0 (1 - 2 alpha)."""
    return 1.0 - 2.0 * alpha if alpha >= 0 else None

