"""Werner states and the diagonal-invariant partial-transpose family."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .linalg import (
    HermitianOperator,
    StateVector,
    eigh,
    partial_transpose,
    single_copy_dims,
)

__all__ = [
    "WernerParams",
    "WernerRegion",
    "DiagonalInvariantPT",
    "SamplerExhausted",
    "max_entangled",
    "werner_pt",
    "werner_state",
    "classify_werner",
    "family_pt",
    "family_state",
    "family_is_valid_state",
    "family_is_nppt",
    "family_two_positive",
    "family_gauge_transform",
    "family_sample",
    "cyclic_phase",
    "family_min_eigenvalue",
]

NPPT_TOL = 1e-10
SAMPLER_BUDGET = 100_000
CONSTRAINTS = frozenset({"valid", "nppt", "two_positive"})


class SamplerExhausted(RuntimeError):
    """Rejection budget spent without meeting the requested constraints."""


@dataclass(frozen=True)
class WernerParams:
    d: int
    alpha: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"local dimension must be an integer >= 2, got {self.d!r}")
        if not (-1.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in [-1, 1], got {self.alpha!r}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "alpha", float(self.alpha))


class WernerRegion(str, Enum):
    PPT_SEPARABLE = "PPT_SEPARABLE"
    NPPT_ONE_COPY_UNDISTILLABLE = "NPPT_ONE_COPY_UNDISTILLABLE"
    NPPT_ONE_COPY_DISTILLABLE = "NPPT_ONE_COPY_DISTILLABLE"


def max_entangled(d: int) -> StateVector:
    if d < 2:
        raise ValueError("d must be >= 2")
    v = np.zeros(d * d, dtype=complex)
    v[[k * d + k for k in range(d)]] = 1.0 / np.sqrt(d)
    return StateVector(single_copy_dims(d), v)


def werner_pt(p: WernerParams) -> HermitianOperator:
    """Partial transpose Id - d*alpha*P, assembled entry by entry."""
    d, a = p.d, p.alpha
    m = np.eye(d * d, dtype=complex)
    diag = [k * d + k for k in range(d)]
    for r in diag:
        for c in diag:
            m[r, c] = 1.0 - a if r == c else -a
    return HermitianOperator(single_copy_dims(d), m)


def werner_state(p: WernerParams) -> HermitianOperator:
    """The (unnormalized) Werner state Id - alpha*V."""
    return partial_transpose(werner_pt(p), "B")


def classify_werner(p: WernerParams) -> WernerRegion:
    # closed intervals [-1, 1/d] and (1/d, 1/2]; the comparison a*d <= 1 avoids
    # rounding 1/d when alpha was itself computed as 1/d
    a, d = p.alpha, p.d
    if a <= 1.0 / d or a * d <= 1.0:
        return WernerRegion.PPT_SEPARABLE
    if a <= 0.5:
        return WernerRegion.NPPT_ONE_COPY_UNDISTILLABLE
    return WernerRegion.NPPT_ONE_COPY_DISTILLABLE


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DiagonalInvariantPT:
    """Fixed point of the diagonal twirl, stored as weights plus correlated block.

    ``rho[i, j]`` is the weight on ``|i, j>`` (so ``rho[i, i]`` sits on the
    correlated block's diagonal).  ``z[i, j]`` for ``i != j`` is the coherence
    with ``<ii| X |jj> = -z[i, j]``; Hermiticity forces ``z[j, i] = conj(z[i, j])``.
    Indices are 0-based: the one-based ``z_12`` is ``z[0, 1]`` and ``z_31`` is
    ``z[2, 0]``.
    """

    rho: np.ndarray
    z: np.ndarray
    d: int = field(init=False)

    def __post_init__(self):
        rho = _frozen(self.rho, float)
        z = np.array(self.z, dtype=complex, copy=True)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 2:
            raise ValueError("rho must be a square d x d array with d >= 2")
        if z.shape != rho.shape:
            raise ValueError("z must have the same shape as rho")
        np.fill_diagonal(z, 0.0)
        dev = np.max(np.abs(z - z.conj().T))
        if dev > 1e-12:
            raise ValueError(f"z is not Hermitian (max deviation {dev:.3e})")
        # the upper triangle is authoritative; the lower one is its exact mirror
        z = np.triu(z, 1) + np.triu(z, 1).conj().T
        z.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "d", rho.shape[0])

    @property
    def corr_block(self) -> np.ndarray:
        """Block on span{|i,i>}: diagonal rho_ii, off-diagonal -z_ij."""
        m = -self.z.copy()
        m[np.diag_indices(self.d)] = np.diag(self.rho)
        return m

    @classmethod
    def from_upper(cls, rho, z_upper: dict[tuple[int, int], complex]) -> "DiagonalInvariantPT":
        """Build from ``{(i, j): z_ij}`` with one entry per unordered pair."""
        rho = np.asarray(rho, dtype=float)
        z = np.zeros(rho.shape, dtype=complex)
        for (i, j), val in z_upper.items():
            if i == j:
                raise ValueError("z has no diagonal entries")
            z[i, j] = val
            z[j, i] = np.conj(val)
        return cls(rho, z)

    @classmethod
    def werner(cls, d: int, alpha: float) -> "DiagonalInvariantPT":
        rho = np.ones((d, d))
        np.fill_diagonal(rho, 1.0 - alpha)
        z = np.full((d, d), alpha, dtype=complex)
        return cls(rho, z)

    def normalized(self) -> "DiagonalInvariantPT":
        t = float(np.sum(self.rho))
        if t <= 0:
            raise ValueError("trace is not positive")
        return DiagonalInvariantPT(self.rho / t, self.z / t)

    def trace(self) -> float:
        return float(np.sum(self.rho))

    def to_json(self) -> dict:
        d = self.d
        zs = [
            {"i": i, "j": j, "re": float(self.z[i, j].real), "im": float(self.z[i, j].imag)}
            for i in range(d)
            for j in range(i + 1, d)
        ]
        return {"d": d, "rho": [float(x) for x in self.rho.ravel()], "z": zs}

    @classmethod
    def from_json(cls, obj) -> "DiagonalInvariantPT":
        if isinstance(obj, str):
            obj = json.loads(obj)
        d = int(obj["d"])
        rho = np.array(obj["rho"], dtype=float)
        if rho.size != d * d:
            raise ValueError(f"rho has {rho.size} entries, expected {d * d}")
        z = {(int(e["i"]), int(e["j"])): complex(e["re"], e["im"]) for e in obj["z"]}
        return cls.from_upper(rho.reshape(d, d), z)

    def equals(self, other: "DiagonalInvariantPT") -> bool:
        return (
            self.d == other.d
            and np.array_equal(self.rho, other.rho)
            and np.array_equal(self.z, other.z)
        )


def family_pt(fp: DiagonalInvariantPT) -> HermitianOperator:
    d = fp.d
    m = np.diag(fp.rho.ravel()).astype(complex)
    block = fp.corr_block
    diag = [k * d + k for k in range(d)]
    for a, r in enumerate(diag):
        for b, c in enumerate(diag):
            m[r, c] = block[a, b]
    return HermitianOperator(single_copy_dims(d), m)


def family_state(fp: DiagonalInvariantPT) -> HermitianOperator:
    """The state itself, recovered by undoing the partial transpose."""
    return partial_transpose(family_pt(fp), "B")


def family_is_valid_state(fp: DiagonalInvariantPT) -> tuple[bool, list[str]]:
    """Check rho >= 0 via the pairwise conditions; returns (ok, violations)."""
    d, rho, z = fp.d, fp.rho, fp.z
    bad = []
    for i in range(d):
        for j in range(d):
            if rho[i, j] < 0:
                bad.append(f"rho_{i + 1}{j + 1} >= 0")
    for i in range(d):
        for j in range(i + 1, d):
            if rho[i, j] * rho[j, i] < abs(z[i, j]) ** 2:
                bad.append(f"rho_{i + 1}{j + 1}*rho_{j + 1}{i + 1} >= |z_{i + 1}{j + 1}|^2")
    return not bad, bad


def family_is_nppt(fp: DiagonalInvariantPT) -> bool:
    return bool(np.linalg.eigvalsh(fp.corr_block)[0] < -NPPT_TOL)


def family_two_positive(fp: DiagonalInvariantPT) -> bool:
    r = np.diag(fp.rho)
    if np.any(r < 0):
        return False
    d = fp.d
    return all(
        r[i] * r[j] >= abs(fp.z[i, j]) ** 2 for i in range(d) for j in range(i + 1, d)
    )


def family_gauge_transform(fp: DiagonalInvariantPT, phases: Sequence[float]) -> DiagonalInvariantPT:
    """Local basis rephasing: z_ij -> z_ij * exp(i(phi_i - phi_j))."""
    phi = np.asarray(phases, dtype=float)
    if phi.shape != (fp.d,):
        raise ValueError(f"need {fp.d} phases, got {phi.shape}")
    u = np.exp(1j * phi)
    z = fp.z * u[:, None] * u.conj()[None, :]
    return DiagonalInvariantPT(fp.rho, z)


def cyclic_phase(fp: DiagonalInvariantPT, cycle: Iterable[int] = (0, 1, 2)) -> float:
    """arg of z_{c0 c1} z_{c1 c2} ... z_{ck c0}; gauge invariant."""
    c = list(cycle)
    prod_ = 1.0 + 0j
    for a, b in zip(c, c[1:] + c[:1]):
        prod_ *= fp.z[a, b]
    return float(np.angle(prod_))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def family_sample(
    seed,
    constraints: Iterable[str] = ("valid",),
    d: int = 3,
    z_scale: float = 1.0,
    budget: int = SAMPLER_BUDGET,
) -> DiagonalInvariantPT:
    """Rejection-sample a unit-trace family member meeting ``constraints``.

    Weights are uniform on [0, 1]; each |z_ij| is uniform below the largest
    bound the requested predicates allow (scaled by ``z_scale``) with a
    uniform phase, so only NPPT is ever left to rejection when both
    ``valid`` and ``two_positive`` are requested.
    """
    want = frozenset(constraints)
    unknown = want - CONSTRAINTS
    if unknown:
        raise ValueError(f"unknown constraints {sorted(unknown)}")
    if "nppt" in want and z_scale == 0:
        raise SamplerExhausted("nppt cannot hold with z forced to zero")
    if "nppt" in want and "two_positive" in want and d < 3:
        raise SamplerExhausted("2-positive NPPT members need d >= 3")
    rng = _as_rng(seed)
    iu = np.triu_indices(d, 1)
    for _ in range(budget):
        rho = rng.uniform(0.0, 1.0, size=(d, d))
        r = np.diag(rho)
        bound = np.ones(len(iu[0]))
        if "valid" in want:
            bound = np.minimum(bound, np.sqrt(rho[iu] * rho.T[iu]))
        if "two_positive" in want:
            bound = np.minimum(bound, np.sqrt(r[iu[0]] * r[iu[1]]))
        mod = rng.uniform(0.0, 1.0, size=bound.shape) * bound * z_scale
        ph = rng.uniform(0.0, 2 * np.pi, size=bound.shape)
        z = np.zeros((d, d), dtype=complex)
        z[iu] = mod * np.exp(1j * ph)
        z = z + z.conj().T
        fp = DiagonalInvariantPT(rho, z).normalized()
        if "valid" in want and not family_is_valid_state(fp)[0]:
            continue
        if "two_positive" in want and not family_two_positive(fp):
            continue
        if "nppt" in want and not family_is_nppt(fp):
            continue
        return fp
    raise SamplerExhausted(f"no sample met {sorted(want)} within {budget} attempts")


def family_min_eigenvalue(fp: DiagonalInvariantPT) -> float:
    """Smallest eigenvalue of the reconstructed state (eigensolver route)."""
    return float(eigh(family_state(fp))[0][0])
