"""Numerical probes of NPPT bound entanglement in d x d systems."""

__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402
from .linalg import (  # noqa: E402
    BipartiteCut,
    HermitianOperator,
    StateVector,
    Subsystem,
    eigh,
    expectation,
    partial_transpose,
    permute_copies,
    schmidt_decompose,
    tensor_power,
    tensor_product,
)
from .states import (  # noqa: E402
    DiagonalInvariantPT,
    WernerParams,
    WernerRegion,
    classify_werner,
    family_pt,
    max_entangled,
    werner_pt,
    werner_state,
)
from .twirl import diagonal_twirl, isotropic_twirl, n_copy_diagonal_twirl  # noqa: E402
from .witness import SeesawConfig, compare, extremal_min, seesaw_min  # noqa: E402
