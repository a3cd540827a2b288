"""Memory depth of qubit memory channels generated by a fixed two-qubit
interaction: KAK analysis, depth classification, sequential simulation and
reset-sequence verification."""

__version__ = "0.1.0"

from .bloch import (
    AffineChannelRep,
    bloch_from_density,
    concurrent_channel,
    density_from_bloch,
    det_f_analytic,
    f_matrix_analytic,
    irrelevant_subspace,
    system_channel,
)
from .classical import BitPermutation, classify_classical, enumerate_bit_permutations, survey
from .depth import (
    DepthClassification,
    NumericDepthResult,
    Verdict,
    classify_analytic,
    classify_numeric,
    crosscheck,
)
from .errors import (
    DimensionError,
    InvalidStateError,
    InvalidUnitaryError,
    MemdepthError,
    SizeLimitError,
)
from .kak import KakDecomposition, canonicalize, kak_compose, kak_decompose
from .linalg import Subspace, haar_unitary, nullspace_basis, partial_trace, tensor_product
from .simulator import (
    MemoryProcess,
    ResetVerificationReport,
    Trajectory,
    joint_output,
    kraus_blocks,
    omega_operators,
    reset_channel,
    run_sequence,
    step,
    verify_reset_factorization,
)
