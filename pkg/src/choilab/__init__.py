"""choilab: Kraus channels, Choi states and multipartite distillability checks."""

__version__ = "0.1.0"

from .channels import (
    CptpReport,
    KrausChannel,
    apply,
    apply_matrix,
    choi,
    kraus_from_choi,
    mix,
    reduced_channel,
    verify_cptp,
)
from .entanglement import (
    DistillabilityVerdict,
    GhzDiagonalCoefficients,
    LocalizationResult,
    PtVerdict,
    cut_to_index,
    filter_to_maximally_entangled,
    ghz_diagonal_coefficients,
    localize_entanglement,
    npt_criterion,
    pairwise_distillability,
    ppt_check,
    two_qubit_separability,
)
from .states import (
    BipartiteCut,
    MultipartiteState,
    PartySystem,
    PureState,
    basis_projector,
    fidelity,
    ghz_basis_state,
    max_entangled,
    partial_trace,
    partial_transpose,
    permute_parties,
    schmidt_decomposition,
)

__all__ = [
    "__version__",
    "BipartiteCut",
    "CptpReport",
    "DistillabilityVerdict",
    "GhzDiagonalCoefficients",
    "KrausChannel",
    "LocalizationResult",
    "MultipartiteState",
    "PartySystem",
    "PtVerdict",
    "PureState",
    "apply",
    "apply_matrix",
    "basis_projector",
    "choi",
    "cut_to_index",
    "fidelity",
    "filter_to_maximally_entangled",
    "ghz_basis_state",
    "ghz_diagonal_coefficients",
    "kraus_from_choi",
    "localize_entanglement",
    "max_entangled",
    "mix",
    "npt_criterion",
    "pairwise_distillability",
    "partial_trace",
    "partial_transpose",
    "permute_parties",
    "ppt_check",
    "reduced_channel",
    "schmidt_decomposition",
    "two_qubit_separability",
    "verify_cptp",
]
