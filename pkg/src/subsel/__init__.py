"""Representative row selection by iterative projection and matching (IPM),
with classical baselines, diagnostics and a benchmark harness."""

__version__ = "0.1.0"

from .linalg import (  # noqa: E402
    SingularTriplet,
    as_data_matrix,
    deflate_rows,
    extend_orthonormal_basis,
    full_spectrum,
    leading_singular_triplet,
    normalize_rows,
    project_residual,
)
from .selection import (  # noqa: E402
    CompoundOptions,
    SelectionResult,
    SelectionWarning,
    StoppingRule,
    ipm_select,
    ipm_select_compound,
)
from .baselines import (  # noqa: E402
    cluster_pick_select,
    det_greedy_select,
    kmedoids_select,
    qrcp_select,
    random_select,
    uniform_select,
    volume_select,
)
from .metrics import (  # noqa: E402
    best_rank_k_error,
    projection_error,
    rom,
    sensitivity_coeffs,
)
