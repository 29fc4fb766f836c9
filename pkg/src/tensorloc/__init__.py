"""Eigenvalue localization sets, spectral bounds and definiteness tests for dense real tensors."""

__version__ = "0.1.0"

from .bounds import (
    BoundKind,
    BoundReport,
    Method,
    best_bound_over_s,
    eta_max,
    pi_min,
    r_max_bound,
    r_min_bound,
    region_scan_bound,
)
from .definiteness import (
    DefinitenessVerdict,
    Status,
    check_pd,
    check_pd_diagonal_dominance,
    check_psd,
    search_pd_certificate,
)
from .errors import *  # noqa: F401,F403
from .io import load_fixture, load_tensor, save_tensor
from .oracle import (
    EigenPairEstimate,
    apply_tensor,
    spectral_radius_nonneg,
    tau_strong_m,
    verify_eigenvalue_in_regions,
)
from .regions import (
    Region,
    RegionKind,
    RegionSpec,
    Window,
    raster,
    region,
    verify_inclusion_chain,
)
from .tensor import (
    SubsetPartition,
    Tensor,
    all_partitions,
    build_tensor,
    classify,
    is_irreducible,
    is_weakly_irreducible,
    m_tensor_split,
    row_aggregates,
    row_sums,
    symmetrize_from_representatives,
)
