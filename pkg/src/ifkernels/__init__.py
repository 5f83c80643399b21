"""Discretized influence-functional path integrals and memory-kernel
hierarchies for small open quantum systems coupled to harmonic baths."""

from .bath import (
    BathSpec,
    EtaTable,
    InfluenceFactorMatrix,
    SpectralDensity,
    bath_correlation,
    bump_correlation,
    eta_table,
    eta_table_from_correlation,
    eta_truncated,
    influence_factor_matrix,
)
from .combinatorics import (
    DyckPath,
    SymbolicTerm,
    catalan,
    enumerate_dyck,
    expand_hierarchy,
    numeric_check,
    term_census,
)
from .config import RunConfig, default_config_text, load_config, parse_config
from .kernel_io import load_kernels, save_kernels
from .kernels import (
    ComparisonReport,
    KernelSet,
    TrajectorySeq,
    closed_form_asym,
    compare,
    dress,
    extract_kernels,
    extract_ttm,
    gqme_kernel,
    propagate,
    solve_midpoint,
    solve_termination,
)
from .liouville import (
    FBIndex,
    SystemSpec,
    TimeGrid,
    apply_map,
    fb_pairs,
    fb_propagator,
    liou_norm,
)
from .pathsum import PathSumRequest, aux_rdm_exact, config_count, oracle_trajectory, rdm_exact

__version__ = "0.1.0"
