"""specmax: spectra of length-weighted graph Laplacians.

Builds the Laplacian induced by positive edge lengths (vertex weight = sum
of incident lengths, edge weight = reciprocal length), computes full
symmetric spectra with a cyclic-Jacobi core (compiled when available, pure
Python otherwise), and runs the divergence experiments: cycle length-family
sweeps, symmetry splits, pendant/cut surgery, and first-eigenvalue
maximization.
"""
from ._kernels import BACKEND, JacobiConvergenceError, cyclic_jacobi
from .graphs import (
    FujiwaraWeights,
    Graph,
    GraphError,
    LengthFunction,
    build_graph,
    canonical_edge,
    cycle_graph,
    distance_to_cycle,
    find_cycle,
    fujiwara_weights,
    length_function,
    normalize_lengths,
    path_graph,
    uniform_lengths,
)
from .spectral import (
    Lambda1Info,
    SpectralResult,
    SymMatrix,
    apply_laplacian,
    assemble_laplacian,
    lambda1,
    lambda1_eigenfunction,
    lambda1_info,
    lambda1_normalized,
    m0_inner,
    rayleigh_quotient,
    symmetric_eigen,
)
from .cycles import (
    SweepReport,
    SymmetrySplit,
    coefficient_matrices,
    cycle_lt,
    default_t_grid,
    explicit_pm_blocks,
    fit_loglog_slope,
    involution,
    involution_matrix,
    proof_vectors,
    sweep_asymptotics,
    symmetry_split,
)
from .surgery import (
    ConvergenceReport,
    CutResult,
    PerturbationReport,
    ReductionTrace,
    SurgeryStep,
    attach_pendant,
    contract_pendant,
    cut_at_vertex,
    cut_monotonicity_check,
    eigen_convergence_check,
    reduce_to_cycle,
    replay_trace,
    s_block,
    verify_perturbed_structure,
)
from .optimize import (
    OptimizationReport,
    OptimizerConfig,
    lambda1_gradient,
    maximize_lambda1,
)

__version__ = "0.1.0"
