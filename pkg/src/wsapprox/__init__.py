"""Weighted-sum scalarization toolkit for multiobjective optimization.

Approximates minimization problems through exact or sigma-approximate
weighted-sum solves and verifies every produced guarantee with brute-force
oracles over exact rational arithmetic.
"""

from .core import (
    Bounds,
    ContractViolation,
    Direction,
    FactorVector,
    FamilyKind,
    GuaranteeFamily,
    MaximizationUnsupported,
    ObjectiveVector,
    WeightVector,
    approximates,
    as_rational,
    covers,
    dominates,
    factor_vector,
    format_rational,
    multi_factor_witness,
    parse_rational,
)
from .solvers import (
    Arc,
    DisconnectedGraph,
    EnumerationLimit,
    ExplicitInstance,
    GraphInstance,
    GraphKind,
    Solution,
    SolveAnswer,
    SolverHandle,
    UnreachableTarget,
    adversarial_solver,
    compute_bounds,
    enumerate_graph_solutions,
    exact_solver,
    solve_explicit_adversarial,
    solve_explicit_exact,
    solve_shortest_path,
    solve_spanning_tree,
)
from .instances import (
    InstanceFormatError,
    gen_max_counterexample,
    gen_random_explicit,
    gen_random_graph,
    gen_tightness_min,
    instance_from_json,
    instance_to_json,
)
from .algorithms import (
    BiobjectiveRun,
    GridRun,
    approximate_biobjective,
    approximate_grid,
    approximate_with_ptas,
    grid_weights,
    ptas_family,
)
from .oracles import (
    SupportCertificate,
    VerificationReport,
    pareto_front,
    support_certificates,
    supported_set,
    verify_approximation,
    verify_max_impossibility,
)

__all__ = [name for name in dir() if not name.startswith("_")]
