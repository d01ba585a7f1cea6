"""Exact solvers for discrete bottleneck (infinity) optimal transport."""

from .core import (
    CostMatrix,
    Coupling,
    Marginals,
    Permutation,
    SolveReport,
    SortedEdgeList,
    ValidationError,
    argsort_edges,
    uniform_marginals,
    validate_problem,
)
from .flow import check_coup, max_flow
from .matching import check_perm, extend_matching, max_matching
from .solvers import RelaxedSolution, solve_bisect, solve_kantorovich, solve_monge, solve_relaxed

__all__ = [
    "CostMatrix",
    "Coupling",
    "Marginals",
    "Permutation",
    "RelaxedSolution",
    "SolveReport",
    "SortedEdgeList",
    "ValidationError",
    "argsort_edges",
    "check_coup",
    "check_perm",
    "extend_matching",
    "max_flow",
    "max_matching",
    "solve_bisect",
    "solve_kantorovich",
    "solve_monge",
    "solve_relaxed",
    "uniform_marginals",
    "validate_problem",
]
