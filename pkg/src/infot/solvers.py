"""Bottleneck transport solvers.

Both exact solvers sweep the edges in non-decreasing cost order and stop at
the first edge whose admission makes the support feasible: a perfect
matching for the permutation problem, a coupling with the prescribed
marginals for the general one. The cost of that edge is the optimum.

Two execution modes are offered. ``per_edge=True`` is the literal loop: the
empty support is checked first and every admitted edge triggers a
from-scratch feasibility test. The default mode admits in one batch every
edge cheaper than the trivial lower bound (the largest row or column
minimum, below which some row or column is isolated) and then maintains the
matching or flow incrementally, so each further edge costs one partial
search. Both modes stop at the same position of the same sorted edge list.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    CostMatrix,
    DimensionMismatch,
    Marginals,
    NegativeCost,
    NotSquare,
    Permutation,
    SolveReport,
    argsort_edges,
    as_cost_matrix,
    empty_support,
)
from .flow import Dinic, IncrementalFeasibility, check_coup
from .matching import IncrementalMatching, check_perm

RELAXED_FLOW_TOL = 1e-12


def _lower_bound_prefix(C: CostMatrix, pairs) -> int:
    """Number of leading sorted edges that cost less than the trivial lower bound."""
    vals = C.values
    bound = max(vals.min(axis=1).max(), vals.min(axis=0).max())
    sorted_vals = vals.ravel()[[i * C.m + j for i, j in pairs]]
    return int(np.searchsorted(sorted_vals, bound, side="left"))


def _require_square(C: CostMatrix) -> None:
    if C.n != C.m:
        raise NotSquare(f"cost matrix must be square, got {C.n}x{C.m}")


def solve_monge(C, per_edge: bool = False) -> SolveReport:
    """Minimise ``max_i C[i, sigma[i]]`` over permutations ``sigma``."""
    C = as_cost_matrix(C)
    _require_square(C)
    pairs = argsort_edges(C).pairs
    n = C.n

    if per_edge:
        support = empty_support(C.shape)
        k = 0
        perm = check_perm(support)
        while perm is None:
            k += 1
            support[pairs[k - 1]] = True
            perm = check_perm(support)
    else:
        start = _lower_bound_prefix(C, pairs)
        support = empty_support(C.shape)
        for i, j in pairs[:start]:
            support[i, j] = True
        state = IncrementalMatching.from_support(support)
        k = start
        while state.size < n:
            i, j = pairs[k]
            state.add_edge(i, j)
            k += 1
        perm = Permutation(tuple(state.row_mate))

    witness = pairs[k - 1]
    return SolveReport(float(C[witness]), witness, perm, k)


def _require_dims(C: CostMatrix, marg: Marginals) -> None:
    if len(marg.a) != C.n or len(marg.b) != C.m:
        raise DimensionMismatch(
            f"marginals of length ({len(marg.a)}, {len(marg.b)}) do not fit a "
            f"{C.n}x{C.m} cost matrix"
        )


def solve_kantorovich(C, marg: Marginals, per_edge: bool = False) -> SolveReport:
    """Minimise the largest cost on the support of a coupling of ``marg``."""
    C = as_cost_matrix(C)
    _require_dims(C, marg)
    pairs = argsort_edges(C).pairs

    if per_edge:
        support = empty_support(C.shape)
        k = 0
        plan = check_coup(support, marg)
        while plan is None:
            k += 1
            support[pairs[k - 1]] = True
            plan = check_coup(support, marg)
    else:
        start = _lower_bound_prefix(C, pairs)
        state = IncrementalFeasibility(marg.scaled_a, marg.scaled_b)
        state.add_edges(pairs[:start])
        k = start
        while not state.feasible:
            i, j = pairs[k]
            state.add_edge(i, j)
            k += 1
        plan = state.coupling(marg.scale)

    witness = pairs[k - 1]
    return SolveReport(float(C[witness]), witness, plan, k)


def solve_bisect(C, marg: Marginals) -> SolveReport:
    """Same optimum as :func:`solve_kantorovich`, by bisection over distinct costs.

    ``iterations`` counts feasibility probes.
    """
    C = as_cost_matrix(C)
    _require_dims(C, marg)
    levels = np.unique(C.values)
    lo, hi = -1, len(levels) - 1  # levels[lo] infeasible (virtual), levels[hi] feasible
    plan = None
    probes = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        probes += 1
        found = check_coup(C.values <= levels[mid], marg)
        if found is None:
            lo = mid
        else:
            hi, plan = mid, found
    if plan is None:
        probes += 1
        plan = check_coup(C.values <= levels[hi], marg)
    value = levels[hi]
    witness = next((i, j) for i, j in plan.support() if C[i, j] == value)
    return SolveReport(float(value), witness, plan, probes)


@dataclass(frozen=True)
class RelaxedSolution:
    """Approximate optimum of the relaxed minimax problem.

    ``value`` is a feasible level: ``plan`` is doubly stochastic with
    ``plan * C <= value`` entrywise, and the true optimum lies in
    ``[value - tolerance, value]``.
    """

    value: float
    plan: np.ndarray
    tolerance: float
    iterations: int


def _relaxed_probe(Cn: np.ndarray, t: float) -> Optional[np.ndarray]:
    """Doubly stochastic P with ``P[i, j] * Cn[i, j] <= t``, or None."""
    n = Cn.shape[0]
    source, sink = 0, 2 * n + 1
    g = Dinic(2 * n + 2, eps=RELAXED_FLOW_TOL)
    for i in range(n):
        g.add_arc(source, 1 + i, 1.0)
        g.add_arc(1 + n + i, sink, 1.0)
    arcs = {}
    for i in range(n):
        for j in range(n):
            c = Cn[i, j]
            cap = float(n) if c == 0 else t / c
            if cap > RELAXED_FLOW_TOL:
                arcs[(i, j)] = g.add_arc(1 + i, 1 + n + j, min(cap, float(n)))
    value = g.max_flow(source, sink)
    if value < n - RELAXED_FLOW_TOL:
        return None
    P = np.zeros((n, n))
    for (i, j), e in arcs.items():
        P[i, j] = g.flow_on(e)
    return P


def solve_relaxed(C, eps: Optional[float] = None) -> RelaxedSolution:
    """Minimise ``max P[i, j] * C[i, j]`` over doubly stochastic ``P``.

    Bisection on the level ``t``: the probe at ``t`` is a max-flow with
    unit row/column supplies and caps ``t / C[i, j]`` (uncapped where the
    cost is zero). The bracket starts at ``[0, Monge optimum]`` since a
    permutation matrix is feasible at the Monge optimum.
    """
    C = as_cost_matrix(C)
    if C.n != C.m:
        raise NotSquare(f"cost matrix must be square, got {C.n}x{C.m}")
    if (C.values < 0).any():
        raise NegativeCost("the relaxed problem needs nonnegative costs")
    n = C.n
    top = float(C.values.max())
    if eps is None:
        eps = 1e-9 * top
    elif eps <= 0:
        raise ValueError("eps must be positive")

    if top == 0:
        return RelaxedSolution(0.0, np.eye(n), 0.0, 0)
    # the problem is jointly homogeneous in (C, t): solve on C / top
    Cn = C.values / top
    tol = eps / top

    at_zero = _relaxed_probe(Cn, 0.0)
    if at_zero is not None:
        return RelaxedSolution(0.0, at_zero, 0.0, 1)

    monge = solve_monge(C)
    lo, hi = 0.0, monge.value / top
    plan = np.zeros((n, n))
    for i, j in monge.plan.support():
        plan[i, j] = 1.0
    iterations = 1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        iterations += 1
        P = _relaxed_probe(Cn, mid)
        if P is None:
            lo = mid
        else:
            hi, plan = mid, P
    return RelaxedSolution(hi * top, plan, (hi - lo) * top, iterations)
