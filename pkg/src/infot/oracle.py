"""Brute-force reference solvers for verification.

Nothing here touches :mod:`infot.matching` or :mod:`infot.flow`; the
feasibility test uses the supply-demand subset condition instead of a flow.
All routines are exponential and guarded by size limits.
"""

from __future__ import annotations

import itertools

import numpy as np

from .core import Marginals, TooLarge, as_cost_matrix

MONGE_MAX_N = 9
SCAN_MAX_SIDE = 20


def brute_force_monge(C) -> float:
    """``min over sigma of max_i C[i, sigma[i]]`` by enumerating every permutation."""
    C = as_cost_matrix(C)
    n, m = C.shape
    if n != m:
        raise ValueError(f"brute_force_monge needs a square matrix, got {n}x{m}")
    if n > MONGE_MAX_N:
        raise TooLarge(f"n = {n} exceeds the enumeration guard {MONGE_MAX_N}")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    return float(C.values[np.arange(n), perms].max(axis=1).min())


def independent_feasibility(support, marg: Marginals) -> bool:
    """Whether some coupling of ``marg`` lives on the admitted edges.

    With total masses equal, a coupling exists iff every set ``S`` of rows
    has ``a(S) <= b(N(S))``, ``N(S)`` being the columns adjacent to ``S``.
    The condition is checked on every subset of the smaller side.
    """
    support = np.asarray(support, dtype=bool)
    n, m = support.shape
    if min(n, m) > SCAN_MAX_SIDE:
        raise TooLarge(f"{n}x{m} exceeds the subset-enumeration guard {SCAN_MAX_SIDE}")
    supply, demand = marg.scaled_a, marg.scaled_b
    if sum(supply) != sum(demand):
        return False
    if n > m:
        support, supply, demand = support.T, demand, supply
        n, m = m, n

    nbr = [sum(1 << j for j in range(m) if support[i, j]) for i in range(n)]
    mass = [0] * (1 << n)
    hood = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        mass[mask] = mass[rest] + supply[i]
        hood[mask] = hood[rest] | nbr[i]
        reach = hood[mask]
        capacity = sum(demand[j] for j in range(m) if reach >> j & 1)
        if mass[mask] > capacity:
            return False
    return True


def threshold_scan(C, marg: Marginals) -> float:
    """Smallest cost ``t`` for which the support ``{C <= t}`` admits a coupling."""
    C = as_cost_matrix(C)
    if max(C.shape) > SCAN_MAX_SIDE:
        raise TooLarge(f"{C.n}x{C.m} exceeds the scan guard {SCAN_MAX_SIDE}")
    for t in sorted(set(C.values.ravel().tolist())):
        if independent_feasibility(C.values <= t, marg):
            return float(t)
    raise AssertionError("the full support is always feasible")
