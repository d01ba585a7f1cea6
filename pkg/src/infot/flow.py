"""Maximum flow on the transportation network and coupling feasibility.

A coupling with row sums ``a``, column sums ``b`` and support inside a mask
exists iff the network ``source -> row i (cap D*a_i) -> col j (uncapped, for
admitted (i, j)) -> sink (cap D*b_j)`` carries a flow of ``D * sum(a)``.
With integer capacities the flow, and hence the coupling, is exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .core import Coupling, Marginals


class Dinic:
    """Blocking-flow max-flow on an adjacency-list residual graph.

    Works with ``int`` capacities (``eps=0``) or floats, in which case
    residuals at or below ``eps`` count as saturated. Calling
    :meth:`max_flow` again after adding arcs continues from the current flow.
    """

    def __init__(self, num_nodes: int, eps: float = 0):
        self.num_nodes = num_nodes
        self.eps = eps
        self.adj: list[list[int]] = [[] for _ in range(num_nodes)]
        self.to: list[int] = []
        self.cap: list = []
        self.orig: list = []

    def add_arc(self, u: int, v: int, capacity) -> int:
        e = len(self.to)
        self.to += [v, u]
        self.cap += [capacity, 0 * capacity]
        self.orig += [capacity, 0 * capacity]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    def flow_on(self, e: int):
        return self.orig[e] - self.cap[e]

    def _levels(self, s: int, t: int) -> Optional[list[int]]:
        level = [-1] * self.num_nodes
        level[s] = 0
        queue = deque([s])
        eps, cap, to = self.eps, self.cap, self.to
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = to[e]
                if level[v] < 0 and cap[e] > eps:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _blocking_flow(self, s: int, t: int, level: list[int]):
        eps, cap, to, adj = self.eps, self.cap, self.to, self.adj
        it = [0] * self.num_nodes
        total = 0 * cap[0] if cap else 0
        while True:
            path: list[int] = []
            u = s
            while u != t:
                edges = adj[u]
                while it[u] < len(edges):
                    e = edges[it[u]]
                    if cap[e] > eps and level[to[e]] == level[u] + 1:
                        break
                    it[u] += 1
                else:
                    if u == s:
                        return total
                    level[u] = -1
                    e = path.pop()
                    u = to[e ^ 1]
                    it[u] += 1
                    continue
                path.append(e)
                u = to[e]
            f = min(cap[e] for e in path)
            for e in path:
                cap[e] -= f
                cap[e ^ 1] += f
            total += f

    def max_flow(self, s: int, t: int):
        """Augment to a maximum flow; returns the amount added by this call."""
        added = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return added
            added += self._blocking_flow(s, t, level)

    def reachable(self, s: int) -> list[bool]:
        seen = [False] * self.num_nodes
        seen[s] = True
        self._extend_reach(seen, [s])
        return seen

    def _extend_reach(self, seen: list[bool], starts: list[int]) -> None:
        eps, cap, to = self.eps, self.cap, self.to
        stack = list(starts)
        while stack:
            u = stack.pop()
            for e in self.adj[u]:
                v = to[e]
                if not seen[v] and cap[e] > eps:
                    seen[v] = True
                    stack.append(v)


@dataclass(frozen=True)
class FlowNetwork:
    """Transportation network over integer supplies and demands.

    Node layout: source ``0``, rows ``1..n``, columns ``n+1..n+m``, sink
    ``n+m+1``.
    """

    supply: tuple[int, ...]
    demand: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if any(c < 0 for c in self.supply + self.demand):
            raise ValueError("capacities must be nonnegative")

    @classmethod
    def from_support(cls, support, marg: Marginals) -> "FlowNetwork":
        support = np.asarray(support, dtype=bool)
        edges = tuple((int(i), int(j)) for i, j in zip(*np.nonzero(support)))
        return cls(tuple(marg.scaled_a), tuple(marg.scaled_b), edges)

    @property
    def n(self) -> int:
        return len(self.supply)

    @property
    def m(self) -> int:
        return len(self.demand)

    @property
    def infinity(self) -> int:
        return sum(self.supply) + 1


@dataclass(frozen=True)
class ArcFlows:
    supply: tuple[int, ...]
    demand: tuple[int, ...]
    edges: dict


def max_flow(net: FlowNetwork) -> tuple[int, ArcFlows]:
    """Exact maximum source-sink flow and the flow on every arc."""
    n, m = net.n, net.m
    source, sink = 0, n + m + 1
    g = Dinic(n + m + 2)
    src_arcs = [g.add_arc(source, 1 + i, c) for i, c in enumerate(net.supply)]
    snk_arcs = [g.add_arc(1 + n + j, sink, c) for j, c in enumerate(net.demand)]
    inf = net.infinity
    edge_arcs = {(i, j): g.add_arc(1 + i, 1 + n + j, inf) for i, j in net.edges}
    value = g.max_flow(source, sink)
    flows = ArcFlows(
        tuple(g.flow_on(e) for e in src_arcs),
        tuple(g.flow_on(e) for e in snk_arcs),
        {ij: g.flow_on(e) for ij, e in edge_arcs.items()},
    )
    return value, flows


def _coupling(edge_flows, scale: int) -> Coupling:
    return Coupling(
        tuple(
            (i, j, Fraction(f, scale))
            for (i, j), f in sorted(edge_flows.items())
            if f > 0
        )
    )


def check_coup(support, marg: Marginals) -> Optional[Coupling]:
    """A coupling of ``marg`` supported on the admitted edges, else ``None``."""
    value, flows = max_flow(FlowNetwork.from_support(support, marg))
    if value != sum(marg.scaled_a):
        return None
    return _coupling(flows.edges, marg.scale)


class IncrementalFeasibility:
    """Transport feasibility maintained under edge insertions.

    Keeps a maximum flow plus the set of nodes reachable from the source in
    the residual graph. A new edge can only increase the flow when it links a
    reached row to an unreached column, and then only if the sink becomes
    reachable, so most insertions cost a partial graph search.
    """

    def __init__(self, supply: Sequence[int], demand: Sequence[int]):
        self.n, self.m = len(supply), len(demand)
        self.source, self.sink = 0, self.n + self.m + 1
        self.total = sum(supply)
        self.inf = self.total + 1
        self.graph = Dinic(self.n + self.m + 2)
        for i, c in enumerate(supply):
            self.graph.add_arc(self.source, 1 + i, c)
        for j, c in enumerate(demand):
            self.graph.add_arc(1 + self.n + j, self.sink, c)
        self.edge_arcs: dict[tuple[int, int], int] = {}
        self.flow = 0
        self.reach = self.graph.reachable(self.source)

    @property
    def feasible(self) -> bool:
        return self.flow == self.total

    def _augment(self) -> None:
        self.flow += self.graph.max_flow(self.source, self.sink)
        self.reach = self.graph.reachable(self.source)

    def add_edges(self, edges) -> bool:
        for i, j in edges:
            self.edge_arcs[(i, j)] = self.graph.add_arc(1 + i, 1 + self.n + j, self.inf)
        self._augment()
        return self.feasible

    def add_edge(self, i: int, j: int) -> bool:
        u, v = 1 + i, 1 + self.n + j
        self.edge_arcs[(i, j)] = self.graph.add_arc(u, v, self.inf)
        if self.feasible or not self.reach[u] or self.reach[v]:
            return self.feasible
        self.reach[v] = True
        self.graph._extend_reach(self.reach, [v])
        if self.reach[self.sink]:
            self._augment()
        return self.feasible

    def coupling(self, scale: int) -> Coupling:
        flows = {ij: self.graph.flow_on(e) for ij, e in self.edge_arcs.items()}
        return _coupling(flows, scale)
