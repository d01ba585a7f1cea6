"""Bipartite maximum matching over a boolean support mask.

Rows are the left vertices and columns the right vertices; ``support[i, j]``
admits the edge ``(i, j)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import NotSquare, Permutation

FREE = -1


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.pairs)


def _adjacency(support: np.ndarray) -> list[list[int]]:
    support = np.asarray(support, dtype=bool)
    return [np.flatnonzero(row).tolist() for row in support]


def hopcroft_karp(adj: list[list[int]], m: int) -> tuple[list[int], list[int]]:
    """Maximum matching of the graph given by row adjacency lists.

    Returns ``(row_mate, col_mate)`` with ``FREE`` for unmatched vertices.
    """
    n = len(adj)
    row_mate = [FREE] * n
    col_mate = [FREE] * m
    inf = n + 1
    while True:
        # BFS layering from the free rows
        dist = [inf] * n
        queue = deque()
        for i in range(n):
            if row_mate[i] == FREE:
                dist[i] = 0
                queue.append(i)
        found = inf
        while queue:
            i = queue.popleft()
            if dist[i] >= found:
                continue
            for j in adj[i]:
                r = col_mate[j]
                if r == FREE:
                    found = min(found, dist[i] + 1)
                elif dist[r] == inf:
                    dist[r] = dist[i] + 1
                    queue.append(r)
        if found == inf:
            return row_mate, col_mate

        # vertex-disjoint shortest augmenting paths, iterative DFS
        ptr = [0] * n
        for root in range(n):
            if row_mate[root] != FREE or dist[root] != 0:
                continue
            stack = [root]
            path_cols: list[int] = []
            while stack:
                i = stack[-1]
                advanced = False
                while ptr[i] < len(adj[i]):
                    j = adj[i][ptr[i]]
                    ptr[i] += 1
                    r = col_mate[j]
                    if r == FREE:
                        if dist[i] + 1 == found:
                            path_cols.append(j)
                            for row, col in zip(stack, path_cols):
                                row_mate[row] = col
                                col_mate[col] = row
                            stack = []
                            advanced = True
                            break
                    elif dist[r] == dist[i] + 1:
                        path_cols.append(j)
                        stack.append(r)
                        advanced = True
                        break
                if not advanced:
                    dist[i] = inf
                    stack.pop()
                    if path_cols:
                        path_cols.pop()


def max_matching(support) -> Matching:
    """Maximum-cardinality matching of the admitted edges (Hopcroft-Karp)."""
    support = np.asarray(support, dtype=bool)
    row_mate, _ = hopcroft_karp(_adjacency(support), support.shape[1])
    return Matching(tuple((i, j) for i, j in enumerate(row_mate) if j != FREE))


def check_perm(support) -> Optional[Permutation]:
    """A permutation inside the admitted edges, or ``None`` if there is none.

    A permutation exists exactly when the 0/1 matrix has a non-zero
    permanent, i.e. when the maximum matching is perfect.
    """
    support = np.asarray(support, dtype=bool)
    n, m = support.shape
    if n != m:
        raise NotSquare(f"check_perm needs a square support, got {n}x{m}")
    row_mate, _ = hopcroft_karp(_adjacency(support), m)
    if FREE in row_mate:
        return None
    return Permutation(tuple(row_mate))


class IncrementalMatching:
    """Maximum matching maintained under single-edge insertions.

    If the matching is maximum before ``(i, j)`` is inserted, every augmenting
    path afterwards runs through the new edge. It therefore splits into an
    alternating path from a free row to ``i`` and one from ``j`` to a free
    column, both in the old graph, and the two searches below find them.
    """

    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m
        self.row_adj: list[list[int]] = [[] for _ in range(n)]
        self.col_adj: list[list[int]] = [[] for _ in range(m)]
        self.row_mate = [FREE] * n
        self.col_mate = [FREE] * m
        self.size = 0

    @classmethod
    def from_support(cls, support, matching: Optional[Matching] = None) -> "IncrementalMatching":
        support = np.asarray(support, dtype=bool)
        state = cls(*support.shape)
        for i, j in zip(*np.nonzero(support)):
            state.row_adj[int(i)].append(int(j))
            state.col_adj[int(j)].append(int(i))
        if matching is None:
            row_mate, col_mate = hopcroft_karp(state.row_adj, state.m)
            state.row_mate, state.col_mate = row_mate, col_mate
            state.size = sum(1 for j in row_mate if j != FREE)
        else:
            for i, j in matching.pairs:
                state.row_mate[i] = j
                state.col_mate[j] = i
            state.size = matching.size
        return state

    def matching(self) -> Matching:
        return Matching(tuple((i, j) for i, j in enumerate(self.row_mate) if j != FREE))

    def _back_to_free_row(self, i: int) -> Optional[list[int]]:
        # rows on an alternating path ending at i, listed from the free row
        if self.row_mate[i] == FREE:
            return [i]
        parent = {i: None}
        queue = deque([i])
        while queue:
            r = queue.popleft()
            c = self.row_mate[r]
            for r2 in self.col_adj[c]:
                if r2 in parent:
                    continue
                parent[r2] = r
                if self.row_mate[r2] == FREE:
                    rows = [r2]
                    while parent[rows[-1]] is not None:
                        rows.append(parent[rows[-1]])
                    return rows
                queue.append(r2)
        return None

    def _forward_to_free_col(self, j: int) -> Optional[list[int]]:
        # columns on an alternating path starting at j, ending at a free column
        if self.col_mate[j] == FREE:
            return [j]
        parent = {j: None}
        queue = deque([j])
        while queue:
            c = queue.popleft()
            r = self.col_mate[c]
            for c2 in self.row_adj[r]:
                if c2 in parent:
                    continue
                parent[c2] = c
                if self.col_mate[c2] == FREE:
                    cols = [c2]
                    while parent[cols[-1]] is not None:
                        cols.append(parent[cols[-1]])
                    cols.reverse()
                    return cols
                queue.append(c2)
        return None

    def add_edge(self, i: int, j: int) -> bool:
        """Admit ``(i, j)`` and augment if possible; True when the size grew."""
        self.row_adj[i].append(j)
        self.col_adj[j].append(i)
        if self.size == min(self.n, self.m):
            return False
        rows = self._back_to_free_row(i)
        if rows is None:
            return False
        cols = self._forward_to_free_col(j)
        if cols is None:
            return False
        # rows[-1] == i; row rows[t] takes the column currently held by rows[t+1]
        new_cols = [self.row_mate[r] for r in rows[1:]] + cols[:1]
        pairs = list(zip(rows, new_cols))
        tail = cols[1:]
        tail_rows = [self.col_mate[c] for c in cols[:-1]]
        pairs.extend(zip(tail_rows, tail))
        for r, c in pairs:
            self.row_mate[r] = c
            self.col_mate[c] = r
        self.size += 1
        return True


def extend_matching(support, current: Matching, new_edge: tuple[int, int]) -> Matching:
    """Maximum matching after admitting ``new_edge`` into ``support``.

    ``current`` must be maximum for the support without ``new_edge``. Only a
    single augmenting path through the new edge is searched.
    """
    support = np.array(support, dtype=bool, copy=True)
    i, j = new_edge
    support[i, j] = False
    state = IncrementalMatching.from_support(support, current)
    state.add_edge(i, j)
    return state.matching()
