"""Exact minimum-J_sum partitioning for tiny grids, and the reduction from
3-way number partitioning that produces instances with a known optimum."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .evalcost import induced_edges
from .grid import Grid
from .mappers.base import MappingError
from .stencil import Stencil

DEFAULT_LIMIT = 12


class OracleRefusal(RuntimeError):
    """Instance too large for exhaustive search."""


@dataclass
class OracleResult:
    optimal_j_sum: int
    witness: list[int]        # node index of every vertex, row-major
    nodes_expanded: int


@dataclass(frozen=True)
class NpInstance:
    multiset: tuple[int, ...]
    grid: Grid
    stencil: Stencil
    node_sizes: tuple[int, ...]
    q: int

    def as_dict(self) -> dict:
        return {
            "multiset": list(self.multiset),
            "dims": list(self.grid.dims),
            "stencil": [list(o) for o in self.stencil.offsets],
            "node_sizes": list(self.node_sizes),
            "q": self.q,
        }


def three_way_to_grid(multiset: Sequence[int]) -> NpInstance:
    """Grid-partition instance that has J_sum <= q iff ``multiset`` splits into
    three parts of equal sum: three rows of length sum/3 communicating along
    the rows only, one node per multiset element."""
    items = tuple(int(x) for x in multiset)
    if any(x < 1 for x in items):
        raise ValueError(f"multiset entries must be positive, got {list(items)}")
    if len(items) < 3:
        raise ValueError(f"need at least 3 entries, got {len(items)} (threshold would be negative)")
    total = sum(items)
    if total % 3:
        raise ValueError(f"sum {total} is not divisible by 3")
    g = Grid((3, total // 3))
    s = Stencil(((0, -1), (0, 1)))
    return NpInstance(items, g, s, items, 2 * len(items) - 6)


def three_way_partitionable(multiset: Sequence[int]) -> bool:
    """Exhaustive check over all 3^m bin assignments."""
    total = sum(multiset)
    if total % 3:
        return False
    third = total // 3
    for bins in product(range(3), repeat=len(multiset)):
        sums = [0, 0, 0]
        for x, b in zip(multiset, bins):
            sums[b] += x
        if sums[0] == sums[1] == third:
            return True
    return False


def brute_force_optimal(g: Grid, s: Stencil, sizes: Sequence[int], limit: int = DEFAULT_LIMIT) -> OracleResult:
    """Branch-and-bound over all vertex-to-node assignments respecting ``sizes``.

    Vertices are assigned in row-major order, nodes tried in index order, and
    a branch is cut once its committed directed cut count reaches the best
    known value. The first optimum found is the lexicographically smallest.
    """
    p = g.size
    if p > limit:
        raise OracleRefusal(f"grid has {p} vertices; exhaustive search needs --limit >= {p} (current {limit})")
    sizes = [int(x) for x in sizes]
    if sum(sizes) != p:
        raise MappingError(f"node sizes sum to {sum(sizes)} but the grid has {p} vertices")

    # for each vertex, directed edges to earlier vertices (counted once both ends are set)
    back = [[] for _ in range(p)]
    for u, v in induced_edges(g, s):
        if u == v:
            continue
        back[max(u, v)].append(min(u, v))

    num = len(sizes)
    # nodes of equal size may only be opened in index order
    prev_same = [max((j for j in range(i) if sizes[j] == sizes[i]), default=-1) for i in range(num)]

    assign = [-1] * p
    left = list(sizes)
    opened = [False] * num
    best = [None, None]
    expanded = 0

    def dfs(v, cost):
        nonlocal expanded
        expanded += 1
        if best[0] is not None and cost >= best[0]:
            return
        if v == p:
            best[0], best[1] = cost, list(assign)
            return
        for node in range(num):
            if not left[node]:
                continue
            if not opened[node] and prev_same[node] >= 0 and not opened[prev_same[node]]:
                continue
            add = sum(1 for w in back[v] if assign[w] != node)
            assign[v] = node
            left[node] -= 1
            was_open = opened[node]
            opened[node] = True
            dfs(v + 1, cost + add)
            opened[node] = was_open
            left[node] += 1
            assign[v] = -1

    dfs(0, 0)
    return OracleResult(best[0], best[1], expanded)
