"""Inter-node communication cost of a mapping.

Edges are directed: every (vertex, offset) pair whose target lies on the grid
is one send. An undirected cut between two nodes therefore counts twice in
``j_sum``, once for each endpoint's node in ``per_node``.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

import numpy as np

from .grid import Grid, coord_to_rank
from .mappers.base import MappingError, NodeConfig, RankMapping
from .stencil import Stencil

EDGE_CONVENTION = "directed"


def fingerprint(g: Grid, s: Stencil, nc: NodeConfig) -> dict:
    return {
        "dims": list(g.dims),
        "periods": [int(x) for x in g.periods],
        "stencil": s.digest(),
        "sizes": list(nc.sizes),
    }


@dataclass
class CostReport:
    j_sum: int
    j_max: int
    per_node: list[int]
    bottleneck_node: int
    fingerprint: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {
            "j_sum": self.j_sum,
            "j_max": self.j_max,
            "per_node": list(self.per_node),
            "bottleneck_node": self.bottleneck_node,
        }


@dataclass(frozen=True)
class Reduction:
    sum_ratio: float
    max_ratio: float
    flags: tuple[str, ...] = ()


def owner_of(nc: NodeConfig, r: int) -> int:
    """Node owning original rank ``r`` (consecutive blocks of n_i ranks)."""
    if not 0 <= r < nc.total:
        raise MappingError(f"rank {r} out of range [0, {nc.total})")
    return bisect_right(nc.prefix(), r)


def owners(nc: NodeConfig) -> np.ndarray:
    return np.repeat(np.arange(nc.num_nodes), nc.sizes)


def induced_edges(g: Grid, s: Stencil) -> Iterator[tuple[int, int]]:
    """Directed communication edges (source rank, target rank) in grid order."""
    if s.ndims != g.ndims:
        raise MappingError(f"stencil has {s.ndims} dimensions, grid has {g.ndims}")
    for u in product(*(range(d) for d in g.dims)):
        src = coord_to_rank(g, u)
        for off in s.offsets:
            tgt = []
            for x, o, d, per in zip(u, off, g.dims, g.periods):
                y = x + o
                if per:
                    y %= d
                elif not 0 <= y < d:
                    break
                tgt.append(y)
            else:
                yield src, coord_to_rank(g, tgt)


def _owner_grid(g: Grid, m: RankMapping, nc: NodeConfig) -> np.ndarray:
    """Owner of each grid position (row-major), through the mapping."""
    if tuple(m.dims) != g.dims:
        raise MappingError(f"mapping is for dims {list(m.dims)}, grid is {list(g.dims)}")
    nc.check_grid(g)
    if not m.is_bijective():
        raise MappingError(f"{m.algorithm_tag} mapping is not a permutation of the grid")
    at = np.empty(g.size, dtype=np.int64)
    at[m.new_ranks()] = owners(nc)
    return at.reshape(g.dims)


def evaluate(g: Grid, s: Stencil, m: RankMapping, nc: NodeConfig) -> CostReport:
    if s.ndims != g.ndims:
        raise MappingError(f"stencil has {s.ndims} dimensions, grid has {g.ndims}")
    own = _owner_grid(g, m, nc)
    per_node = np.zeros(nc.num_nodes, dtype=np.int64)
    for off in s.offsets:
        src = own
        tgt = own
        for axis, (o, d, per) in enumerate(zip(off, g.dims, g.periods)):
            if o == 0:
                continue
            if per:
                tgt = np.roll(tgt, -o, axis=axis)
                continue
            if abs(o) >= d:
                src = tgt = None
                break
            keep = [slice(None)] * g.ndims
            shift = [slice(None)] * g.ndims
            if o > 0:
                keep[axis], shift[axis] = slice(0, d - o), slice(o, d)
            else:
                keep[axis], shift[axis] = slice(-o, d), slice(0, d + o)
            src, tgt = src[tuple(keep)], tgt[tuple(shift)]
        if src is None:
            continue
        cut = src != tgt
        per_node += np.bincount(src[cut], minlength=nc.num_nodes)
    per = [int(x) for x in per_node]
    j_max = max(per)
    return CostReport(sum(per), j_max, per, per.index(j_max), fingerprint(g, s, nc))


def _ratio(x: int, base: int):
    if base == 0:
        return (1.0, None) if x == 0 else (math.inf, "baseline-zero")
    return x / base, None


def reduction(x: CostReport, baseline: CostReport) -> Reduction:
    """Cost relative to a baseline; 1.0 means no change, lower is better."""
    if x.fingerprint and baseline.fingerprint and x.fingerprint != baseline.fingerprint:
        raise MappingError("cost reports come from different instances")
    s, f1 = _ratio(x.j_sum, baseline.j_sum)
    m, f2 = _ratio(x.j_max, baseline.j_max)
    flags = tuple(f"{name}:{f}" for name, f in (("sum", f1), ("max", f2)) if f)
    return Reduction(s, m, flags)
