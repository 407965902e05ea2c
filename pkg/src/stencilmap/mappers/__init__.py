"""Rank reordering algorithms.

Every algorithm has a per-rank entry point (``*_coord``), which needs only the
instance description and the calling rank, and a whole-grid entry point
(``*_map``) returning a :class:`RankMapping`. Both must agree rank for rank.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..grid import Grid, rank_to_coord
from ..stencil import Stencil
from .base import (
    ConfigurationError,
    InfeasibleError,
    MappingError,
    NodeConfig,
    RankMapping,
    coords_to_ranks,
)
from .baseline import blocked_map, random_map, random_permutation
from .hyperplane import (
    SplitError,
    SplitRecord,
    depth_bound,
    find_split,
    hyperplane_coord,
    hyperplane_map,
    hyperplane_splits,
)
from .kdtree import kdtree_coord, kdtree_map, kdtree_splits
from .nodecart import inner_dims, nodecart_coord, nodecart_map
from .strips import strip_layout, strips_coord, strips_map

ALGORITHMS = ("blocked", "random", "hyperplane", "kdtree", "strips", "nodecart")


@dataclass
class Outcome:
    tag: str
    mapping: Optional[RankMapping]
    flags: list[str] = field(default_factory=list)

    @property
    def skipped(self) -> bool:
        return self.mapping is None


def compute(algo: str, g: Grid, s: Stencil, nc: NodeConfig, seed: int = 0) -> RankMapping:
    """Whole-grid mapping for one algorithm; raises on unmet preconditions."""
    nc.check_grid(g)
    n = nc.n
    if algo == "blocked":
        return blocked_map(g)
    if algo == "random":
        return random_map(g, seed)
    if algo == "hyperplane":
        return hyperplane_map(g, s, n)
    if algo == "kdtree":
        return kdtree_map(g, s)
    if algo == "strips":
        return strips_map(g, s, n)
    if algo == "nodecart":
        if not nc.is_homogeneous:
            raise InfeasibleError("nodecart needs equal node sizes")
        return nodecart_map(g, n)
    raise ValueError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")


def compute_rank(algo: str, g: Grid, s: Stencil, nc: NodeConfig, r: int, seed: int = 0) -> tuple[int, ...]:
    """New coordinate of a single rank, without building the whole mapping."""
    n = nc.n
    if algo == "blocked":
        return rank_to_coord(g, r)
    if algo == "random":
        # not distributed: every rank replays the same seeded shuffle
        return rank_to_coord(g, random_permutation(g.size, seed)[r])
    if algo == "hyperplane":
        return hyperplane_coord(g, s, n, r)
    if algo == "kdtree":
        return kdtree_coord(g, s, r)
    if algo == "strips":
        return strips_coord(g, s, n, r)
    if algo == "nodecart":
        if not nc.is_homogeneous:
            raise InfeasibleError("nodecart needs equal node sizes")
        return nodecart_coord(g, n, r)
    raise ValueError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")


def run_one(algo: str, g: Grid, s: Stencil, nc: NodeConfig, seed: int = 0) -> Outcome:
    """Like :func:`compute`, but turns precondition failures into flags."""
    if algo == "hyperplane" and g.size % nc.n:
        return Outcome(algo, None, [f"skipped:p={g.size} not a multiple of n={nc.n}"])
    if algo == "nodecart":
        try:
            m = compute(algo, g, s, nc, seed)
        except InfeasibleError as exc:
            m = blocked_map(g)
            m.algorithm_tag = "nodecart"
            m.flags.append("fallback:blocked")
            return Outcome(algo, m.check(), [f"infeasible:{exc}", "fallback:blocked"])
        return Outcome(algo, m.check())
    return Outcome(algo, compute(algo, g, s, nc, seed).check())


def run_all(g: Grid, s: Stencil, nc: NodeConfig, seed: int = 0, algorithms=ALGORITHMS) -> dict[str, Outcome]:
    return {a: run_one(a, g, s, nc, seed) for a in algorithms}


__all__ = [
    "ALGORITHMS",
    "ConfigurationError",
    "InfeasibleError",
    "MappingError",
    "NodeConfig",
    "Outcome",
    "RankMapping",
    "SplitError",
    "SplitRecord",
    "blocked_map",
    "compute",
    "compute_rank",
    "coords_to_ranks",
    "depth_bound",
    "find_split",
    "hyperplane_coord",
    "hyperplane_map",
    "hyperplane_splits",
    "inner_dims",
    "kdtree_coord",
    "kdtree_map",
    "kdtree_splits",
    "nodecart_coord",
    "nodecart_map",
    "random_map",
    "run_all",
    "run_one",
    "strip_layout",
    "strips_coord",
    "strips_map",
]
