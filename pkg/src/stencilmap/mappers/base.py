from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Optional, Sequence

import numpy as np

from ..grid import Grid

AGGREGATE_RULES = ("mean", "min", "max")


class MappingError(ValueError):
    """Mapping input or output violates a contract (non-bijective, bad node config)."""


class ConfigurationError(MappingError):
    """Algorithm precondition not met, e.g. p is not a multiple of n."""


class InfeasibleError(MappingError):
    """The grid cannot be decomposed the way the algorithm requires."""


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class NodeConfig:
    """Per-node process counts. Ranks are owned by nodes in consecutive blocks."""

    sizes: tuple[int, ...]
    aggregate_rule: str = "mean"

    def __post_init__(self):
        sizes = tuple(int(x) for x in self.sizes)
        if not sizes:
            raise MappingError("node config needs at least one node")
        if any(x < 1 for x in sizes):
            raise MappingError(f"node sizes must be positive, got {list(sizes)}")
        if self.aggregate_rule not in AGGREGATE_RULES:
            raise MappingError(f"aggregate rule must be one of {AGGREGATE_RULES}, got {self.aggregate_rule!r}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def homogeneous(cls, p: int, n: int, aggregate_rule: str = "mean") -> "NodeConfig":
        if n < 1 or p % n:
            raise MappingError(f"{p} processes cannot be split into nodes of {n}")
        return cls((n,) * (p // n), aggregate_rule)

    @property
    def num_nodes(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def n(self) -> int:
        """Aggregate processes-per-node handed to the mapping algorithms."""
        if self.aggregate_rule == "min":
            v = min(self.sizes)
        elif self.aggregate_rule == "max":
            v = max(self.sizes)
        else:
            v = _round_half_up(self.total / len(self.sizes))
        return max(1, v)

    @property
    def is_homogeneous(self) -> bool:
        return len(set(self.sizes)) == 1

    def prefix(self) -> list[int]:
        return list(accumulate(self.sizes))

    def check_grid(self, g: Grid):
        if self.total != g.size:
            raise MappingError(f"node sizes sum to {self.total} but the grid has {g.size} processes")


@dataclass
class RankMapping:
    """new_coord[r] is the grid coordinate original rank r moves to."""

    new_coord: np.ndarray
    algorithm_tag: str
    dims: tuple[int, ...]
    seed: Optional[int] = None
    flags: list[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.new_coord)

    def new_ranks(self) -> np.ndarray:
        """Row-major rank of each new coordinate, indexed by original rank."""
        return coords_to_ranks(self.dims, self.new_coord)

    def is_bijective(self) -> bool:
        p = math.prod(self.dims)
        nc = np.asarray(self.new_coord)
        if nc.shape != (p, len(self.dims)):
            return False
        if (nc < 0).any() or (nc >= np.asarray(self.dims)).any():
            return False
        ranks = self.new_ranks()
        return np.array_equal(np.sort(ranks), np.arange(p))

    def check(self):
        if not self.is_bijective():
            raise MappingError(f"{self.algorithm_tag} mapping is not a permutation of the grid")
        return self

    def coord(self, r: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.new_coord[r])


def coords_to_ranks(dims: Sequence[int], coords: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.int64)
    if coords.size == 0:
        return np.zeros(0, dtype=np.int64)
    return np.ravel_multi_index(tuple(coords.T), tuple(dims))


def all_coords(dims: Sequence[int]) -> np.ndarray:
    """Coordinates of every rank in row-major order, shape (p, d)."""
    p = math.prod(dims)
    return np.stack(np.unravel_index(np.arange(p), tuple(dims)), axis=1).astype(np.int64)


def from_ranks(dims: Sequence[int], new_ranks: Sequence[int], tag: str, **kw) -> RankMapping:
    nc = np.stack(np.unravel_index(np.asarray(new_ranks, dtype=np.int64), tuple(dims)), axis=1)
    return RankMapping(nc.astype(np.int64), tag, tuple(dims), **kw)


def from_coords(dims: Sequence[int], coords, tag: str, **kw) -> RankMapping:
    nc = np.asarray(coords, dtype=np.int64).reshape(-1, len(dims))
    return RankMapping(nc, tag, tuple(dims), **kw)


def single_rank_check(g: Grid, r: int):
    if not 0 <= r < g.size:
        raise MappingError(f"rank {r} out of range [0, {g.size})")

