"""Cartesian process grid geometry.

Ranks are laid out row-major over the grid, last dimension fastest, which is
the C/MPI convention.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

UINT64_MAX = 2**64 - 1


class GridError(ValueError):
    """Invalid grid description or out-of-range rank/coordinate."""


@dataclass(frozen=True)
class Grid:
    dims: tuple[int, ...]
    periods: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        periods = tuple(bool(x) for x in self.periods) if self.periods else (False,) * len(dims)
        if not dims:
            raise GridError("grid needs at least one dimension")
        if any(d < 1 for d in dims):
            raise GridError(f"dimension sizes must be >= 1, got {list(dims)}")
        if len(periods) != len(dims):
            raise GridError(f"periods has length {len(periods)}, dims has length {len(dims)}")
        if math.prod(dims) > UINT64_MAX:
            raise GridError("process count does not fit in 64 bits")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "periods", periods)

    @property
    def ndims(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        """Total process count p."""
        return math.prod(self.dims)

    def rank_to_coord(self, r: int) -> tuple[int, ...]:
        return rank_to_coord(self.dims, r)

    def coord_to_rank(self, c: Sequence[int]) -> int:
        return coord_to_rank(self.dims, c)


def _dims_of(g) -> tuple[int, ...]:
    return g.dims if isinstance(g, Grid) else tuple(g)


def rank_to_coord(g, r: int) -> tuple[int, ...]:
    """Row-major decomposition of rank ``r``. ``g`` is a Grid or a dims list."""
    dims = _dims_of(g)
    p = math.prod(dims)
    if not 0 <= r < p:
        raise GridError(f"rank {r} out of range [0, {p})")
    coord = [0] * len(dims)
    for i in range(len(dims) - 1, -1, -1):
        r, coord[i] = divmod(r, dims[i])
    return tuple(coord)


def coord_to_rank(g, c: Sequence[int]) -> int:
    dims = _dims_of(g)
    if len(c) != len(dims):
        raise GridError(f"coordinate {list(c)} has wrong length for dims {list(dims)}")
    r = 0
    for ci, di in zip(c, dims):
        if not 0 <= ci < di:
            raise GridError(f"coordinate {list(c)} out of range for dims {list(dims)}")
        r = r * di + ci
    return r


def prime_factors(x: int) -> list[int]:
    """Prime factors of ``x`` with multiplicity, ascending. ``prime_factors(1) == []``."""
    if x < 1:
        raise ValueError(f"prime_factors needs x >= 1, got {x}")
    out = []
    f = 2
    while f * f <= x:
        while x % f == 0:
            out.append(f)
            x //= f
        f += 1 if f == 2 else 2
    if x > 1:
        out.append(x)
    return out


def _divisors(x: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= x:
        if x % i == 0:
            small.append(i)
            if i != x // i:
                large.append(x // i)
        i += 1
    return small + large[::-1]


def dims_create(p: int, d: int) -> list[int]:
    """Balanced factorization of ``p`` into ``d`` factors, sorted non-increasing.

    Among all factorizations the one with the smallest spread (largest minus
    smallest factor) wins; ties go to the lexicographically smallest
    non-increasing vector.
    """
    if p < 1 or d < 1:
        raise ValueError(f"dims_create needs p >= 1 and d >= 1, got p={p}, d={d}")
    best = None

    # factors generated non-increasing: each next factor <= previous one
    def descend(rest, slots, cap, prefix):
        nonlocal best
        if slots == 1:
            if rest <= cap:
                cand = prefix + [rest]
                key = (cand[0] - cand[-1], cand)
                if best is None or key < best:
                    best = key
            return
        for f in reversed(_divisors(rest)):
            if f > cap:
                continue
            # remaining slots-1 factors are each <= f, so f**slots must reach rest
            if f**slots < rest:
                break
            if best is not None and prefix and prefix[0] - f > best[0]:
                break
            descend(rest // f, slots - 1, f, prefix + [f])

    descend(p, d, p, [])
    return best[1]
