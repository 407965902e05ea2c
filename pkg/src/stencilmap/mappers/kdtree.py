"""Node-size-oblivious recursive halving.

The grid is halved along the dimension with the largest extent per unit of
stencil traffic crossing it (d_i / f_i) until single cells remain. The lower
half keeps the first floor(d_i/2) slabs and the lower rank range.
"""
from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from ..grid import Grid
from ..stencil import Stencil, comm_weights
from .base import RankMapping, from_coords, single_rank_check
from .hyperplane import SplitRecord

TAG = "kdtree"


def _beats(di: int, fi: int, dj: int, fj: int) -> bool:
    """True if extent di with traffic fi strictly outranks dj with fj."""
    # dimensions the stencil never crosses outrank everything else
    if fi == 0 or fj == 0:
        if fi == 0 and fj == 0:
            return di > dj
        return fi == 0
    return di * fj > dj * fi


def split_dim(dims: Sequence[int], f: Sequence[int]) -> int:
    """Index maximizing d_i / f_i among splittable dimensions (extent >= 2);
    the lower index wins ties."""
    best = -1
    for i, di in enumerate(dims):
        if di < 2:
            continue
        if best < 0 or _beats(di, f[i], dims[best], f[best]):
            best = i
    if best < 0:
        raise ValueError(f"nothing left to split in {list(dims)}")
    return best


def kdtree_coord(g: Grid, s: Stencil, r: int, trace: Optional[list] = None) -> tuple[int, ...]:
    single_rank_check(g, r)
    f = comm_weights(s)
    dims = list(g.dims)
    coord = [0] * len(dims)
    depth = 0
    total = g.size
    while total > 1:
        i = split_dim(dims, f)
        a = dims[i] // 2
        left = a * (total // dims[i])
        if trace is not None:
            trace.append(SplitRecord(depth, i, tuple(dims), a, dims[i] - a, left, total - left))
        if r < left:
            dims[i] = a
            total = left
        else:
            r -= left
            coord[i] += a
            dims[i] -= a
            total -= left
        depth += 1
    return tuple(coord)


def kdtree_map(g: Grid, s: Stencil, trace: Optional[list] = None) -> RankMapping:
    f = comm_weights(s)
    out = np.empty((g.size, g.ndims), dtype=np.int64)

    def walk(dims, origin, base, depth):
        total = math.prod(dims)
        if total == 1:
            out[base] = origin
            return
        i = split_dim(dims, f)
        a = dims[i] // 2
        left = a * (total // dims[i])
        if trace is not None:
            trace.append(SplitRecord(depth, i, tuple(dims), a, dims[i] - a, left, total - left))
        ldims, rdims, rorigin = list(dims), list(dims), list(origin)
        ldims[i], rdims[i] = a, dims[i] - a
        rorigin[i] += a
        walk(ldims, origin, base, depth + 1)
        walk(rdims, rorigin, base + left, depth + 1)

    walk(list(g.dims), [0] * g.ndims, 0, 0)
    return from_coords(g.dims, out, TAG)


def kdtree_splits(g: Grid, s: Stencil) -> list[SplitRecord]:
    trace: list[SplitRecord] = []
    kdtree_map(g, s, trace=trace)
    return trace
