"""Recursive bisection with node-size-divisible parts.

Each split cuts the dimension most orthogonal to the stencil (smallest summed
squared direction cosine; larger dimension first on ties) at the position
closest to its center for which both halves hold a multiple of ``n``
processes. Sub-grids of at most ``2n`` processes are enumerated directly with
the most heavily communicating dimension varying fastest.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..grid import Grid
from ..stencil import Stencil, cosine_preference_exact
from .base import ConfigurationError, RankMapping, all_coords, from_coords, single_rank_check

TAG = "hyperplane"


class SplitError(AssertionError):
    """No admissible split exists although the grid holds C*n processes, C >= 2."""


@dataclass(frozen=True)
class SplitRecord:
    depth: int
    dim: int
    parent_dims: tuple[int, ...]
    left_extent: int
    right_extent: int
    left_size: int
    right_size: int


def split_order(dims: Sequence[int], pref: Sequence[Fraction]) -> list[int]:
    """Dimensions in the order cuts are attempted: ascending preference,
    larger extent first, lower index first."""
    return sorted(range(len(dims)), key=lambda i: (pref[i], -dims[i], i))


def _cut_candidates(extent: int):
    # center first, then alternating outward: h, h-1, h+1, h-2, ...
    if extent < 2:
        return
    h = extent // 2
    yield h
    for delta in range(1, extent):
        lo, hi = h - delta, h + delta
        if lo < 1 and hi > extent - 1:
            return
        if lo >= 1:
            yield lo
        if hi <= extent - 1:
            yield hi


def _find_split(dims, pref, n):
    total = math.prod(dims)
    for i in split_order(dims, pref):
        rest = total // dims[i]
        for c in _cut_candidates(dims[i]):
            if (c * rest) % n == 0 and ((dims[i] - c) * rest) % n == 0:
                return i, c, dims[i] - c
    raise SplitError(f"no split of {list(dims)} into multiples of {n}")


def find_split(dims: Sequence[int], s: Stencil, n: int) -> tuple[int, int, int]:
    """Return ``(dim, left_extent, right_extent)`` for the next cut."""
    total = math.prod(dims)
    if total % n or total // n < 2:
        raise ConfigurationError(f"find_split needs C*n processes with C >= 2; got {total} for n={n}")
    return _find_split(list(dims), cosine_preference_exact(s), n)


def _base_order(dims, pref):
    # slowest dimension first; the last entry varies fastest
    return split_order(dims, pref)


def _base_coord(dims, pref, local):
    order = _base_order(dims, pref)
    coord = [0] * len(dims)
    for i in reversed(order):
        local, coord[i] = divmod(local, dims[i])
    return coord


def _check(g: Grid, n: int):
    if n < 1 or g.size % n:
        raise ConfigurationError(f"hyperplane needs p to be a multiple of n; p={g.size}, n={n}")


def hyperplane_coord(g: Grid, s: Stencil, n: int, r: int,
                     trace: Optional[list] = None) -> tuple[int, ...]:
    """New coordinate of rank ``r``, computed from the inputs alone.

    If ``trace`` is a list, the splits on the path of ``r`` are appended to it.
    """
    _check(g, n)
    single_rank_check(g, r)
    pref = cosine_preference_exact(s)
    dims = list(g.dims)
    origin = [0] * len(dims)
    depth = 0
    while math.prod(dims) > 2 * n:
        i, a, b = _find_split(dims, pref, n)
        left = a * (math.prod(dims) // dims[i])
        if trace is not None:
            trace.append(SplitRecord(depth, i, tuple(dims), a, b, left, math.prod(dims) - left))
        if r < left:
            dims[i] = a
        else:
            r -= left
            origin[i] += a
            dims[i] = b
        depth += 1
    local = _base_coord(dims, pref, r)
    return tuple(o + c for o, c in zip(origin, local))


def _base_cells(dims, pref):
    order = _base_order(dims, pref)
    cells = all_coords([dims[i] for i in order])
    out = np.empty_like(cells)
    out[:, order] = cells
    return out


def hyperplane_map(g: Grid, s: Stencil, n: int, trace: Optional[list] = None) -> RankMapping:
    """Whole-grid mapping by walking the split tree once.

    ``trace`` collects every split of the tree in depth-first order.
    """
    _check(g, n)
    pref = cosine_preference_exact(s)
    out = np.empty((g.size, g.ndims), dtype=np.int64)

    def walk(dims, origin, base, depth):
        total = math.prod(dims)
        if total <= 2 * n:
            out[base:base + total] = _base_cells(dims, pref) + np.asarray(origin)
            return
        i, a, b = _find_split(dims, pref, n)
        left = a * (total // dims[i])
        if trace is not None:
            trace.append(SplitRecord(depth, i, tuple(dims), a, b, left, total - left))
        ldims, rdims, rorigin = list(dims), list(dims), list(origin)
        ldims[i], rdims[i] = a, b
        rorigin[i] += a
        walk(ldims, origin, base, depth + 1)
        walk(rdims, rorigin, base + left, depth + 1)

    walk(list(g.dims), [0] * g.ndims, 0, 0)
    return from_coords(g.dims, out, TAG)


def hyperplane_splits(g: Grid, s: Stencil, n: int) -> list[SplitRecord]:
    trace: list[SplitRecord] = []
    hyperplane_map(g, s, n, trace=trace)
    return trace


def depth_bound(num_nodes: int) -> int:
    """Maximum recursion depth implied by the 1/2 balance guarantee."""
    if num_nodes <= 1:
        return 1
    return math.ceil(math.log(num_nodes) / math.log(1.5)) + 1
