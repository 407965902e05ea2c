"""Nodecart baseline: split the grid into an inter-node grid times an
intra-node box using the prime factors of ``n``.

This is a reconstruction from a summary of the original method, not a
faithful port; the factor assignment order is our own greedy rule.
"""
from __future__ import annotations

import math

import numpy as np

from ..grid import Grid, prime_factors, rank_to_coord
from .base import InfeasibleError, RankMapping, from_coords, single_rank_check

TAG = "nodecart"


def inner_dims(dims, n: int) -> list[int]:
    """Per-dimension extent of each node's box; product is ``n``.

    Prime factors of ``n``, largest first, go to the dimension with the
    largest remaining outer extent that the factor divides.
    """
    if n < 1 or math.prod(dims) % n:
        raise InfeasibleError(f"grid {list(dims)} is not a whole number of nodes of {n}")
    inner = [1] * len(dims)
    for f in reversed(prime_factors(n)):
        outer = [d // i for d, i in zip(dims, inner)]
        fits = [j for j, o in enumerate(outer) if o % f == 0]
        if not fits:
            raise InfeasibleError(f"prime factor {f} of n={n} divides no remaining extent of {outer}")
        j = max(fits, key=lambda j: (outer[j], -j))
        inner[j] *= f
    return inner


def nodecart_coord(g: Grid, n: int, r: int, inner=None) -> tuple[int, ...]:
    single_rank_check(g, r)
    inner = inner or inner_dims(g.dims, n)
    outer = [d // i for d, i in zip(g.dims, inner)]
    q, local = divmod(r, n)
    oc = rank_to_coord(outer, q)
    ic = rank_to_coord(inner, local)
    return tuple(o * w + c for o, w, c in zip(oc, inner, ic))


def nodecart_map(g: Grid, n: int) -> RankMapping:
    inner = np.asarray(inner_dims(g.dims, n))
    outer = np.asarray(g.dims) // inner
    ranks = np.arange(g.size)
    oc = np.stack(np.unravel_index(ranks // n, tuple(outer)), axis=1)
    ic = np.stack(np.unravel_index(ranks % n, tuple(inner)), axis=1)
    return from_coords(g.dims, oc * inner + ic, TAG)
