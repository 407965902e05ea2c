from __future__ import annotations

import random
from functools import lru_cache

import numpy as np

from ..grid import Grid
from .base import RankMapping, all_coords, from_ranks


def blocked_map(g: Grid) -> RankMapping:
    """Identity reordering: rank r stays at its row-major position."""
    return RankMapping(all_coords(g.dims), "blocked", g.dims)


@lru_cache(maxsize=16)
def random_permutation(p: int, seed: int) -> tuple[int, ...]:
    # random.Random is MT19937; shuffle is Fisher-Yates
    perm = list(range(p))
    random.Random(seed).shuffle(perm)
    return tuple(perm)


def random_map(g: Grid, seed: int) -> RankMapping:
    perm = random_permutation(g.size, seed)
    return from_ranks(g.dims, np.asarray(perm, dtype=np.int64), "random", seed=seed)
