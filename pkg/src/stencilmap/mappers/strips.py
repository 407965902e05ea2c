"""Stencil Strips: tile the grid into strips running along its largest
dimension and fill them in serpentine order.

Strip widths across the other dimensions approximate the side lengths of a
node-sized box stretched by the stencil's shape (the distortion factors), so
consecutive blocks of ``n`` ranks land in compact, stencil-shaped regions.

Strips are enumerated in boustrophedon order of their strip coordinates, and
each strip is walked slice by slice along the long dimension. The walking
direction flips with the parity of the strip coordinate sum, so each strip
starts at the end of the long dimension where the previous one stopped. The
order inside a slice flips with the slice parity, which keeps consecutive
ranks inside a strip grid neighbors.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate

import numpy as np

from ..grid import Grid
from ..stencil import Stencil, extensions
from .base import RankMapping, from_coords, single_rank_check

TAG = "strips"


def distortion_factors(s: Stencil) -> list[float]:
    """Stencil extent per dimension relative to a cube of equal bounding volume."""
    e = extensions(s)
    volume = math.prod(x if x else 1 for x in e)
    nonzero = sum(1 for x in e if x)
    side = volume ** (1.0 / nonzero)
    return [x / side for x in e]


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class StripLayout:
    long_dim: int
    alpha: tuple[float, ...]
    target_width: dict            # dim -> real-valued optimal width
    widths: dict                  # dim -> list of integer strip widths along that dim

    @property
    def cross_dims(self) -> list[int]:
        return sorted(self.widths)

    def strip_counts(self) -> list[int]:
        return [len(self.widths[i]) for i in self.cross_dims]


def strip_layout(dims, s: Stencil, n: int) -> StripLayout:
    dims = list(dims)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    alpha = distortion_factors(s)
    d = len(dims)
    long_dim = max(range(d), key=lambda i: (dims[i], -i))
    fixed = 1
    target, widths = {}, {}
    for m, i in enumerate(j for j in range(d) if j != long_dim):
        real = (alpha[i] * n / fixed) ** (1.0 / (d - m))
        w = min(max(_round_half_up(real), 1), dims[i])
        count = dims[i] // w
        # the last strip takes the remainder
        widths[i] = [w] * (count - 1) + [w + dims[i] % w]
        target[i] = real
        fixed *= w
    return StripLayout(long_dim, tuple(alpha), target, widths)


def _snake_decode(u, radices):
    digits, parity = [], 0
    block = math.prod(radices)
    for w in radices:
        block //= w
        q, u = divmod(u, block)
        if parity % 2:
            q = w - 1 - q
        digits.append(q)
        parity += q
    return digits


def strips_coord(g: Grid, s: Stencil, n: int, r: int, layout: StripLayout | None = None) -> tuple[int, ...]:
    single_rank_check(g, r)
    dims = g.dims
    lay = layout or strip_layout(dims, s, n)
    L = lay.long_dim
    cross = lay.cross_dims
    coord = [0] * len(dims)

    # locate the strip: mixed radix with variable widths, boustrophedon order
    parity = 0
    box = []
    for m, i in enumerate(cross):
        ws = lay.widths[i]
        unit = dims[L] * math.prod(box) * math.prod(dims[j] for j in cross[m + 1:])
        reverse = parity % 2 == 1
        walk = ws[::-1] if reverse else ws
        starts = [0, *accumulate(walk)]
        idx = bisect_right(starts, r // unit) - 1
        r -= starts[idx] * unit
        c = len(ws) - 1 - idx if reverse else idx
        parity += c
        lo = sum(ws[:c])
        coord[i] = lo
        box.append(ws[c])

    slice_vol = math.prod(box)
    t, u = divmod(r, slice_vol)
    coord[L] = dims[L] - 1 - t if parity % 2 else t
    if t % 2:
        u = slice_vol - 1 - u
    for i, q in zip(cross, _snake_decode(u, box)):
        coord[i] += q
    return tuple(coord)


def _snake(radices):
    """All digit vectors of a mixed-radix box in boustrophedon order; consecutive
    vectors differ by one in exactly one digit."""
    if not radices:
        yield ()
        return
    inner = list(_snake(radices[1:]))
    for q in range(radices[0]):
        for rest in (inner if q % 2 == 0 else reversed(inner)):
            yield (q, *rest)


def strips_map(g: Grid, s: Stencil, n: int) -> RankMapping:
    dims = g.dims
    lay = strip_layout(dims, s, n)
    L = lay.long_dim
    cross = lay.cross_dims
    starts = {i: [0, *accumulate(lay.widths[i])] for i in cross}
    out = []
    for sc in _snake(lay.strip_counts()):
        lo = [starts[i][c] for i, c in zip(cross, sc)]
        box = [lay.widths[i][c] for i, c in zip(cross, sc)]
        cells = list(_snake(box))
        along = range(dims[L]) if sum(sc) % 2 == 0 else range(dims[L] - 1, -1, -1)
        for t, x in enumerate(along):
            for cell in (cells if t % 2 == 0 else reversed(cells)):
                coord = [0] * len(dims)
                coord[L] = x
                for i, base, q in zip(cross, lo, cell):
                    coord[i] = base + q
                out.append(coord)
    return from_coords(dims, np.asarray(out, dtype=np.int64), TAG)
