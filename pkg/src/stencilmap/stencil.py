"""k-neighborhood stencils and the per-dimension statistics the mappers use."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

BUILTIN_NAMES = ("nn", "component", "nn-hops")
_ALIASES = {
    "nearest-neighbor": "nn",
    "nearest_neighbor": "nn",
    "nn": "nn",
    "component": "component",
    "nn-hops": "nn-hops",
    "nn_hops": "nn-hops",
    "nearest-neighbor-hops": "nn-hops",
}


class StencilError(ValueError):
    """Invalid stencil description."""


@dataclass(frozen=True)
class Stencil:
    offsets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        offsets = tuple(tuple(int(x) for x in off) for off in self.offsets)
        if not offsets:
            raise StencilError("stencil must contain at least one offset")
        d = len(offsets[0])
        if d < 1:
            raise StencilError("offset 0 has no components")
        seen = {}
        for i, off in enumerate(offsets):
            if len(off) != d:
                raise StencilError(f"offset {i} has length {len(off)}, expected {d}")
            if not any(off):
                raise StencilError(f"offset {i} is the zero vector")
            if off in seen:
                raise StencilError(f"offset {i} duplicates offset {seen[off]}: {list(off)}")
            seen[off] = i
        object.__setattr__(self, "offsets", offsets)

    @property
    def ndims(self) -> int:
        return len(self.offsets[0])

    @property
    def k(self) -> int:
        return len(self.offsets)

    def flatten(self) -> list[int]:
        return [x for off in self.offsets for x in off]

    def negated(self) -> "Stencil":
        return Stencil(tuple(tuple(-x for x in off) for off in self.offsets))

    def digest(self) -> str:
        """Short content hash used in instance fingerprints."""
        blob = json.dumps([list(o) for o in self.offsets], separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def __len__(self):
        return len(self.offsets)

    def __iter__(self):
        return iter(self.offsets)


def _unit(d: int, i: int, a: int = 1) -> tuple[int, ...]:
    v = [0] * d
    v[i] = a
    return tuple(v)


def builtin(name: str, d: int) -> Stencil:
    """One of the three named stencils on ``d`` dimensions.

    ``nn`` is +-1 along every axis, ``component`` the same but without the
    last axis, ``nn-hops`` adds +-2 and +-3 along axis 0 to ``nn``.
    """
    key = _ALIASES.get(name)
    if key is None:
        raise StencilError(f"unknown builtin stencil {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    if d < 1:
        raise StencilError(f"stencil needs d >= 1, got {d}")
    axes = d - 1 if key == "component" else d
    offsets = []
    for i in range(axes):
        offsets += [_unit(d, i, 1), _unit(d, i, -1)]
    if key == "nn-hops":
        for a in (2, 3):
            offsets += [_unit(d, 0, a), _unit(d, 0, -a)]
    if not offsets:
        raise StencilError(f"{key} stencil is empty for d={d}")
    return Stencil(tuple(offsets))


def parse_flat(ndims: int, k: int, flat: Sequence[int]) -> Stencil:
    """Build a stencil from a flattened ``k * ndims`` offset array."""
    if ndims < 1 or k < 1:
        raise StencilError(f"need ndims >= 1 and k >= 1, got ndims={ndims}, k={k}")
    if len(flat) != k * ndims:
        raise StencilError(f"flattened stencil has {len(flat)} entries, expected k*ndims = {k * ndims}")
    return Stencil(tuple(tuple(flat[i * ndims:(i + 1) * ndims]) for i in range(k)))


def from_offsets(offsets: Iterable[Sequence[int]]) -> Stencil:
    return Stencil(tuple(tuple(o) for o in offsets))


def cosine_preference_exact(s: Stencil) -> list[Fraction]:
    """Summed squared direction cosines per dimension, as exact rationals."""
    out = [Fraction(0)] * s.ndims
    for off in s.offsets:
        norm2 = sum(x * x for x in off)
        for j, x in enumerate(off):
            out[j] += Fraction(x * x, norm2)
    return out


def cosine_preference(s: Stencil) -> list[float]:
    """How parallel the stencil is to each axis; the smallest entry is the axis
    most orthogonal to all offsets. Entries sum to k."""
    return [float(v) for v in cosine_preference_exact(s)]


def comm_weights(s: Stencil) -> list[int]:
    """Number of offsets with a nonzero component along each dimension."""
    return [sum(1 for off in s.offsets if off[j] != 0) for j in range(s.ndims)]


def extensions(s: Stencil) -> list[int]:
    """Spread (max - min) of the offset components per dimension."""
    return [max(o[j] for o in s.offsets) - min(o[j] for o in s.offsets) for j in range(s.ndims)]


@dataclass(frozen=True)
class DimStats:
    cosine_pref: tuple[float, ...]
    comm_weight: tuple[int, ...]
    extension: tuple[int, ...]


def dim_stats(s: Stencil) -> DimStats:
    return DimStats(tuple(cosine_preference(s)), tuple(comm_weights(s)), tuple(extensions(s)))
