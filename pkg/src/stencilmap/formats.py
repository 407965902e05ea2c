"""File formats: stencil JSON and the mapping text file.

Mapping file::

    # {"dims": [5, 4], "periods": [0, 0], "stencil": {...}, "sizes": [...], ...}
    0 0
    1 5
    ...

one ``old_rank new_rank`` pair per line after a single ``#``-prefixed JSON
header line.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import TextIO

import numpy as np

from .grid import Grid
from .mappers.base import NodeConfig, RankMapping, from_ranks
from .stencil import Stencil, StencilError, builtin, from_offsets, parse_flat

FORMAT_VERSION = 1


class FormatError(ValueError):
    pass


def stencil_to_json(s: Stencil) -> dict:
    return {"ndims": s.ndims, "offsets": [list(o) for o in s.offsets]}


def stencil_from_json(obj: dict) -> Stencil:
    try:
        ndims = int(obj["ndims"])
        offsets = obj["offsets"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"stencil JSON needs 'ndims' and 'offsets': {exc}") from None
    s = from_offsets(offsets)
    if s.ndims != ndims:
        raise FormatError(f"stencil JSON declares ndims={ndims} but offsets have length {s.ndims}")
    return s


def load_stencil(spec: str, ndims: int) -> Stencil:
    """A builtin name or a path to a stencil JSON file."""
    path = Path(spec)
    if path.suffix == ".json" or path.is_file():
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise FormatError(f"cannot read stencil file {spec}: {exc}") from None
        return stencil_from_json(obj)
    return builtin(spec, ndims)


def parse_flat_arg(text: str, ndims: int) -> Stencil:
    """``k:v0,v1,...`` as accepted by ``--flat``."""
    try:
        k_text, values = text.split(":", 1)
        k = int(k_text)
        flat = [int(v) for v in values.split(",") if v.strip()]
    except ValueError:
        raise StencilError(f"--flat expects k:comma-separated-ints, got {text!r}") from None
    return parse_flat(ndims, k, flat)


def header(g: Grid, s: Stencil, nc: NodeConfig, m: RankMapping) -> dict:
    return {
        "format": FORMAT_VERSION,
        "dims": list(g.dims),
        "periods": [int(x) for x in g.periods],
        "stencil": stencil_to_json(s),
        "stencil_hash": s.digest(),
        "sizes": list(nc.sizes),
        "aggregate": nc.aggregate_rule,
        "algorithm": m.algorithm_tag,
        "seed": m.seed,
        "flags": list(m.flags),
        "edge_convention": "directed",
    }


def write_mapping(fh: TextIO, g: Grid, s: Stencil, nc: NodeConfig, m: RankMapping):
    fh.write("# " + json.dumps(header(g, s, nc, m), sort_keys=True) + "\n")
    for old, new in enumerate(m.new_ranks()):
        fh.write(f"{old} {int(new)}\n")


def read_mapping(fh: TextIO):
    """Return ``(grid, stencil, node_config, mapping, header)``."""
    first = fh.readline()
    if not first.startswith("#"):
        raise FormatError("mapping file must start with a '#' JSON header line")
    try:
        head = json.loads(first[1:])
        g = Grid(tuple(head["dims"]), tuple(bool(x) for x in head["periods"]))
        s = stencil_from_json(head["stencil"])
        nc = NodeConfig(tuple(head["sizes"]), head.get("aggregate", "mean"))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise FormatError(f"bad mapping header: {exc}") from None
    if head.get("stencil_hash") not in (None, s.digest()):
        raise FormatError("stencil hash in header does not match the stencil offsets")
    pairs = {}
    for lineno, line in enumerate(fh, start=2):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'old new', got {line!r}")
        old, new = int(parts[0]), int(parts[1])
        if old in pairs:
            raise FormatError(f"line {lineno}: rank {old} listed twice")
        pairs[old] = new
    if sorted(pairs) != list(range(g.size)):
        raise FormatError(f"mapping must list every rank 0..{g.size - 1} exactly once")
    new = np.asarray([pairs[r] for r in range(g.size)], dtype=np.int64)
    if (new < 0).any() or (new >= g.size).any():
        raise FormatError("new rank out of range")
    if len(np.unique(new)) != g.size:
        raise FormatError("new ranks are not a permutation")
    m = from_ranks(g.dims, new, head.get("algorithm", "unknown"), seed=head.get("seed"),
                   flags=list(head.get("flags", [])))
    return g, s, nc, m, head
