"""Command line front end.

    stencilmap map    --dims 5x4 --stencil nn --algo hyperplane --n 4
    stencilmap eval   mapping.txt
    stencilmap sweep  > sweep.csv
    stencilmap oracle np-gen 6,3,3,2,2,2
    stencilmap oracle solve --np 6,3,3,2,2,2 --limit 18

Exit codes: 0 success (fallbacks included), 2 validation error, 3 oracle refusal.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .evalcost import evaluate, reduction
from .formats import FormatError, load_stencil, parse_flat_arg, read_mapping, write_mapping
from .grid import Grid, GridError, dims_create
from .mappers import ALGORITHMS, MappingError, NodeConfig, blocked_map, run_one
from .mappers.base import AGGREGATE_RULES
from .oracle import DEFAULT_LIMIT, OracleRefusal, brute_force_optimal, three_way_partitionable, three_way_to_grid
from .stencil import StencilError
from .sweep import SweepSpec, run_sweep, write_csv

log = logging.getLogger("stencilmap")

EXIT_OK, EXIT_INVALID, EXIT_REFUSED = 0, 2, 3
VALIDATION_ERRORS = (GridError, StencilError, MappingError, FormatError, ValueError)


def _int_list(text: str, sep: str = ",") -> list[int]:
    try:
        return [int(x) for x in text.replace("x", sep).split(sep) if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of integers, got {text!r}") from None


def _dims_arg(text):
    return _int_list(text, "x")


def _grid(args) -> Grid:
    if args.dims:
        dims = args.dims
    elif args.p is not None and args.ndims is not None:
        dims = dims_create(args.p, args.ndims)
    else:
        raise ValueError("give either --dims AxB... or both --p and --ndims")
    periods = args.periods or [0] * len(dims)
    return Grid(tuple(dims), tuple(bool(x) for x in periods))


def _stencil(args, g: Grid):
    if args.flat:
        return parse_flat_arg(args.flat, g.ndims)
    if not args.stencil:
        raise ValueError("give --stencil NAME|FILE.json or --flat k:list")
    s = load_stencil(args.stencil, g.ndims)
    if s.ndims != g.ndims:
        raise ValueError(f"stencil has {s.ndims} dimensions, grid has {g.ndims}")
    return s


def _nodes(args, g: Grid) -> NodeConfig:
    if args.sizes:
        nc = NodeConfig(tuple(args.sizes), args.aggregate)
    elif args.n:
        nc = NodeConfig.homogeneous(g.size, args.n, args.aggregate)
    else:
        raise ValueError("give --n or --sizes")
    nc.check_grid(g)
    return nc


def _add_instance_args(p, required=True):
    grid = p.add_argument_group("instance")
    grid.add_argument("--dims", type=_dims_arg, help="grid dimensions, e.g. 50x48")
    grid.add_argument("--p", type=int, help="process count (with --ndims, balanced dims)")
    grid.add_argument("--ndims", type=int, help="number of dimensions for --p")
    grid.add_argument("--periods", type=_int_list, help="periodicity flags, e.g. 1,0")
    grid.add_argument("--stencil", help="nn | component | nn-hops | path to stencil JSON")
    grid.add_argument("--flat", help="flattened stencil, k:v0,v1,... (k offsets of ndims values)")
    grid.add_argument("--n", type=int, help="processes per node")
    grid.add_argument("--sizes", type=_int_list, help="per-node process counts, e.g. 3,5")
    grid.add_argument("--aggregate", choices=AGGREGATE_RULES, default="mean",
                      help="how heterogeneous sizes are reduced to one n")


def cmd_map(args) -> int:
    g = _grid(args)
    s = _stencil(args, g)
    nc = _nodes(args, g)
    out = run_one(args.algo, g, s, nc, args.seed)
    if out.mapping is None:
        raise MappingError(f"{args.algo}: " + "; ".join(out.flags))
    for flag in out.flags:
        if flag.startswith("infeasible"):
            log.warning("%s; falling back to the blocked mapping", flag)
    fh = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        write_mapping(fh, g, s, nc, out.mapping)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_eval(args) -> int:
    with open(args.mapping, encoding="utf-8") as fh:
        g, s, nc, m, head = read_mapping(fh)
    # explicit instance flags must agree with the header
    if args.dims and tuple(args.dims) != g.dims:
        raise ValueError(f"--dims {args.dims} does not match mapping header {list(g.dims)}")
    if args.sizes and tuple(args.sizes) != nc.sizes:
        raise ValueError(f"--sizes {args.sizes} does not match mapping header {list(nc.sizes)}")
    if args.n and nc.sizes != (args.n,) * len(nc.sizes):
        raise ValueError(f"--n {args.n} does not match mapping header sizes")
    if args.stencil or args.flat:
        if _stencil(args, g) != s:
            raise ValueError("stencil does not match mapping header")
    cost = evaluate(g, s, m, nc)
    base = evaluate(g, s, blocked_map(g), nc)
    red = reduction(cost, base)
    result = cost.as_dict()
    result.update(
        algorithm=head.get("algorithm"),
        reduction_vs_blocked={"sum": red.sum_ratio, "max": red.max_ratio, "flags": list(red.flags)},
        blocked={"j_sum": base.j_sum, "j_max": base.j_max},
        edge_convention="directed",
        fingerprint=cost.fingerprint,
    )
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        node_counts=tuple(args.nodes), procs_per_node=tuple(args.ppn), dims_set=tuple(args.ndims),
        stencils=tuple(args.stencils), algorithms=tuple(args.algos), seed=args.seed,
    )
    rows = run_sweep(spec, jobs=args.jobs)
    fh = open(args.output, "w", encoding="utf-8", newline="") if args.output else sys.stdout
    try:
        write_csv(fh, rows, summary=not args.no_summary)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.mode == "np-gen":
        inst = three_way_to_grid(_int_list(args.multiset))
        out = inst.as_dict()
        out["three_way_partitionable"] = three_way_partitionable(inst.multiset)
        print(json.dumps(out))
        return EXIT_OK
    if args.np:
        inst = three_way_to_grid(args.np)
        g, s, sizes = inst.grid, inst.stencil, inst.node_sizes
    else:
        g = _grid(args)
        s = _stencil(args, g)
        sizes = _nodes(args, g).sizes
    res = brute_force_optimal(g, s, sizes, limit=args.limit)
    print(json.dumps({
        "dims": list(g.dims),
        "sizes": list(sizes),
        "optimal_j_sum": res.optimal_j_sum,
        "witness": res.witness,
        "nodes_expanded": res.nodes_expanded,
        "edge_convention": "directed",
    }))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stencilmap", description="Stencil-aware rank reordering for Cartesian grids.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("map", help="compute a rank mapping")
    _add_instance_args(p)
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--seed", type=int, default=0, help="seed for the random baseline")
    p.add_argument("-o", "--output", help="write the mapping here instead of stdout")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("eval", help="cost of a mapping file")
    p.add_argument("mapping")
    _add_instance_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="reduction over blocked for a set of instances (CSV)")
    p.add_argument("--nodes", type=_int_list, default=list(SweepSpec.node_counts))
    p.add_argument("--ppn", type=_int_list, default=list(SweepSpec.procs_per_node))
    p.add_argument("--ndims", type=_int_list, default=list(SweepSpec.dims_set))
    p.add_argument("--stencils", type=lambda t: t.split(","), default=list(SweepSpec.stencils))
    p.add_argument("--algos", type=lambda t: t.split(","), default=list(ALGORITHMS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-summary", action="store_true", help="omit the '#' median footer")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="exact optimum for tiny instances / reduction instances")
    p.add_argument("mode", choices=("solve", "np-gen"))
    p.add_argument("multiset", nargs="?", help="np-gen: comma-separated multiset")
    p.add_argument("--np", type=_int_list, help="solve the reduction instance of this multiset")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    _add_instance_args(p)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "oracle" and args.mode == "np-gen" and not args.multiset:
        parser.error("oracle np-gen needs a multiset, e.g. 6,3,3,2,2,2")
    if args.command == "sweep":
        bad = [a for a in args.algos if a not in ALGORITHMS]
        if bad:
            parser.error(f"unknown algorithms: {', '.join(bad)}")
    try:
        return args.func(args)
    except OracleRefusal as exc:
        print(f"stencilmap: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except VALIDATION_ERRORS as exc:
        print(f"stencilmap: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"stencilmap: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
