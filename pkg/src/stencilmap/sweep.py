"""Batch evaluation over a grid of (nodes, processes-per-node, dimensions)
instances, reporting every algorithm's cost relative to the blocked mapping."""
from __future__ import annotations

import csv
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .evalcost import evaluate, reduction
from .grid import Grid, dims_create
from .mappers import ALGORITHMS, NodeConfig, run_all
from .stencil import BUILTIN_NAMES, StencilError, builtin

DEFAULT_NODE_COUNTS = tuple(range(10, 32, 3))
DEFAULT_PROCS_PER_NODE = tuple(range(10, 32, 3)) + (32,)
DEFAULT_DIMS = (2, 3)

COLUMNS = [
    "algorithm", "stencil", "d", "N", "n", "p", "dims",
    "j_sum", "j_max", "j_sum_blocked", "j_max_blocked",
    "reduction_sum", "reduction_max", "flags",
]


@dataclass
class SweepSpec:
    node_counts: tuple[int, ...] = DEFAULT_NODE_COUNTS
    procs_per_node: tuple[int, ...] = DEFAULT_PROCS_PER_NODE
    dims_set: tuple[int, ...] = DEFAULT_DIMS
    stencils: tuple[str, ...] = BUILTIN_NAMES
    algorithms: tuple[str, ...] = ALGORITHMS
    seed: int = 0

    def instances(self):
        for N in self.node_counts:
            for n in self.procs_per_node:
                for d in self.dims_set:
                    yield N, n, d


@dataclass
class Row:
    algorithm: str
    stencil: str
    d: int
    N: int
    n: int
    p: int
    dims: tuple[int, ...]
    j_sum: int | None = None
    j_max: int | None = None
    j_sum_blocked: int | None = None
    j_max_blocked: int | None = None
    reduction_sum: float | None = None
    reduction_max: float | None = None
    flags: list[str] = field(default_factory=list)

    def as_csv(self) -> list[str]:
        def num(x):
            if x is None:
                return ""
            if isinstance(x, float):
                return f"{x:.6f}"
            return str(x)

        return [
            self.algorithm, self.stencil, str(self.d), str(self.N), str(self.n), str(self.p),
            "x".join(map(str, self.dims)),
            num(self.j_sum), num(self.j_max), num(self.j_sum_blocked), num(self.j_max_blocked),
            num(self.reduction_sum), num(self.reduction_max), ";".join(self.flags),
        ]


def instance_rows(N: int, n: int, d: int, stencil_name: str, algorithms=ALGORITHMS, seed: int = 0) -> list[Row]:
    p = N * n
    dims = tuple(dims_create(p, d))
    g = Grid(dims)
    base = dict(stencil=stencil_name, d=d, N=N, n=n, p=p, dims=dims)
    try:
        s = builtin(stencil_name, d)
    except StencilError as exc:
        return [Row(algorithm=a, flags=[f"skipped:{exc}"], **base) for a in algorithms]
    nc = NodeConfig.homogeneous(p, n)
    outcomes = run_all(g, s, nc, seed, algorithms=tuple(dict.fromkeys(("blocked", *algorithms))))
    blocked = evaluate(g, s, outcomes["blocked"].mapping, nc)
    rows = []
    for a in algorithms:
        out = outcomes[a]
        row = Row(algorithm=a, flags=list(out.flags), j_sum_blocked=blocked.j_sum,
                  j_max_blocked=blocked.j_max, **base)
        if out.mapping is not None:
            cost = evaluate(g, s, out.mapping, nc)
            red = reduction(cost, blocked)
            row.j_sum, row.j_max = cost.j_sum, cost.j_max
            row.reduction_sum, row.reduction_max = red.sum_ratio, red.max_ratio
            row.flags += list(red.flags)
        rows.append(row)
    return rows


def _task(args):
    return instance_rows(*args)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[Row]:
    """All rows in canonical (instance, stencil, algorithm) order."""
    tasks = [(N, n, d, st, spec.algorithms, spec.seed)
             for N, n, d in spec.instances() for st in spec.stencils]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_task, tasks, chunksize=4))
    else:
        chunks = [_task(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def medians(rows: Iterable[Row], by_stencil: bool = False) -> dict:
    groups: dict = {}
    for row in rows:
        if row.reduction_sum is None:
            continue
        key = (row.algorithm, row.stencil) if by_stencil else row.algorithm
        groups.setdefault(key, ([], []))
        groups[key][0].append(row.reduction_sum)
        groups[key][1].append(row.reduction_max)
    return {k: (statistics.median(a), statistics.median(b)) for k, (a, b) in groups.items()}


def write_csv(fh: TextIO, rows: list[Row], summary: bool = True):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(COLUMNS)
    for row in rows:
        w.writerow(row.as_csv())
    if not summary:
        return
    for algo, (ms, mm) in medians(rows).items():
        fh.write(f"# median algorithm={algo} stencil=all reduction_sum={ms:.6f} reduction_max={mm:.6f}\n")
    for (algo, st), (ms, mm) in medians(rows, by_stencil=True).items():
        fh.write(f"# median algorithm={algo} stencil={st} reduction_sum={ms:.6f} reduction_max={mm:.6f}\n")
