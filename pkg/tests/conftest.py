from __future__ import annotations

import itertools

import pytest

ACCEPTANCE_LINES: list[str] = []


def brute_cut_count(dims, periods, offsets, owner_at):
    """Directed inter-node edges, counted with plain tuples and dicts.

    ``owner_at`` maps a coordinate tuple to its node. Returns (j_sum, per_node dict).
    """
    per = {}
    for u in itertools.product(*(range(d) for d in dims)):
        for off in offsets:
            v = []
            ok = True
            for x, o, d, pr in zip(u, off, dims, periods):
                y = x + o
                if pr:
                    y %= d
                elif y < 0 or y >= d:
                    ok = False
                    break
                v.append(y)
            if ok and owner_at[u] != owner_at[tuple(v)]:
                per[owner_at[u]] = per.get(owner_at[u], 0) + 1
    return sum(per.values()), per


def owner_map(mapping, sizes):
    """coordinate tuple -> node, walking ranks and node blocks directly."""
    out = {}
    r = 0
    for node, size in enumerate(sizes):
        for _ in range(size):
            out[tuple(int(x) for x in mapping.new_coord[r])] = node
            r += 1
    return out


def chain_cuts(dims, axis, owner_at):
    """Directed cuts of a stencil {+-1 along axis}: walk every chain along
    ``axis`` and count owner changes between neighbors, twice."""
    other = [range(d) for i, d in enumerate(dims) if i != axis]
    cuts = 0
    for rest in itertools.product(*other):
        prev = None
        for x in range(dims[axis]):
            c = list(rest)
            c.insert(axis, x)
            o = owner_at[tuple(c)]
            if prev is not None and o != prev:
                cuts += 2
            prev = o
    return cuts


@pytest.fixture
def acceptance():
    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
