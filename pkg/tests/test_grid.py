import itertools
import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from stencilmap.grid import Grid, GridError, coord_to_rank, dims_create, prime_factors, rank_to_coord


@pytest.mark.parametrize(
    "dims, r, coord",
    [([5, 4], 0, (0, 0)), ([5, 4], 7, (1, 3)), ([3, 2, 2], 11, (2, 1, 1))],
)
def test_rank_to_coord_examples(dims, r, coord):
    assert rank_to_coord(dims, r) == coord
    assert coord_to_rank(dims, coord) == r


def test_coord_to_rank_small():
    assert coord_to_rank([2, 2], [1, 1]) == 3
    assert coord_to_rank(Grid((5, 4)), (0, 0)) == 0


def test_row_major_matches_nested_loops():
    dims = (3, 4, 2)
    for r, c in enumerate(itertools.product(*(range(d) for d in dims))):
        assert rank_to_coord(dims, r) == c


@pytest.mark.parametrize("r", [-1, 20, 100])
def test_rank_out_of_range(r):
    with pytest.raises(GridError):
        rank_to_coord([5, 4], r)


@pytest.mark.parametrize("c", [(5, 0), (0, -1), (0, 4), (1,)])
def test_coord_out_of_range(c):
    with pytest.raises(GridError):
        coord_to_rank([5, 4], c)


def test_grid_validation():
    with pytest.raises(GridError):
        Grid((0, 3))
    with pytest.raises(GridError):
        Grid(())
    with pytest.raises(GridError):
        Grid((2, 2), (True,))
    with pytest.raises(GridError):
        Grid((2**40, 2**40))
    g = Grid((4, 3))
    assert g.periods == (False, False)
    assert g.size == 12 and g.ndims == 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=1, max_size=4))
def test_round_trip(dims):
    p = math.prod(dims)
    for r in range(p):
        c = rank_to_coord(dims, r)
        assert c == tuple(int(x) for x in np.unravel_index(r, dims))
        assert coord_to_rank(dims, c) == r


def _dims_oracle(p, d):
    # every ordered d-tuple of divisors with product p, sorted descending
    divs = [x for x in range(1, p + 1) if p % x == 0]
    cands = {tuple(sorted(t, reverse=True)) for t in itertools.product(divs, repeat=d) if math.prod(t) == p}
    return list(min(cands, key=lambda v: (v[0] - v[-1], v)))


@pytest.mark.parametrize("p, d, expected", [(2400, 2, [50, 48]), (4800, 2, [75, 64]), (12, 3, [3, 2, 2])])
def test_dims_create_examples(p, d, expected):
    assert dims_create(p, d) == expected


@pytest.mark.parametrize("p", list(range(1, 121)))
@pytest.mark.parametrize("d", [1, 2, 3])
def test_dims_create_against_enumeration(p, d):
    got = dims_create(p, d)
    assert got == _dims_oracle(p, d)
    assert math.prod(got) == p
    assert got == sorted(got, reverse=True)


@given(st.integers(1, 5000), st.integers(1, 4))
@settings(max_examples=100, deadline=None)
def test_dims_create_multiplies_back(p, d):
    got = dims_create(p, d)
    assert len(got) == d and math.prod(got) == p
    if d == 1:
        assert got == [p]


@pytest.mark.parametrize("x, expected", [(1, []), (48, [2, 2, 2, 2, 3]), (50, [2, 5, 5]), (97, [97])])
def test_prime_factors_examples(x, expected):
    assert prime_factors(x) == expected


@given(st.integers(1, 10**6))
@settings(max_examples=300, deadline=None)
def test_prime_factors_matches_sympy(x):
    got = prime_factors(x)
    expected = sorted(itertools.chain.from_iterable([q] * e for q, e in sympy.factorint(x).items()))
    assert got == expected
    assert math.prod(got) == x
