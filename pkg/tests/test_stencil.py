from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from stencilmap.stencil import (
    Stencil,
    StencilError,
    builtin,
    comm_weights,
    cosine_preference,
    dim_stats,
    extensions,
    parse_flat,
)

NN2 = {(1, 0), (-1, 0), (0, 1), (0, -1)}


def test_builtin_shapes():
    assert set(builtin("nearest-neighbor", 2)) == NN2
    assert set(builtin("nn", 2)) == NN2
    assert set(builtin("component", 2)) == {(1, 0), (-1, 0)}
    assert set(builtin("nn-hops", 2)) == NN2 | {(2, 0), (-2, 0), (3, 0), (-3, 0)}
    assert builtin("nn", 3).k == 6
    assert set(builtin("component", 3)) == {(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)}


def test_builtin_component_1d_is_empty():
    with pytest.raises(StencilError, match="empty"):
        builtin("component", 1)


def test_builtin_unknown():
    with pytest.raises(StencilError):
        builtin("star", 2)


def test_parse_flat():
    assert parse_flat(2, 2, [1, 0, -1, 0]).offsets == ((1, 0), (-1, 0))
    assert set(parse_flat(2, 4, [1, 0, -1, 0, 0, 1, 0, -1])) == set(builtin("nn", 2))


def test_parse_flat_errors_name_the_index():
    with pytest.raises(StencilError, match="offset 0 is the zero vector"):
        parse_flat(2, 1, [0, 0])
    with pytest.raises(StencilError, match="offset 2 duplicates offset 0"):
        parse_flat(2, 3, [1, 0, 0, 1, 1, 0])
    with pytest.raises(StencilError, match="expected k\\*ndims = 4"):
        parse_flat(2, 2, [1, 0, 1])


def test_cosine_preference_examples():
    assert cosine_preference(builtin("nn", 2)) == [2.0, 2.0]
    assert cosine_preference(builtin("component", 2)) == [2.0, 0.0]
    assert cosine_preference(builtin("nn-hops", 2)) == [6.0, 2.0]


def test_cosine_preference_diagonal():
    # (1,1): cos^2 = 1/2 per axis; (2,1): 4/5 and 1/5
    s = Stencil(((1, 1), (2, 1)))
    assert cosine_preference(s) == [float(Fraction(1, 2) + Fraction(4, 5)), float(Fraction(1, 2) + Fraction(1, 5))]


def test_comm_weights_and_extensions():
    assert comm_weights(builtin("nn", 2)) == [2, 2]
    assert comm_weights(builtin("nn-hops", 2)) == [6, 2]
    assert comm_weights(builtin("component", 3)) == [2, 2, 0]
    assert extensions(builtin("nn", 2)) == [2, 2]
    assert extensions(builtin("nn-hops", 2)) == [6, 2]
    assert extensions(builtin("component", 2)) == [2, 0]
    st_ = dim_stats(builtin("nn-hops", 2))
    assert st_.comm_weight == (6, 2) and st_.extension == (6, 2)


offsets = st.lists(
    st.lists(st.integers(-4, 4), min_size=3, max_size=3).map(tuple).filter(any),
    min_size=1, max_size=10, unique=True,
)


@given(offsets)
def test_cosines_sum_to_k(offs):
    s = Stencil(tuple(offs))
    prefs = cosine_preference(s)
    assert abs(sum(prefs) - s.k) < 1e-12
    assert all(0 <= x <= s.k for x in prefs)
    assert all(w <= s.k for w in comm_weights(s))


@given(offsets)
def test_negation_keeps_weights_and_extensions(offs):
    s = Stencil(tuple(offs))
    sym = Stencil(tuple(set(offs) | {tuple(-x for x in o) for o in offs}))
    assert comm_weights(sym) == comm_weights(sym.negated())
    assert extensions(sym) == extensions(sym.negated())
    assert comm_weights(s) == comm_weights(s.negated())


@given(offsets)
def test_flatten_round_trip(offs):
    s = Stencil(tuple(offs))
    assert parse_flat(s.ndims, s.k, s.flatten()) == s
