from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rainbow_factor.core import (
    Matching,
    OneFactor,
    Params,
    ProperColoring,
    ValidationError,
    edge_table,
    is_rainbow,
    rank_edge,
    unrank_edge,
    verify_one_factor,
    verify_proper,
)
from rainbow_factor.gen import gen_round_robin


def colex_enumeration(params):
    """All r-subsets sorted by colex order (compare largest element first)."""
    subsets = combinations(range(params.vertex_count), params.r)
    return sorted(subsets, key=lambda e: tuple(reversed(e)))


SMALL_PARAMS = [
    Params(r, n) for r in range(2, 8) for n in range(1, 8) if r * n <= 15
]


def test_rank_examples():
    assert rank_edge((0, 1), Params(2, 2)) == 0
    assert rank_edge((2, 3), Params(2, 2)) == 5
    assert rank_edge((0, 1, 3), Params(3, 3)) == 1


def test_rank_matches_enumeration():
    params = Params(2, 2)
    assert colex_enumeration(params).index((2, 3)) == 5
    params = Params(3, 3)
    assert colex_enumeration(params).index((0, 1, 3)) == 1


def test_unrank_examples():
    assert unrank_edge(0, Params(2, 2)) == (0, 1)
    assert unrank_edge(5, Params(2, 2)) == (2, 3)


def test_roundtrip_k9_3():
    params = Params(3, 3)
    assert params.edge_count == 84
    for i in range(84):
        assert rank_edge(unrank_edge(i, params), params) == i


@pytest.mark.parametrize("params", SMALL_PARAMS, ids=str)
def test_rank_bijection_and_table(params):
    expected = colex_enumeration(params)
    assert len(expected) == params.edge_count
    table = edge_table(params)
    for i, e in enumerate(expected):
        assert unrank_edge(i, params) == e
        assert rank_edge(e, params) == i
    assert [tuple(row) for row in table.tolist()] == expected


@settings(max_examples=1000, deadline=None)
@given(st.data())
def test_colex_monotone(data):
    params = data.draw(st.sampled_from(SMALL_PARAMS))
    N, r = params.vertex_count, params.r
    a = tuple(sorted(data.draw(st.sets(st.integers(0, N - 1), min_size=r, max_size=r))))
    b = tuple(sorted(data.draw(st.sets(st.integers(0, N - 1), min_size=r, max_size=r))))
    ra, rb = rank_edge(a, params), rank_edge(b, params)
    assert (ra < rb) == (tuple(reversed(a)) < tuple(reversed(b)))


@pytest.mark.parametrize(
    "edge", [(0,), (0, 0), (0, 4), (-1, 2), (0, 1, 2), ("a", 1)]
)
def test_invalid_edges(edge):
    with pytest.raises(ValidationError):
        rank_edge(edge, Params(2, 2))


def test_unrank_out_of_range():
    with pytest.raises(ValidationError):
        unrank_edge(6, Params(2, 2))
    with pytest.raises(ValidationError):
        unrank_edge(-1, Params(2, 2))


def test_params_validation():
    with pytest.raises(ValidationError):
        Params(1, 3)
    with pytest.raises(ValidationError):
        Params(2, 0)
    p = Params(3, 4)
    assert (p.vertex_count, p.edge_count, p.degree) == (12, 220, 55)


def test_coloring_length_mismatch_is_validation_error():
    with pytest.raises(ValidationError):
        ProperColoring(Params(2, 2), [0, 1, 2])
    with pytest.raises(ValidationError):
        ProperColoring(Params(2, 2), [0, 1, 2, 3, 4, -1])


def test_verify_proper_all_distinct():
    params = Params(3, 3)
    assert verify_proper(ProperColoring(params, np.arange(params.edge_count))).ok


def test_verify_proper_witness_k4():
    params = Params(2, 2)
    colors = np.arange(6) + 10
    colors[rank_edge((0, 1), params)] = 0
    colors[rank_edge((0, 2), params)] = 0
    verdict = verify_proper(ProperColoring(params, colors))
    assert not verdict.ok
    assert verdict.witness == ((0, 1), (0, 2))


def test_verify_proper_round_robin():
    assert verify_proper(gen_round_robin(5)).ok


def brute_force_proper(coloring):
    table = edge_table(coloring.params).tolist()
    for i, j in combinations(range(len(table)), 2):
        if coloring.colors[i] == coloring.colors[j] and set(table[i]) & set(table[j]):
            return False
    return True


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_verify_proper_matches_brute_force(data):
    params = data.draw(
        st.sampled_from([p for p in SMALL_PARAMS if p.edge_count <= 500 and p.edge_count > 1])
    )
    k = data.draw(st.integers(1, params.edge_count))
    colors = data.draw(
        st.lists(st.integers(0, k - 1), min_size=params.edge_count, max_size=params.edge_count)
    )
    coloring = ProperColoring(params, colors)
    verdict = verify_proper(coloring)
    assert verdict.ok == brute_force_proper(coloring)
    if verdict.ok:
        assert coloring.color_count >= comb(params.vertex_count - 1, params.r - 1)
    else:
        a, b = verdict.witness
        assert set(a) & set(b) and coloring.color(a) == coloring.color(b)


def test_verify_one_factor_examples():
    assert verify_one_factor(Params(2, 3), [(0, 1), (2, 3), (4, 5)])
    assert not verify_one_factor(Params(2, 3), [(0, 1), (1, 2), (4, 5)])
    assert verify_one_factor(Params(3, 3), [(3, 4, 6), (0, 7, 8), (1, 2, 5)])
    assert not verify_one_factor(Params(2, 3), [(0, 1), (2, 3)])
    with pytest.raises(ValidationError):
        verify_one_factor(Params(2, 3), [(0, 1), (2, 9), (4, 5)])


def test_is_rainbow_examples():
    params = Params(2, 2)
    coloring = ProperColoring(params, [0, 1, 2, 2, 1, 0])
    assert is_rainbow([(0, 1)], coloring)
    assert not is_rainbow([(0, 1), (2, 3)], coloring)


def test_matching_types():
    params = Params(2, 3)
    m = Matching(params, ((4, 5), (1, 0)))
    assert m.edges == ((0, 1), (4, 5))
    assert m.unmatched() == [2, 3]
    assert m.mask == 0b110011
    with pytest.raises(ValidationError):
        Matching(params, ((0, 1), (1, 2)))
    with pytest.raises(ValidationError):
        OneFactor(params, ((0, 1), (2, 3)))
    f = OneFactor(params, ((0, 1), (2, 3), (4, 5)))
    coloring = ProperColoring(params, np.arange(15))
    assert f.used_colors(coloring) == {0, 5, 14}
    assert len(f.missing_colors(coloring)) == 12


def test_normalize_keeps_partition():
    params = Params(2, 2)
    coloring = ProperColoring(params, [70, 11, 5, 5, 11, 70])
    norm = coloring.normalized()
    assert norm.colors.tolist() == [2, 1, 0, 0, 1, 2]
    assert verify_proper(norm).ok


def test_coloring_is_immutable():
    coloring = ProperColoring(Params(2, 2), [0, 1, 2, 2, 1, 0])
    with pytest.raises(ValueError):
        coloring.colors[0] = 5
