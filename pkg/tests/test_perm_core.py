import itertools
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from fertilitope import config
from fertilitope.errors import DomainError, ResourceError
from fertilitope.perm_core import (
    DecreasingBinaryTree,
    binary_plane_trees,
    decreasing_trees,
    descents,
    fertility_bruteforce,
    identity,
    in_order,
    in_order_inverse,
    inversions,
    oplus_id,
    parse_permutation,
    peaks,
    postorder,
    postorder_fiber,
    preimage_table,
    preimages_bruteforce,
    skeleton,
    stack_sort,
    standardize,
    tail_length,
    tree_statistic,
)


def recursive_sort(p):
    # s(L m R) = s(L) s(R) m
    if not p:
        return ()
    k = p.index(max(p))
    return recursive_sort(p[:k]) + recursive_sort(p[k + 1:]) + (p[k],)


permutations = st.integers(min_value=0, max_value=9).flatmap(
    lambda n: st.permutations(list(range(1, n + 1))).map(tuple)
)


def test_stack_sort_examples():
    assert stack_sort((4, 2, 7, 3, 6, 1, 5)) == (2, 4, 3, 1, 5, 6, 7)
    assert stack_sort((2, 4, 6, 1, 5, 3)) == (2, 4, 1, 3, 5, 6)
    assert stack_sort(()) == ()


@given(permutations)
def test_stack_sort_matches_recursive_definition(p):
    assert stack_sort(p) == recursive_sort(p)


@given(permutations)
def test_stack_sort_is_postorder_of_in_order_inverse(p):
    assert stack_sort(p) == postorder(in_order_inverse(p))
    assert in_order(in_order_inverse(p)) == p


def test_standardize():
    assert standardize((3, 8, 1, 6)) == (2, 4, 1, 3)


def test_tail_length():
    assert tail_length((1, 3, 2, 4, 5)) == 2
    assert tail_length((1, 3, 2, 5, 4)) == 0
    assert tail_length((1, 2, 3, 4, 5)) == 5
    with pytest.raises(DomainError):
        tail_length((2, 5))


def test_descents_and_peaks_are_one_based():
    p = (4, 2, 7, 3, 6, 1, 5)
    assert descents(p) == {1, 3, 5}
    assert peaks(p) == {3, 5}


def test_oplus_id():
    assert oplus_id((2, 1), 3) == (2, 1, 3, 4, 5)
    with pytest.raises(DomainError):
        oplus_id((2, 1), -1)


def test_parse_permutation():
    assert parse_permutation("4 2 7 3 6 1 5") == (4, 2, 7, 3, 6, 1, 5)
    assert parse_permutation("7, 11, 10") == (7, 11, 10)
    assert parse_permutation("246153") == (2, 4, 6, 1, 5, 3)
    for bad in ("1 1", "0 1", "2044", "a b"):
        with pytest.raises(DomainError):
            parse_permutation(bad)


def test_tree_validation():
    with pytest.raises(DomainError):
        DecreasingBinaryTree(2, {2: 3})
    with pytest.raises(DomainError):
        DecreasingBinaryTree(3, {3: 1}, {5: 2})
    t = DecreasingBinaryTree.from_nested((5, (3, None, (1, None, None)), (4, None, None)))
    assert DecreasingBinaryTree.from_nested(t.to_nested()) == t
    assert in_order(t) == (3, 1, 5, 4)
    assert postorder(t) == (1, 3, 4, 5)
    assert t.first_in_order(5) == 3
    assert t.first_postorder(5) == 1


def test_tree_counts():
    # Decreasing binary trees on [n] are counted by n!, shapes by Catalan.
    assert [sum(1 for _ in decreasing_trees(range(1, n + 1))) for n in range(6)] == [1, 1, 2, 6, 24, 120]
    assert [len(binary_plane_trees(m)) for m in range(7)] == [1, 1, 2, 5, 14, 42, 132]


def test_tree_statistics_read_descents_and_peaks():
    for p in itertools.permutations(range(1, 7)):
        t = in_order_inverse(p)
        assert tree_statistic(t, "des") == len(descents(p))
        assert tree_statistic(t, "peak") == len(peaks(p))
        shape = skeleton(t)
        assert tree_statistic(shape, "des") == len(descents(p))
        assert tree_statistic(shape, "peak") == len(peaks(p))


def test_fiber_of_identity():
    assert len(postorder_fiber((1, 2, 3))) == 5
    assert len(preimages_bruteforce((1, 2, 3))) == 5


def test_postorder_fiber_matches_in_order_preimages():
    for n in range(1, 7):
        for p in itertools.permutations(range(1, n + 1)):
            fiber = postorder_fiber(p)
            assert frozenset(in_order(t) for t in fiber) == preimages_bruteforce(p)


def test_preimage_table_partitions_the_symmetric_group():
    table = preimage_table(6)
    assert sum(sum(c.values()) for c in table.values()) == 720
    assert sum(table[(1, 2, 3, 4, 5, 6)].values()) == 132


def test_fertility_bruteforce_ignores_values():
    assert fertility_bruteforce((10, 30, 20, 40)) == fertility_bruteforce((1, 3, 2, 4))


def test_inversions():
    assert inversions((3, 1, 2)) == 2
    assert inversions(identity(5)) == 0


def test_oracle_bound(monkeypatch):
    monkeypatch.setenv(config.ENV_VAR, "3")
    with pytest.raises(ResourceError):
        preimages_bruteforce((1, 2, 3, 4))
    monkeypatch.setenv(config.ENV_VAR, "12")
    assert len(preimages_bruteforce((1, 2, 3, 4))) == 14


def test_descent_counts_of_preimages():
    # The preimages of the identity are the 231-avoiding permutations,
    # counted by descents through Narayana numbers.
    counter = preimage_table(5)[identity(5)]
    assert counter == Counter({1: 1, 2: 10, 3: 20, 4: 10, 5: 1})
