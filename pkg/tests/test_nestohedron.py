import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from fertilitope.errors import DomainError
from fertilitope.nestohedron import (
    BINARY,
    EMPTY,
    GENERAL,
    INVALID,
    LatticePointSet,
    WeightedBuildingSet,
    check_building_set,
    count_compositions_oplus,
    dimension,
    extremal_vhcs,
    f_vector,
    fertilitope,
    fertilitope_dimension,
    fertilitope_lattice_points,
    finite_difference,
    h_vector,
    is_m_convex,
    lattice_points,
    minkowski_add_full_simplex,
    nested_sets,
    product,
    realize_permutation,
    vertices,
    weighted_binary_building_sets,
)
from fertilitope.perm_core import descents, identity, oplus_id
from fertilitope.vhc import (
    canonical_hook_configuration,
    enumerate_vhcs,
    valid_compositions,
)


def wbs(ground, *pairs):
    return WeightedBuildingSet(ground, {frozenset(s): w for s, w in pairs})


def sorted_perms(n):
    for p in itertools.permutations(range(1, n + 1)):
        if canonical_hook_configuration(p) is not None:
            yield p


def simplex_points(ground, s, w):
    out = []
    for choice in itertools.combinations_with_replacement(sorted(s), w):
        v = [0] * ground
        for i in choice:
            v[i - 1] += 1
        out.append(tuple(v))
    return out


def brute_lattice_points(b):
    # every way of picking one lattice point from each weighted simplex
    factors = [simplex_points(b.ground, s, w) for s, w in b.items()]
    return {tuple(map(sum, zip(*pick))) for pick in itertools.product(*factors)}


EXAMPLE = wbs(2, ({1}, 3), ({2}, 1), ({1, 2}, 2))


def test_check_building_set():
    fig = wbs(5, *[({i}, 1) for i in range(1, 6)], ({2, 3}, 1), ({1, 2, 3, 4, 5}, 1))
    assert check_building_set(fig) == BINARY
    assert check_building_set(wbs(2, ({1}, 1), ({2}, 1))) == BINARY
    gap = wbs(3, ({1}, 1), ({2}, 1), ({3}, 1), ({1, 3}, 1))
    assert check_building_set(gap) != BINARY
    # {1,2} and {2,3} meet but their union is missing
    assert check_building_set(
        wbs(3, ({1}, 1), ({2}, 1), ({3}, 1), ({1, 2}, 1), ({2, 3}, 1))
    ) == INVALID
    assert check_building_set(
        wbs(3, ({1}, 1), ({2}, 1), ({3}, 1), ({1, 2}, 1), ({2, 3}, 1), ({1, 2, 3}, 1))
    ) == GENERAL
    assert check_building_set(wbs(2, ({1}, 1))) == INVALID


def test_lattice_points_examples():
    assert lattice_points(EXAMPLE).sorted() == [(3, 3), (4, 2), (5, 1)]
    assert lattice_points(wbs(3, ({1}, 2), ({2}, 5), ({3}, 1))).sorted() == [(2, 5, 1)]
    assert set(lattice_points(wbs(2, ({1}, 1), ({2}, 1), ({1, 2}, 1)))) == {(2, 1), (1, 2)}


def test_lattice_points_match_brute_force():
    for total in range(1, 7):
        for b in weighted_binary_building_sets(total):
            assert set(lattice_points(b)) == brute_lattice_points(b)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.randoms(use_true_random=False))
def test_lattice_points_ignore_summation_order(total, rnd):
    for b in itertools.islice(weighted_binary_building_sets(total), 30):
        order = list(b.weights)
        rnd.shuffle(order)
        assert lattice_points(b, order) == lattice_points(b)


def test_face_numbers():
    b = wbs(2, ({1}, 1), ({2}, 1), ({1, 2}, 1))
    assert dimension(b) == 1
    assert f_vector(b) == (2, 1)
    assert len(nested_sets(b)) == 3
    single = wbs(3, ({1}, 1), ({2}, 1), ({3}, 1))
    assert dimension(single) == 0
    assert f_vector(single) == (1,)
    cube = wbs(3, ({1}, 1), ({2}, 1), ({3}, 1), ({2, 3}, 1), ({1, 2, 3}, 1))
    assert f_vector(cube) == (4, 4, 1)
    assert h_vector(cube) == (1, 2, 1)


def test_m_convexity():
    assert is_m_convex(LatticePointSet(2, frozenset({(1, 1)})))
    assert is_m_convex(LatticePointSet(2, frozenset({(3, 3), (4, 2), (5, 1)})))
    assert not is_m_convex(LatticePointSet(2, frozenset({(2, 0), (0, 2)})))
    with pytest.raises(DomainError):
        is_m_convex(LatticePointSet(2, frozenset()))


def test_lattice_point_sets_live_in_a_hyperplane():
    with pytest.raises(DomainError):
        LatticePointSet(2, frozenset({(1, 1), (1, 2)}))


def test_vertices():
    assert vertices(EXAMPLE).sorted() == [(3, 3), (5, 1)]
    assert vertices(wbs(2, ({1}, 4), ({2}, 2))).sorted() == [(4, 2)]


def test_fertilitope_worked_example():
    p = (7, 11, 10, 13, 3, 2, 6, 8, 1, 4, 5, 9, 12, 14, 15)
    expected = wbs(
        5,
        ({1}, 2), ({2}, 1), ({3}, 1), ({4}, 1), ({5}, 3),
        ({3, 4}, 1), ({3, 4, 5}, 1), ({1, 2, 3, 4, 5}, 1),
    )
    assert fertilitope(p) == expected
    for seed in range(10):
        assert fertilitope(p, rng=random.Random(seed)) == expected


def test_fertilitope_small_examples():
    for n in range(1, 6):
        assert fertilitope(identity(n)) == wbs(1, ({1}, n))
    assert fertilitope((1, 2, 4, 3, 5, 6, 7)) == EXAMPLE
    assert fertilitope_lattice_points((1, 2, 4, 3, 5, 6, 7)).sorted() == [(3, 3), (4, 2), (5, 1)]
    assert len(fertilitope_lattice_points((2, 3, 1))) == 0
    assert fertilitope_dimension((2, 3, 1)) == EMPTY
    with pytest.raises(DomainError):
        fertilitope((2, 3, 1))


def test_lattice_points_are_valid_compositions():
    for n in range(1, 8):
        for p in itertools.permutations(range(1, n + 1)):
            assert set(fertilitope_lattice_points(p)) == set(valid_compositions(p))


def test_fertilitope_is_binary_with_expected_weight():
    for n in range(1, 8):
        for p in sorted_perms(n):
            b = fertilitope(p)
            assert check_building_set(b) == BINARY
            assert b.total_weight() == n - len(descents(p))
            assert all(w >= 1 for _, w in b.items())
            assert b.ground == len(descents(p)) + 1


def test_contraction_order_does_not_matter():
    rnd = random.Random(7)
    perms = list(sorted_perms(7))
    for p in rnd.sample(perms, 150):
        ref = fertilitope(p)
        for _ in range(3):
            assert fertilitope(p, rng=random.Random(rnd.random())) == ref


def test_valid_compositions_are_m_convex():
    for n in range(1, 8):
        for p in sorted_perms(n):
            assert is_m_convex(LatticePointSet(len(descents(p)) + 1, frozenset(valid_compositions(p))))


def test_vertex_count_matches_f0():
    for n in range(1, 7):
        for p in sorted_perms(n):
            b = fertilitope(p)
            assert len(vertices(b)) == f_vector(b)[0]


def test_face_number_bound():
    for n in range(1, 8):
        for p in sorted_perms(n):
            b = fertilitope(p)
            k = len(descents(p))
            for i, f in enumerate(f_vector(b)):
                assert f <= math.comb(k, i) * 2 ** (k - i)


def test_extremal_vhcs():
    ext = extremal_vhcs((1, 2, 4, 3, 5, 6, 7))
    assert sorted(h.composition for h in ext) == [(3, 3), (5, 1)]
    assert extremal_vhcs(identity(4)) == enumerate_vhcs(identity(4))
    assert extremal_vhcs((2, 3, 1)) == ()
    for p in sorted_perms(6):
        comps = valid_compositions(p)
        if comps == ((1,) * len(comps[0]),):
            assert extremal_vhcs(p) == enumerate_vhcs(p)


def test_minkowski_add_full_simplex():
    assert minkowski_add_full_simplex(wbs(1, ({1}, 4))) == wbs(1, ({1}, 5))
    assert minkowski_add_full_simplex(wbs(2, ({1}, 1), ({2}, 1))) == wbs(
        2, ({1}, 1), ({2}, 1), ({1, 2}, 1)
    )
    for n in range(1, 7):
        for p in sorted_perms(n):
            assert lattice_points(fertilitope(oplus_id(p, 1))) == lattice_points(
                minkowski_add_full_simplex(fertilitope(p))
            )


def test_product():
    b = product(wbs(1, ({1}, 2)), EXAMPLE)
    assert b == wbs(3, ({1}, 2), ({2}, 3), ({3}, 1), ({2, 3}, 2))
    assert set(lattice_points(b)) == {(2,) + q for q in lattice_points(EXAMPLE)}


def test_count_compositions_oplus():
    assert count_compositions_oplus((1,), 3) == (1, 1, 1, 1)
    seq = count_compositions_oplus((1, 2, 4, 3, 5, 6, 7), 4)
    assert seq == tuple(len(valid_compositions(oplus_id((1, 2, 4, 3, 5, 6, 7), m))) for m in range(5))
    assert len(set(finite_difference(seq, 1))) == 1
    for p in sorted_perms(5):
        k = len(descents(p))
        seq = count_compositions_oplus(p, k + 2)
        assert set(finite_difference(seq, k)) != {0}
        assert set(finite_difference(seq, k + 1)) == {0}
    with pytest.raises(DomainError):
        count_compositions_oplus((2, 3, 1), 2)


def test_realize_round_trip():
    for total in range(1, 7):
        for b in weighted_binary_building_sets(total):
            assert fertilitope(realize_permutation(b)) == b


def test_json_round_trip():
    assert WeightedBuildingSet.from_json(EXAMPLE.to_json()) == EXAMPLE
    pts = lattice_points(EXAMPLE)
    assert LatticePointSet.from_json(pts.to_json()) == pts


def test_weights_must_be_positive():
    with pytest.raises(DomainError):
        wbs(1, ({1}, -1))
