import itertools
import random
from collections import Counter

import pytest
import sympy
from hypothesis import given, strategies as st

from fertilitope.errors import DomainError, ResourceError
from fertilitope.fertility import (
    CERTIFIED_TABLE_LIMIT,
    FertilitySearchReport,
    IntPolynomial,
    OutOfRangeError,
    catalan,
    composition_catalan,
    composition_narayana,
    conjecture_scan,
    descent_polynomial,
    distinct_real_roots,
    fertility,
    fertility_number_search,
    fertility_numbers,
    infertility_table,
    is_log_concave,
    is_real_rooted,
    lemma51_forms,
    narayana_polynomial,
    nestohedron_fertility,
    rtff_check,
    rtff_sides,
    sorted_permutations,
    closed_form_infertile,
)
from fertilitope.nestohedron import (
    BINARY,
    WeightedBuildingSet,
    check_building_set,
    fertilitope,
    weighted_binary_building_sets,
)
from fertilitope.perm_core import (
    descents,
    fertility_bruteforce,
    identity,
    preimage_table,
)
from fertilitope.vhc import valid_compositions

X = sympy.Symbol("x")


def to_sympy(poly):
    return sympy.Poly(list(reversed(poly.coefficients)) or [0], X)


def sympy_real_rooted(poly):
    coeffs = list(poly.coefficients)
    if len(coeffs) <= 1:
        return True
    p = to_sympy(poly)
    return len(sympy.real_roots(p)) == p.degree()


def test_catalan_and_narayana():
    assert [catalan(r) for r in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]
    assert narayana_polynomial(1) == IntPolynomial([0, 1])
    assert narayana_polynomial(3) == IntPolynomial([0, 1, 3, 1])
    for n in range(1, 13):
        assert narayana_polynomial(n)(1) == catalan(n)


def test_composition_catalan():
    assert composition_catalan((3, 3)) == 25
    assert composition_catalan((4, 2)) == 28
    assert composition_catalan((5, 1)) == 42
    assert composition_catalan((1, 1, 1, 1)) == 1
    for ones in range(5):
        assert composition_catalan((3, 3) + (1,) * ones) == 25
    with pytest.raises(DomainError):
        composition_catalan((2, 0))
    assert composition_narayana((2, 1)) == IntPolynomial([0, 0, 1, 1])


def test_fertility_examples():
    assert fertility((1, 2, 4, 3, 5, 6, 7)) == 95
    assert fertility((2, 3, 1)) == 0
    assert fertility(identity(3)) == 5
    assert descent_polynomial((2, 3, 1)).is_zero()
    assert descent_polynomial((2, 3, 1)).degree == -1


def test_fertility_formula_matches_brute_force():
    for n in range(1, 8):
        table = preimage_table(n)
        for p in itertools.permutations(range(1, n + 1)):
            assert fertility(p) == sum(table.get(p, Counter()).values())
    rnd = random.Random(2024)
    table = preimage_table(8)
    for _ in range(500):
        p = tuple(rnd.sample(range(1, 9), 8))
        assert fertility(p) == sum(table.get(p, Counter()).values())


def test_descent_polynomial_matches_brute_force():
    for n in range(1, 7):
        table = preimage_table(n)
        for p in itertools.permutations(range(1, n + 1)):
            counts = table.get(p, Counter())
            top = max(counts, default=0)
            assert descent_polynomial(p) == IntPolynomial(counts.get(i, 0) for i in range(top + 1))
    for n in range(1, 8):
        assert descent_polynomial(identity(n)) == narayana_polynomial(n)


def test_descent_polynomials_are_palindromic():
    for n in range(1, 8):
        for p in sorted_permutations(n):
            c = list(descent_polynomial(p).coefficients)
            while c[0] == 0:
                c.pop(0)
            assert c == c[::-1]


def test_rtff():
    assert rtff_check(identity(4), ["des+1"])
    lhs, _ = rtff_sides(identity(4), ["des+1"])
    assert lhs == {(i,): c for i, c in enumerate(narayana_polynomial(4).coefficients) if c}
    assert rtff_check((2, 3, 1), ["des+1", "peak+1"])
    assert rtff_sides((2, 3, 1), ["peak+1"]) == ({}, {})
    for p in itertools.permutations(range(1, 7)):
        assert rtff_check(p, ["des+1", "peak+1"])
    with pytest.raises(DomainError):
        rtff_check(identity(3), [])
    with pytest.raises(DomainError):
        rtff_check(identity(3), ["inv"])
    with pytest.raises(ResourceError):
        rtff_check(identity(9), ["des+1"])


def test_real_rootedness_examples():
    a = IntPolynomial([0, 1, 3, 1])
    b = IntPolynomial([0, 1, 1, 1])
    assert is_real_rooted(a)
    assert not is_real_rooted(b)
    assert is_log_concave(b)
    assert not is_log_concave(IntPolynomial([1, 0, 1]))
    assert is_real_rooted(IntPolynomial([]))
    assert is_real_rooted(IntPolynomial([0, 0, 4]))
    # repeated roots: (x+1)^3
    assert is_real_rooted(IntPolynomial([1, 3, 3, 1]))
    with pytest.raises(DomainError):
        is_real_rooted(IntPolynomial([1, -1]))


def test_narayana_polynomials_are_real_rooted():
    for n in range(1, 11):
        assert is_real_rooted(narayana_polynomial(n))
        assert sympy_real_rooted(narayana_polynomial(n))


coefficient_lists = st.lists(st.integers(min_value=0, max_value=20), min_size=1, max_size=7)


@given(coefficient_lists)
def test_sturm_agrees_with_sympy(coeffs):
    poly = IntPolynomial(coeffs)
    assert is_real_rooted(poly) == sympy_real_rooted(poly)
    if not poly.is_zero():
        p = to_sympy(poly)
        assert distinct_real_roots(list(poly.coefficients)) == len(set(sympy.real_roots(p)))


def test_conjecture_scan_small():
    assert conjecture_scan(1) == []
    assert conjecture_scan(4) == []


def test_quadratic_forms():
    assert lemma51_forms(119) == (7, 7)
    assert lemma51_forms(27) == (3, 3)
    assert lemma51_forms(8) == "divisible-by-4"
    assert lemma51_forms(3) is None
    for f in range(1, 200):
        form = lemma51_forms(f)
        if isinstance(form, tuple):
            a, b = form
            assert a * (4 * b - 2 * a + 3) == f and 1 <= a <= b


def test_quadratic_forms_are_fertility_numbers():
    fertile = fertility_numbers(200)
    for f in range(201):
        if lemma51_forms(f) is not None:
            assert f in fertile


def test_search_examples():
    for f in (3, 23):
        report = fertility_number_search(f)
        assert report.status == "infertile"
        assert report.witness is None
    report = fertility_number_search(95)
    assert report.status == "fertile"
    assert nestohedron_fertility(report.witness) == 95
    assert fertility(report.permutation) == 95
    assert fertilitope(report.permutation) == report.witness
    zero = fertility_number_search(0)
    assert zero.status == "fertile" and fertility(zero.permutation) == 0
    far = fertility_number_search(10 ** 6)
    assert far.status == "unknown"
    with pytest.raises(DomainError):
        fertility_number_search(-1)


def test_witnesses_realize_their_targets():
    for f in sorted(fertility_numbers(130)):
        report = fertility_number_search(f)
        assert report.status == "fertile"
        perm = report.permutation
        if report.witness is not None:
            assert check_building_set(report.witness) == BINARY
            assert nestohedron_fertility(report.witness) == f
            assert fertilitope(perm) == report.witness
        # hook enumeration is exponential in the descents, so only small
        # witnesses are recounted directly
        if len(perm) <= 20:
            assert fertility(perm) == f


def test_infertility_tables():
    assert infertility_table(25) == {3, 7, 11, 15, 19, 23}
    assert infertility_table(30) == {3, 7, 11, 15, 19, 23}
    full = infertility_table(CERTIFIED_TABLE_LIMIT)
    assert 95 not in full and 119 not in full
    assert full == {f for f in range(CERTIFIED_TABLE_LIMIT + 1) if closed_form_infertile(f)}
    with pytest.raises(OutOfRangeError):
        infertility_table(CERTIFIED_TABLE_LIMIT + 1)


def test_fertility_numbers_agree_with_direct_enumeration():
    # every weighted binary building set of total weight <= 8
    found = {0}
    for total in range(1, 9):
        for b in weighted_binary_building_sets(total):
            found.add(nestohedron_fertility(b))
    assert {f for f in found if f <= 28} == set(fertility_numbers(28))
    assert {f for f in found if f <= 200} <= set(fertility_numbers(200))


def test_small_permutations_give_fertility_numbers():
    fertile = fertility_numbers(256)
    for n in range(1, 8):
        for p in sorted_permutations(n):
            f = fertility(p)
            if f <= 256:
                assert f in fertile


def addable_sets(b):
    for i in range(1, b.ground + 1):
        for j in range(i, b.ground + 1):
            yield frozenset(range(i, j + 1))


def test_fertility_is_monotone_in_weights():
    for total in range(1, 8):
        for b in weighted_binary_building_sets(total):
            base = nestohedron_fertility(b)
            for s in addable_sets(b):
                weights = dict(b.weights)
                weights[s] = weights.get(s, 0) + 1
                bigger = WeightedBuildingSet(b.ground, weights)
                if check_building_set(bigger) != BINARY:
                    continue
                assert nestohedron_fertility(bigger) >= base


def test_fertility_is_multiplicative():
    small = [p for n in range(1, 5) for p in sorted_permutations(n)]
    for tau, tau2 in itertools.product(small, repeat=2):
        n, n2 = len(tau), len(tau2)
        sigma = tuple(x + n2 for x in tau) + tau2 + (n + n2 + 1,)
        left = set(valid_compositions(tau))
        right = set(valid_compositions(tau2))
        assert set(valid_compositions(sigma)) == {a + b for a in left for b in right}
        assert fertility(sigma) == fertility(tau) * fertility(tau2)
        if n + n2 + 1 <= 7:
            assert fertility(sigma) == fertility_bruteforce(sigma)


def test_appending_maximum_two_ways():
    for n in range(1, 7):
        for p in sorted_permutations(n):
            shifted = {
                q[:i] + (q[i] + 1,) + q[i + 1:]
                for q in valid_compositions(p) for i in range(len(q))
            }
            bigger = p + (n + 1,)
            assert sum(composition_catalan(q) for q in shifted) == fertility(bigger)
            assert fertility(bigger) >= fertility(p)


def test_polynomial_json():
    poly = IntPolynomial([0, 3, 10 ** 30])
    assert poly.to_json() == ["0", "3", str(10 ** 30)]
    assert IntPolynomial.from_json(poly.to_json()) == poly
    assert str(IntPolynomial([0, 1, 3, 1])) == "x + 3*x^2 + x^3"


def test_report_json_round_trip():
    for f in (0, 23, 95, 10 ** 6):
        report = fertility_number_search(f)
        assert FertilitySearchReport.from_json(report.to_json()) == report
