"""Catalan and Narayana numbers, the fertility formulas, real-rootedness of
descent polynomials and the search for fertility numbers.

Fertility numbers are searched through integral binary nestohedra rather
than permutations.  Every such polytope is either the point (1), a smaller
one plus the full simplex, or a product of two smaller ones, and the
fertility of a product is the product of the fertilities.  So it suffices
to enumerate the *irreducible* ones (those containing the full simplex)
and close their fertilities under multiplication.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import config
from .errors import DomainError
from .nestohedron import (
    WeightedBuildingSet,
    lattice_points,
    minkowski_add_full_simplex,
    product,
    realize_permutation,
)
from .perm_core import (
    Permutation,
    all_permutations,
    as_permutation,
    binary_plane_trees,
    postorder_fiber,
    skeleton,
    tree_statistic,
)
from .vhc import canonical_hook_configuration, valid_compositions

# Largest target the fertility-number search will certify by default.
SEARCH_LIMIT = 256
# Largest limit for which the closed-form infertility list is known.
CERTIFIED_TABLE_LIMIT = 126


class OutOfRangeError(DomainError):
    """Requested value lies outside the range the computation certifies."""


# ---------------------------------------------------------------------------
# Integer polynomials
# ---------------------------------------------------------------------------

class IntPolynomial:
    """Polynomial with exact integer coefficients, lowest degree first.

    Trailing zeros are trimmed, so the zero polynomial has no coefficients.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Sequence[int] = ()):
        coeffs = [int(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    @classmethod
    def monomial(cls, degree: int, coefficient: int = 1) -> "IntPolynomial":
        return cls([0] * degree + [coefficient])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coefficients == other.coefficients
        return NotImplemented

    def __hash__(self):
        return hash(self.coefficients)

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coefficients, other.coefficients
        size = max(len(a), len(b))
        return IntPolynomial(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(size)
        )

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(out)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"IntPolynomial({list(self.coefficients)})"

    def __str__(self):
        if not self.coefficients:
            return "0"
        terms = []
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms)

    def to_json(self) -> list:
        # Coefficients can outgrow a double, so they travel as strings.
        return [str(c) for c in self.coefficients]

    @classmethod
    def from_json(cls, data) -> "IntPolynomial":
        return cls(int(c) for c in data)


# ---------------------------------------------------------------------------
# Catalan and Narayana
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def catalan(r: int) -> int:
    if r < 0:
        raise DomainError("Catalan numbers need r >= 0")
    return math.comb(2 * r, r) // (r + 1)


def narayana(n: int, i: int) -> int:
    if n < 1 or not 1 <= i <= n:
        return 0
    return math.comb(n, i) * math.comb(n, i - 1) // n


@lru_cache(maxsize=None)
def narayana_polynomial(n: int) -> IntPolynomial:
    """N_n(x) = sum_i N(n, i) x^i."""
    if n < 1:
        raise DomainError("Narayana polynomials need n >= 1")
    return IntPolynomial([0] + [narayana(n, i) for i in range(1, n + 1)])


def _check_parts(q):
    if any(x < 1 for x in q):
        raise DomainError(f"composition parts must be positive: {tuple(q)}")


def composition_catalan(q: Sequence[int]) -> int:
    _check_parts(q)
    return math.prod(catalan(x) for x in q)


def composition_narayana(q: Sequence[int]) -> IntPolynomial:
    _check_parts(q)
    out = IntPolynomial([1])
    for x in q:
        out = out * narayana_polynomial(x)
    return out


# ---------------------------------------------------------------------------
# Fertility formulas
# ---------------------------------------------------------------------------

def fertility(p: Sequence[int]) -> int:
    """Number of stack-sorting preimages, as a sum of C_q over V(p)."""
    return sum(composition_catalan(q) for q in valid_compositions(as_permutation(p)))


def descent_polynomial(p: Sequence[int]) -> IntPolynomial:
    """Sum over preimages sigma of x^(des(sigma)+1), as a sum of N_q(x)."""
    out = IntPolynomial()
    for q in valid_compositions(as_permutation(p)):
        out = out + composition_narayana(q)
    return out


STATISTICS = ("des+1", "peak+1")


def _stat(tree, name):
    if name == "des+1":
        return tree_statistic(tree, "des") + 1
    if name == "peak+1":
        return tree_statistic(tree, "peak") + 1
    raise DomainError(f"unknown statistic {name!r}; choose from {STATISTICS}")


def _poly_mul(a: dict, b: dict) -> dict:
    out = Counter()
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return {e: c for e, c in out.items() if c}


@lru_cache(maxsize=None)
def _part_polynomial(m: int, stats: tuple) -> tuple:
    acc = Counter()
    for shape in binary_plane_trees(m):
        acc[tuple(_stat(shape, s) for s in stats)] += 1
    return tuple(sorted(acc.items()))


def rtff_sides(p: Sequence[int], stats: Sequence[str], max_n: Optional[int] = None):
    """Both sides of the refined tree fertility formula as sparse maps from
    exponent vectors to coefficients.

    The left side sums over decreasing trees with postorder p, the right
    side over valid compositions q of products over the parts of sums over
    all binary plane trees of that size.
    """
    perm = as_permutation(p)
    stats = tuple(stats)
    if not stats:
        raise DomainError("at least one statistic is required")
    unknown = [s for s in stats if s not in STATISTICS]
    if unknown:
        raise DomainError(f"unknown statistics {unknown}; choose from {STATISTICS}")
    config.check_bound("rtff", len(perm), max_n)
    lhs = Counter()
    for t in postorder_fiber(perm, max_n=max_n if max_n is not None else config.bound("rtff")):
        shape = skeleton(t)
        lhs[tuple(_stat(shape, s) for s in stats)] += 1
    rhs = Counter()
    for q in valid_compositions(perm):
        term = {(0,) * len(stats): 1}
        for part in q:
            term = _poly_mul(term, dict(_part_polynomial(part, stats)))
        for e, c in term.items():
            rhs[e] += c
    return dict(lhs), {e: c for e, c in rhs.items() if c}


def rtff_check(p: Sequence[int], stats: Sequence[str], max_n: Optional[int] = None) -> bool:
    lhs, rhs = rtff_sides(p, stats, max_n)
    return lhs == rhs


# ---------------------------------------------------------------------------
# Real roots and log-concavity
# ---------------------------------------------------------------------------

def _check_nonnegative(poly: IntPolynomial):
    if any(c < 0 for c in poly.coefficients):
        raise DomainError(f"expected nonnegative coefficients: {poly}")


def _rem(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) and a:
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def sturm_chain(coefficients: Sequence) -> list:
    p = [Fraction(c) for c in coefficients]
    while p and p[-1] == 0:
        p.pop()
    if not p:
        return []
    dp = [i * c for i, c in enumerate(p)][1:]
    chain = [p]
    if dp:
        chain.append(dp)
    while len(chain[-1]) > 1:
        r = _rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(signs) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def distinct_real_roots(coefficients: Sequence) -> int:
    """Number of distinct real roots by Sturm's theorem."""
    chain = sturm_chain(coefficients)
    if not chain:
        raise DomainError("the zero polynomial has infinitely many roots")
    at_pos = [1 if q[-1] > 0 else -1 for q in chain]
    at_neg = [s * (-1) ** (len(q) - 1) for s, q in zip(at_pos, chain)]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def is_real_rooted(poly: IntPolynomial) -> bool:
    """Exact decision: every complex root is real.

    The zero polynomial and constants count as real-rooted.  After removing
    the power of x, the polynomial is real-rooted exactly when its number
    of distinct real roots equals its number of distinct roots,
    deg p - deg gcd(p, p').
    """
    _check_nonnegative(poly)
    coeffs = list(poly.coefficients)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if len(coeffs) <= 1:
        return True
    chain = sturm_chain(coeffs)
    gcd_degree = len(chain[-1]) - 1
    distinct = len(coeffs) - 1 - gcd_degree
    return distinct_real_roots(coeffs) == distinct


def is_log_concave(poly: IntPolynomial) -> bool:
    _check_nonnegative(poly)
    a = poly.coefficients
    return all(a[j - 1] * a[j + 1] <= a[j] * a[j] for j in range(1, len(a) - 1))


def sorted_permutations(n: int):
    for p in all_permutations(n):
        if canonical_hook_configuration(p) is not None:
            yield p


def conjecture_scan(n_max: int) -> list:
    """Test real-rootedness (and log-concavity) of the descent polynomial of
    every sorted permutation of size at most ``n_max``.

    Returns one report per failure; an empty list means no counterexample.
    """
    config.check_bound("preimages", n_max)
    failures = []
    for n in range(1, n_max + 1):
        for p in sorted_permutations(n):
            poly = descent_polynomial(p)
            real = is_real_rooted(poly)
            concave = is_log_concave(poly)
            if not (real and concave):
                failures.append({
                    "perm": list(p),
                    "polynomial": poly.to_json(),
                    "real_rooted": real,
                    "log_concave": concave,
                })
    return failures


# ---------------------------------------------------------------------------
# Fertility numbers
# ---------------------------------------------------------------------------

def lemma51_forms(f: int):
    """``"divisible-by-4"`` when 4 | f, else the pair (a, b) with the
    smallest a such that 1 <= a <= b and a(4b - 2a + 3) = f, else None.

    Numbers of either form are fertility numbers.
    """
    if f < 0:
        raise DomainError("f must be nonnegative")
    if f % 4 == 0:
        return "divisible-by-4"
    a = 1
    # With b >= a the value is at least a(2a + 3).
    while a * (2 * a + 3) <= f:
        if f % a == 0:
            rest = f // a + 2 * a - 3
            if rest % 4 == 0 and rest // 4 >= a:
                return (a, rest // 4)
        a += 1
    return None


def closed_form_infertile(f: int) -> bool:
    """Closed-form list of infertility numbers up to the certified limit."""
    if f > CERTIFIED_TABLE_LIMIT:
        raise OutOfRangeError(f"closed form only covers f <= {CERTIFIED_TABLE_LIMIT}")
    return f % 4 == 3 and f not in (95, 119) and (f < 27 or f % 12 != 3)


# An irreducible nestohedron is encoded as (m, factors): the product of the
# irreducible ``factors`` plus m copies of the full simplex.  ``(m, ())`` is
# the point (m) in dimension one.  Factor order does not change fertility,
# so factors are kept sorted.
UNIT = (1, ())


def irreducible_to_building_set(node) -> WeightedBuildingSet:
    m, factors = node
    if not factors:
        return WeightedBuildingSet(1, {(1,): m})
    b = irreducible_to_building_set(factors[0])
    for f in factors[1:]:
        b = product(b, irreducible_to_building_set(f))
    return minkowski_add_full_simplex(b, m)


def _realized_size(node) -> int:
    m, factors = node
    if not factors:
        return m
    return sum(_realized_size(f) for f in factors) + len(factors) - 1 + m


@dataclass(frozen=True)
class _Irreducible:
    node: tuple
    fertility: int
    points: frozenset


def _points_fertility(points) -> int:
    return sum(math.prod(catalan(x) for x in q) for q in points)


def _add_full_simplex(points, dim):
    return frozenset(
        p[:i] + (p[i] + 1,) + p[i + 1:] for p in points for i in range(dim)
    )


def _multisets(pool, budget, start=0):
    """Multisets (as sorted index lists) of pool items whose fertility
    product stays within ``budget``."""
    yield []
    for idx in range(start, len(pool)):
        f = pool[idx].fertility
        if f <= budget:
            for rest in _multisets(pool, budget // f, idx):
                yield [idx] + rest


@lru_cache(maxsize=None)
def irreducibles(limit: int) -> tuple:
    """Every irreducible integral binary nestohedron of fertility <= limit.

    Bounds used, all provable:
    * adding a simplex never lowers fertility (q -> q + e_i is injective
      and C_{q+e_i} >= 2 C_q), so fertility at least doubles each time the
      full simplex is added.  Hence factors have fertility <= limit // 2,
      and the loop over m stops at the first overshoot;
    * appending a unit factor {(1)} never lowers fertility either, so the
      loop over the number of unit factors stops at the first overshoot.
    """
    out = []
    m = 1
    while catalan(m) <= limit:
        out.append(_Irreducible((m, ()), catalan(m), frozenset({(m,)})))
        m += 1
    if limit >= 4:
        pool = [x for x in irreducibles(limit // 2) if x.node != UNIT]
        for chosen in _multisets(pool, limit // 2):
            base_points = frozenset({()})
            for idx in chosen:
                base_points = frozenset(
                    a + b for a in base_points for b in pool[idx].points
                )
            units = max(0, 2 - len(chosen))
            while True:
                pts = frozenset(p + (1,) * units for p in base_points)
                dim = sum(len(next(iter(pool[i].points))) for i in chosen) + units
                m = 0
                while True:
                    pts = _add_full_simplex(pts, dim)
                    m += 1
                    f = _points_fertility(pts)
                    if f > limit:
                        break
                    factors = tuple(sorted([pool[i].node for i in chosen] + [UNIT] * units))
                    out.append(_Irreducible((m, factors), f, pts))
                if m == 1:
                    break
                units += 1
    out.sort(key=lambda x: (x.fertility, _realized_size(x.node), x.node))
    return tuple(out)


@lru_cache(maxsize=None)
def _fertility_table(limit: int) -> dict:
    """Map each fertility number <= limit to the smallest-size factor list
    (of irreducible nodes) realizing it."""
    irr = {}
    for x in irreducibles(limit):
        size = _realized_size(x.node)
        if x.fertility not in irr or size < irr[x.fertility][0]:
            irr[x.fertility] = (size, x.node)
    best = {1: (1, (UNIT,))}
    # Products: a product of r factors realizes with sum of sizes + r - 1.
    for v in range(2, limit + 1):
        options = []
        if v in irr:
            options.append((irr[v][0], (irr[v][1],)))
        for a, (size_a, node_a) in irr.items():
            if 1 < a < v and v % a == 0 and v // a in best:
                size_b, nodes_b = best[v // a]
                options.append((size_a + size_b + 1, tuple(sorted((node_a,) + nodes_b))))
        if options:
            best[v] = min(options)
    return best


@dataclass
class FertilitySearchReport:
    target: int
    status: str  # "fertile", "infertile" or "unknown"
    witness: Optional[WeightedBuildingSet] = None
    permutation: Optional[Permutation] = None
    search_bounds: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "target": str(self.target),
            "status": self.status,
            "witness": None if self.witness is None else self.witness.to_json(),
            "permutation": None if self.permutation is None else list(self.permutation),
            "search_bounds": self.search_bounds,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FertilitySearchReport":
        return cls(
            int(data["target"]),
            data["status"],
            None if data["witness"] is None else WeightedBuildingSet.from_json(data["witness"]),
            None if data["permutation"] is None else tuple(data["permutation"]),
            data["search_bounds"],
        )


def _bounds(limit: int) -> dict:
    return {
        "fertility_limit": limit,
        "max_irreducible_ground": max(1, limit // 2),
        "max_excess_weight": limit.bit_length() - 1,
        "monotone_in_units_and_full_simplex": True,
    }


def fertility_number_search(f: int, limit: Optional[int] = None,
                            with_permutation: bool = True) -> FertilitySearchReport:
    """Decide whether ``f`` is the fertility of some permutation.

    The search is exhaustive for targets up to ``limit`` (default
    :data:`SEARCH_LIMIT`); beyond it the status is ``unknown``.
    """
    if f < 0:
        raise DomainError("f must be nonnegative")
    limit = SEARCH_LIMIT if limit is None else limit
    if f > limit:
        return FertilitySearchReport(f, "unknown", search_bounds={
            "fertility_limit": limit, "reason": "out of certified range"})
    if f == 0:
        return FertilitySearchReport(0, "fertile", None, (2, 1) if with_permutation else None,
                                     {"fertility_limit": limit})
    table = _fertility_table(max(f, 1))
    if f not in table:
        return FertilitySearchReport(f, "infertile", search_bounds=_bounds(f))
    nodes = table[f][1]
    b = irreducible_to_building_set(nodes[0])
    for node in nodes[1:]:
        b = product(b, irreducible_to_building_set(node))
    perm = realize_permutation(b) if with_permutation else None
    return FertilitySearchReport(f, "fertile", b, perm, _bounds(f))


def fertility_numbers(limit: int) -> frozenset:
    if limit > SEARCH_LIMIT:
        raise OutOfRangeError(f"search is certified only up to {SEARCH_LIMIT}")
    return frozenset({0} | set(_fertility_table(max(limit, 1))))


def infertility_table(limit: int) -> frozenset:
    """Infertility numbers <= limit, found by exhaustive search."""
    if limit > CERTIFIED_TABLE_LIMIT:
        raise OutOfRangeError(
            f"limit {limit} is out of certified range (at most {CERTIFIED_TABLE_LIMIT})")
    if limit < 0:
        return frozenset()
    return frozenset(range(limit + 1)) - fertility_numbers(limit)


def nestohedron_fertility(b: WeightedBuildingSet) -> int:
    """Sum of C_q over the lattice points of Nest(y)."""
    return _points_fertility(lattice_points(b).points)
