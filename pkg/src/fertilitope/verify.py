"""Named suites of invariant checks, each comparing a closed-form computation
with an independent brute-force oracle on every permutation up to a size.

Used by ``fertilitope verify`` and by the acceptance tests.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb

from . import cumulants as cu
from . import fertility as fe
from . import nestohedron as ne
from . import perm_core as pc
from . import vhc as vh


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}


def _first_failure(items, predicate):
    for item in items:
        if not predicate(item):
            return item
    return None


def _result(suite, name, failure=None, extra=""):
    if failure is None:
        return CheckResult(suite, name, True, extra)
    return CheckResult(suite, name, False, f"counterexample: {failure!r}")


def _perms(lo, hi):
    for n in range(lo, hi + 1):
        yield from pc.all_permutations(n)


def _sorted_perms(lo, hi):
    for p in _perms(lo, hi):
        if vh.canonical_hook_configuration(p) is not None:
            yield p


# ---------------------------------------------------------------------------
# Oracles that do not go through the module under test
# ---------------------------------------------------------------------------

def recursive_stack_sort(p):
    """s(L m R) = s(L) s(R) m, straight from the definition."""
    if not p:
        return ()
    k = p.index(max(p))
    return recursive_stack_sort(p[:k]) + recursive_stack_sort(p[k + 1:]) + (p[k],)


def vhcs_by_geometry(p):
    """Every assignment of a northeast endpoint to each descent, filtered by
    the geometric definition."""
    desc = sorted(pc.descents(p))
    options = [
        [j for j in range(d + 1, len(p) + 1) if p[j - 1] > p[d - 1]] for d in desc
    ]
    found = set()
    for ends in itertools.product(*options):
        hooks = tuple(vh.Hook(d, j) for d, j in zip(desc, ends))
        if not vh.definition_violations(p, hooks):
            found.add(hooks)
    return found


def descent_polynomial_bruteforce(p):
    q = pc.standardize(p)
    counter = pc.preimage_table(len(q)).get(q, Counter()) if q else Counter({1: 1})
    coeffs = [0] * (max(counter, default=0) + 1)
    for d, c in counter.items():
        coeffs[d] = c
    return fe.IntPolynomial(coeffs)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def suite_perm_core(n):
    s = "perm_core"
    out = []
    out.append(_result(s, "stack pass equals recursive definition",
                       _first_failure(_perms(0, n), lambda p: pc.stack_sort(p) == recursive_stack_sort(p))))
    out.append(_result(s, "s = postorder after in-order inverse",
                       _first_failure(_perms(1, n), lambda p: pc.stack_sort(p) == pc.postorder(pc.in_order_inverse(p)))))

    def stats_match(p):
        t = pc.in_order_inverse(p)
        return (pc.tree_statistic(t, "des") == len(pc.descents(p))
                and pc.tree_statistic(t, "peak") == len(pc.peaks(p)))
    out.append(_result(s, "tree des/peak match the in-order reading", _first_failure(_perms(1, n), stats_match)))
    m = min(n, 7)
    out.append(_result(s, "postorder fibers have fertility size",
                       _first_failure(_perms(1, m), lambda p: len(pc.postorder_fiber(p)) == pc.fertility_bruteforce(p))))
    return out


def suite_vhc(n):
    s = "vhc"
    out = []
    out.append(_result(s, "enumeration equals geometric brute force",
                       _first_failure(_perms(0, n), lambda p: {h.hooks for h in vh.enumerate_vhcs(p)} == vhcs_by_geometry(p))))
    out.append(_result(s, "canonical configuration exists iff sorted",
                       _first_failure(_perms(1, n), lambda p: (vh.canonical_hook_configuration(p) is not None) == (pc.fertility_bruteforce(p) > 0))))
    out.append(_result(s, "compositions sum to n - k with k + 1 parts",
                       _first_failure(_perms(1, n), lambda p: all(
                           sum(q) == len(p) - len(pc.descents(p)) and len(q) == len(pc.descents(p)) + 1
                           for q in vh.valid_compositions(p)))))
    configs = [h for p in _perms(1, n) for h in vh.enumerate_vhcs(p)]

    def round_trip(h):
        t = vh.theta(h)
        return (vh.is_quasicanonical(t) and vh.theta_inverse(t) == h
                and pc.postorder(t) == h.perm and vh.composition_of_tree(t) == h.composition)
    out.append(_result(s, "theta round trip preserves compositions", _first_failure(configs, round_trip)))
    counts = [(len(vh.enumerate_quasicanonical(m)), sum(1 for p in pc.all_permutations(m) for _ in vh.enumerate_vhcs(p)))
              for m in range(1, n + 1)]
    out.append(_result(s, "quasicanonical trees are equinumerous with configurations",
                       _first_failure(enumerate(counts, start=1), lambda c: c[1][0] == c[1][1])))
    out.append(_result(s, "inverse of theta lands on quasicanonical trees only",
                       _first_failure(vh.enumerate_quasicanonical(min(n, 6)), lambda t: vh.theta(vh.theta_inverse(t)) == t)))

    def canonical_tree(p):
        t = vh.theta(vh.canonical_hook_configuration(p))
        pre = pc.preimages_bruteforce(p)
        top = max(pc.inversions(x) for x in pre)
        return vh.is_canonical(t) and [x for x in pre if pc.inversions(x) == top] == [pc.in_order(t)]
    out.append(_result(s, "canonical tree is the max-inversion preimage",
                       _first_failure(_sorted_perms(1, min(n, 7)), canonical_tree)))

    def split_bijection(p):
        hs = vh.enumerate_vhcs(p)
        if not hs or not hs[0].hooks:
            return True
        last = hs[0].hooks[-1].sw
        by_hook = {}
        for h in hs:
            for idx, hook in enumerate(h.hooks, start=1):
                if hook.ne > last:
                    by_hook.setdefault((idx, hook), []).append(h)
        for (idx, hook), group in by_hook.items():
            pairs = [vh.split(h, idx) for h in group]
            if len(set(pairs)) != len(group):
                return False
            u_perm, s_perm = pairs[0][0].perm, pairs[0][1].perm
            if len(group) != len(vh.enumerate_vhcs(u_perm)) * len(vh.enumerate_vhcs(s_perm)):
                return False
            for h, (hu, hs_) in zip(group, pairs):
                if vh.unsplit(p, hook, hu, hs_) != h:
                    return False
                k_u = len(hu.hooks)
                q = h.composition
                if hu.composition != q[:k_u + 1] or hs_.composition != q[k_u + 1:]:
                    return False
        return True
    out.append(_result(s, "splitting is a composition-respecting bijection",
                       _first_failure(_perms(1, n), split_bijection)))
    return out


def suite_nestohedron(n, seed=0):
    s = "nestohedron"
    out = []
    sorted_ps = list(_sorted_perms(1, n))
    out.append(_result(s, "lattice points equal valid compositions",
                       _first_failure(_perms(1, n), lambda p: set(ne.fertilitope_lattice_points(p).points) == set(vh.valid_compositions(p)))))
    out.append(_result(s, "valid compositions are M-convex",
                       _first_failure(sorted_ps, lambda p: ne.is_m_convex(ne.fertilitope_lattice_points(p)))))

    def shape(p):
        b = ne.fertilitope(p)
        return (ne.check_building_set(b) == ne.BINARY
                and b.total_weight() == len(p) - len(pc.descents(p)))
    out.append(_result(s, "fertilitopes are binary with weight n - k", _first_failure(sorted_ps, shape)))
    rng = random.Random(seed)
    out.append(_result(s, "contraction order does not matter",
                       _first_failure(sorted_ps, lambda p: all(ne.fertilitope(p, rng) == ne.fertilitope(p) for _ in range(3)))))

    def face_bound(p):
        k = len(pc.descents(p))
        f = ne.f_vector(ne.fertilitope(p))
        return all(fi <= comb(k, i) * 2 ** (k - i) for i, fi in enumerate(f))
    out.append(_result(s, "face numbers obey the cube bound", _first_failure(sorted_ps, face_bound)))
    out.append(_result(s, "vertex count equals f_0",
                       _first_failure(sorted_ps, lambda p: len(ne.vertices(ne.fertilitope(p))) == ne.f_vector(ne.fertilitope(p))[0])))

    def summing_order(p):
        b = ne.fertilitope(p)
        order = list(b.sets)
        rng.shuffle(order)
        return ne.lattice_points(b, order) == ne.lattice_points(b)
    out.append(_result(s, "lattice points ignore summation order", _first_failure(sorted_ps, summing_order)))

    def plus_one(p):
        k = len(pc.descents(p))
        shifted = {
            tuple(x + (i == j) for j, x in enumerate(q)) for q in vh.valid_compositions(p) for i in range(k + 1)
        }
        bigger = pc.oplus_id(p, 1)
        return (set(vh.valid_compositions(bigger)) == shifted
                and ne.fertilitope(bigger) == ne.minkowski_add_full_simplex(ne.fertilitope(p)))
    out.append(_result(s, "appending a maximum adds the full simplex",
                       _first_failure([p for p in sorted_ps if len(p) < n], plus_one)))

    def polynomial(p):
        k = len(pc.descents(p))
        seq = ne.count_compositions_oplus(p, k + 3)
        direct = [len(vh.valid_compositions(pc.oplus_id(p, m))) for m in range(min(3, k + 4))]
        return list(seq[:len(direct)]) == direct and all(x == 0 for x in ne.finite_difference(seq, k + 1))
    out.append(_result(s, "composition counts are polynomial of degree k",
                       _first_failure([p for p in sorted_ps if len(p) <= min(n, 5)], polynomial)))
    weight = min(n, 6)
    out.append(_result(s, "realized permutations reproduce their building set",
                       _first_failure((b for y in range(1, weight + 1) for b in ne.weighted_binary_building_sets(y)),
                                      lambda b: ne.fertilitope(ne.realize_permutation(b)) == b)))
    return out


def suite_fertility(n, seed=0):
    s = "fertility"
    out = []
    out.append(_result(s, "fertility formula equals preimage count",
                       _first_failure(_perms(1, n), lambda p: fe.fertility(p) == pc.fertility_bruteforce(p))))
    out.append(_result(s, "refined formula equals preimage descents",
                       _first_failure(_perms(1, n), lambda p: fe.descent_polynomial(p) == descent_polynomial_bruteforce(p))))
    out.append(_result(s, "descent polynomials are palindromic",
                       _first_failure(_sorted_perms(1, n), lambda p: _palindromic(fe.descent_polynomial(p)))))
    m = min(n, 6)
    out.append(_result(s, "refined tree formula with des and peak",
                       _first_failure(_perms(1, m), lambda p: fe.rtff_check(p, ["des+1", "peak+1"]))))

    def two_ways(p):
        k = len(pc.descents(p))
        direct = fe.fertility(pc.oplus_id(p, 1))
        shifted = {tuple(x + (i == j) for j, x in enumerate(q))
                   for q in vh.valid_compositions(p) for i in range(k + 1)}
        via = sum(fe.composition_catalan(q) for q in shifted)
        return direct == via >= fe.fertility(p)
    out.append(_result(s, "appending a maximum sums shifted compositions",
                       _first_failure(_sorted_perms(1, n - 1), two_ways)))
    small = [pc.standardize(p) for p in _sorted_perms(1, min(4, n))]

    def product(pair):
        tau, tau2 = pair
        a, b = len(tau), len(tau2)
        sigma = tuple(x + b for x in tau) + tau2 + (a + b + 1,)
        return fe.fertility(sigma) == fe.fertility(tau) * fe.fertility(tau2)
    out.append(_result(s, "product construction multiplies fertility",
                       _first_failure(itertools.product(small, small), product)))

    def monotone(b):
        base = fe.nestohedron_fertility(b)
        for extra in _addable_sets(b):
            weights = dict(b.weights)
            weights[extra] = weights.get(extra, 0) + 1
            if fe.nestohedron_fertility(ne.WeightedBuildingSet(b.ground, weights)) < base:
                return False
        return True
    weight = min(n + 1, 7)
    out.append(_result(s, "adding weight never lowers fertility",
                       _first_failure((b for y in range(1, weight + 1) for b in ne.weighted_binary_building_sets(y)), monotone)))
    table = fe.infertility_table(fe.CERTIFIED_TABLE_LIMIT)
    expected = frozenset(f for f in range(fe.CERTIFIED_TABLE_LIMIT + 1) if fe.closed_form_infertile(f))
    out.append(_result(s, "infertility search matches the closed form",
                       None if table == expected else sorted(table ^ expected)))
    out.append(_result(s, "no real-rootedness counterexample",
                       (fe.conjecture_scan(n) or [None])[0]))
    return out


def _palindromic(poly):
    c = poly.coefficients
    low = next((i for i, x in enumerate(c) if x), 0)
    body = c[low:]
    return body == body[::-1]


def _addable_sets(b):
    """Intervals whose weight can be raised while keeping b binary."""
    sets = [frozenset(x) for x in b.sets]
    for i in range(1, b.ground + 1):
        for j in range(i, b.ground + 1):
            cand = frozenset(range(i, j + 1))
            if all(not (cand & x) or cand <= x or x <= cand for x in sets):
                yield cand


def suite_cumulants(n):
    s = "cumulants"
    out = []
    top = n + 1
    formulas = [(m, cu.classical_from_free_vhc(m), cu.classical_from_free_qcan(m), cu.classical_from_free_chain(m))
                for m in range(1, top + 1)]
    out.append(_result(s, "hook and tree formulas equal the moment chain",
                       _first_failure(formulas, lambda t: t[1] == t[2] == t[3])))
    out.append(_result(s, "classical cumulants beyond the first avoid kappa_1",
                       _first_failure(formulas[1:], lambda t: 1 not in t[3].variables())))
    kap = cu.kappa_sequence(top)
    out.append(_result(s, "classical round trip",
                       None if cu.classical_from_moments(cu.moments_from_classical(kap)) == kap else "mismatch"))
    out.append(_result(s, "free round trip",
                       None if cu.free_from_moments(cu.moments_from_free(kap)) == kap else "mismatch"))
    semi = cu.moments_from_free([0, 1] + [0] * 6)
    expected = [0 if k % 2 else fe.catalan(k // 2) for k in range(1, 9)]
    out.append(_result(s, "semicircle moments are Catalan numbers",
                       None if semi == expected else semi))
    parts = cu.enumerate_partitions(min(top, 8))
    out.append(_result(s, "reflection preserves noncrossing",
                       _first_failure(parts, lambda p: p.is_noncrossing() == p.reflect().is_noncrossing())))
    return out


SUITES: dict = {
    "perm_core": suite_perm_core,
    "vhc": suite_vhc,
    "nestohedron": suite_nestohedron,
    "fertility": suite_fertility,
    "cumulants": suite_cumulants,
}


def run_suite(name: str, n: int, threads: int = 1) -> list:
    """Run one suite, or every suite for ``all``, in a fixed order."""
    if name == "all":
        names = list(SUITES)
    elif name in SUITES:
        names = [name]
    else:
        raise KeyError(name)
    runners: list = [lambda nm=nm: SUITES[nm](n) for nm in names]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            batches = list(pool.map(lambda f: f(), runners))
    else:
        batches = [f() for f in runners]
    return [r for batch in batches for r in batch]
