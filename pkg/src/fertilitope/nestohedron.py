"""Weighted building sets, their nestohedra and the fertilitope of a sorted
permutation.

A nestohedron Nest(y) is the Minkowski sum of the scaled coordinate
simplices y_I * Delta_I over the sets I of a building set.  Everything here
is exact: lattice points are enumerated, faces are counted through nested
sets and vertices are found with a rational simplex method.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Optional, Sequence

from .errors import DomainError
from .perm_core import Permutation, as_permutation, descents, oplus_id, skeleton
from .vhc import canonical_hook_configuration, enumerate_vhcs, induced_composition, theta

GENERAL = "general"
BINARY = "binary"
INVALID = "invalid"

# Returned by fertilitope_dimension for an empty fertilitope.
EMPTY = "empty"


def _key(s) -> tuple:
    return tuple(sorted(s))


class WeightedBuildingSet:
    """A collection of nonempty subsets of [ground] with positive integer
    weights.  The building-set axioms are not enforced here; use
    :func:`check_building_set` to classify an instance."""

    __slots__ = ("ground", "weights")

    def __init__(self, ground: int, weights):
        if ground < 1:
            raise DomainError("ground set must be nonempty")
        items = weights.items() if hasattr(weights, "items") else weights
        clean = {}
        for s, w in items:
            key = frozenset(int(x) for x in s)
            if not key or not key <= frozenset(range(1, ground + 1)):
                raise DomainError(f"{sorted(key)} is not a nonempty subset of [{ground}]")
            if int(w) != w or w < 1:
                raise DomainError(f"weight of {sorted(key)} must be a positive integer, got {w}")
            if key in clean:
                raise DomainError(f"set {sorted(key)} listed twice")
            clean[key] = int(w)
        self.ground = ground
        self.weights = clean

    @property
    def sets(self) -> tuple:
        """Sets as sorted tuples, in lexicographic order."""
        return tuple(sorted(_key(s) for s in self.weights))

    def weight(self, s) -> int:
        return self.weights.get(frozenset(s), 0)

    def total_weight(self) -> int:
        return sum(self.weights.values())

    def items(self):
        return [(s, self.weights[frozenset(s)]) for s in self.sets]

    def __eq__(self, other):
        if not isinstance(other, WeightedBuildingSet):
            return NotImplemented
        return self.ground == other.ground and self.weights == other.weights

    def __hash__(self):
        return hash((self.ground, frozenset(self.weights.items())))

    def __repr__(self):
        body = ", ".join(f"{set(s)}:{w}" for s, w in self.items())
        return f"WeightedBuildingSet({self.ground}, {{{body}}})"

    def maximal_sets(self) -> tuple:
        keys = list(self.weights)
        return tuple(sorted(
            _key(s) for s in keys if not any(s < t for t in keys)
        ))

    def to_json(self) -> dict:
        return {
            "ground": self.ground,
            "sets": [list(s) for s in self.sets],
            "weights": [[list(s), w] for s, w in self.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "WeightedBuildingSet":
        return cls(data["ground"], [(s, w) for s, w in data["weights"]])


@dataclass(frozen=True)
class LatticePointSet:
    dim: int
    points: frozenset

    def __post_init__(self):
        pts = frozenset(tuple(int(x) for x in p) for p in self.points)
        if any(len(p) != self.dim for p in pts):
            raise DomainError(f"points must have {self.dim} coordinates")
        if len({sum(p) for p in pts}) > 1:
            raise DomainError("points do not share a coordinate sum")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.sorted())

    def __contains__(self, p):
        return tuple(p) in self.points

    def sorted(self) -> list:
        return sorted(self.points)

    def to_json(self) -> dict:
        return {"dim": self.dim, "points": [list(p) for p in self.sorted()]}

    @classmethod
    def from_json(cls, data: dict) -> "LatticePointSet":
        return cls(data["dim"], frozenset(tuple(p) for p in data["points"]))


@dataclass(frozen=True)
class NestedSet:
    members: frozenset  # of frozensets

    def sorted_members(self) -> list:
        return sorted(_key(s) for s in self.members)

    def __len__(self):
        return len(self.members)


# ---------------------------------------------------------------------------
# Building sets
# ---------------------------------------------------------------------------

def _is_interval(s) -> bool:
    return max(s) - min(s) + 1 == len(s)


def check_building_set(b: WeightedBuildingSet) -> str:
    """Classify ``b`` as a binary building set, a general one, or invalid."""
    sets = list(b.weights)
    if any(frozenset([i]) not in b.weights for i in range(1, b.ground + 1)):
        return INVALID
    binary = True
    for s, t in itertools.combinations(sets, 2):
        if s & t:
            if s | t not in b.weights:
                return INVALID
            if not (s <= t or t <= s) or not (_is_interval(s) and _is_interval(t)):
                binary = False
    return BINARY if binary else GENERAL


def _require(b, *kinds):
    kind = check_building_set(b)
    if kind not in kinds:
        raise DomainError(f"expected a {' or '.join(kinds)} building set, got {kind}")
    return kind


def product(b1: WeightedBuildingSet, b2: WeightedBuildingSet) -> WeightedBuildingSet:
    """Cartesian product of nestohedra: ``b2`` moves to the coordinates
    after those of ``b1``."""
    shift = b1.ground
    weights = dict(b1.weights)
    for s, w in b2.weights.items():
        weights[frozenset(x + shift for x in s)] = w
    return WeightedBuildingSet(b1.ground + b2.ground, weights)


def minkowski_add_full_simplex(b: WeightedBuildingSet, times: int = 1) -> WeightedBuildingSet:
    """Add ``times`` copies of the simplex on the whole ground set."""
    full = frozenset(range(1, b.ground + 1))
    weights = dict(b.weights)
    weights[full] = weights.get(full, 0) + times
    return WeightedBuildingSet(b.ground, weights)


# ---------------------------------------------------------------------------
# Lattice points and M-convexity
# ---------------------------------------------------------------------------

def _weak_compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            yield (first,) + rest


def lattice_points(b: WeightedBuildingSet, order: Optional[Sequence] = None) -> LatticePointSet:
    """Lattice points of Nest(y), as the set of sums picking one vertex of
    each simplex.  Each weighted simplex y_I * Delta_I is folded into a
    running deduplicated point set; ``order`` permutes the folding order."""
    items = list(b.items()) if order is None else [(s, b.weight(s)) for s in order]
    current = {(0,) * b.ground}
    for s, w in items:
        idx = [i - 1 for i in s]
        steps = []
        for comp in _weak_compositions(w, len(idx)):
            v = [0] * b.ground
            for i, c in zip(idx, comp):
                v[i] = c
            steps.append(v)
        current = {
            tuple(a + d for a, d in zip(p, v)) for p in current for v in steps
        }
    return LatticePointSet(b.ground, frozenset(current))


def is_m_convex(s: LatticePointSet) -> bool:
    """Murota's exchange axiom: for a, b in s and a_i > b_i there is j with
    a_j < b_j such that a - e_i + e_j lies in s."""
    if not s.points:
        raise DomainError("M-convexity is defined for nonempty sets")
    pts = s.points
    for a in pts:
        for b in pts:
            for i in range(s.dim):
                if a[i] <= b[i]:
                    continue
                ok = False
                for j in range(s.dim):
                    if a[j] < b[j]:
                        c = list(a)
                        c[i] -= 1
                        c[j] += 1
                        if tuple(c) in pts:
                            ok = True
                            break
                if not ok:
                    return False
    return True


# ---------------------------------------------------------------------------
# Nested sets and face numbers
# ---------------------------------------------------------------------------

def dimension(b: WeightedBuildingSet) -> int:
    _require(b, GENERAL, BINARY)
    return b.ground - len(b.maximal_sets())


def nested_sets(b: WeightedBuildingSet) -> tuple:
    """All nested sets of ``b`` by backtracking over the non-maximal sets.

    Both defining conditions are inherited by subcollections, so a partial
    collection that fails either of them is pruned immediately.
    """
    _require(b, GENERAL, BINARY)
    maximal = {frozenset(s) for s in b.maximal_sets()}
    candidates = sorted((s for s in b.weights if s not in maximal), key=_key)
    building = set(b.weights)
    found = []

    def compatible(chosen, new):
        for s in chosen:
            if s & new and not (s <= new or new <= s):
                return False
        disjoint = [s for s in chosen if not s & new]
        for r in range(1, len(disjoint) + 1):
            for group in itertools.combinations(disjoint, r):
                if any(x & y for x, y in itertools.combinations(group, 2)):
                    continue
                if frozenset().union(new, *group) in building:
                    return False
        return True

    def extend(start, chosen):
        found.append(NestedSet(frozenset(chosen)))
        for idx in range(start, len(candidates)):
            new = candidates[idx]
            if compatible(chosen, new):
                chosen.append(new)
                extend(idx + 1, chosen)
                chosen.pop()

    extend(0, [])
    return tuple(found)


def f_vector(b: WeightedBuildingSet) -> tuple:
    """(f_0, ..., f_d): f_i counts nested sets N with d - |N| = i."""
    d = dimension(b)
    f = [0] * (d + 1)
    for n in nested_sets(b):
        f[d - len(n)] += 1
    return tuple(f)


def h_vector(b: WeightedBuildingSet) -> tuple:
    """Coefficients of h(t) = f(t - 1), lowest degree first."""
    f = f_vector(b)
    h = [0] * len(f)
    for i, fi in enumerate(f):
        # f_i (t-1)^i
        for j in range(i + 1):
            h[j] += fi * comb(i, j) * (-1) ** (i - j)
    return tuple(h)


# ---------------------------------------------------------------------------
# Vertices by exact linear programming
# ---------------------------------------------------------------------------

def _feasible(columns: list, target: list) -> bool:
    """Decide whether target = sum lambda_j columns[j] with lambda >= 0.

    Phase one of the simplex method over the rationals with Bland's rule,
    which cannot cycle.
    """
    m = len(target)
    rows = []
    for r in range(m):
        sign = -1 if target[r] < 0 else 1
        row = [Fraction(sign * c[r]) for c in columns]
        row += [Fraction(1 if a == r else 0) for a in range(m)]
        row.append(Fraction(sign * target[r]))
        rows.append(row)
    nvar = len(columns) + m
    basis = [len(columns) + r for r in range(m)]
    # Objective: minimize the sum of the artificial variables.
    cost = [Fraction(0)] * len(columns) + [Fraction(1)] * m
    while True:
        reduced = []
        for j in range(nvar):
            z = sum(cost[basis[r]] * rows[r][j] for r in range(m))
            reduced.append(cost[j] - z)
        entering = next((j for j in range(nvar) if reduced[j] < 0), None)
        if entering is None:
            break
        best = None
        for r in range(m):
            a = rows[r][entering]
            if a > 0:
                ratio = rows[r][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[r] < basis[best[1]]):
                    best = (ratio, r)
        if best is None:  # unbounded, impossible for a bounded phase one
            break
        r = best[1]
        pivot = rows[r][entering]
        rows[r] = [x / pivot for x in rows[r]]
        for rr in range(m):
            if rr != r and rows[rr][entering] != 0:
                factor = rows[rr][entering]
                rows[rr] = [x - factor * y for x, y in zip(rows[rr], rows[r])]
        basis[r] = entering
    value = sum(cost[basis[r]] * rows[r][-1] for r in range(m))
    return value == 0


def _is_vertex(point, others) -> bool:
    if not others:
        return True
    columns = [list(q) + [1] for q in others]
    return not _feasible(columns, list(point) + [1])


def vertices(b: WeightedBuildingSet) -> LatticePointSet:
    """Lattice points of Nest(y) that are not convex combinations of the
    others."""
    pts = lattice_points(b).sorted()
    keep = [
        p for i, p in enumerate(pts)
        if _is_vertex(p, pts[:i] + pts[i + 1:])
    ]
    return LatticePointSet(b.ground, frozenset(keep))


# ---------------------------------------------------------------------------
# Fertilitopes
# ---------------------------------------------------------------------------

def _contract(shape, rng: Optional[random.Random] = None):
    """Run the edge contractions on an unlabeled tree and return the full
    tree as nested ``(label, left, right)`` triples."""
    left, right, parent, label = {}, {}, {}, {}
    counter = itertools.count()

    def build(node):
        v = next(counter)
        lt, rt = node
        label[v] = 1 if lt is None and rt is None else 0
        if lt is not None:
            left[v] = build(lt)
            parent[left[v]] = (v, left)
        if rt is not None:
            right[v] = build(rt)
            parent[right[v]] = (v, right)
        return v

    root = build(shape)

    def contractible(v):
        if v in left or v not in right:
            return False
        u = right[v]
        return (u in left) == (u in right)

    while True:
        ready = [v for v in label if contractible(v)]
        if not ready:
            break
        v = rng.choice(ready) if rng is not None else ready[0]
        u = right.pop(v)
        label[u] += 1
        del label[v]
        if v in parent:
            p, side = parent.pop(v)
            side[p] = u
            parent[u] = (p, side)
        else:
            del parent[u]
            root = u

    def nest(v):
        return (label[v], nest(left[v]) if v in left else None,
                nest(right[v]) if v in right else None)

    return nest(root)


def _full_tree_weights(tree) -> tuple:
    """Identify leaves with {1}, {2}, ... left to right and internal vertices
    with the union below them; return (ground, {set: label})."""
    weights = {}
    next_leaf = [1]

    def walk(node):
        lab, lt, rt = node
        if lt is None and rt is None:
            s = frozenset([next_leaf[0]])
            next_leaf[0] += 1
        else:
            if lt is None or rt is None:
                raise DomainError("contracted tree is not full")
            s = walk(lt) | walk(rt)
        if lab > 0:
            weights[s] = lab
        return s

    walk(tree)
    return next_leaf[0] - 1, weights


def fertilitope(p: Sequence[int], rng: Optional[random.Random] = None) -> WeightedBuildingSet:
    """The weighted binary building set (B, y) with Nest(y) = Fer_p.

    ``rng`` picks the contraction order at random; the result does not
    depend on it.
    """
    perm = as_permutation(p)
    h = canonical_hook_configuration(perm)
    if h is None or not perm:
        raise DomainError(f"{perm} is not a sorted permutation")
    shape = skeleton(theta(h))
    ground, weights = _full_tree_weights(_contract(shape, rng))
    return WeightedBuildingSet(ground, weights)


def fertilitope_lattice_points(p: Sequence[int]) -> LatticePointSet:
    perm = as_permutation(p)
    if not perm or canonical_hook_configuration(perm) is None:
        return LatticePointSet(len(descents(perm)) + 1, frozenset())
    return lattice_points(fertilitope(perm))


def fertilitope_dimension(p: Sequence[int]):
    """Dimension of Fer_p, or :data:`EMPTY` when p is not sorted."""
    perm = as_permutation(p)
    if not perm or canonical_hook_configuration(perm) is None:
        return EMPTY
    return dimension(fertilitope(perm))


def extremal_vhcs(p: Sequence[int]) -> tuple:
    """Valid hook configurations whose induced composition is a vertex of
    the fertilitope."""
    perm = as_permutation(p)
    if not perm or canonical_hook_configuration(perm) is None:
        return ()
    verts = vertices(fertilitope(perm))
    return tuple(h for h in enumerate_vhcs(perm) if induced_composition(h) in verts)


def count_compositions_oplus(p: Sequence[int], m_max: int) -> tuple:
    """(|V(p + id_m)|) for m = 0..m_max, where + appends an increasing run.

    Counted as lattice points of Fer_p + m * Delta_[k+1].
    """
    perm = as_permutation(p)
    if not perm or canonical_hook_configuration(perm) is None:
        raise DomainError(f"{perm} is not a sorted permutation")
    if m_max < 0:
        raise DomainError("m_max must be nonnegative")
    base = fertilitope(perm)
    return tuple(
        len(lattice_points(minkowski_add_full_simplex(base, m) if m else base))
        for m in range(m_max + 1)
    )


def finite_difference(seq: Sequence[int], order: int) -> list:
    seq = list(seq)
    for _ in range(order):
        seq = [b - a for a, b in zip(seq, seq[1:])]
    return seq


# ---------------------------------------------------------------------------
# Realizing an integral binary nestohedron by a permutation
# ---------------------------------------------------------------------------

def realize_permutation(b: WeightedBuildingSet) -> Permutation:
    """A permutation whose fertilitope is Nest(y), built by induction on the
    total weight: peel one copy of the full simplex if it is present,
    otherwise split off the first maximal interval as a product factor."""
    _require(b, BINARY)
    return _realize(b)


def _realize(b):
    if b.ground == 1 and b.total_weight() == 1:
        return (1,)
    full = frozenset(range(1, b.ground + 1))
    if full in b.weights:
        weights = dict(b.weights)
        weights[full] -= 1
        if not weights[full]:
            del weights[full]
        tau = _realize(WeightedBuildingSet(b.ground, weights))
        return oplus_id(tau, 1)
    first = frozenset(b.maximal_sets()[0])
    a = len(first)
    left = {s: w for s, w in b.weights.items() if s <= first}
    right = {
        frozenset(x - a for x in s): w
        for s, w in b.weights.items() if not s <= first
    }
    tau = _realize(WeightedBuildingSet(a, left))
    tau2 = _realize(WeightedBuildingSet(b.ground - a, right))
    n, n2 = len(tau), len(tau2)
    return tuple(x + n2 for x in tau) + tau2 + (n + n2 + 1,)


def binary_building_sets(ground: int) -> Iterable[tuple]:
    """Every binary building set on [ground] as a tuple of frozensets.

    A binary building set is a laminar family of intervals containing all
    singletons; the non-singleton members are chosen from the intervals of
    length at least two.
    """
    singles = [frozenset([i]) for i in range(1, ground + 1)]
    intervals = [
        frozenset(range(i, j + 1))
        for i in range(1, ground + 1) for j in range(i + 1, ground + 1)
    ]

    def extend(idx, chosen):
        if idx == len(intervals):
            yield tuple(singles + chosen)
            return
        yield from extend(idx + 1, chosen)
        new = intervals[idx]
        if all(not (s & new) or s <= new or new <= s for s in chosen):
            chosen.append(new)
            yield from extend(idx + 1, chosen)
            chosen.pop()

    yield from extend(0, [])


def weighted_binary_building_sets(total: int) -> Iterable[WeightedBuildingSet]:
    """Every weighted binary building set with the given total weight."""
    for ground in range(1, total + 1):
        for family in binary_building_sets(ground):
            spare = total - len(family)
            if spare < 0:
                continue
            for comp in _weak_compositions(spare, len(family)):
                yield WeightedBuildingSet(
                    ground, {s: 1 + c for s, c in zip(family, comp)}
                )
