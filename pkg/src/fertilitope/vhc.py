"""Valid hook configurations, their induced compositions, the canonical
configuration, the H-splitting map and the bijection Theta onto
quasicanonical trees.

A hook is stored by the 1-based positions of its endpoints.  Drawn in the
plot of the permutation it is a rotated L: a vertical segment above the
southwest endpoint ``(sw, p[sw])`` rising to the height of the northeast
endpoint, then a horizontal segment running right to ``(ne, p[ne])``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import config
from .errors import DomainError
from .perm_core import (
    DecreasingBinaryTree,
    Permutation,
    as_permutation,
    decreasing_trees,
    descents,
    in_order,
    peaks,
    postorder,
)

Composition = tuple  # tuple[int, ...]


@dataclass(frozen=True, order=True)
class Hook:
    sw: int
    ne: int

    def heights(self, perm: Sequence[int]) -> tuple:
        return perm[self.sw - 1], perm[self.ne - 1]


@dataclass(frozen=True)
class ValidHookConfiguration:
    """A permutation together with one hook per descent, left to right.

    The permutation is part of the identity of the configuration.
    Construction checks the defining conditions geometrically.
    """

    perm: Permutation
    hooks: tuple

    def __post_init__(self):
        object.__setattr__(self, "perm", as_permutation(self.perm))
        object.__setattr__(self, "hooks", tuple(self.hooks))
        problems = definition_violations(self.perm, self.hooks)
        if problems:
            raise DomainError("; ".join(problems))

    @property
    def composition(self) -> Composition:
        return induced_composition(self)

    def hook_heights(self) -> tuple:
        return tuple(h.heights(self.perm) for h in self.hooks)


# ---------------------------------------------------------------------------
# Geometry of the defining conditions
# ---------------------------------------------------------------------------

def _segments(perm, hook):
    i, j = hook.sw, hook.ne
    lo, hi = perm[i - 1], perm[j - 1]
    return (("v", i, lo, hi), ("h", hi, i, j))


def _segment_intersection(a, b):
    """Intersection of two axis-parallel closed segments as a set of points,
    or the string ``"overlap"`` when it is a segment of positive length."""
    if a[0] == b[0]:
        _, c1, lo1, hi1 = a
        _, c2, lo2, hi2 = b
        if c1 != c2:
            return set()
        lo, hi = max(lo1, lo2), min(hi1, hi2)
        if lo > hi:
            return set()
        if lo < hi:
            return "overlap"
        return {(c1, lo) if a[0] == "v" else (lo, c1)}
    v, h = (a, b) if a[0] == "v" else (b, a)
    _, x, ylo, yhi = v
    _, y, xlo, xhi = h
    if xlo <= x <= xhi and ylo <= y <= yhi:
        return {(x, y)}
    return set()


def definition_violations(perm: Sequence[int], hooks: Sequence[Hook]) -> list:
    """Check the three defining conditions directly on the plot.

    Returns a list of human-readable problems, empty when the hooks form
    a valid hook configuration of ``perm``.
    """
    n = len(perm)
    problems = []
    desc = sorted(descents(perm))
    if [h.sw for h in hooks] != desc:
        problems.append(f"southwest endpoints {[h.sw for h in hooks]} are not the descents {desc}")
    for h in hooks:
        if not (1 <= h.sw < h.ne <= n) or perm[h.sw - 1] > perm[h.ne - 1]:
            problems.append(f"{h} is not a hook")
    if problems:
        return problems
    for h in hooks:
        top = perm[h.ne - 1]
        for t in range(h.sw + 1, h.ne):
            if perm[t - 1] > top:
                problems.append(f"point {t} lies above {h}")
    for a_idx in range(len(hooks)):
        for b_idx in range(a_idx + 1, len(hooks)):
            a, b = hooks[a_idx], hooks[b_idx]
            allowed = set()
            if a.ne == b.sw:
                allowed.add((a.ne, perm[a.ne - 1]))
            if b.ne == a.sw:
                allowed.add((b.ne, perm[b.ne - 1]))
            shared = set()
            for sa in _segments(perm, a):
                for sb in _segments(perm, b):
                    got = _segment_intersection(sa, sb)
                    if got == "overlap":
                        shared = None
                        break
                    shared |= got
                if shared is None:
                    break
            if shared is None or not shared <= allowed:
                problems.append(f"{a} and {b} intersect")
    return problems


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------

def _admissible_ne(perm, d, placed):
    """Northeast endpoints available to the hook at descent ``d`` given the
    hooks already placed at descents to its right."""
    n = len(perm)
    base = perm[d - 1]
    running = base
    for j in range(d + 1, n + 1):
        height = perm[j - 1]
        if height > running:
            if height > base and all(
                h.ne != j and not (d < h.sw < j and h.ne > j) for h in placed
            ):
                yield j
            running = height


def enumerate_vhcs(p: Sequence[int]) -> tuple:
    """All valid hook configurations of ``p``.

    Hooks are placed from the rightmost descent leftward, so each new hook
    only has to be checked against hooks that are already in place.  The
    result is sorted by the tuple of northeast endpoints.
    """
    perm = as_permutation(p)
    desc = sorted(descents(perm))
    results = []

    def place(idx, placed):
        if idx < 0:
            hooks = tuple(sorted(placed))
            results.append(ValidHookConfiguration(perm, hooks))
            return
        d = desc[idx]
        for j in _admissible_ne(perm, d, placed):
            placed.append(Hook(d, j))
            place(idx - 1, placed)
            placed.pop()

    place(len(desc) - 1, [])
    results.sort(key=lambda h: tuple(x.ne for x in h.hooks))
    return tuple(results)


def induced_composition(h: ValidHookConfiguration) -> Composition:
    """Color every point that is not a northeast endpoint by the lowest hook
    passing strictly over it (the sky if none) and count each color."""
    perm, hooks = h.perm, h.hooks
    ne_points = {x.ne for x in hooks}
    counts = [0] * (len(hooks) + 1)
    for t in range(1, len(perm) + 1):
        if t in ne_points:
            continue
        color, lowest = 0, None
        for idx, x in enumerate(hooks, start=1):
            if x.sw < t < x.ne:
                height = perm[x.ne - 1]
                if lowest is None or height < lowest:
                    color, lowest = idx, height
        counts[color] += 1
    return tuple(counts)


def valid_compositions(p: Sequence[int]) -> tuple:
    """The set V(p), sorted lexicographically."""
    return tuple(sorted(induced_composition(h) for h in enumerate_vhcs(p)))


def count_vhcs(p: Sequence[int]) -> int:
    return len(enumerate_vhcs(p))


def canonical_hook_configuration(p: Sequence[int]) -> Optional[ValidHookConfiguration]:
    """Hooks built right to left, each ending at the lowest point above and
    to the right of its descent top that is not weakly below a hook already
    built.  ``None`` when some hook cannot be placed, i.e. p is not sorted.
    """
    perm = as_permutation(p)
    n = len(perm)
    built = []
    for d in sorted(descents(perm), reverse=True):
        base = perm[d - 1]
        best = None
        for t in range(d + 1, n + 1):
            height = perm[t - 1]
            if height <= base:
                continue
            if any(
                t == h.ne or (h.sw < t < h.ne and height < perm[h.ne - 1])
                for h in built
            ):
                continue
            if best is None or height < perm[best - 1]:
                best = t
        if best is None:
            return None
        built.append(Hook(d, best))
    return ValidHookConfiguration(perm, tuple(sorted(built)))


def is_sorted_permutation(p: Sequence[int]) -> bool:
    """True when p lies in the image of the stack-sorting map."""
    return canonical_hook_configuration(p) is not None


# ---------------------------------------------------------------------------
# H-splitting
# ---------------------------------------------------------------------------

def split(h: ValidHookConfiguration, hook_index: int):
    """The H-splitting map for the ``hook_index``-th hook (1-based).

    Returns the configurations induced on the unsheltered subpermutation
    p_1..p_i p_{j+1}..p_n and on the sheltered one p_{i+1}..p_{j-1}.  The
    designated hook must end to the right of the last descent.
    """
    if not 1 <= hook_index <= len(h.hooks):
        raise DomainError(f"hook index {hook_index} out of range 1..{len(h.hooks)}")
    hook = h.hooks[hook_index - 1]
    i, j = hook.sw, hook.ne
    if j <= h.hooks[-1].sw:
        raise DomainError(f"{hook} does not end right of the last descent {h.hooks[-1].sw}")
    perm = h.perm
    u_perm = perm[:i] + perm[j:]
    s_perm = perm[i:j - 1]

    def u_pos(t):
        return t if t <= i else t - (j - i)

    u_hooks = []
    s_hooks = []
    for x in h.hooks:
        if x == hook:
            continue
        if i < x.sw < j:
            s_hooks.append(Hook(x.sw - i, x.ne - i))
        else:
            u_hooks.append(Hook(u_pos(x.sw), u_pos(x.ne)))
    return (
        ValidHookConfiguration(u_perm, tuple(u_hooks)),
        ValidHookConfiguration(s_perm, tuple(s_hooks)),
    )


def unsplit(perm: Sequence[int], hook: Hook, h_u: ValidHookConfiguration,
            h_s: ValidHookConfiguration) -> ValidHookConfiguration:
    """Reassemble a configuration of ``perm`` from its two split halves."""
    perm = as_permutation(perm)
    i, j = hook.sw, hook.ne
    if h_u.perm != perm[:i] + perm[j:] or h_s.perm != perm[i:j - 1]:
        raise DomainError("halves do not match the hook's subpermutations")
    hooks = [hook]
    for x in h_u.hooks:
        hooks.append(Hook(*(t if t <= i else t + (j - i) for t in (x.sw, x.ne))))
    for x in h_s.hooks:
        hooks.append(Hook(x.sw + i, x.ne + i))
    return ValidHookConfiguration(perm, tuple(sorted(hooks)))


# ---------------------------------------------------------------------------
# Quasicanonical trees
# ---------------------------------------------------------------------------

def theta(h: ValidHookConfiguration) -> DecreasingBinaryTree:
    """Send each hook to a left edge; every non-descent i makes p_i the
    right child of p_{i+1}."""
    perm = h.perm
    if not perm:
        return DecreasingBinaryTree(None)
    ne_of = {x.sw: x.ne for x in h.hooks}
    left, right = {}, {}
    for i in range(1, len(perm)):
        if i in ne_of:
            left[perm[ne_of[i] - 1]] = perm[i - 1]
        else:
            right[perm[i]] = perm[i - 1]
    return DecreasingBinaryTree(perm[-1], left, right)


def is_quasicanonical(t: DecreasingBinaryTree) -> bool:
    for v, child in t.left.items():
        r = t.right.get(v)
        if r is None or t.first_postorder(r) >= child:
            return False
    return True


def is_canonical(t: DecreasingBinaryTree) -> bool:
    for v, child in t.left.items():
        r = t.right.get(v)
        if r is None or t.first_in_order(r) >= child:
            return False
    return True


def theta_inverse(t: DecreasingBinaryTree) -> ValidHookConfiguration:
    """Read the hooks back off the left edges of a quasicanonical tree."""
    if not is_quasicanonical(t):
        raise DomainError("tree is not quasicanonical")
    perm = postorder(t)
    pos = {x: i for i, x in enumerate(perm, start=1)}
    hooks = sorted(Hook(pos[child], pos[parent]) for parent, child in t.left.items())
    return ValidHookConfiguration(perm, tuple(hooks))


def composition_of_tree(t: DecreasingBinaryTree) -> Composition:
    """Gaps between consecutive peaks of the in-order reading.

    The empty tree gets ``(0,)``, the composition the sky alone produces.
    """
    word = in_order(t)
    marks = [0] + sorted(peaks(word)) + [len(word) + 1]
    return tuple(b - a - 1 for a, b in zip(marks, marks[1:]))


def enumerate_quasicanonical(n: int, max_n: Optional[int] = None) -> tuple:
    """All quasicanonical trees on [n], by filtering every decreasing tree."""
    config.check_bound("quasicanonical", n, max_n)
    return tuple(t for t in decreasing_trees(range(1, n + 1)) if is_quasicanonical(t))
