"""Permutations, decreasing binary plane trees, traversals and West's
stack-sorting map, plus the exhaustive oracles the rest of the package is
checked against.

Permutations are plain tuples of distinct positive integers in one-line
notation.  Positions are 1-based wherever they are exposed (descents,
peaks, hook endpoints) to match the usual combinatorial conventions.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from . import config
from .errors import DomainError

Permutation = tuple  # tuple[int, ...]

_SPLIT = re.compile(r"[\s,]+")


# ---------------------------------------------------------------------------
# Permutations
# ---------------------------------------------------------------------------

def as_permutation(entries: Iterable[int]) -> Permutation:
    """Validate ``entries`` and return them as a tuple."""
    p = tuple(int(x) for x in entries)
    if any(x < 1 for x in p):
        raise DomainError(f"permutation entries must be positive: {p}")
    if len(set(p)) != len(p):
        raise DomainError(f"permutation entries must be distinct: {p}")
    return p


def parse_permutation(text: str) -> Permutation:
    """Parse one-line notation.

    Tokens may be separated by whitespace or commas.  A single bare digit
    string such as ``"4273615"`` is read digit by digit, which is only
    unambiguous when every digit is nonzero and distinct; anything else is
    rejected.

    >>> parse_permutation("4 2 7 3 6 1 5")
    (4, 2, 7, 3, 6, 1, 5)
    >>> parse_permutation("3,8,1,6")
    (3, 8, 1, 6)
    >>> parse_permutation("246153")
    (2, 4, 6, 1, 5, 3)
    """
    text = text.strip()
    if not text:
        return ()
    tokens = [t for t in _SPLIT.split(text) if t]
    if len(tokens) == 1 and len(tokens[0]) > 1:
        digits = tokens[0]
        if not digits.isdigit() or "0" in digits or len(set(digits)) != len(digits):
            raise DomainError(f"ambiguous bare digit string {digits!r}; separate entries with spaces")
        return tuple(int(c) for c in digits)
    try:
        return as_permutation(int(t) for t in tokens)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot parse permutation {text!r}") from exc


def format_permutation(p: Sequence[int]) -> str:
    return " ".join(str(x) for x in p)


def is_standard(p: Sequence[int]) -> bool:
    """True when ``p`` is a permutation of ``1..len(p)``."""
    return sorted(p) == list(range(1, len(p) + 1))


def standardize(p: Sequence[int]) -> Permutation:
    """Replace the i-th smallest entry by i.

    >>> standardize((3, 8, 1, 6))
    (2, 4, 1, 3)
    """
    rank = {x: i for i, x in enumerate(sorted(p), start=1)}
    return tuple(rank[x] for x in p)


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def stack_sort(p: Sequence[int]) -> Permutation:
    """West's stack-sorting map s, run as a single pass through a stack.

    Entries are pushed in order; before each push, every smaller entry on
    top of the stack is popped to the output.

    >>> stack_sort((4, 2, 7, 3, 6, 1, 5))
    (2, 4, 3, 1, 5, 6, 7)
    """
    out = []
    stack = []
    for x in p:
        while stack and stack[-1] < x:
            out.append(stack.pop())
        stack.append(x)
    out.extend(reversed(stack))
    return tuple(out)


def descents(p: Sequence[int]) -> frozenset:
    """1-based indices i with p_i > p_{i+1}."""
    return frozenset(i for i in range(1, len(p)) if p[i - 1] > p[i])


def peaks(p: Sequence[int]) -> frozenset:
    """1-based indices i in 2..n-1 with p_{i-1} < p_i > p_{i+1}."""
    return frozenset(
        i for i in range(2, len(p)) if p[i - 2] < p[i - 1] > p[i]
    )


def inversions(p: Sequence[int]) -> int:
    return sum(1 for a, b in itertools.combinations(p, 2) if a > b)


def tail_length(p: Sequence[int]) -> int:
    """Largest l such that the last l entries of ``p`` are fixed points."""
    if not is_standard(p):
        raise DomainError(f"tail length needs a permutation of [n]: {tuple(p)}")
    n = len(p)
    ell = 0
    while ell < n and p[n - 1 - ell] == n - ell:
        ell += 1
    return ell


def oplus_id(p: Sequence[int], m: int) -> Permutation:
    """Append the increasing run n+1, ..., n+m to ``p`` in S_n."""
    if m < 0:
        raise DomainError("m must be nonnegative")
    if not is_standard(p):
        raise DomainError(f"oplus_id needs a permutation of [n]: {tuple(p)}")
    n = len(p)
    return tuple(p) + tuple(range(n + 1, n + m + 1))


def is_sorted_image(p: Sequence[int]) -> bool:
    """Necessary condition for p to be in the image of s: it ends in its max."""
    return not p or p[-1] == max(p)


# ---------------------------------------------------------------------------
# Decreasing binary plane trees
# ---------------------------------------------------------------------------

class DecreasingBinaryTree:
    """A binary plane tree bijectively labeled so labels decrease downward.

    Labels are distinct, so they double as node identifiers: the tree is
    stored as a root label plus two maps sending a label to the label of
    its left (resp. right) child.  Two trees are equal when they have the
    same root and the same child maps.
    """

    __slots__ = ("root", "left", "right", "_key")

    def __init__(self, root: Optional[int], left=None, right=None):
        self.root = root
        self.left = dict(left or {})
        self.right = dict(right or {})
        self._key = (
            root,
            frozenset(self.left.items()),
            frozenset(self.right.items()),
        )
        self._validate()

    def _validate(self):
        if self.root is None:
            if self.left or self.right:
                raise DomainError("empty tree cannot have edges")
            return
        seen = {self.root}
        stack = [self.root]
        while stack:
            v = stack.pop()
            for child in (self.left.get(v), self.right.get(v)):
                if child is None:
                    continue
                if child >= v:
                    raise DomainError(f"label {child} is not smaller than its parent {v}")
                if child in seen:
                    raise DomainError(f"label {child} appears twice")
                seen.add(child)
                stack.append(child)
        edges = len(self.left) + len(self.right)
        if edges != len(seen) - 1:
            raise DomainError("child maps mention labels not reachable from the root")

    @classmethod
    def from_nested(cls, node) -> "DecreasingBinaryTree":
        """Build from ``(label, left, right)`` triples, ``None`` for empty."""
        if node is None:
            return cls(None)
        left, right = {}, {}
        stack = [node]
        while stack:
            label, lt, rt = stack.pop()
            if lt is not None:
                left[label] = lt[0]
                stack.append(lt)
            if rt is not None:
                right[label] = rt[0]
                stack.append(rt)
        return cls(node[0], left, right)

    def to_nested(self):
        def build(v):
            if v is None:
                return None
            return (v, build(self.left.get(v)), build(self.right.get(v)))
        return build(self.root)

    def __eq__(self, other):
        if not isinstance(other, DecreasingBinaryTree):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"DecreasingBinaryTree({self.to_nested()!r})"

    def __len__(self):
        return 0 if self.root is None else len(self.left) + len(self.right) + 1

    @property
    def labels(self) -> frozenset:
        return frozenset(in_order(self))

    def parent_map(self) -> dict:
        parent = {c: p for p, c in self.left.items()}
        parent.update({c: p for p, c in self.right.items()})
        return parent

    def first_in_order(self, v: int) -> int:
        """First entry of the in-order traversal of the subtree at ``v``."""
        while v in self.left:
            v = self.left[v]
        return v

    def first_postorder(self, v: int) -> int:
        """First entry of the postorder traversal of the subtree at ``v``."""
        while True:
            if v in self.left:
                v = self.left[v]
            elif v in self.right:
                v = self.right[v]
            else:
                return v


def in_order(t: DecreasingBinaryTree) -> Permutation:
    out = []
    stack = []
    v = t.root
    while stack or v is not None:
        while v is not None:
            stack.append(v)
            v = t.left.get(v)
        v = stack.pop()
        out.append(v)
        v = t.right.get(v)
    return tuple(out)


def postorder(t: DecreasingBinaryTree) -> Permutation:
    if t.root is None:
        return ()
    # Reversed root-right-left preorder.
    out = []
    stack = [t.root]
    while stack:
        v = stack.pop()
        out.append(v)
        if v in t.left:
            stack.append(t.left[v])
        if v in t.right:
            stack.append(t.right[v])
    return tuple(reversed(out))


def in_order_inverse(p: Sequence[int]) -> DecreasingBinaryTree:
    """The unique decreasing binary plane tree whose in-order reading is p."""
    p = as_permutation(p)
    left, right = {}, {}
    stack = []
    for x in p:
        last = None
        while stack and stack[-1] < x:
            last = stack.pop()
        if last is not None:
            left[x] = last
        if stack:
            right[stack[-1]] = x
        stack.append(x)
    return DecreasingBinaryTree(stack[0] if stack else None, left, right)


def decreasing_trees(labels: Iterable[int]) -> Iterator[DecreasingBinaryTree]:
    """Every decreasing binary plane tree on the given label set.

    The root carries the maximum label; the remaining labels are split
    between the left and right subtrees in every possible way.
    """
    for nested in _decreasing_nested(tuple(sorted(labels))):
        yield DecreasingBinaryTree.from_nested(nested)


def _decreasing_nested(labels):
    if not labels:
        yield None
        return
    root, rest = labels[-1], labels[:-1]
    for mask in range(1 << len(rest)):
        lset = tuple(x for i, x in enumerate(rest) if mask >> i & 1)
        rset = tuple(x for i, x in enumerate(rest) if not mask >> i & 1)
        rights = list(_decreasing_nested(rset))
        for lt in _decreasing_nested(lset):
            for rt in rights:
                yield (root, lt, rt)


def tree_statistic(t, stat: str) -> int:
    """``des`` counts right edges, ``peak`` counts vertices with two children.

    ``t`` may be a :class:`DecreasingBinaryTree` or an unlabeled shape as
    returned by :func:`binary_plane_trees`.
    """
    if isinstance(t, DecreasingBinaryTree):
        if stat == "des":
            return len(t.right)
        if stat == "peak":
            return sum(1 for v in t.left if v in t.right)
    else:
        if stat == "des":
            return _shape_des(t)
        if stat == "peak":
            return _shape_peak(t)
    raise DomainError(f"unknown tree statistic {stat!r}")


# ---------------------------------------------------------------------------
# Unlabeled binary plane trees: None is empty, (left, right) is a vertex.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def binary_plane_trees(m: int) -> tuple:
    """All binary plane tree shapes with ``m`` vertices (C_m of them)."""
    if m == 0:
        return (None,)
    out = []
    for a in range(m):
        for lt in binary_plane_trees(a):
            for rt in binary_plane_trees(m - 1 - a):
                out.append((lt, rt))
    return tuple(out)


def _shape_des(shape) -> int:
    if shape is None:
        return 0
    lt, rt = shape
    return _shape_des(lt) + _shape_des(rt) + (rt is not None)


def _shape_peak(shape) -> int:
    if shape is None:
        return 0
    lt, rt = shape
    return _shape_peak(lt) + _shape_peak(rt) + (lt is not None and rt is not None)


def skeleton(t: DecreasingBinaryTree):
    """Forget the labels of ``t``."""
    if t.root is None:
        return None
    shapes = {}
    for v in sorted(t.labels):
        lt = t.left.get(v)
        rt = t.right.get(v)
        shapes[v] = (
            None if lt is None else shapes.pop(lt),
            None if rt is None else shapes.pop(rt),
        )
    return shapes[t.root]


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------

def preimages_bruteforce(p: Sequence[int], max_n: Optional[int] = None) -> frozenset:
    """All sigma with the same entries as ``p`` and s(sigma) = p, by exhaustion."""
    p = as_permutation(p)
    config.check_bound("preimages", len(p), max_n)
    return frozenset(
        sigma for sigma in itertools.permutations(sorted(p)) if stack_sort(sigma) == p
    )


@lru_cache(maxsize=4)
def preimage_table(n: int) -> dict:
    """Map each image s(sigma), sigma in S_n, to a Counter of des(sigma)+1.

    One pass over S_n answers fertility and descent-polynomial queries for
    every permutation of size n at once.
    """
    config.check_bound("preimages", n)
    table = {}
    for sigma in itertools.permutations(range(1, n + 1)):
        image = stack_sort(sigma)
        d = 1
        for i in range(n - 1):
            if sigma[i] > sigma[i + 1]:
                d += 1
        counter = table.get(image)
        if counter is None:
            counter = table[image] = Counter()
        counter[d] += 1
    return table


def fertility_bruteforce(p: Sequence[int]) -> int:
    """|s^{-1}(p)| read off the exhaustive image table of S_n."""
    q = standardize(as_permutation(p))
    counter = preimage_table(len(q)).get(q)
    return 0 if counter is None else sum(counter.values())


def postorder_fiber(p: Sequence[int], max_n: Optional[int] = None) -> frozenset:
    """All decreasing binary plane trees whose postorder reading is ``p``.

    Uses P(T) = P(T_L) P(T_R) max: the last entry must be the maximum, and
    every cut of the remaining word into a left part and a right part is
    tried recursively.
    """
    p = as_permutation(p)
    config.check_bound("postorder_fiber", len(p), max_n)
    return frozenset(
        DecreasingBinaryTree.from_nested(nested) for nested in _fiber_nested(p)
    )


def _fiber_nested(word):
    if not word:
        yield None
        return
    m = word[-1]
    if m != max(word):
        return
    rest = word[:-1]
    for cut in range(len(rest) + 1):
        rights = list(_fiber_nested(rest[cut:]))
        if not rights:
            continue
        for lt in _fiber_nested(rest[:cut]):
            for rt in rights:
                yield (m, lt, rt)


def all_permutations(n: int) -> Iterator[Permutation]:
    return itertools.permutations(range(1, n + 1))
