"""Set partitions, moment/cumulant conversions and the two combinatorial
formulas expressing classical cumulants through free cumulants.

Computations are symbolic: free cumulants are indeterminates kappa_1,
kappa_2, ... and results are :class:`SymbolicPolynomial` values with
rational coefficients.  The moment conversions are generic, so they also
accept plain integers or fractions.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import config
from .errors import DomainError
from .perm_core import all_permutations
from .vhc import composition_of_tree, enumerate_quasicanonical, valid_compositions


# ---------------------------------------------------------------------------
# Symbolic polynomials
# ---------------------------------------------------------------------------

class SymbolicPolynomial:
    """Polynomial in kappa_1, kappa_2, ... with rational coefficients.

    A monomial is a sorted tuple of ``(index, exponent)`` pairs; zero
    coefficients are never stored.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff:
                key = tuple(sorted((int(i), int(e)) for i, e in mono if e))
                clean[key] = clean.get(key, Fraction(0)) + coeff
                if not clean[key]:
                    del clean[key]
        self.terms = clean

    @classmethod
    def constant(cls, c) -> "SymbolicPolynomial":
        return cls({(): c})

    @classmethod
    def kappa(cls, i: int) -> "SymbolicPolynomial":
        if i < 1:
            raise DomainError("indeterminates are indexed from 1")
        return cls({((i, 1),): 1})

    @staticmethod
    def _lift(x) -> "SymbolicPolynomial":
        if isinstance(x, SymbolicPolynomial):
            return x
        return SymbolicPolynomial.constant(x)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return SymbolicPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicPolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out = Counter()
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                exps = Counter(dict(m1))
                exps.update(dict(m2))
                out[tuple(sorted(exps.items()))] += c1 * c2
        return SymbolicPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SymbolicPolynomial.constant(other)
        if not isinstance(other, SymbolicPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def variables(self) -> frozenset:
        return frozenset(i for mono in self.terms for i, _ in mono)

    def substitute(self, values: dict) -> "SymbolicPolynomial":
        """Replace kappa_i by ``values[i]`` for the indices given."""
        out = SymbolicPolynomial()
        for mono, c in self.terms.items():
            term = SymbolicPolynomial.constant(c)
            for i, e in mono:
                factor = values[i] if i in values else SymbolicPolynomial.kappa(i)
                for _ in range(e):
                    term = term * factor
            out = out + term
        return out

    def evaluate(self, values: dict) -> Fraction:
        result = self.substitute(values)
        if result.variables():
            raise DomainError(f"unassigned indeterminates {sorted(result.variables())}")
        return result.terms.get((), Fraction(0))

    def __repr__(self):
        return f"SymbolicPolynomial({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: [(-i, -e) for i, e in reversed(m)]):
            c = self.terms[mono]
            body = "*".join(f"k{i}" + (f"^{e}" if e > 1 else "") for i, e in mono)
            mag = abs(c)
            if body:
                text = body if mag == 1 else f"{mag}*{body}"
            else:
                text = str(mag)
            parts.append(("-" if c < 0 else "+", text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def to_json(self) -> list:
        return [
            [[list(pair) for pair in mono], str(c.numerator), str(c.denominator)]
            for mono, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, data) -> "SymbolicPolynomial":
        return cls({
            tuple(tuple(pair) for pair in mono): Fraction(int(num), int(den))
            for mono, num, den in data
        })


def kappa_sequence(n: int) -> list:
    """[kappa_1, ..., kappa_n] as symbolic indeterminates."""
    return [SymbolicPolynomial.kappa(i) for i in range(1, n + 1)]


# ---------------------------------------------------------------------------
# Set partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SetPartition:
    blocks: tuple  # sorted tuple of sorted tuples

    @classmethod
    def from_blocks(cls, blocks) -> "SetPartition":
        return cls(tuple(sorted(tuple(sorted(b)) for b in blocks)))

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_type(self) -> tuple:
        return tuple(sorted(len(b) for b in self.blocks))

    def reflect(self) -> "SetPartition":
        n = self.size
        return SetPartition.from_blocks([[n + 1 - i for i in b] for b in self.blocks])

    def is_noncrossing(self) -> bool:
        for b1, b2 in itertools.permutations(self.blocks, 2):
            for i, j in itertools.combinations(b1, 2):
                for i2, j2 in itertools.combinations(b2, 2):
                    if i < i2 < j < j2:
                        return False
        return True


def _restricted_growth(n):
    if n == 0:
        yield ()
        return
    word = [0] * n

    def grow(pos, top):
        if pos == n:
            yield tuple(word)
            return
        for v in range(top + 2):
            word[pos] = v
            yield from grow(pos + 1, max(top, v))

    yield from grow(1, 0)


def enumerate_partitions(n: int, max_n: Optional[int] = None) -> tuple:
    """All set partitions of [n], one per restricted growth string."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    config.check_bound("partitions", n, max_n)
    out = []
    for word in _restricted_growth(n):
        blocks = {}
        for pos, label in enumerate(word, start=1):
            blocks.setdefault(label, []).append(pos)
        out.append(SetPartition.from_blocks(blocks.values()))
    return tuple(out)


def enumerate_noncrossing(n: int, max_n: Optional[int] = None) -> tuple:
    return tuple(p for p in enumerate_partitions(n, max_n) if p.is_noncrossing())


@lru_cache(maxsize=None)
def _type_counts(n: int, noncrossing: bool) -> tuple:
    parts = enumerate_noncrossing(n) if noncrossing else enumerate_partitions(n)
    return tuple(sorted(Counter(p.block_type() for p in parts).items()))


# ---------------------------------------------------------------------------
# Moments and cumulants
# ---------------------------------------------------------------------------

def _product(values):
    acc = 1
    for v in values:
        acc = v * acc
    return acc


def _moments(cumulants: Sequence, noncrossing: bool) -> list:
    out = []
    for n in range(1, len(cumulants) + 1):
        total = 0
        for block_type, count in _type_counts(n, noncrossing):
            total = total + count * _product(cumulants[s - 1] for s in block_type)
        out.append(total)
    return out


def moments_from_classical(c: Sequence) -> list:
    """m_n = sum over all partitions of [n] of prod_B c_|B|, for n up to len(c)."""
    return _moments(c, noncrossing=False)


def moments_from_free(kappa: Sequence) -> list:
    """m_n = sum over noncrossing partitions of [n] of prod_B kappa_|B|."""
    return _moments(kappa, noncrossing=True)


def _invert(m: Sequence, noncrossing: bool) -> list:
    out = []
    for n in range(1, len(m) + 1):
        rest = 0
        for block_type, count in _type_counts(n, noncrossing):
            if block_type == (n,):
                continue
            rest = rest + count * _product(out[s - 1] for s in block_type)
        out.append(m[n - 1] - rest)
    return out


def classical_from_moments(m: Sequence) -> list:
    return _invert(m, noncrossing=False)


def free_from_moments(m: Sequence) -> list:
    return _invert(m, noncrossing=True)


def _negated_kappa_product(q) -> SymbolicPolynomial:
    term = SymbolicPolynomial.constant(1)
    for part in q:
        term = term * (-SymbolicPolynomial.kappa(part + 1))
    return term


def _from_composition_counts(counts: Counter) -> SymbolicPolynomial:
    total = SymbolicPolynomial()
    for q, mult in sorted(counts.items()):
        total = total + mult * _negated_kappa_product(q)
    return -total


def classical_from_free_vhc(n: int, max_n: Optional[int] = None) -> SymbolicPolynomial:
    """c_n in terms of free cumulants, summing (-kappa_{q_i + 1}) products
    over the valid compositions of every permutation of size n - 1.

    The single permutation of size 0 has one empty configuration, whose
    composition is (0); this gives c_1 = kappa_1.
    """
    if n < 1:
        raise DomainError("n must be positive")
    config.check_bound("vhc_sum", n - 1, max_n)
    counts = Counter()
    for p in all_permutations(n - 1):
        counts.update(valid_compositions(p))
    return _from_composition_counts(counts)


def classical_from_free_qcan(n: int, max_n: Optional[int] = None) -> SymbolicPolynomial:
    """The same polynomial, summing over quasicanonical trees on [n - 1]."""
    if n < 1:
        raise DomainError("n must be positive")
    config.check_bound("vhc_sum", n - 1, max_n)
    bound = max_n if max_n is not None else config.bound("vhc_sum")
    counts = Counter(
        composition_of_tree(t) for t in enumerate_quasicanonical(n - 1, max_n=bound)
    )
    return _from_composition_counts(counts)


def classical_from_free_chain(n: int) -> SymbolicPolynomial:
    """Oracle: push symbolic free cumulants to moments, then pull back to
    classical cumulants."""
    if n < 1:
        raise DomainError("n must be positive")
    config.check_bound("partitions", n)
    return classical_from_moments(moments_from_free(kappa_sequence(n)))[n - 1]
