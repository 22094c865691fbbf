"""Finite monoids, their actions, tensor products, and dominions.

Monoids are given by multiplication tables over {0..n-1}.  The tensor
product of a right action and a left action over a common submonoid is the
partition of the product set generated by (a·u, b) ~ (a, u·b); dominion
membership is decided through that partition (two homomorphisms agreeing on
the submonoid must agree exactly on the elements with d⊗1 = 1⊗d).  The weak
dominion probe goes through the universal enveloping group and is budgeted:
it may answer UNKNOWN.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .partial import EXHAUSTED, Tri
from .presentations import (
    GroupPresentation,
    MonoidPresentation,
    coset_table,
    universal_group_presentation,
)
from .words import Alphabet, FreeWord, MonoidWord, SignedLetter


class MonoidError(ValueError):
    pass


class ActionError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteMonoid:
    table: tuple[tuple[int, ...], ...]
    identity: int

    def __post_init__(self):
        n = len(self.table)
        for row in self.table:
            if len(row) != n or any(not 0 <= x < n for x in row):
                raise MonoidError("table must be square over {0..n-1}")
        if not 0 <= self.identity < n:
            raise MonoidError("identity index out of range")
        e = self.identity
        for x in range(n):
            if self.table[e][x] != x or self.table[x][e] != x:
                raise MonoidError(f"identity law fails at {x}")
        for x in range(n):
            for y in range(n):
                xy = self.table[x][y]
                for z in range(n):
                    if self.table[xy][z] != self.table[x][self.table[y][z]]:
                        raise MonoidError(f"not associative at ({x},{y},{z})")

    @property
    def size(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]


def validate_monoid(table: Sequence[Sequence[int]]) -> FiniteMonoid:
    """Check a raw table and locate its identity."""
    rows = tuple(tuple(row) for row in table)
    n = len(rows)
    identity = None
    for e in range(n):
        if len(rows[e]) == n and all(
            rows[e][x] == x and len(rows[x]) == n and rows[x][e] == x for x in range(n)
        ):
            identity = e
            break
    if identity is None:
        raise MonoidError("no identity element")
    return FiniteMonoid(rows, identity)


@dataclass(frozen=True)
class Submonoid:
    parent: FiniteMonoid
    elements: frozenset[int]

    def __post_init__(self):
        if not isinstance(self.elements, frozenset):
            object.__setattr__(self, "elements", frozenset(self.elements))
        if self.parent.identity not in self.elements:
            raise MonoidError("submonoid must contain the identity")
        for x in self.elements:
            if not 0 <= x < self.parent.size:
                raise MonoidError(f"element {x} out of range")
            for y in self.elements:
                if self.parent.mul(x, y) not in self.elements:
                    raise MonoidError(f"not closed: {x}*{y} escapes")

    @property
    def sorted_elements(self) -> tuple[int, ...]:
        return tuple(sorted(self.elements))

    @classmethod
    def generated_by(cls, parent: FiniteMonoid, seed: Sequence[int]) -> Submonoid:
        elems = {parent.identity, *seed}
        while True:
            new = {parent.mul(x, y) for x in elems for y in elems} | elems
            if new == elems:
                return cls(parent, frozenset(elems))
            elems = new

    def restricted_table(self) -> FiniteMonoid:
        order = self.sorted_elements
        index = {x: i for i, x in enumerate(order)}
        table = tuple(tuple(index[self.parent.mul(x, y)] for y in order) for x in order)
        return FiniteMonoid(table, index[self.parent.identity])


def all_submonoids(m: FiniteMonoid) -> list[Submonoid]:
    """Every subset containing the identity and closed under the table."""
    rest = [x for x in range(m.size) if x != m.identity]
    found = []
    for k in range(len(rest) + 1):
        for combo in itertools.combinations(rest, k):
            elems = frozenset((m.identity, *combo))
            if all(m.mul(x, y) in elems for x in elems for y in elems):
                found.append(Submonoid(m, elems))
    return found


@dataclass(frozen=True)
class BiSystem:
    """A set with a left action by one monoid and a right action by another,
    the two actions commuting.
    """

    left_monoid: FiniteMonoid
    right_monoid: FiniteMonoid
    size: int
    left: tuple[tuple[int, ...], ...]  # left[t][x] = t·x
    right: tuple[tuple[int, ...], ...]  # right[x][s] = x·s

    def __post_init__(self):
        T, S, n = self.left_monoid, self.right_monoid, self.size
        if len(self.left) != T.size or any(len(row) != n for row in self.left):
            raise ActionError("left table has wrong shape")
        if len(self.right) != n or any(len(row) != S.size for row in self.right):
            raise ActionError("right table has wrong shape")
        for x in range(n):
            if self.left[T.identity][x] != x:
                raise ActionError(f"1·{x} != {x}")
            if self.right[x][S.identity] != x:
                raise ActionError(f"{x}·1 != {x}")
        for s in range(T.size):
            for t in range(T.size):
                st = T.mul(s, t)
                for x in range(n):
                    if self.left[st][x] != self.left[s][self.left[t][x]]:
                        raise ActionError(f"(st)x != s(tx) at ({s},{t},{x})")
        for s in range(S.size):
            for t in range(S.size):
                st = S.mul(s, t)
                for x in range(n):
                    if self.right[self.right[x][s]][t] != self.right[x][st]:
                        raise ActionError(f"(xs)t != x(st) at ({x},{s},{t})")
        for t in range(T.size):
            for x in range(n):
                for s in range(S.size):
                    if self.right[self.left[t][x]][s] != self.left[t][self.right[x][s]]:
                        raise ActionError(f"(tx)s != t(xs) at ({t},{x},{s})")

    @classmethod
    def regular(cls, m: FiniteMonoid) -> BiSystem:
        return cls(m, m, m.size, m.table, m.table)


def _check_right_action(table: Sequence[Sequence[int]], size: int, u: Submonoid) -> None:
    parent = u.parent
    for x in range(size):
        if table[x][parent.identity] != x:
            raise ActionError(f"right action: {x}·1 != {x}")
        for a in u.elements:
            for b in u.elements:
                if table[table[x][a]][b] != table[x][parent.mul(a, b)]:
                    raise ActionError(f"right action not associative at ({x},{a},{b})")


def _check_left_action(table: Sequence[Sequence[int]], size: int, u: Submonoid) -> None:
    parent = u.parent
    for x in range(size):
        if table[parent.identity][x] != x:
            raise ActionError(f"left action: 1·{x} != {x}")
    for a in u.elements:
        for b in u.elements:
            ab = parent.mul(a, b)
            for x in range(size):
                if table[a][table[b][x]] != table[ab][x]:
                    raise ActionError(f"left action not associative at ({a},{b},{x})")


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class TensorPartition:
    """Partition of A x B; classes carry dense ids ordered by their minimal
    pair index, so the representation is independent of construction order.
    """

    a_size: int
    b_size: int
    class_of: tuple[int, ...]
    num_classes: int

    def class_id(self, a: int, b: int) -> int:
        if not (0 <= a < self.a_size and 0 <= b < self.b_size):
            raise IndexError(f"pair ({a},{b}) outside {self.a_size}x{self.b_size}")
        return self.class_of[a * self.b_size + b]

    def classes(self) -> list[list[tuple[int, int]]]:
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.num_classes)]
        for a in range(self.a_size):
            for b in range(self.b_size):
                out[self.class_id(a, b)].append((a, b))
        return out


def _canonical_partition(a_size: int, b_size: int, rep_of) -> TensorPartition:
    reps = [rep_of(i) for i in range(a_size * b_size)]
    ids: dict[int, int] = {}
    labels = []
    for i, r in enumerate(reps):
        if r not in ids:
            ids[r] = len(ids)
        labels.append(ids[r])
    return TensorPartition(a_size, b_size, tuple(labels), len(ids))


def tensor_product(
    a_right: Sequence[Sequence[int]],
    b_left: Sequence[Sequence[int]],
    u: Submonoid,
) -> TensorPartition:
    """Union-find closure of the relation (a·u, b) ~ (a, u·b).

    ``a_right[a][s]`` and ``b_left[s][b]`` are indexed by the parent monoid;
    only the columns of the submonoid are consulted.
    """
    a_size, b_size = len(a_right), len(b_left[0]) if b_left else 0
    _check_right_action(a_right, a_size, u)
    _check_left_action(b_left, b_size, u)
    uf = _UnionFind(a_size * b_size)
    for a in range(a_size):
        for b in range(b_size):
            for s in u.sorted_elements:
                uf.union(a_right[a][s] * b_size + b, a * b_size + b_left[s][b])
    return _canonical_partition(a_size, b_size, lambda i: uf.find(i))


def tensor_product_naive(
    a_right: Sequence[Sequence[int]],
    b_left: Sequence[Sequence[int]],
    u: Submonoid,
) -> TensorPartition:
    """Independent closure by repeated scanning; cross-checks tensor_product."""
    a_size, b_size = len(a_right), len(b_left[0]) if b_left else 0
    _check_right_action(a_right, a_size, u)
    _check_left_action(b_left, b_size, u)
    label = list(range(a_size * b_size))
    changed = True
    while changed:
        changed = False
        for a in range(a_size):
            for b in range(b_size):
                for s in u.sorted_elements:
                    p = label[a_right[a][s] * b_size + b]
                    q = label[a * b_size + b_left[s][b]]
                    if p != q:
                        lo, hi = min(p, q), max(p, q)
                        for i, l in enumerate(label):
                            if l == hi:
                                label[i] = lo
                        changed = True
    return _canonical_partition(a_size, b_size, lambda i: label[i])


def same_class(t: TensorPartition, p: tuple[int, int], q: tuple[int, int]) -> bool:
    return t.class_id(*p) == t.class_id(*q)


def multiplication_tensor(s: FiniteMonoid, u: Submonoid) -> TensorPartition:
    if u.parent != s:
        raise MonoidError("submonoid of a different monoid")
    return tensor_product(s.table, s.table, u)


def dominion_membership(s: FiniteMonoid, u: Submonoid, d: int) -> bool:
    """d ⊗ 1 = 1 ⊗ d in the multiplication tensor product."""
    t = multiplication_tensor(s, u)
    return same_class(t, (d, s.identity), (s.identity, d))


def dominion(s: FiniteMonoid, u: Submonoid) -> frozenset[int]:
    t = multiplication_tensor(s, u)
    e = s.identity
    dom = frozenset(
        d for d in range(s.size) if same_class(t, (d, e), (e, d))
    )
    if not u.elements <= dom:
        raise AssertionError("dominion does not contain the submonoid")
    for x in dom:
        for y in dom:
            if s.mul(x, y) not in dom:
                raise AssertionError("dominion is not closed under the table")
    return dom


def is_inverse_monoid(u: Submonoid | FiniteMonoid) -> bool:
    """True when every element has a unique generalized inverse."""
    m = u.restricted_table() if isinstance(u, Submonoid) else u
    for x in range(m.size):
        partners = [
            y
            for y in range(m.size)
            if m.mul(m.mul(x, y), x) == x and m.mul(m.mul(y, x), y) == y
        ]
        if len(partners) != 1:
            return False
    return True


# --- weak dominion through the universal enveloping group --------------------


def element_names(s: FiniteMonoid) -> tuple[str, ...]:
    return tuple(f"m{i}" for i in range(s.size))


def table_monoid_presentation(s: FiniteMonoid) -> MonoidPresentation:
    """Monoid presentation with one generator per element and all n^2 table
    relations (x·y, xy)."""
    alphabet = Alphabet(element_names(s))
    relations = []
    for x in range(s.size):
        for y in range(s.size):
            lhs = MonoidWord(alphabet, (SignedLetter(x, 1), SignedLetter(y, 1)))
            rhs = MonoidWord(alphabet, (SignedLetter(s.mul(x, y), 1),))
            relations.append((lhs, rhs))
    return MonoidPresentation("table", alphabet, tuple(relations))


def enveloping_group_presentation(s: FiniteMonoid) -> GroupPresentation:
    return universal_group_presentation(table_monoid_presentation(s))


def weak_dominion_membership(
    s: FiniteMonoid, u: Submonoid, d: int, budget: int = 1000
) -> Tri:
    """Is the image of d inside the subgroup generated by the image of u in
    the enveloping group?  Budgeted: UNKNOWN when the enumeration does not
    close.
    """
    if u.parent != s:
        raise MonoidError("submonoid of a different monoid")
    if not 0 <= d < s.size:
        raise MonoidError(f"element {d} out of range")
    gp = enveloping_group_presentation(s)
    gens = [
        FreeWord(gp.alphabet, (SignedLetter(x, 1),)) for x in u.sorted_elements
    ]
    table = coset_table(gp, gens, budget)
    if table is EXHAUSTED:
        return Tri.UNKNOWN
    target = table.trace(FreeWord(gp.alphabet, (SignedLetter(d, 1),)))
    return Tri.YES if target == 0 else Tri.NO
