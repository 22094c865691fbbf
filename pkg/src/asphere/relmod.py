"""Relation-module bookkeeping over pluggable word-problem oracles.

Elements are finite integer combinations of basis pairs (coset
representative, relator name).  The image of a Y-sequence adds one basis
element per symbol regardless of its sign; the group-ring action relabels
coset keys by w^-1 · u.  Equality of coset keys is delegated to an oracle,
which may be exact (free group, finite quotient via a coset table) or a
refutation-only partial decider (abelianized comparison modulo the relator
lattice); zero-testing is therefore three-valued.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Protocol, Sequence

from .partial import EXHAUSTED, Tri
from .peiffer import YSequence
from .presentations import GroupPresentation, coset_table
from .words import Alphabet, FreeWord, abelianize, invert, multiply


class PartialResultError(ValueError):
    """An oracle could not canonicalize every key."""

    def __init__(self, undecided: Sequence[FreeWord]):
        self.undecided = tuple(undecided)
        super().__init__(f"oracle left {len(self.undecided)} key(s) undecided")


class GroupOracle(Protocol):
    alphabet: Alphabet

    def equal(self, u: FreeWord, v: FreeWord) -> Tri: ...

    def canon(self, w: FreeWord) -> FreeWord | None: ...


@dataclass(frozen=True)
class FreeOracle:
    """Equality in the free group itself: exact, canonical form is the
    reduced word."""

    alphabet: Alphabet

    def equal(self, u: FreeWord, v: FreeWord) -> Tri:
        return Tri.YES if u == v else Tri.NO

    def canon(self, w: FreeWord) -> FreeWord:
        return w


class CosetOracle:
    """Equality in a finite quotient, decided by a completed coset table on
    the trivial subgroup.  Canonical forms are shortlex Schreier
    representatives.  Read-only after construction."""

    def __init__(self, gp: GroupPresentation, budget: int = 2000):
        table = coset_table(gp, (), budget)
        if table is EXHAUSTED:
            raise ValueError("quotient not shown finite within budget; oracle unavailable")
        self.alphabet = gp.alphabet
        self._table = table
        self._reps = table.representatives()

    def equal(self, u: FreeWord, v: FreeWord) -> Tri:
        return Tri.YES if self._table.trace(u) == self._table.trace(v) else Tri.NO

    def canon(self, w: FreeWord) -> FreeWord:
        return self._reps[self._table.trace(w)]


class _IntLattice:
    """Integer row span with echelon basis; supports membership tests."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: dict[int, list[int]] = {}

    @staticmethod
    def _pivot(v: Sequence[int]) -> int | None:
        for i, x in enumerate(v):
            if x:
                return i
        return None

    def add(self, vec: Sequence[int]) -> None:
        v = list(vec)
        while True:
            piv = self._pivot(v)
            if piv is None:
                return
            row = self.rows.get(piv)
            if row is None:
                if v[piv] < 0:
                    v = [-x for x in v]
                self.rows[piv] = v
                return
            a, b = row[piv], v[piv]
            g = math.gcd(a, b)
            # unimodular combination: gcd row replaces the pivot row,
            # the remainder continues down
            x, y = _ext_gcd(a, b)
            new_row = [x * r + y * w for r, w in zip(row, v)]
            v = [(a // g) * w - (b // g) * r for r, w in zip(row, v)]
            self.rows[piv] = new_row

    def member(self, vec: Sequence[int]) -> bool:
        v = list(vec)
        while True:
            piv = self._pivot(v)
            if piv is None:
                return True
            row = self.rows.get(piv)
            if row is None or v[piv] % row[piv] != 0:
                return False
            q = v[piv] // row[piv]
            v = [w - q * r for r, w in zip(row, v)]


def _ext_gcd(a: int, b: int) -> tuple[int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_s, old_t


class AbelianizationOracle:
    """Refutation-only: two words cannot be equal in the quotient when their
    abelianized difference lies outside the integer span of the relator
    abelianizations.  Never answers YES for distinct words."""

    def __init__(self, gp: GroupPresentation):
        self.alphabet = gp.alphabet
        self._lattice = _IntLattice(len(gp.alphabet))
        for _, r in gp.relators:
            self._lattice.add(abelianize(r))

    def equal(self, u: FreeWord, v: FreeWord) -> Tri:
        if u == v:
            return Tri.YES
        diff = [a - b for a, b in zip(abelianize(u), abelianize(v))]
        return Tri.UNKNOWN if self._lattice.member(diff) else Tri.NO

    def canon(self, w: FreeWord) -> FreeWord:
        return w


# --- elements -----------------------------------------------------------------


def _word_key(w: FreeWord):
    return (len(w.letters), w.letters)


@dataclass(frozen=True)
class RelModElement:
    """Finite map (coset representative, relator name) -> nonzero integer."""

    terms: tuple[tuple[str, FreeWord, int], ...]

    @classmethod
    def from_items(cls, items: Iterable[tuple[str, FreeWord, int]]) -> RelModElement:
        acc: dict[tuple[str, FreeWord], int] = {}
        for rel, w, coeff in items:
            key = (rel, w)
            acc[key] = acc.get(key, 0) + coeff
        terms = tuple(
            (rel, w, c)
            for (rel, w), c in sorted(acc.items(), key=lambda kv: (kv[0][0], _word_key(kv[0][1])))
            if c != 0
        )
        return cls(terms)

    @classmethod
    def zero(cls) -> RelModElement:
        return cls(())

    @classmethod
    def basis(cls, rel: str, w: FreeWord, coeff: int = 1) -> RelModElement:
        return cls.from_items([(rel, w, coeff)])

    @property
    def is_empty(self) -> bool:
        return not self.terms

    def add(self, other: RelModElement) -> RelModElement:
        return RelModElement.from_items(self.terms + other.terms)

    def neg(self) -> RelModElement:
        return RelModElement(tuple((rel, w, -c) for rel, w, c in self.terms))

    def subtract(self, other: RelModElement) -> RelModElement:
        return self.add(other.neg())


def module_image(
    d: YSequence, oracle: GroupOracle, signed: bool = False
) -> RelModElement:
    """Image of a Y-sequence: one basis element (canon(u), r) per symbol.

    The symbol's sign is dropped; the ``signed`` variant (off by default)
    sends it to the coefficient instead.
    """
    items = []
    undecided = []
    for s in d.symbols:
        rep = oracle.canon(s.conjugator)
        if rep is None:
            undecided.append(s.conjugator)
            continue
        items.append((s.relator, rep, s.sign if signed else 1))
    if undecided:
        raise PartialResultError(undecided)
    return RelModElement.from_items(items)


def module_action(w: FreeWord, e: RelModElement, oracle: GroupOracle) -> RelModElement:
    """Relabel every coset key by canon(w^-1 · u); coefficients unchanged.

    The empty word acts as the identity and action by w then w^-1 restores
    the element; composition reverses order (act(w1, act(w2, e)) equals
    act(w2·w1, e)).
    """
    w_inv = invert(w)
    items = []
    undecided = []
    for rel, u, coeff in e.terms:
        rep = oracle.canon(multiply(w_inv, u))
        if rep is None:
            undecided.append(u)
            continue
        items.append((rel, rep, coeff))
    if undecided:
        raise PartialResultError(undecided)
    return RelModElement.from_items(items)


def is_zero(e: RelModElement, oracle: GroupOracle) -> Tri:
    """Three-valued zero test under an oracle.

    Keys the oracle proves equal are merged; after merging, the element is
    zero exactly when every class sums to zero.  UNKNOWN answers block a
    definite zero only where merging could still cancel the residue.
    """
    by_rel: dict[str, list[tuple[FreeWord, int]]] = {}
    for rel, w, c in e.terms:
        by_rel.setdefault(rel, []).append((w, c))

    saw_unknown_residue = False
    for rel, pairs in sorted(by_rel.items()):
        n = len(pairs)
        parent = list(range(n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        unknown_edges = []
        for i in range(n):
            for j in range(i + 1, n):
                answer = oracle.equal(pairs[i][0], pairs[j][0])
                if answer is Tri.YES:
                    parent[find(j)] = find(i)
                elif answer is Tri.UNKNOWN:
                    unknown_edges.append((i, j))

        sums: dict[int, int] = {}
        for i, (_, c) in enumerate(pairs):
            sums[find(i)] = sums.get(find(i), 0) + c

        # connect classes linked by an UNKNOWN answer; inside a component,
        # further merging is conceivable, so only the total is certain
        comp = {root: root for root in sums}

        def cfind(x: int) -> int:
            while comp[x] != x:
                comp[x] = comp[comp[x]]
                x = comp[x]
            return x

        for i, j in unknown_edges:
            a, b = cfind(find(i)), cfind(find(j))
            if a != b:
                comp[b] = a
        totals: dict[int, int] = {}
        members: dict[int, int] = {}
        for root, s in sums.items():
            c = cfind(root)
            totals[c] = totals.get(c, 0) + s
            members[c] = members.get(c, 0) + 1
        for c, total in totals.items():
            nonzero = [sums[r] for r in sums if cfind(r) == c and sums[r] != 0]
            if not nonzero:
                continue
            if members[c] == 1 or total != 0:
                return Tri.NO
            saw_unknown_residue = True
    return Tri.UNKNOWN if saw_unknown_residue else Tri.YES
