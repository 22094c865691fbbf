"""Crossed modules over computable groups and the projection pipeline.

The central fixture is a presentation with one generator eliminable by a
single-occurrence relator.  The retraction splits the ambient free group as
kernel x complement; the kernel plays the part of a crossed module top group
with decidable equality (words killed by the retraction), and every
construction here stays inside that decidable territory: derivations are
evaluation rules, automorphisms are sampled, and quotient elements on the
complement side are carried as Y-sequences whose equality is never decided,
only their boundaries.

Verification is sampled: each structural law (derivation law, regularity,
the two composition expressions, the actor diagram, the semidirect action
laws) has a battery with an optional deliberately perturbed variant used as
a negative control.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .partial import EXHAUSTED
from .peiffer import (
    NotIdentityError,
    YSequence,
    YSymbol,
    boundary,
    conjugate_sequence,
    empty_sequence,
    is_identity,
    scramble,
    search_trivialization,
    symbol_boundary,
    verify_certificate,
)
from .presentations import (
    GroupPresentation,
    Retraction,
    decompose,
    in_kernel,
    is_reducible_lot,
    retract,
    solve_single_occurrence,
)
from .words import (
    Alphabet,
    AlphabetError,
    FreeWord,
    SignedLetter,
    conjugate,
    embed,
    empty_word,
    invert,
    multiply,
    random_word,
)


class MembershipError(ValueError):
    pass


class NonRegularError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    """The projection of an identity sequence left a nonvanishing component;
    flags an implementation or fixture bug."""

    def __init__(self, message: str, residue: FreeWord | None = None):
        super().__init__(message)
        self.residue = residue


# --- computable carriers -------------------------------------------------------


@dataclass(frozen=True)
class FreeGroupCarrier:
    alphabet: Alphabet

    def contains(self, w: FreeWord) -> bool:
        return w.alphabet == self.alphabet

    def identity(self) -> FreeWord:
        return empty_word(self.alphabet)

    def random_element(self, rng: random.Random, max_len: int = 6) -> FreeWord:
        return random_word(self.alphabet, rng, max_len)


@dataclass(frozen=True)
class KernelCarrier:
    """The normal closure of the source relator, as words over the big
    alphabet killed by the retraction.  Membership and equality are exact."""

    retraction: Retraction

    def contains(self, w: FreeWord) -> bool:
        return w.alphabet == self.retraction.big_alphabet and in_kernel(self.retraction, w)

    def identity(self) -> FreeWord:
        return empty_word(self.retraction.big_alphabet)

    def random_element(
        self, rng: random.Random, max_factors: int = 3, conj_len: int = 3
    ) -> FreeWord:
        retr = self.retraction
        big = retr.big_alphabet
        seed_rel = _kernel_generator(retr)
        acc = empty_word(big)
        for _ in range(rng.randrange(max_factors + 1)):
            u = random_word(big, rng, conj_len)
            r = seed_rel if rng.random() < 0.5 else invert(seed_rel)
            acc = multiply(acc, conjugate(u, r))
        return acc


def _kernel_generator(retr: Retraction) -> FreeWord:
    """z · solved^-1: killed by the retraction and normally generating the
    same kernel as the source relator."""
    big = retr.big_alphabet
    z = FreeWord(big, (SignedLetter(big.index(retr.z), 1),))
    return multiply(z, invert(embed(retr.solved, big)))


# --- crossed modules ------------------------------------------------------------


@dataclass(frozen=True)
class CrossedModule:
    top: FreeGroupCarrier | KernelCarrier
    base: FreeGroupCarrier | KernelCarrier
    boundary_map: Callable[[FreeWord], FreeWord]
    action: Callable[[FreeWord, FreeWord], FreeWord]
    label: str = ""


def conjugation_xmod(retr: Retraction) -> CrossedModule:
    """Kernel into the ambient free group, boundary the inclusion, action by
    conjugation.  Both crossed-module axioms hold exactly."""
    big = retr.big_alphabet
    return CrossedModule(
        top=KernelCarrier(retr),
        base=FreeGroupCarrier(big),
        boundary_map=lambda t: t,
        action=conjugate,
        label="kernel-in-free",
    )


def kernel_self_xmod(retr: Retraction) -> CrossedModule:
    """The kernel over itself with identity boundary; the carrier on which
    relator derivations live."""
    return CrossedModule(
        top=KernelCarrier(retr),
        base=KernelCarrier(retr),
        boundary_map=lambda t: t,
        action=conjugate,
        label="kernel-self",
    )


# --- derivations ----------------------------------------------------------------


@dataclass(frozen=True)
class Derivation:
    """Map d from the base group to the top group with
    d(xy) = d(x) · ^x d(y); represented by an evaluation rule."""

    xm: CrossedModule
    rule: Callable[[FreeWord], FreeWord]
    label: str = ""
    inverse_hint: "Derivation | None" = None

    def __call__(self, x: FreeWord) -> FreeWord:
        return self.rule(x)


def trivial_derivation(xm: CrossedModule) -> Derivation:
    return Derivation(xm, lambda x: xm.top.identity(), label="1")


def derivation_from_values(xm: CrossedModule, values: dict[str, FreeWord]) -> Derivation:
    """Extend generator values by the derivation law; the base carrier must
    be a free group whose generators are all assigned."""
    base = xm.base
    if not isinstance(base, FreeGroupCarrier):
        raise ValueError("generator values need a free base group")
    alphabet = base.alphabet
    for name in alphabet.generators:
        if name not in values:
            raise KeyError(f"missing value for generator {name!r}")

    def rule(x: FreeWord) -> FreeWord:
        acc = xm.top.identity()
        prefix = base.identity()
        for l, s in x.letters:
            g = FreeWord(alphabet, (SignedLetter(l, s),))
            if s > 0:
                dg = values[alphabet.name(l)]
            else:
                dg = xm.action(g, invert(values[alphabet.name(l)]))
            acc = multiply(acc, xm.action(prefix, dg))
            prefix = multiply(prefix, g)
        return acc

    return Derivation(xm, rule, label="from-values")


def inner_derivation(retr: Retraction, c: FreeWord) -> Derivation:
    """x -> (c x c^-1) x^-1 on the kernel; lands in the kernel for every c
    in the ambient free group."""
    if c.alphabet != retr.big_alphabet:
        raise AlphabetError("conjugating word must be over the big alphabet")
    xm = kernel_self_xmod(retr)

    def rule(x: FreeWord) -> FreeWord:
        if not xm.base.contains(x):
            raise MembershipError("argument is not in the kernel")
        return multiply(conjugate(c, x), invert(x))

    return Derivation(xm, rule, label="inner")


def relator_derivation(
    retr: Retraction, u: FreeWord, r: FreeWord, sign: int, _link_inverse: bool = True
) -> Derivation:
    """The derivation attached to a conjugated relator: the displacement of a
    kernel element under conjugation by u r^sign u^-1.  Its inverse under
    composition is the opposite-sign instance."""
    if u.alphabet != retr.small_alphabet or r.alphabet != retr.small_alphabet:
        raise AlphabetError("conjugator and relator must avoid the eliminated generator")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c_small = conjugate(u, r if sign > 0 else invert(r))
    d = inner_derivation(retr, embed(c_small, retr.big_alphabet))
    inv = None
    if _link_inverse:
        inv = relator_derivation(retr, u, r, -sign, _link_inverse=False)
    return Derivation(d.xm, d.rule, label=f"relator({sign:+d})", inverse_hint=inv)


def induced_base_map(d: Derivation) -> Callable[[FreeWord], FreeWord]:
    """Base endomorphism x -> boundary(d(x)) x."""
    return lambda x: multiply(d.xm.boundary_map(d(x)), x)


def induced_top_map(d: Derivation) -> Callable[[FreeWord], FreeWord]:
    """Top endomorphism t -> d(boundary(t)) t."""
    return lambda t: multiply(d(d.xm.boundary_map(t)), t)


def compose_derivations(d1: Derivation, d2: Derivation) -> Derivation:
    """Whitehead composition: x -> d1(boundary(d2(x)) x) · d2(x)."""
    sigma2 = induced_base_map(d2)

    def rule(x: FreeWord) -> FreeWord:
        return multiply(d1(sigma2(x)), d2(x))

    inv = None
    if d1.inverse_hint is not None and d2.inverse_hint is not None:
        inv = Derivation(
            d1.xm,
            _composed_rule(d2.inverse_hint, d1.inverse_hint),
            label=f"({d2.inverse_hint.label})o({d1.inverse_hint.label})",
        )
    return Derivation(d1.xm, rule, label=f"({d1.label})o({d2.label})", inverse_hint=inv)


def _composed_rule(d1: Derivation, d2: Derivation) -> Callable[[FreeWord], FreeWord]:
    sigma2 = induced_base_map(d2)
    return lambda x: multiply(d1(sigma2(x)), d2(x))


def compose_alternative(d1: Derivation, d2: Derivation) -> Callable[[FreeWord], FreeWord]:
    """The other expression for the composition: push d2's value through the
    first derivation's induced top map; must agree with compose_derivations
    pointwise."""
    top1 = induced_top_map(d1)
    return lambda x: multiply(top1(d2(x)), d1(x))


@dataclass(frozen=True)
class AutPair:
    """Automorphism pair (top, base) of a crossed module; maps are stored as
    rules together with their inverses when available."""

    top: Callable[[FreeWord], FreeWord]
    base: Callable[[FreeWord], FreeWord]
    top_inv: Callable[[FreeWord], FreeWord] | None = None
    base_inv: Callable[[FreeWord], FreeWord] | None = None
    label: str = ""


def derivation_automorphisms(
    d: Derivation,
    d_inverse: Derivation | None = None,
    rng: random.Random | None = None,
    samples: int = 16,
) -> AutPair:
    """Automorphism pair of a regular derivation; regularity is verified on
    samples against the supplied (or hinted) compositional inverse."""
    if d_inverse is None:
        d_inverse = d.inverse_hint
    if d_inverse is None:
        raise NonRegularError("no regularity witness available")
    rng = rng or random.Random(0)
    left = compose_derivations(d, d_inverse)
    right = compose_derivations(d_inverse, d)
    top = d.xm.top
    for _ in range(samples):
        x = top.random_element(rng)
        if not left(x).is_identity or not right(x).is_identity:
            raise NonRegularError("witness does not invert the derivation on samples")
    return AutPair(
        top=induced_top_map(d),
        base=induced_base_map(d),
        top_inv=induced_top_map(d_inverse),
        base_inv=induced_base_map(d_inverse),
        label=f"aut({d.label})",
    )


def conjugation_aut_pair(retr: Retraction, u: FreeWord) -> AutPair:
    """Both components act by conjugation with u (a word avoiding the
    eliminated generator); the square with the identity boundary commutes on
    the nose."""
    if u.alphabet != retr.small_alphabet:
        raise AlphabetError("conjugating word must avoid the eliminated generator")
    ub = embed(u, retr.big_alphabet)
    ub_inv = invert(ub)
    return AutPair(
        top=lambda t: conjugate(ub, t),
        base=lambda x: conjugate(ub, x),
        top_inv=lambda t: conjugate(ub_inv, t),
        base_inv=lambda x: conjugate(ub_inv, x),
        label="conjugation",
    )


# --- fixtures -------------------------------------------------------------------


@dataclass(frozen=True)
class ReducibleFixture:
    """A presentation with a distinguished single-occurrence generator, its
    retraction, and the subpresentation on the remaining generators."""

    presentation: GroupPresentation
    retraction: Retraction
    subpresentation: GroupPresentation

    @classmethod
    def from_presentation(cls, gp: GroupPresentation) -> ReducibleFixture:
        z = gp.eliminate or is_reducible_lot(gp)
        if z is None:
            raise ValueError("presentation has no single-occurrence generator")
        retr = solve_single_occurrence(gp, z)
        small = retr.small_alphabet
        sub_relators = []
        for name, word in gp.relators:
            if name == retr.source_relator:
                continue
            if any(gp.alphabet.name(l) == z for l, _ in word.letters):
                raise ValueError(f"relator {name!r} also uses the eliminated generator")
            sub_relators.append((name, embed_into_small(word, small)))
        sub = GroupPresentation(f"{gp.name}_sub", small, tuple(sub_relators))
        return cls(gp, retr, sub)

    def relator_words(self) -> list[tuple[str, FreeWord]]:
        return list(self.subpresentation.relators)


def embed_into_small(w: FreeWord, small: Alphabet) -> FreeWord:
    letters = tuple(SignedLetter(small.index(w.alphabet.name(l)), s) for l, s in w.letters)
    return FreeWord(small, letters)


# --- eta over sequences and the semidirect action --------------------------------


def sequence_derivation(retr: Retraction, m: YSequence) -> Derivation:
    """Derivation attached to a whole Y-sequence on the complement side:
    the composition of the per-symbol relator derivations."""
    acc = trivial_derivation(kernel_self_xmod(retr))
    first = True
    for s in m.symbols:
        d = relator_derivation(retr, s.conjugator, m.presentation.relator(s.relator), s.sign)
        acc = d if first else compose_derivations(acc, d)
        first = False
    return acc


def semidirect_action(
    retr: Retraction,
    g: FreeWord,
    p: FreeWord,
    t: FreeWord,
    m: YSequence,
    perturb: bool = False,
) -> tuple[FreeWord, YSequence]:
    """Action of (g, p) on (t, m): conjugate the kernel part, correct by the
    derivation of the (conjugated) sequence evaluated at g, and conjugate
    the sequence's conjugators by p."""
    big = retr.big_alphabet
    kernel = KernelCarrier(retr)
    if not kernel.contains(g):
        raise MembershipError("g must lie in the kernel")
    if not kernel.contains(t):
        raise MembershipError("t must lie in the kernel")
    if p.alphabet != retr.small_alphabet:
        raise AlphabetError("p must avoid the eliminated generator")
    if m.presentation.alphabet != retr.small_alphabet:
        raise AlphabetError("m must live over the subpresentation")
    pm = conjugate_sequence(p, m)
    pt = conjugate(embed(p, big), t)
    gpt = conjugate(g, pt)
    correction = sequence_derivation(retr, pm)(g)
    twist = correction if perturb else invert(correction)
    return multiply(gpt, twist), pm


def recombine(retr: Retraction, u0: FreeWord, u1: FreeWord) -> FreeWord:
    """Inverse of decompose: u0 · u1 with u0 in the kernel."""
    if not KernelCarrier(retr).contains(u0):
        raise MembershipError("u0 must lie in the kernel")
    if u1.alphabet == retr.small_alphabet:
        u1 = embed(u1, retr.big_alphabet)
    elif u1.alphabet != retr.big_alphabet:
        raise AlphabetError("u1 over the wrong alphabet")
    return multiply(u0, u1)


# --- the projection pipeline ------------------------------------------------------


def project_symbol(fx: ReducibleFixture, s: YSymbol) -> tuple[FreeWord, YSequence]:
    """Split one Y-symbol into its kernel part and its residual symbol over
    the subpresentation.

    The eliminated relator contributes only a kernel word; any other symbol
    contributes the retracted symbol plus the derivation correction of the
    kernel factor of its conjugator.
    """
    retr = fx.retraction
    gp = fx.presentation
    if s.relator == retr.source_relator:
        return symbol_boundary(gp, s), empty_sequence(fx.subpresentation)
    u0, _ = decompose(retr, s.conjugator)
    u1 = retract(retr, s.conjugator)
    r_word = fx.subpresentation.relator(s.relator)
    d = relator_derivation(retr, u1, r_word, s.sign)
    first = invert(d(u0))
    second = YSequence(fx.subpresentation, (YSymbol(s.relator, u1, s.sign),))
    return first, second


def project_identity_sequence(
    fx: ReducibleFixture, d: YSequence
) -> tuple[FreeWord, YSequence]:
    """Fold the symbol projection across an identity sequence with the
    semidirect multiplication.  The kernel component must vanish and the
    residual sequence must again be an identity sequence; anything else is
    an inconsistency.
    """
    if not is_identity(d):
        raise NotIdentityError("projection needs an identity sequence")
    retr = fx.retraction
    big = retr.big_alphabet
    t_acc = empty_word(big)
    m_syms: list[YSymbol] = []
    bm = empty_word(retr.small_alphabet)
    for s in d.symbols:
        t_i, m_i = project_symbol(fx, s)
        t_acc = multiply(t_acc, conjugate(embed(bm, big), t_i))
        m_syms.extend(m_i.symbols)
        bm = multiply(bm, boundary(m_i))
    d1 = YSequence(fx.subpresentation, tuple(m_syms))
    if not t_acc.is_identity:
        raise InconsistencyError(
            "projection left a nonvanishing kernel component", residue=t_acc
        )
    if not is_identity(d1):
        raise InconsistencyError("projected sequence is not an identity sequence")
    return t_acc, d1


# --- sampled batteries --------------------------------------------------------------


@dataclass(frozen=True)
class BatteryResult:
    name: str
    samples: int
    failures: int
    detail: tuple[str, ...] = ()
    counters: tuple[tuple[str, int], ...] = ()

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "samples": self.samples,
            "failures": self.failures,
            "detail": list(self.detail),
            "counters": {k: v for k, v in self.counters},
            "passed": self.passed,
        }


def _collect(name: str, samples: int, failures: list[str], counters=()) -> BatteryResult:
    return BatteryResult(name, samples, len(failures), tuple(failures[:5]), tuple(counters))


def _sample_symbol_data(fx: ReducibleFixture, rng: random.Random):
    rel_name, r_word = fx.relator_words()[rng.randrange(len(fx.relator_words()))]
    u = random_word(fx.retraction.small_alphabet, rng, 4)
    sign = rng.choice((1, -1))
    return rel_name, r_word, u, sign


def check_crossed_module_axioms(
    fx: ReducibleFixture, rng: random.Random, samples: int
) -> BatteryResult:
    xm = conjugation_xmod(fx.retraction)
    failures = []
    for i in range(samples):
        t = xm.top.random_element(rng)
        t2 = xm.top.random_element(rng)
        g = xm.base.random_element(rng)
        h = xm.base.random_element(rng)
        gt = xm.action(g, t)
        if not xm.top.contains(gt):
            failures.append(f"sample {i}: action left the kernel")
            continue
        if xm.boundary_map(gt) != conjugate(g, xm.boundary_map(t)):
            failures.append(f"sample {i}: equivariance fails")
        if xm.action(xm.boundary_map(t), t2) != conjugate(t, t2):
            failures.append(f"sample {i}: peiffer identity fails")
        if xm.action(multiply(g, h), t) != xm.action(g, xm.action(h, t)):
            failures.append(f"sample {i}: action composition fails")
        if xm.action(g, multiply(t, t2)) != multiply(gt, xm.action(g, t2)):
            failures.append(f"sample {i}: action is not homomorphic")
    return _collect("crossed-module-axioms", samples, failures)


def check_derivation_law(
    fx: ReducibleFixture, rng: random.Random, samples: int, perturb: bool = False
) -> BatteryResult:
    retr = fx.retraction
    kernel = KernelCarrier(retr)
    failures = []
    if not fx.relator_words():
        return _collect("derivation-law", 0, [])
    for i in range(samples):
        rel_name, r_word, u, sign = _sample_symbol_data(fx, rng)
        d = relator_derivation(retr, u, r_word, sign)
        rule = d.rule
        if perturb:
            rule = lambda x, _r=d.rule: invert(_r(x))  # noqa: E731
        x = kernel.random_element(rng)
        y = kernel.random_element(rng)
        lhs = rule(multiply(x, y))
        rhs = multiply(rule(x), conjugate(x, rule(y)))
        if lhs != rhs or not kernel.contains(rule(x)):
            failures.append(f"sample {i}: derivation law fails for {rel_name}")
    return _collect("derivation-law", samples, failures)


def check_regularity(
    fx: ReducibleFixture, rng: random.Random, samples: int, perturb: bool = False
) -> BatteryResult:
    retr = fx.retraction
    kernel = KernelCarrier(retr)
    failures = []
    if not fx.relator_words():
        return _collect("regularity", 0, [])
    for i in range(samples):
        rel_name, r_word, u, sign = _sample_symbol_data(fx, rng)
        d_plus = relator_derivation(retr, u, r_word, sign)
        d_minus = relator_derivation(retr, u, r_word, sign if perturb else -sign)
        composed = compose_derivations(d_plus, d_minus)
        x = kernel.random_element(rng)
        if not composed(x).is_identity:
            failures.append(f"sample {i}: composition with the witness is not trivial")
    return _collect("regularity", samples, failures)


def check_composition_formulas(
    fx: ReducibleFixture, rng: random.Random, samples: int, perturb: bool = False
) -> BatteryResult:
    retr = fx.retraction
    kernel = KernelCarrier(retr)
    failures = []
    if not fx.relator_words():
        return _collect("composition-agreement", 0, [])
    for i in range(samples):
        _, r1, u1, s1 = _sample_symbol_data(fx, rng)
        _, r2, u2, s2 = _sample_symbol_data(fx, rng)
        d1 = relator_derivation(retr, u1, r1, s1)
        d2 = relator_derivation(retr, u2, r2, s2)
        composed = compose_derivations(d1, d2)
        alt = compose_alternative(d1, d2)
        if perturb:
            top1 = induced_top_map(d1)
            alt = lambda x, _t=top1, _d1=d1, _d2=d2: multiply(_d1(x), _t(_d2(x)))  # noqa: E731
        x = kernel.random_element(rng)
        if composed(x) != alt(x):
            failures.append(f"sample {i}: the two composition expressions disagree")
    trivial_ok = True
    d_any = relator_derivation(retr, empty_word(retr.small_alphabet), fx.relator_words()[0][1], 1)
    triv = trivial_derivation(kernel_self_xmod(retr))
    probe = kernel.random_element(rng)
    if compose_derivations(d_any, triv)(probe) != d_any(probe):
        trivial_ok = False
    if compose_derivations(triv, d_any)(probe) != d_any(probe):
        trivial_ok = False
    failures += [] if trivial_ok else ["trivial derivation is not a unit"]
    return _collect("composition-agreement", samples, failures)


def check_actor_diagram(
    fx: ReducibleFixture, rng: random.Random, samples: int, perturb: bool = False
) -> BatteryResult:
    """Sampled commutation of the derivation/automorphism square: the
    automorphism pair of a relator derivation equals conjugation by the
    relator conjugate, on both components."""
    retr = fx.retraction
    kernel = KernelCarrier(retr)
    failures = []
    if not fx.relator_words():
        return _collect("actor-diagram", 0, [])
    for i in range(samples):
        rel_name, r_word, u, sign = _sample_symbol_data(fx, rng)
        d = relator_derivation(retr, u, r_word, sign)
        pair = derivation_automorphisms(d, rng=rng, samples=2)
        c = conjugate(u, r_word if sign > 0 else invert(r_word))
        if perturb:
            c = invert(c)
        conj_pair = conjugation_aut_pair(retr, c)
        t = kernel.random_element(rng)
        x = kernel.random_element(rng)
        if pair.top(t) != conj_pair.top(t):
            failures.append(f"sample {i}: top components disagree for {rel_name}")
        if pair.base(x) != conj_pair.base(x):
            failures.append(f"sample {i}: base components disagree for {rel_name}")
    return _collect("actor-diagram", samples, failures)


def _random_subsequence(fx: ReducibleFixture, rng: random.Random, max_len: int = 3) -> YSequence:
    syms = []
    names = fx.subpresentation.relator_names
    if not names:
        return YSequence(fx.subpresentation, ())
    for _ in range(rng.randrange(max_len + 1)):
        name = names[rng.randrange(len(names))]
        u = random_word(fx.retraction.small_alphabet, rng, 3)
        syms.append(YSymbol(name, u, rng.choice((1, -1))))
    return YSequence(fx.subpresentation, tuple(syms))


def check_action_laws(
    fx: ReducibleFixture, rng: random.Random, samples: int, perturb: bool = False
) -> BatteryResult:
    """Identity and composition laws of the semidirect action."""
    retr = fx.retraction
    kernel = KernelCarrier(retr)
    small = retr.small_alphabet
    big = retr.big_alphabet
    failures = []
    for i in range(samples):
        t = kernel.random_element(rng, max_factors=2)
        m = _random_subsequence(fx, rng)
        g = kernel.random_element(rng, max_factors=2)
        p = random_word(small, rng, 3)
        g2 = kernel.random_element(rng, max_factors=2)
        p2 = random_word(small, rng, 3)

        t_id, m_id = semidirect_action(retr, kernel.identity(), empty_word(small), t, m)
        if t_id != t or m_id.symbols != m.symbols:
            failures.append(f"sample {i}: identity law fails")
            continue

        inner_t, inner_m = semidirect_action(retr, g2, p2, t, m, perturb=perturb)
        lhs_t, lhs_m = semidirect_action(retr, g, p, inner_t, inner_m, perturb=perturb)
        g_comb = multiply(g, conjugate(embed(p, big), g2))
        p_comb = multiply(p, p2)
        rhs_t, rhs_m = semidirect_action(retr, g_comb, p_comb, t, m, perturb=perturb)
        if lhs_t != rhs_t or lhs_m.symbols != rhs_m.symbols:
            failures.append(f"sample {i}: composition law fails")
    return _collect("action-laws", samples, failures)


def check_decompose_roundtrip(
    fx: ReducibleFixture, rng: random.Random, samples: int
) -> BatteryResult:
    retr = fx.retraction
    big = retr.big_alphabet
    kernel = KernelCarrier(retr)
    failures = []
    for i in range(samples):
        u = random_word(big, rng, 8)
        u0, u1 = decompose(retr, u)
        if not retract(retr, u0).is_identity:
            failures.append(f"sample {i}: kernel part fails the retraction test")
        if multiply(u0, u1) != u:
            failures.append(f"sample {i}: decompose does not recombine")
        if recombine(retr, u0, u1) != u:
            failures.append(f"sample {i}: recombine disagrees")
        n0 = kernel.random_element(rng, max_factors=2)
        w1 = random_word(retr.small_alphabet, rng, 5)
        v = recombine(retr, n0, w1)
        v0, v1 = decompose(retr, v)
        if v0 != n0 or v1 != embed(w1, big):
            failures.append(f"sample {i}: pair round-trip fails")
    return _collect("decompose-roundtrip", samples, failures)


def check_projection(
    fx: ReducibleFixture,
    rng: random.Random,
    sequences: int,
    scramble_moves: int = 6,
    node_budget: int = 50_000,
    min_rate: float = 0.9,
) -> BatteryResult:
    """Project scrambled identity sequences and search for certificates of
    the residual sequences.  Projection failures are hard failures; search
    misses are counted and only fail the battery below the rate threshold."""
    failures = []
    searched = 0
    found = 0
    for i in range(sequences):
        k = rng.randrange(1, scramble_moves + 1)
        d, _ = scramble(fx.presentation, rng.randrange(1 << 30), k)
        try:
            residue, d1 = project_identity_sequence(fx, d)
        except InconsistencyError as exc:
            failures.append(f"sequence {i}: {exc}")
            continue
        searched += 1
        cert = search_trivialization(
            d1, node_budget=node_budget, depth_limit=2 * max(len(d1.symbols), 1)
        )
        if cert is EXHAUSTED:
            continue
        if not verify_certificate(d1, cert):
            failures.append(f"sequence {i}: certificate does not replay")
            continue
        found += 1
    if searched and found / searched < min_rate:
        failures.append(
            f"search success rate {found}/{searched} below threshold {min_rate}"
        )
    return _collect(
        "projection-pipeline",
        sequences,
        failures,
        counters=(("searched", searched), ("found", found)),
    )
