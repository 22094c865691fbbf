"""The full verification battery behind ``asphere suite``.

Each battery draws its own deterministically seeded generator, so the whole
report is a pure function of the seed and the configuration, byte for byte.
Battery sample counts are the defaults used by the acceptance checks; the
``samples`` override scales everything down for smoke runs.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from . import actions, peiffer, words, xmod
from .fixtures import FixtureSet, load_fixtures
from .partial import EXHAUSTED, Tri
from .peiffer import (
    Move,
    MoveKind,
    YSequence,
    YSymbol,
    apply_move,
    base_insert_pool,
    boundary,
    conjugate_sequence,
    empty_sequence,
    insertion_generator,
    is_identity,
    legal_moves,
    scramble,
    search_pair_crossing,
    search_trivialization,
    verify_certificate,
)
from .presentations import GroupPresentation, coset_table, retract
from .relmod import CosetOracle, FreeOracle, RelModElement, is_zero, module_action, module_image
from .words import (
    abelianize,
    conjugate,
    empty_word,
    exponent_sum,
    invert,
    multiply,
    random_word,
    reduce,
)
from .xmod import BatteryResult, ReducibleFixture, _collect


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int | None = None  # None: per-battery defaults
    node_budget: int = 50_000
    coset_budget: int = 2000
    depth: int | None = None
    fixtures_dir: str | None = None

    def count(self, default: int) -> int:
        return default if self.samples is None else self.samples


def _rng(config: RunConfig, battery: str) -> random.Random:
    return random.Random(f"{config.seed}/{battery}")


def _random_sequence(gp: GroupPresentation, rng: random.Random, max_len: int = 4) -> YSequence:
    names = gp.relator_names
    syms = tuple(
        YSymbol(
            names[rng.randrange(len(names))],
            random_word(gp.alphabet, rng, 3),
            rng.choice((1, -1)),
        )
        for _ in range(rng.randrange(max_len + 1))
    )
    return YSequence(gp, syms)


# --- individual batteries -------------------------------------------------------


def battery_word_laws(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    rng = _rng(config, "word-laws")
    n = config.count(1000)
    failures = []
    alphabet = fixtures.presentations["sym3"].alphabet
    for i in range(n):
        raw = [
            words.SignedLetter(rng.randrange(len(alphabet)), rng.choice((1, -1)))
            for _ in range(rng.randrange(8))
        ]
        w = reduce(alphabet, raw)
        if reduce(alphabet, w.letters) != w:
            failures.append(f"sample {i}: reduction is not idempotent")
        u = random_word(alphabet, rng)
        v = random_word(alphabet, rng)
        t = random_word(alphabet, rng)
        if multiply(multiply(u, v), t) != multiply(u, multiply(v, t)):
            failures.append(f"sample {i}: associativity fails")
        if not multiply(u, invert(u)).is_identity:
            failures.append(f"sample {i}: inverse law fails")
        if conjugate(empty_word(alphabet), v) != v:
            failures.append(f"sample {i}: empty conjugation moves a word")
        if conjugate(u, conjugate(t, v)) != conjugate(multiply(u, t), v):
            failures.append(f"sample {i}: conjugation action law fails")
        for g in range(len(alphabet)):
            if exponent_sum(multiply(u, v), g) != exponent_sum(u, g) + exponent_sum(v, g):
                failures.append(f"sample {i}: exponent sum is not additive")
        if abelianize(multiply(u, v)) != tuple(
            a + b for a, b in zip(abelianize(u), abelianize(v))
        ):
            failures.append(f"sample {i}: abelianization is not additive")
    return _collect("word-laws", n, failures)


def battery_retraction(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    rng = _rng(config, "retraction")
    n = config.count(1000)
    failures = []
    for fx in fixtures.reducible_fixtures():
        retr = fx.retraction
        for i in range(n):
            w_small = random_word(retr.small_alphabet, rng, 6)
            if retract(retr, words.embed(w_small, retr.big_alphabet)) != w_small:
                failures.append(
                    f"{fx.presentation.name} sample {i}: retract after embed moved a word"
                )
    return _collect("retraction", n, failures)


def battery_coset_determinism(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    failures = []
    checked = 0
    for name in ("c3", "sym3"):
        gp = fixtures.presentations[name]
        first = coset_table(gp, (), config.coset_budget)
        second = coset_table(gp, (), config.coset_budget)
        checked += 1
        if first is EXHAUSTED or second is EXHAUSTED:
            failures.append(f"{name}: enumeration did not close")
        elif first.rows != second.rows:
            failures.append(f"{name}: two runs disagree")
    return _collect("coset-determinism", checked, failures)


def battery_move_soundness(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    """Boundary invariance of all four moves on random sequences."""
    rng = _rng(config, "move-soundness")
    n = config.count(1000)
    failures = []
    presentations = fixtures.peiffer_presentations()
    for i in range(n):
        gp = presentations[rng.randrange(len(presentations))]
        d = _random_sequence(gp, rng)
        pool = base_insert_pool(gp)
        moves = legal_moves(d, pool)
        if not moves:
            continue
        m = moves[rng.randrange(len(moves))]
        before = boundary(d)
        after = boundary(apply_move(d, m))
        if before != after:
            failures.append(f"sample {i}: {m.kind.value} changed the boundary")
    return _collect("move-soundness", n, failures)


def battery_exchange_involution(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    rng = _rng(config, "exchange-involution")
    n = config.count(500)
    failures = []
    presentations = fixtures.peiffer_presentations()
    for i in range(n):
        gp = presentations[rng.randrange(len(presentations))]
        d = _random_sequence(gp, rng, max_len=5)
        if len(d.symbols) < 2:
            continue
        pos = rng.randrange(len(d.symbols) - 1)
        there = apply_move(d, Move(MoveKind.EXCHANGE_L, pos))
        back = apply_move(there, Move(MoveKind.EXCHANGE_R, pos))
        if back != d:
            failures.append(f"sample {i}: left-then-right exchange is not the identity")
        there = apply_move(d, Move(MoveKind.EXCHANGE_R, pos))
        back = apply_move(there, Move(MoveKind.EXCHANGE_L, pos))
        if back != d:
            failures.append(f"sample {i}: right-then-left exchange is not the identity")
    return _collect("exchange-involution", n, failures)


def battery_centrality(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    """Inserted pairs commute: at the boundary level against whole sequences,
    and as an explicit move search across single symbols."""
    rng = _rng(config, "centrality")
    n = config.count(200)
    failures = []
    presentations = fixtures.peiffer_presentations()
    for i in range(n):
        gp = presentations[rng.randrange(len(presentations))]
        d = _random_sequence(gp, rng)
        pool = base_insert_pool(gp)
        a = pool[rng.randrange(len(pool))]
        g = insertion_generator(a, gp)
        if boundary(d.concat(g)) != boundary(d) or boundary(g.concat(d)) != boundary(d):
            failures.append(f"sample {i}: inserted pair shifted the boundary")
        b = YSymbol(
            gp.relator_names[rng.randrange(len(gp.relator_names))],
            random_word(gp.alphabet, rng, 2),
            rng.choice((1, -1)),
        )
        if search_pair_crossing(gp, b, a, node_budget=64) is None:
            failures.append(f"sample {i}: no crossing certificate within budget")
    return _collect("centrality", n, failures)


def battery_sequence_action(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    rng = _rng(config, "sequence-action")
    n = config.count(500)
    failures = []
    presentations = fixtures.peiffer_presentations()
    for i in range(n):
        gp = presentations[rng.randrange(len(presentations))]
        d = _random_sequence(gp, rng)
        v = random_word(gp.alphabet, rng, 3)
        w = random_word(gp.alphabet, rng, 3)
        if conjugate_sequence(empty_word(gp.alphabet), d) != d:
            failures.append(f"sample {i}: identity conjugation moved the sequence")
        lhs = conjugate_sequence(v, conjugate_sequence(w, d))
        rhs = conjugate_sequence(multiply(v, w), d)
        if lhs != rhs:
            failures.append(f"sample {i}: conjugation action law fails")
        if boundary(conjugate_sequence(w, d)) != conjugate(w, boundary(d)):
            failures.append(f"sample {i}: boundary does not intertwine the action")
    return _collect("sequence-action", n, failures)


def battery_scramble_recover(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    rng = _rng(config, "scramble-recover")
    n = config.count(200)
    failures = []
    found = 0
    presentations = fixtures.peiffer_presentations()
    for i in range(n):
        gp = presentations[rng.randrange(len(presentations))]
        k = rng.randrange(1, 7)
        d, forward = scramble(gp, seed=rng.randrange(1 << 30), k=k)
        if not is_identity(d):
            failures.append(f"seed {i}: scramble output is not an identity sequence")
            continue
        cert = search_trivialization(d, node_budget=config.node_budget, depth_limit=2 * k)
        if cert is EXHAUSTED:
            continue
        if not verify_certificate(d, cert):
            failures.append(f"seed {i}: certificate does not replay to empty")
            continue
        found += 1
    if n and found / n < 0.95:
        failures.append(f"recovery rate {found}/{n} below 95%")
    return _collect("scramble-recover", n, failures, counters=(("found", found),))


def battery_tensor_dominion(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    failures = []
    instances = 0
    for name, m in fixtures.monoids.items():
        if m.size > 5:
            continue
        for sub in actions.all_submonoids(m):
            instances += 1
            uf = actions.tensor_product(m.table, m.table, sub)
            naive = actions.tensor_product_naive(m.table, m.table, sub)
            if uf != naive:
                failures.append(f"{name} U={sorted(sub.elements)}: closures disagree")
                continue
            dom = actions.dominion(m, sub)
            if not sub.elements <= dom:
                failures.append(f"{name} U={sorted(sub.elements)}: dominion misses U")
            if sub.elements == {m.identity} and dom != frozenset({m.identity}):
                failures.append(f"{name}: dominion of the trivial submonoid is not trivial")
            if actions.is_inverse_monoid(sub) and dom != sub.elements:
                failures.append(
                    f"{name} U={sorted(sub.elements)}: inverse submonoid is not closed"
                )
    return _collect("tensor-dominion", instances, failures)


def battery_envelope_probe(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    failures = []
    cyc = fixtures.monoids["cyc_1_2"]
    gp = actions.enveloping_group_presentation(cyc)
    idx = coset_table(gp, (), 100)
    if idx is EXHAUSTED or idx.index != 2:
        failures.append(f"three-element cyclic monoid: envelope index {getattr(idx, 'index', idx)} != 2")
    wd = actions.weak_dominion_membership(cyc, actions.Submonoid(cyc, frozenset({0})), 1, 100)
    if wd is not Tri.NO:
        failures.append(f"weak dominion of the generator should be NO, got {wd.value}")
    for name, expected in (("c3", 3), ("sym3", 6)):
        t = coset_table(fixtures.presentations[name], (), 100)
        if t is EXHAUSTED or t.index != expected:
            failures.append(f"{name}: index {getattr(t, 'index', t)} != {expected}")
    return _collect("envelope-probe", 4, failures)


def battery_insertion_identity(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    """Appending an inserted pair adds exactly twice its basis element."""
    rng = _rng(config, "insertion-identity")
    n = config.count(500)
    failures = []
    presentations = fixtures.peiffer_presentations()
    for i in range(n):
        gp = presentations[rng.randrange(len(presentations))]
        oracle = FreeOracle(gp.alphabet)
        d = _random_sequence(gp, rng)
        a = YSymbol(
            gp.relator_names[rng.randrange(len(gp.relator_names))],
            random_word(gp.alphabet, rng, 3),
            rng.choice((1, -1)),
        )
        extended = d.concat(insertion_generator(a, gp))
        delta = module_image(extended, oracle).subtract(module_image(d, oracle))
        expected = RelModElement.basis(a.relator, a.conjugator, 2)
        if delta != expected:
            failures.append(f"sample {i}: insertion does not add twice the basis element")
    return _collect("insertion-identity", n, failures)


def battery_exchange_keys(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    """Exchanges preserve the module image under a finite-quotient oracle."""
    rng = _rng(config, "exchange-keys")
    n = config.count(200)
    failures = []
    oracles = {
        name: CosetOracle(fixtures.presentations[name], config.coset_budget)
        for name in ("c3", "sym3")
    }
    names = tuple(oracles)
    for i in range(n):
        name = names[rng.randrange(len(names))]
        gp = fixtures.presentations[name]
        oracle = oracles[name]
        d = _random_sequence(gp, rng, max_len=4)
        if len(d.symbols) < 2:
            continue
        pos = rng.randrange(len(d.symbols) - 1)
        kind = MoveKind.EXCHANGE_L if rng.random() < 0.5 else MoveKind.EXCHANGE_R
        before = module_image(d, oracle)
        after = module_image(apply_move(d, Move(kind, pos)), oracle)
        if before != after:
            failures.append(f"sample {i}: exchange moved the module image over {name}")
        w = random_word(gp.alphabet, rng, 3)
        acted = module_action(w, before, oracle)
        back = module_action(invert(w), acted, oracle)
        if back != before:
            failures.append(f"sample {i}: action round trip fails over {name}")
        if is_zero(before.subtract(before), oracle) is not Tri.YES:
            failures.append(f"sample {i}: self-difference is not zero")
    return _collect("exchange-keys", n, failures)


def battery_certificates_roundtrip(config: RunConfig, fixtures: FixtureSet) -> BatteryResult:
    rng = _rng(config, "certificates")
    n = config.count(200)
    failures = []
    presentations = fixtures.peiffer_presentations()
    for i in range(n):
        gp = presentations[rng.randrange(len(presentations))]
        d, forward = scramble(gp, seed=rng.randrange(1 << 30), k=rng.randrange(0, 5))
        try:
            endpoint = peiffer.replay(empty_sequence(gp), forward)
        except peiffer.IllegalMoveError as exc:
            failures.append(f"sample {i}: forward certificate broken: {exc}")
            continue
        if endpoint != d:
            failures.append(f"sample {i}: forward replay misses the scrambled output")
            continue
        backward = peiffer.invert_certificate(empty_sequence(gp), forward)
        if not verify_certificate(d, backward):
            failures.append(f"sample {i}: inverted certificate does not trivialize")
    return _collect("certificates", n, failures)


FIXTURE_BATTERY_TABLE = (
    ("cm-axioms", xmod.check_crossed_module_axioms, 500, False),
    ("derivation-law", xmod.check_derivation_law, 500, True),
    ("regularity", xmod.check_regularity, 500, True),
    ("composition-agreement", xmod.check_composition_formulas, 500, True),
    ("actor-diagram", xmod.check_actor_diagram, 200, True),
    ("action-laws", xmod.check_action_laws, 100, True),
    ("decompose-roundtrip", xmod.check_decompose_roundtrip, 1000, False),
)


def fixture_batteries(fx: ReducibleFixture, config: RunConfig) -> list[BatteryResult]:
    """All sampled structural-law batteries for one reducible fixture, each
    law paired with its deliberately perturbed negative control."""
    out = []
    fixture_name = fx.presentation.name
    for name, fn, default, has_control in FIXTURE_BATTERY_TABLE:
        n = config.count(default)
        result = fn(fx, _rng(config, f"{fixture_name}/{name}"), n)
        out.append(
            BatteryResult(
                f"{fixture_name}/{name}", result.samples, result.failures, result.detail
            )
        )
        if has_control:
            # sensitivity checks need enough draws to dodge degenerate samples,
            # whatever the smoke-mode scale is
            control_n = max(n, 25)
            perturbed = fn(
                fx, _rng(config, f"{fixture_name}/{name}/control"), control_n, perturb=True
            )
            control_ok = perturbed.failures > 0
            out.append(
                BatteryResult(
                    f"{fixture_name}/{name}/negative-control",
                    control_n,
                    0 if control_ok else 1,
                    () if control_ok else ("perturbed formula went undetected",),
                )
            )
    n_proj = config.count(100)
    proj = xmod.check_projection(
        fx,
        _rng(config, f"{fixture_name}/projection"),
        n_proj,
        node_budget=config.node_budget,
    )
    out.append(
        BatteryResult(
            f"{fixture_name}/projection-pipeline",
            proj.samples,
            proj.failures,
            proj.detail,
            proj.counters,
        )
    )
    return out


def battery_xmod(config: RunConfig, fixtures: FixtureSet) -> list[BatteryResult]:
    out = []
    for fx in fixtures.reducible_fixtures():
        out.extend(fixture_batteries(fx, config))
    return out


# --- the suite -------------------------------------------------------------------


@dataclass(frozen=True)
class SuiteReport:
    seed: int
    batteries: tuple[BatteryResult, ...]

    @property
    def passed(self) -> bool:
        return all(b.passed for b in self.batteries)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "batteries": [b.to_json() for b in self.batteries],
        }


def run_suite(config: RunConfig) -> SuiteReport:
    fixtures = load_fixtures(config.fixtures_dir)
    batteries: list[BatteryResult] = [
        battery_word_laws(config, fixtures),
        battery_retraction(config, fixtures),
        battery_coset_determinism(config, fixtures),
        battery_move_soundness(config, fixtures),
        battery_exchange_involution(config, fixtures),
        battery_centrality(config, fixtures),
        battery_sequence_action(config, fixtures),
        battery_certificates_roundtrip(config, fixtures),
        battery_scramble_recover(config, fixtures),
        battery_tensor_dominion(config, fixtures),
        battery_envelope_probe(config, fixtures),
        battery_insertion_identity(config, fixtures),
        battery_exchange_keys(config, fixtures),
    ]
    batteries.extend(battery_xmod(config, fixtures))
    return SuiteReport(config.seed, tuple(batteries))
