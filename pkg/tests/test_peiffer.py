import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asphere.partial import EXHAUSTED
from asphere.peiffer import (
    Certificate,
    FormalWord,
    IllegalMoveError,
    Move,
    MoveKind,
    NotIdentityError,
    YSequence,
    YSymbol,
    apply_move,
    base_insert_pool,
    boundary,
    certificate_from_json,
    certificate_to_json,
    conjugate_sequence,
    dynamic_insert_pool,
    empty_sequence,
    fiber_pair,
    formal_boundary,
    insertion_generator,
    inverse_sequence,
    invert_certificate,
    is_identity,
    legal_moves,
    replay,
    scramble,
    search_pair_crossing,
    search_trivialization,
    verify_certificate,
    ysequence_from_json,
    ysequence_to_json,
)
from asphere.presentations import parse
from asphere.words import empty_word, invert, random_word, word_from_text, word_to_text

GP = parse("group P\ngens a b\nrel r = a b\nrel s = a a b^-1\n")
ONE = empty_word(GP.alphabet)
A = word_from_text(GP.alphabet, "a")


def sym(rel="r", conj=ONE, sign=1):
    return YSymbol(rel, conj, sign)


def seq(*symbols):
    return YSequence(GP, tuple(symbols))


def random_sequence(rng, max_len=4):
    names = GP.relator_names
    return YSequence(
        GP,
        tuple(
            YSymbol(rng.choice(names), random_word(GP.alphabet, rng, 3), rng.choice((1, -1)))
            for _ in range(rng.randrange(max_len + 1))
        ),
    )


class TestBoundary:
    def test_empty(self):
        assert boundary(empty_sequence(GP)).is_identity

    def test_single_symbol(self):
        assert word_to_text(boundary(seq(sym()))) == "a b"

    def test_inverse_pair_cancels(self):
        assert boundary(seq(sym(), sym(sign=-1))).is_identity

    def test_conjugated_symbol(self):
        assert word_to_text(boundary(seq(sym(conj=A)))) == "a a b a^-1"

    def test_is_identity_examples(self):
        assert is_identity(empty_sequence(GP))
        assert not is_identity(seq(sym()))
        assert is_identity(seq(sym(conj=A), sym(conj=A, sign=-1)))

    def test_unknown_relator_rejected(self):
        with pytest.raises(KeyError):
            seq(YSymbol("nope", ONE, 1))


class TestMoves:
    def test_exchange_left_twists_by_boundary(self):
        # the slid symbol picks up the first symbol's whole boundary word
        d = seq(sym(), sym())
        e = apply_move(d, Move(MoveKind.EXCHANGE_L, 0))
        assert e.symbols[0] == YSymbol("r", word_from_text(GP.alphabet, "a b"), 1)
        assert e.symbols[1] == sym()

    def test_exchange_right_twists_by_inverse_boundary(self):
        d = seq(sym(), sym("s"))
        e = apply_move(d, Move(MoveKind.EXCHANGE_R, 0))
        assert e.symbols[0] == sym("s")
        assert e.symbols[1].relator == "r"
        assert e.symbols[1].conjugator == boundary(seq(sym("s", sign=-1)))

    def test_delete_requires_exact_pair(self):
        ok = seq(sym(conj=A), sym(conj=A, sign=-1))
        assert apply_move(ok, Move(MoveKind.DELETE, 0)) == empty_sequence(GP)
        bad = seq(sym(conj=A), sym(sign=-1))
        with pytest.raises(IllegalMoveError):
            apply_move(bad, Move(MoveKind.DELETE, 0))

    def test_insert_adds_adjacent_pair(self):
        d = apply_move(empty_sequence(GP), Move(MoveKind.INSERT, 0, sym(conj=A)))
        assert d == seq(sym(conj=A), sym(conj=A, sign=-1))

    def test_out_of_range_rejected(self):
        with pytest.raises(IllegalMoveError):
            apply_move(seq(sym()), Move(MoveKind.EXCHANGE_L, 0))
        with pytest.raises(IllegalMoveError):
            apply_move(empty_sequence(GP), Move(MoveKind.INSERT, 1, sym()))

    def test_boundary_invariance_samples(self):
        rng = random.Random(0)
        pool = base_insert_pool(GP)
        for _ in range(1000):
            d = random_sequence(rng)
            moves = legal_moves(d, pool)
            if not moves:
                continue
            m = rng.choice(moves)
            assert boundary(apply_move(d, m)) == boundary(d)

    def test_exchange_involution_samples(self):
        rng = random.Random(1)
        for _ in range(500):
            d = random_sequence(rng)
            if len(d.symbols) < 2:
                continue
            i = rng.randrange(len(d.symbols) - 1)
            assert apply_move(apply_move(d, Move(MoveKind.EXCHANGE_L, i)), Move(MoveKind.EXCHANGE_R, i)) == d
            assert apply_move(apply_move(d, Move(MoveKind.EXCHANGE_R, i)), Move(MoveKind.EXCHANGE_L, i)) == d


class TestLegalMoves:
    def test_empty_sequence_no_pool(self):
        assert legal_moves(empty_sequence(GP), ()) == []

    def test_two_symbols_no_delete(self):
        moves = legal_moves(seq(sym(), sym("s")), ())
        assert [m.kind for m in moves] == [MoveKind.EXCHANGE_L, MoveKind.EXCHANGE_R]
        assert [m.pos for m in moves] == [0, 0]

    def test_deletable_pair_counted_by_hand(self):
        moves = legal_moves(seq(sym(conj=A), sym(conj=A, sign=-1)), ())
        assert len(moves) == 3
        assert moves[0].kind == MoveKind.DELETE

    def test_insert_positions(self):
        pool = [sym()]
        moves = legal_moves(seq(sym()), pool)
        inserts = [m for m in moves if m.kind == MoveKind.INSERT]
        assert [m.pos for m in inserts] == [0, 1]


class TestScramble:
    def test_zero_moves(self):
        d, cert = scramble(GP, seed=0, k=0)
        assert d == empty_sequence(GP) and cert.moves == ()

    def test_one_move_is_an_insert(self):
        d, cert = scramble(GP, seed=0, k=1)
        assert len(d.symbols) == 2
        assert d.symbols[1] == d.symbols[0].inverse()
        assert cert.moves[0].kind == MoveKind.INSERT

    @given(st.integers(0, 10_000), st.integers(0, 6))
    @settings(max_examples=60, deadline=None)
    def test_always_identity(self, seed, k):
        d, cert = scramble(GP, seed=seed, k=k)
        assert is_identity(d)
        assert replay(empty_sequence(GP), cert) == d


class TestSearch:
    def test_empty_sequence(self):
        cert = search_trivialization(empty_sequence(GP))
        assert cert.moves == ()

    def test_single_delete(self):
        d = seq(sym(conj=A), sym(conj=A, sign=-1))
        cert = search_trivialization(d)
        assert len(cert.moves) == 1 and cert.moves[0].kind == MoveKind.DELETE
        assert verify_certificate(d, cert)

    def test_rejects_non_identity(self):
        with pytest.raises(NotIdentityError):
            search_trivialization(seq(sym()))

    def test_scramble_recover_rate(self):
        rng = random.Random(7)
        found = 0
        total = 60
        for _ in range(total):
            k = rng.randrange(1, 7)
            d, _ = scramble(GP, seed=rng.randrange(1 << 30), k=k)
            cert = search_trivialization(d, node_budget=50_000, depth_limit=2 * k)
            if cert is not EXHAUSTED:
                assert verify_certificate(d, cert)
                found += 1
        assert found / total >= 0.95

    def test_deterministic(self):
        d, _ = scramble(GP, seed=11, k=4)
        c1 = search_trivialization(d)
        c2 = search_trivialization(d)
        assert c1 == c2

    def test_certificate_is_shortest_then_lexicographically_least(self):
        # two deletable pairs: the minimal certificates are two deletions,
        # and the canonical one deletes at position 0 first
        d = seq(sym(conj=A), sym(conj=A, sign=-1), sym("s"), sym("s", sign=-1))
        cert = search_trivialization(d)
        assert [(m.kind, m.pos) for m in cert.moves] == [
            (MoveKind.DELETE, 0),
            (MoveKind.DELETE, 0),
        ]

    def test_odd_length_identity_exhausts_immediately(self):
        # r * r * (r r)^-1-like odd configurations can be identities but
        # never reach the empty sequence: length parity is move-invariant
        gp = parse("group Q\ngens a\nrel r = a\nrel s = a a\n")
        one = empty_word(gp.alphabet)
        d = YSequence(
            gp,
            (YSymbol("r", one, 1), YSymbol("r", one, 1), YSymbol("s", one, -1)),
        )
        assert is_identity(d)
        assert search_trivialization(d, node_budget=10_000, depth_limit=8) is EXHAUSTED


class TestCertificates:
    def test_inverted_scramble_certificate_trivializes(self):
        for seed in range(30):
            d, forward = scramble(GP, seed=seed, k=4)
            backward = invert_certificate(empty_sequence(GP), forward)
            assert verify_certificate(d, backward)

    def test_out_of_range_move_fails_at_step_zero(self):
        report = verify_certificate(seq(sym()), Certificate((Move(MoveKind.DELETE, 5),)))
        assert not report
        assert report.failed_step == 0

    def test_leftover_symbols_fail(self):
        report = verify_certificate(seq(sym()), Certificate(()))
        assert not report and "length" in report.reason

    def test_json_round_trip(self):
        d, cert = scramble(GP, seed=3, k=3)
        as_json = json.loads(json.dumps(certificate_to_json(cert)))
        assert certificate_from_json(GP, as_json) == cert
        seq_json = json.loads(json.dumps(ysequence_to_json(d)))
        assert ysequence_from_json(GP, seq_json) == d


class TestSequenceOperations:
    def test_conjugate_by_identity(self):
        rng = random.Random(2)
        d = random_sequence(rng)
        assert conjugate_sequence(ONE, d) == d

    def test_conjugate_single(self):
        assert conjugate_sequence(A, seq(sym())) == seq(sym(conj=A))

    def test_action_composition(self):
        rng = random.Random(3)
        for _ in range(500):
            d = random_sequence(rng)
            v, w = random_word(GP.alphabet, rng, 3), random_word(GP.alphabet, rng, 3)
            from asphere.words import multiply

            assert conjugate_sequence(v, conjugate_sequence(w, d)) == conjugate_sequence(
                multiply(v, w), d
            )

    def test_identity_preserved_under_conjugation(self):
        rng = random.Random(4)
        for seed in range(50):
            d, _ = scramble(GP, seed=seed, k=3)
            w = random_word(GP.alphabet, rng, 4)
            assert is_identity(conjugate_sequence(w, d))

    def test_fiber_pair_of_empty(self):
        assert fiber_pair(A, empty_sequence(GP)) == empty_sequence(GP)

    def test_fiber_pair_identity_boundary(self):
        d = seq(sym(), sym(sign=-1))
        n0 = boundary(seq(sym()))
        result = fiber_pair(n0, d)
        assert len(result.symbols) == 4
        assert is_identity(result)

    def test_fiber_pair_rejects_non_identity(self):
        with pytest.raises(NotIdentityError):
            fiber_pair(A, seq(sym()))

    def test_inverse_sequence_shape(self):
        d = seq(sym(), sym("s", conj=A))
        inv = inverse_sequence(d)
        assert inv.symbols[0] == YSymbol("s", A, -1)
        assert inv.symbols[1] == YSymbol("r", ONE, -1)


class TestInsertionGenerator:
    def test_shape(self):
        g = insertion_generator(sym(), GP)
        assert g.symbols == (sym(), sym(sign=-1))

    def test_boundary_empty(self):
        rng = random.Random(5)
        pool = base_insert_pool(GP)
        for a in pool:
            assert boundary(insertion_generator(a, GP)).is_identity

    def test_single_delete_trivializes(self):
        g = insertion_generator(sym(conj=A), GP)
        cert = search_trivialization(g)
        assert len(cert.moves) == 1


class TestPairCrossing:
    def test_crossing_found_within_budget(self):
        rng = random.Random(6)
        pool = base_insert_pool(GP)
        for _ in range(200):
            a = rng.choice(pool)
            b = YSymbol(
                rng.choice(GP.relator_names), random_word(GP.alphabet, rng, 2), rng.choice((1, -1))
            )
            assert search_pair_crossing(GP, b, a, node_budget=64) is not None

    def test_boundary_level_centrality(self):
        rng = random.Random(8)
        pool = base_insert_pool(GP)
        for _ in range(200):
            d = random_sequence(rng)
            g = insertion_generator(rng.choice(pool), GP)
            assert boundary(d.concat(g)) == boundary(d)
            assert boundary(g.concat(d)) == boundary(d)


class TestFormalWords:
    def test_empty(self):
        assert formal_boundary(FormalWord(GP, ())).is_identity

    def test_formal_inverse_maps_to_inverted_boundary(self):
        fw = FormalWord(GP, ((sym(), -1),))
        assert formal_boundary(fw) == invert(boundary(seq(sym())))

    def test_symbol_times_formal_inverse_collapses(self):
        fw = FormalWord(GP, ((sym(conj=A), 1), (sym(conj=A), -1)))
        assert formal_boundary(fw).is_identity

    def test_no_cancellation_is_performed(self):
        # the flipped-sign symbol and the formal inverse stay distinct entries
        fw = FormalWord(GP, ((sym(), 1), (sym(sign=-1), 1)))
        assert len(fw.entries) == 2
        assert formal_boundary(fw).is_identity


class TestDynamicPool:
    def test_contains_present_conjugators(self):
        d = seq(sym(conj=A))
        pool = dynamic_insert_pool(d)
        assert sym(conj=A) in pool
        assert sym(conj=A, sign=-1) in pool

    def test_cap_filters_long_conjugators(self):
        long_word = word_from_text(GP.alphabet, "a b a b a b")
        d = seq(sym(conj=long_word))
        assert all(len(s.conjugator.letters) <= 2 for s in dynamic_insert_pool(d, conj_cap=2))
