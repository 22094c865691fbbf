import random

import pytest
from hypothesis import given

from asphere.words import (
    Alphabet,
    AlphabetError,
    FreeWord,
    SignedLetter,
    WordSyntaxError,
    abelianize,
    conjugate,
    embed,
    empty_word,
    exponent_sum,
    invert,
    monoid_word_from_text,
    multiply,
    random_word,
    reduce,
    word_from_text,
    word_to_text,
)

from conftest import raw_letters

AB = Alphabet(("a", "b"))


def naive_reduce(letters):
    """Oracle: repeat single-pass cancellation until nothing changes."""
    current = list(letters)
    while True:
        out = []
        i = 0
        changed = False
        while i < len(current):
            if (
                i + 1 < len(current)
                and current[i][0] == current[i + 1][0]
                and current[i][1] == -current[i + 1][1]
            ):
                i += 2
                changed = True
            else:
                out.append(current[i])
                i += 1
        current = out
        if not changed:
            return tuple(current)


def w(text):
    return word_from_text(AB, text)


class TestAlphabet:
    def test_rejects_duplicates(self):
        with pytest.raises(AlphabetError):
            Alphabet(("a", "a"))

    def test_rejects_bad_names(self):
        with pytest.raises(AlphabetError):
            Alphabet(("1x",))
        with pytest.raises(AlphabetError):
            Alphabet(("a-b",))

    def test_order_is_observable(self):
        assert Alphabet(("b", "a")).index("b") == 0


class TestReduce:
    def test_adjacent_pair_cancels(self):
        assert reduce(AB, [SignedLetter(0, 1), SignedLetter(0, -1), SignedLetter(1, 1)]) == w("b")

    def test_empty_is_identity(self):
        assert reduce(AB, []) == empty_word(AB)

    def test_nested_cancellation(self):
        # oracle: naive cancellation to fixpoint
        raw = [SignedLetter(0, 1), SignedLetter(1, 1), SignedLetter(1, -1), SignedLetter(0, -1), SignedLetter(0, 1)]
        assert naive_reduce(raw) == (SignedLetter(0, 1),)
        assert reduce(AB, raw) == w("a")

    def test_unknown_letter_rejected(self):
        with pytest.raises(AlphabetError):
            reduce(AB, [SignedLetter(5, 1)])

    @given(raw_letters(2))
    def test_matches_naive_oracle(self, raw):
        assert reduce(AB, raw).letters == naive_reduce(raw)

    @given(raw_letters(2))
    def test_idempotent(self, raw):
        once = reduce(AB, raw)
        assert reduce(AB, once.letters) == once


class TestMultiply:
    def test_inverse_pair(self):
        assert multiply(w("a"), w("a^-1")) == empty_word(AB)

    def test_identity_law(self):
        assert multiply(empty_word(AB), w("b")) == w("b")

    def test_cancellation_across_the_seam(self):
        # oracle: reduce of the concatenation
        u, v = w("a b"), w("b^-1 a")
        assert multiply(u, v) == reduce(AB, u.letters + v.letters)
        assert word_to_text(multiply(u, v)) == "a a"

    def test_alphabet_mismatch(self):
        other = Alphabet(("x",))
        with pytest.raises(AlphabetError):
            multiply(w("a"), empty_word(other))

    @given(raw_letters(2), raw_letters(2), raw_letters(2))
    def test_associative(self, r1, r2, r3):
        u, v, t = (reduce(AB, r) for r in (r1, r2, r3))
        assert multiply(multiply(u, v), t) == multiply(u, multiply(v, t))

    @given(raw_letters(2))
    def test_inverse_law(self, raw):
        u = reduce(AB, raw)
        assert multiply(u, invert(u)).is_identity


class TestInvert:
    def test_reverse_and_flip(self):
        assert invert(w("a b^-1")) == w("b a^-1")

    def test_empty(self):
        assert invert(empty_word(AB)).is_identity

    def test_square(self):
        assert invert(w("a a")) == w("a^-1 a^-1")


class TestConjugate:
    def test_by_identity(self):
        assert conjugate(empty_word(AB), w("b")) == w("b")

    def test_no_cancellation(self):
        assert conjugate(w("a"), w("b")) == w("a b a^-1")

    def test_self_conjugation_fixes(self):
        assert conjugate(w("a"), w("a")) == w("a")

    def test_left_action(self):
        rng = random.Random(0)
        for _ in range(1000):
            u = random_word(AB, rng)
            v = random_word(AB, rng)
            t = random_word(AB, rng)
            assert conjugate(u, conjugate(t, v)) == conjugate(multiply(u, t), v)


class TestExponentAndAbelianization:
    def test_balanced(self):
        assert exponent_sum(w("a b a^-1"), "a") == 0

    def test_single(self):
        z = Alphabet(("z", "a"))
        assert exponent_sum(word_from_text(z, "z a"), "z") == 1

    def test_count_by_scan(self):
        word = w("a a b^-1 a")
        assert exponent_sum(word, "a") == sum(s for l, s in word.letters if l == 0) == 3

    def test_abelianize_examples(self):
        assert abelianize(w("a b a^-1")) == (0, 1)
        assert abelianize(empty_word(AB)) == (0, 0)
        assert abelianize(w("a a b^-1")) == (2, -1)

    def test_homomorphisms(self):
        rng = random.Random(1)
        for _ in range(1000):
            u, v = random_word(AB, rng), random_word(AB, rng)
            uv = multiply(u, v)
            assert abelianize(uv) == tuple(
                x + y for x, y in zip(abelianize(u), abelianize(v))
            )
            assert exponent_sum(uv, "b") == exponent_sum(u, "b") + exponent_sum(v, "b")


class TestEmbedAndText:
    def test_embed_identity_on_shared_names(self):
        big = Alphabet(("a", "b", "z"))
        assert word_to_text(embed(w("a b^-1"), big)) == "a b^-1"

    def test_embed_requires_subset(self):
        with pytest.raises(AlphabetError):
            embed(w("a"), Alphabet(("x", "y")))

    def test_round_trip(self):
        for text in ("1", "a", "a b^-1 a", "b b b"):
            assert word_to_text(word_from_text(AB, text)) == text

    def test_rejects_general_exponents(self):
        with pytest.raises(WordSyntaxError):
            word_from_text(AB, "a^2")

    def test_monoid_word_keeps_raw_letters(self):
        mw = monoid_word_from_text(AB, "a a a^-1")
        assert len(mw.letters) == 3
        assert mw.as_free() == w("a")

    def test_monoid_word_can_forbid_signs(self):
        with pytest.raises(WordSyntaxError):
            monoid_word_from_text(AB, "a^-1", allow_signs=False)


def test_freeword_rejects_unreduced_letters():
    with pytest.raises(ValueError):
        FreeWord(AB, (SignedLetter(0, 1), SignedLetter(0, -1)))
