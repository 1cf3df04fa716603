import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from app.services.freeword import FreeElement, dagger, sigma, tau, words_of_bidegree, words_up_to_length
from app.services.qfield import LaurentPoly
from app.services.qshuffle import (
    check_associativity,
    check_qserre_shuffle,
    check_recursions_agree,
    clear_memo,
    qserre_expression,
    shuffle,
    shuffle_letter_oracle,
    shuffle_power,
    shuffle_memo,
    shuffle_right,
    shuffle_two_by_two,
    shuffle_words,
)

short_words = st.text(alphabet="xy", max_size=3)


def test_single_letters():
    assert dict(shuffle_words("x", "y")) == {"xy": LaurentPoly.constant(1), "yx": LaurentPoly.monomial(-2)}
    assert dict(shuffle_words("x", "x")) == {"xx": LaurentPoly({0: 1, 2: 1})}


def test_empty_word_is_the_unit(el):
    e = el("xyy + q yx")
    assert shuffle(FreeElement.one(), e) == e
    assert shuffle(e, FreeElement.one()) == e


def test_two_by_two_expansion():
    words = words_of_bidegree(2, 0) + words_of_bidegree(1, 1) + words_of_bidegree(0, 2)
    for u in words:
        for v in words:
            assert shuffle_two_by_two(u, v) == shuffle(FreeElement.word(u), FreeElement.word(v))


def test_letter_insertion_oracles():
    for v in words_up_to_length(7):
        for letter in "xy":
            assert shuffle_letter_oracle(letter, v, "left") == shuffle(FreeElement.word(letter), FreeElement.word(v))
            assert shuffle_letter_oracle(letter, v, "right") == shuffle(FreeElement.word(v), FreeElement.word(letter))


def test_qserre_relations_vanish():
    x, y = FreeElement.word("x"), FreeElement.word("y")
    assert not qserre_expression(x, y)
    assert not qserre_expression(y, x)
    assert all(result.status == "pass" for result in check_qserre_shuffle())


def test_non_laurent_coefficients(el):
    a = el("1/(q + 1) x")
    assert shuffle(a, el("y")) == shuffle(el("x"), el("y")) * a.coefficient("x")


@given(short_words, short_words, short_words)
@hypothesis_settings(max_examples=40, deadline=None)
def test_associative(u, v, w):
    a, b, c = FreeElement.word(u), FreeElement.word(v), FreeElement.word(w)
    assert shuffle(shuffle(a, b), c) == shuffle(a, shuffle(b, c))


@given(short_words, short_words)
@hypothesis_settings(deadline=None)
def test_symmetries_respect_the_product(u, v):
    a, b = FreeElement.word(u), FreeElement.word(v)
    assert sigma(shuffle(a, b)) == shuffle(sigma(a), sigma(b))
    assert dagger(shuffle(a, b)) == shuffle(dagger(b), dagger(a))
    assert tau(shuffle(a, b)) == shuffle(tau(b), tau(a))
    assert shuffle_right(a, b) == shuffle(a, b)


def test_exhaustive_checks_pass():
    assert check_associativity(4).status == "pass"
    assert check_recursions_agree(6).status == "pass"


def test_memo_skips_long_pairs():
    clear_memo()
    assert len(shuffle_memo) == 0
    long_word = "xy" * (shuffle_memo.cap // 2 + 1)
    shuffle_words(long_word, "x")
    assert shuffle_memo.get((long_word, "x")) is None
    assert shuffle_memo.get(("y", "x")) is not None


def test_powers_of_a_letter():
    x = FreeElement.word("x")
    two = LaurentPoly({0: 1, 2: 1})
    three = LaurentPoly({0: 1, 2: 1, 4: 1})
    assert shuffle_power(x, 2) == FreeElement({"xx": two})
    assert shuffle_power(x, 3) == FreeElement({"xxx": two * three})


def test_letter_against_a_block_of_xs(el):
    y, xxx = FreeElement.word("y"), FreeElement.word("xxx")
    assert shuffle(y, xxx) == el("yxxx + q^-2 xyxx + q^-4 xxyx + q^-6 xxxy")
    assert shuffle(xxx, y) == el("q^-6 yxxx + q^-4 xyxx + q^-2 xxyx + xxxy")


def test_associativity_to_length_seven():
    result = check_associativity(7)
    assert result.status == "pass"
    assert result.details["maxlen"] == 7


@pytest.mark.slow
def test_associativity_to_length_nine():
    assert check_associativity(9).status == "pass"
