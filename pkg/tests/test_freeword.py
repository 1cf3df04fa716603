import pytest

from app.services.freeword import (
    INHOMOGENEOUS,
    FreeElement,
    FreeWordError,
    bidegrees_up_to,
    bold_v_decomposition,
    concat_mul,
    dagger_word,
    in_bold_v,
    render_element,
    sigma_word,
    tau_word,
    words_of_bidegree,
    words_up_to_length,
)
from app.services.grammar import ExpressionSyntaxError
from app.services.qfield import LaurentPoly, qint


def test_words_of_bidegree():
    assert words_of_bidegree(1, 1) == ("xy", "yx")
    assert len(words_of_bidegree(3, 2)) == 10
    assert words_of_bidegree(0, 0) == ("",)
    assert words_of_bidegree(-1, 2) == ()


def test_words_and_bidegrees_up_to():
    assert len(words_up_to_length(3)) == 15
    assert bidegrees_up_to(2) == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]


def test_word_symmetries():
    assert sigma_word("xxy") == "yyx"
    assert dagger_word("xxy") == "yxx"
    assert tau_word("xxy") == "xyy"


@pytest.mark.parametrize("word, allowed", [("", True), ("x", True), ("xyxx", True), ("y", False), ("xx", False), ("xxy", False)])
def test_allowed_words(word, allowed):
    assert in_bold_v(word) is allowed


def test_allowed_word_decomposition():
    assert bold_v_decomposition("") == "one"
    assert bold_v_decomposition("x") == "x"
    assert bold_v_decomposition("xyy") == "xy-prefixed"
    assert bold_v_decomposition("yx") is None


def test_parse_and_render(el):
    e = el("q^-2 * yx + xy")
    assert e.coefficient("yx") == LaurentPoly.monomial(-2)
    assert render_element(e) == "xy + q^-2 * yx"
    assert render_element(el("x - y")) == "x - y"
    assert render_element(el("xyxyy + [3]_q xyyxy")) == "xyxyy + [3]_q * xyyxy"
    assert render_element(el("(q + 1) xy")) == "(q + 1) * xy"
    assert render_element(el("1")) == "1"
    assert render_element(FreeElement.zero()) == "0"


def test_parse_rejects_other_letters(el):
    with pytest.raises(ExpressionSyntaxError):
        el("xz")
    with pytest.raises(FreeWordError):
        FreeElement({"xz": 1})


def test_linear_operations(el):
    e = el("xy + [2]_q yx")
    assert not (e - e)
    assert e * 0 == FreeElement.zero()
    assert (e * qint(2)).coefficient("yx") == qint(2) * qint(2)
    assert e + (-e) == FreeElement.zero()


def test_bidegrees(el):
    assert el("xy + yx").bidegree() == (1, 1)
    assert el("xy + x").bidegree() == INHOMOGENEOUS
    assert list(el("xy + x").homogeneous_parts()) == [(1, 0), (1, 1)]
    with pytest.raises(FreeWordError):
        FreeElement.zero().bidegree()


def test_concatenation(el):
    assert concat_mul(el("x + y"), el("x")) == el("xx + yx")
    assert concat_mul(FreeElement.one(), el("xy")) == el("xy")
