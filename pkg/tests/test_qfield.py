import pytest
from hypothesis import given, strategies as st

from app.services.qfield import (
    LaurentPoly,
    Q_MINUS_Q_INV,
    QFieldError,
    RatFunc,
    parse_scalar,
    qint,
    render_laurent,
    render_scalar,
)

laurent_polys = st.dictionaries(st.integers(-4, 4), st.integers(-3, 3), max_size=4).map(LaurentPoly)


def test_qint_values():
    assert qint(0) == 0
    assert qint(1) == 1
    assert qint(3) == LaurentPoly({2: 1, 0: 1, -2: 1})


def test_qint_rejects_negative():
    with pytest.raises(QFieldError):
        qint(-1)


def test_render_recognizes_qints():
    assert render_laurent(qint(2)) == "[2]_q"
    assert render_laurent(-qint(3)) == "-[3]_q"
    assert render_laurent(qint(3), qints=False) == "q^2 + 1 + q^-2"
    assert render_laurent(LaurentPoly({2: 1, -2: -1})) == "q^2 - q^-2"
    assert render_laurent(LaurentPoly({})) == "0"


def test_quotient_that_is_laurent():
    value = RatFunc.coerce(LaurentPoly({2: 1, -2: -1})) / Q_MINUS_Q_INV
    assert value.is_laurent()
    assert value == qint(2)
    assert value.as_laurent() == qint(2)


def test_quotient_that_is_not_laurent():
    value = parse_scalar("1/(q + 1)")
    assert not value.is_laurent()
    assert render_scalar(value) == "1/(q + 1)"
    with pytest.raises(QFieldError):
        value.as_laurent()
    assert value * LaurentPoly({1: 1, 0: 1}) == 1


def test_parse_scalar_forms():
    assert parse_scalar("[3]_q") == qint(3)
    assert parse_scalar("q^-2") == LaurentPoly.monomial(-2)
    assert parse_scalar("(q - q^-1)^2") == LaurentPoly({2: 1, 0: -2, -2: 1})
    assert parse_scalar("-2") == -2


def test_division_by_zero():
    with pytest.raises(QFieldError):
        RatFunc(1) / 0


def test_only_units_invert():
    assert LaurentPoly.monomial(3) ** -1 == LaurentPoly.monomial(-3)
    with pytest.raises(QFieldError):
        qint(2) ** -1


def test_num_and_den_are_coprime_laurent():
    value = RatFunc.coerce(qint(2)) / RatFunc.coerce(qint(4))
    assert value.num * qint(4) == value.den * qint(2)


@given(laurent_polys, laurent_polys)
def test_fast_path_matches_field(a, b):
    assert (a * b).to_ratfunc() == a.to_ratfunc() * b.to_ratfunc()
    assert (a + b).to_ratfunc() == a.to_ratfunc() + b.to_ratfunc()
    assert (a - b).to_ratfunc() == a.to_ratfunc() - b.to_ratfunc()


@given(laurent_polys)
def test_laurent_survives_the_field(a):
    value = a.to_ratfunc()
    assert value.is_laurent()
    assert value.as_laurent() == a


@given(laurent_polys)
def test_equal_scalars_hash_alike(a):
    value = a.to_ratfunc()
    assert hash(value) == hash(a)
    assert {a: "laurent"}[value] == "laurent"


def test_constants_hash_like_ints():
    assert hash(LaurentPoly.constant(3)) == hash(3) == hash(RatFunc(3))
    assert len({0, LaurentPoly(), RatFunc(0)}) == 1
    quotient = RatFunc.coerce(LaurentPoly({2: 1, -2: -1})) / Q_MINUS_Q_INV
    assert quotient in {qint(2)}
