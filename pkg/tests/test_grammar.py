import pytest

from app.services.grammar import ExpressionSyntaxError, ScalarAlgebra, parse_expression, split_equation, tokenize
from app.services.qfield import LaurentPoly, parse_scalar, qint


def test_tokenize_kinds():
    assert [t.kind for t in tokenize("[3]_q xy + 2*q^-1")] == ["qint", "name", "op", "int", "op", "name", "op", "op", "int"]


def test_juxtaposition_and_star_agree():
    assert parse_scalar("2 q") == parse_scalar("2*q")
    assert parse_scalar("[2]_q [2]_q") == qint(3) + 1


def test_precedence():
    assert parse_expression("1 + 2 * q^2", ScalarAlgebra()) == LaurentPoly({0: 1, 2: 2})
    assert parse_expression("-q^2", ScalarAlgebra()) == LaurentPoly.monomial(2, -1)


def test_division_by_a_scalar_expression():
    assert parse_scalar("(q^2 - q^-2)/(q - q^-1)") == qint(2)


@pytest.mark.parametrize("text", ["", "q +", "x**", ")", "(q", "q^x", "1/0", "z", "q $ 2"])
def test_malformed_scalars(text):
    with pytest.raises(ExpressionSyntaxError):
        parse_scalar(text)


def test_split_equation():
    assert split_equation("K Aell = q^2 Aell K") == ("K Aell", "q^2 Aell K")
    assert split_equation("AstarL BstarL") == ("AstarL BstarL", "0")
    with pytest.raises(ExpressionSyntaxError):
        split_equation("a = b = c")
    with pytest.raises(ExpressionSyntaxError):
        split_equation(" = b")
