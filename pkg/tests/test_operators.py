import pytest

from app.services.freeword import FreeElement, FreeWordError, words_up_to_length
from app.services.grammar import ExpressionSyntaxError
from app.services.operators import (
    OperatorId,
    SWAPS,
    apply,
    apply_expr,
    apply_sequence,
    check_appendixA_global,
    check_appendixA_onU,
    check_grading_shifts,
    check_intertwiners,
    check_local_nilpotency,
    check_starred_kernel,
    check_xy_commutations,
    parse_operator_expr,
    reach_one,
)
from app.services.qfield import LaurentPoly

Op = OperatorId


def statuses(results):
    return {result.status for result in results}


def test_deletions(el):
    assert apply(Op.AstarL, el("xy + yx")) == el("y")
    assert apply(Op.BstarR, el("xy + yx")) == el("x")
    assert apply(Op.AstarL, FreeElement.one()) == FreeElement.zero()


def test_multiplications(el):
    assert apply(Op.Aell, el("x")) == el("(1 + q^2) xx")
    assert apply(Op.Ar, el("y")) == el("yx + q^-2 xy")
    assert apply(Op.Bell, el("x")) == el("yx + q^-2 xy")


def test_gradings(el):
    assert apply(Op.K, el("x")) == el("q^2 x")
    assert apply(Op.K, el("xy")) == el("xy")
    assert apply(Op.Yinv, el("yy")) == el("q^-2 yy")
    assert apply(Op.Sigma, el("xxy")) == el("yyx")
    assert apply(Op.Tau, el("xxy")) == el("xyy")


def test_weyl_relation_on_words():
    relation = parse_operator_expr("AstarL Aell - q^2 Aell AstarL")
    for word in words_up_to_length(4):
        assert apply_expr(relation, FreeElement.word(word)) == FreeElement.word(word)


def test_composition_reads_right_to_left(el):
    # delete first, then multiply: x -> 1 -> x
    assert apply_expr(parse_operator_expr("Aell AstarL"), el("x")) == el("x")
    # multiply first: x -> (1 + q^2) xx -> (1 + q^2) x
    assert apply_expr(parse_operator_expr("AstarL Aell"), el("x")) == el("(1 + q^2) x")


def test_unknown_operator():
    with pytest.raises(ExpressionSyntaxError):
        parse_operator_expr("AstarL Foo")


def test_relation_suites_pass():
    assert statuses(check_appendixA_global(4)) == {"pass"}
    assert statuses(check_xy_commutations(4)) == {"pass"}
    assert statuses(check_appendixA_onU(4)) <= {"pass", "info"}


def test_first_on_u_relation_fails_off_the_subalgebra():
    info = check_appendixA_onU(2)[-1]
    assert info.status == "info"
    assert info.details["value"] == "1"


def test_intertwiners_and_shifts():
    assert statuses(check_intertwiners(4)) == {"pass"}
    assert statuses(check_grading_shifts(4)) == {"pass"}
    assert statuses(check_local_nilpotency(4)) == {"pass"}
    assert check_starred_kernel(4).status == "pass"


def test_swaps_are_involutions():
    for table in SWAPS.values():
        for op, partner in table.items():
            assert table[partner] is op


@pytest.mark.parametrize("side", ["left", "right"])
def test_reach_one(el, side):
    e = el("xyy + [2]_q yxy - q xxy")
    steps = reach_one(e, side)
    end = apply_sequence(steps, e)
    assert end.support() == [""]
    assert len(steps) == 3


def test_reach_one_rejects_zero():
    with pytest.raises(FreeWordError):
        reach_one(FreeElement.zero())


def test_scaled_expression(el):
    expr = parse_operator_expr("(q Ar Kinv - q^-1 Aell)/(q - q^-1)")
    assert apply_expr(expr, FreeElement.one()) == el("x")
    assert apply_expr(expr, el("x")) == FreeElement.zero()
    assert apply_expr(parse_operator_expr("q I"), el("y")) == el("y") * LaurentPoly.monomial(1)
