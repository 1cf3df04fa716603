import pytest

from app.services.freeword import FreeElement
from app.services.qfield import LaurentPoly
from app.services.repmodule import (
    GeneratorId,
    RepModuleError,
    act,
    action_table,
    bold_dims_table,
    bold_u_by_generation,
    bold_u_by_intersection,
    bold_u_cache,
    bold_v_closure_check,
    bold_v_decomposition_check,
    check_basic_module,
    f_numerator_oracle,
    highest_weight_check,
    reach_one_check,
    variant_action_check,
    variant_basic_module_check,
    verify_presentation,
    weight,
    weight_eigenvalue_check,
)
from app.services.subalgebra import SubalgebraError

G = GeneratorId


def assert_all_pass(results):
    failing = [result.name for result in results if result.status == "fail"]
    assert not failing


def test_lowering_on_small_vectors(el):
    one = FreeElement.one()
    assert act(G.F0, one) == el("x")
    assert act(G.F1, one) == FreeElement.zero()
    assert act(G.F1, el("x")) == el("[2]_q xy")
    assert act(G.F0, el("xyy")) == el("xyxy + [3]_q xyyx")


def test_raising_deletes_the_last_letter(el):
    assert act(G.E0, el("xyx")) == el("xy")
    assert act(G.E1, el("xyx")) == FreeElement.zero()
    assert act(G.E1, el("xyxyy + xyyxy")) == el("xyxy + xyyx")


def test_diagonal_generators(el):
    assert act(G.K0, FreeElement.one()) == FreeElement.one() * LaurentPoly.monomial(1)
    assert act(G.K0, el("x")) == el("q^-1 x")
    assert act(G.K1, el("x")) == el("q^2 x")
    assert act(G.D, el("x")) == el("q^-1 x")
    assert weight(1, 0) == (-1, 2, -1)


def test_highest_weight():
    results = highest_weight_check()
    assert_all_pass(results)
    assert results[-1].details["value"] == "x"


def test_presentation_on_small_window():
    assert_all_pass(verify_presentation(3))


def test_unknown_row():
    with pytest.raises(RepModuleError):
        action_table(7)


def test_action_table_description():
    described = action_table(0).describe()
    assert described["E0"] == "AstarR"
    assert set(described) == {str(g) for g in GeneratorId}


def test_bold_u_components(el):
    assert bold_u_by_intersection(1, 1).vectors == (el("xy"),)
    assert bold_u_by_intersection(0, 1).dim == 0
    assert bold_u_by_intersection(2, 3).vectors == (el("xyxyy + xyyxy"),)


def test_bold_dims_table():
    assert bold_dims_table(4) == [
        [1, 0, 0, 0, 0],
        [1, 1, 1, 0, None],
        [0, 1, 2, None, None],
        [0, 0, None, None, None],
        [0, None, None, None, None],
    ]


def test_generation_equals_intersection():
    assert_all_pass(check_basic_module(5))
    generated = bold_u_by_generation(5)
    assert generated[(2, 2)] == bold_u_by_intersection(2, 2)
    assert "row 0" in bold_u_cache.provenance()


def test_generation_respects_the_hard_cap():
    with pytest.raises(SubalgebraError):
        bold_u_by_generation(11)


def test_weights_and_reachability():
    assert_all_pass(weight_eigenvalue_check(4))
    assert reach_one_check(5).status == "pass"


def test_closed_forms_for_lowering(el):
    assert f_numerator_oracle(G.F0, "") == el("(q - q^-1) x")
    assert f_numerator_oracle(G.F1, "x") == el("(q^2 - q^-2) xy")
    with pytest.raises(ValueError):
        f_numerator_oracle(G.F0, "yx")


def test_allowed_words_are_closed():
    assert bold_v_decomposition_check(6).status == "pass"
    assert_all_pass(bold_v_closure_check(5))


@pytest.mark.parametrize("row", [1, 2, 3])
def test_variant_rows(row):
    assert_all_pass(variant_action_check(row, 2))
    assert variant_basic_module_check(row, 4).status == "pass"


@pytest.mark.slow
def test_presentation_full_window():
    for row in (1, 2, 3):
        assert_all_pass(variant_action_check(row, 5))
    assert_all_pass(verify_presentation(6))
