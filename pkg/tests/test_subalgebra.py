import pytest

from app.services.freeword import FreeElement
from app.services.qshuffle import shuffle, shuffle_monomial
from app.services.subalgebra import (
    SubalgebraError,
    USubspaceCache,
    check_dims_against_series,
    check_grading_eigenvalues,
    check_symmetry_invariance,
    closure_check_multipliers,
    closure_check_starred,
    dims_table,
    u_component,
    u_component_by_monomials,
)


def test_small_components(el):
    assert u_component(0, 0).vectors == (FreeElement.one(),)
    assert u_component(1, 0).vectors == (el("x"),)
    assert u_component(1, 1).dim == 2
    assert u_component(2, 0).dim == 1
    assert u_component(-1, 3).dim == 0


def test_dims_table_agrees_with_the_product_formula():
    assert dims_table(4) == [
        [1, 1, 1, 1, 1],
        [1, 2, 3, 3, None],
        [1, 3, 6, None, None],
        [1, 3, None, None, None],
        [1, None, None, None, None],
    ]
    assert check_dims_against_series(6).status == "pass"


def test_products_of_letters_lie_in_u():
    component = u_component(2, 1)
    for letters in ("xxy", "xyx", "yxx"):
        assert component.contains(shuffle_monomial(letters))
    assert u_component(3, 1).contains(shuffle(shuffle_monomial("xy"), shuffle_monomial("xx")))


def test_u_is_a_proper_subspace(el):
    assert u_component(2, 1).dim == 3
    assert u_component(3, 1).dim == 3
    assert not u_component(3, 1).contains(el("yxxx"))


@pytest.mark.parametrize("r, s", [(2, 2), (3, 1), (1, 3), (3, 2)])
def test_recursive_and_brute_force_spans_agree(r, s):
    assert u_component(r, s) == u_component_by_monomials(r, s)


def test_closure_and_symmetry():
    for result in closure_check_starred(4) + closure_check_multipliers(4) + check_symmetry_invariance(4):
        assert result.status == "pass", result.name
    assert check_grading_eigenvalues(4).status == "pass"


def test_cap_is_enforced():
    cache = USubspaceCache(cap=3)
    assert cache.component(2, 1).dim == 3
    with pytest.raises(SubalgebraError):
        cache.component(3, 1)
    with pytest.raises(SubalgebraError):
        dims_table(99)
