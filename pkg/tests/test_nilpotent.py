import pytest

from app.services.nilpotent import (
    check_appendixE,
    check_nilpotency_on_bold_u,
    eigen_constant,
    eigen_kernel,
    nilpotency_orders,
    nonnilpotence_witness,
)
from app.services.operators import OperatorId
from app.services.qfield import LaurentPoly
from app.services.subalgebra import SubalgebraError, u_component


def test_eigen_constants():
    assert eigen_constant(0) == 1
    assert eigen_constant(1) == LaurentPoly({2: 1, 0: 1})
    assert eigen_constant(2) == LaurentPoly({4: 1, 2: 1, 0: 1})


def test_kernels_in_a_component():
    component = u_component(2, 1)
    dims = [eigen_kernel(OperatorId.AstarL, OperatorId.Aell, n, component).dim for n in range(3)]
    assert sum(dims) == component.dim


def test_weyl_pairs_on_u():
    results = check_appendixE(3)
    assert results
    assert not [result.name for result in results if result.status == "fail"]


def test_surjectivity_needs_room_below_the_cap():
    with pytest.raises(SubalgebraError):
        check_appendixE(10)


def test_lowering_is_not_nilpotent_on_u():
    assert {result.status for result in nonnilpotence_witness(3)} == {"pass"}


def test_step_generators_are_nilpotent_on_bold_u():
    orders = nilpotency_orders(3)
    assert orders["0,0#1"]["F0"] == 2
    assert orders["0,0#1"]["F1"] == 1
    assert orders["0,0#1"]["E0"] == 1
    assert check_nilpotency_on_bold_u(4).status == "pass"


@pytest.mark.slow
def test_weyl_pairs_full_window():
    assert not [result.name for result in check_appendixE(8) if result.status == "fail"]
