import pytest
from sympy import partition

from app.services.series import (
    bold_dimension,
    bold_dimension_series,
    check_series,
    expand_delta,
    expand_mu,
    expand_p,
    expand_phi,
    expand_phi_weight,
    genfunc,
    partition_counts,
)

# d(r,s) = dim U(r,s) for 0 <= r, s <= 6
D_TABLE = [
    [1, 1, 1, 1, 1, 1, 1],
    [1, 2, 3, 3, 3, 3, 3],
    [1, 3, 6, 8, 9, 9, 9],
    [1, 3, 8, 14, 19, 21, 22],
    [1, 3, 9, 19, 32, 42, 48],
    [1, 3, 9, 21, 42, 66, 87],
    [1, 3, 9, 22, 48, 87, 134],
]

# dim bold-U(r,s) for 0 <= r, s <= 6
BOLD_TABLE = [
    [1, 0, 0, 0, 0, 0, 0],
    [1, 1, 1, 0, 0, 0, 0],
    [0, 1, 2, 1, 0, 0, 0],
    [0, 0, 2, 3, 2, 0, 0],
    [0, 0, 1, 3, 5, 3, 1],
    [0, 0, 0, 1, 5, 7, 5],
    [0, 0, 0, 0, 2, 7, 11],
]


def test_partition_numbers():
    assert expand_p(6) == [1, 1, 2, 3, 5, 7, 11]
    assert expand_p(12) == partition_counts(12)
    assert partition_counts(12) == [int(partition(n)) for n in range(13)]


def test_mu_is_the_cube():
    assert expand_mu(4) == [1, 3, 9, 22, 51]


def test_d_table():
    phi = expand_phi(12)
    for r in range(7):
        for s in range(7):
            assert phi.coefficient(r, s) == D_TABLE[r][s], (r, s)


def test_rows_settle_at_mu():
    mu = expand_mu(6)
    for r in range(4):
        assert D_TABLE[r][-1] == mu[r]


def test_delta_is_a_difference():
    phi, delta = expand_phi(8), expand_delta(8)
    for r in range(5):
        for s in range(1, 4):
            assert delta.coefficient(r, s) == phi.coefficient(r, s) - phi.coefficient(r, s - 1)


def test_weight_series_terms():
    series = expand_phi_weight(10)
    assert series.coefficients() == {(0, 0): 1, (1, 0): 1, (1, 2): 1, (4, 2): 1, (4, 6): 1}


def test_bold_dimension_formula():
    for r in range(7):
        for s in range(7):
            assert bold_dimension(r, s) == BOLD_TABLE[r][s], (r, s)


def test_bold_dimension_series_matches_formula():
    series = bold_dimension_series(12)
    for r in range(13):
        for s in range(13 - r):
            assert series.coefficient(r, s) == bold_dimension(r, s), (r, s)


def test_matrix_marks_the_truncation():
    rows = expand_phi(3).matrix(3, 3)
    assert rows[1][1] == 2
    assert rows[2][2] is None


def test_identity_checks_pass():
    assert all(result.status in ("pass", "skip") for result in check_series(10))


def test_genfunc_names():
    assert genfunc("p", 4) == [1, 1, 2, 3, 5]
    with pytest.raises(ValueError):
        genfunc("theta", 4)
