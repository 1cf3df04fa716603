import pytest

from app.services.appendix import (
    listed_basis,
    load_printed_blocks,
    matrix_block,
    parse_space,
    verify_appendixC,
    verify_appendixD,
    verify_listed_bases,
)
from app.services.grammar import ExpressionSyntaxError
from app.services.qfield import RatFunc
from app.services.relations import FixtureError
from app.services.repmodule import GeneratorId

G = GeneratorId


def test_parse_space():
    assert parse_space("2,1+1,2") == [(2, 1), (1, 2)]
    assert parse_space(" 0,0 ") == [(0, 0)]
    for text in ("2;1", "2,1+", "-1,2"):
        with pytest.raises(ExpressionSyntaxError):
            parse_space(text)


def test_listed_basis(el):
    basis = listed_basis(2, 3)
    assert basis.vectors == (el("xyxyy + xyyxy"),)
    assert basis.coordinates(el("xyxyy + xyyxy")) == (RatFunc(1),)
    assert listed_basis(0, 5) is None


def test_small_listed_bases_verify():
    for r, s in ((2, 2), (4, 2), (3, 3)):
        assert {result.status for result in verify_appendixC(r, s)} == {"pass"}
    results = verify_listed_bases(6)
    assert not [result for result in results if result.status == "fail"]
    assert any(result.status == "skip" for result in results)


@pytest.mark.parametrize(
    "generator, source, target, rows",
    [
        (G.F0, "2,1+1,2", "2,2", [["0", "1"], ["0", "[3]_q"]]),
        (G.F1, "1,0", "1,1", [["[2]_q"]]),
        (G.E0, "1,0", "0,0", [["1"]]),
        (G.K0, "1,0", "1,0", [["q^-1"]]),
    ],
)
def test_matrix_blocks(generator, source, target, rows):
    block = matrix_block(generator, parse_space(source), parse_space(target))
    assert block.rows_as_text() == rows


def test_printed_blocks_load():
    blocks = load_printed_blocks()
    assert blocks
    assert blocks[0].label == "K0 on 0,0"


def test_bad_block_header(tmp_path):
    (tmp_path / "appendix_d.txt").write_text("[F0 between 1,0 and 2,0]\n1\n", encoding="utf-8")
    with pytest.raises(FixtureError):
        load_printed_blocks(tmp_path)


def test_ragged_block(tmp_path):
    (tmp_path / "appendix_d.txt").write_text("[F0 from 1,0 to 2,0]\n1 2\n1\n", encoding="utf-8")
    with pytest.raises(FixtureError):
        load_printed_blocks(tmp_path)


def test_missing_fixture(tmp_path):
    with pytest.raises(FixtureError):
        listed_basis(1, 1, tmp_path)


@pytest.mark.slow
def test_all_printed_blocks_match():
    results = verify_appendixD()
    assert not [result.name for result in results if result.status == "fail"]


@pytest.mark.slow
def test_all_listed_bases_verify():
    assert not [result.name for result in verify_listed_bases(10) if result.status == "fail"]
