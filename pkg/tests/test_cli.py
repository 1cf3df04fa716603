import json

import pytest

from app.cli import EXIT_FAILED_CHECK, EXIT_OK, EXIT_USAGE, format_report, main
from app.schemas.report import Report, failed, passed


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.strip(), captured.err


def test_shuffle(capsys):
    code, out, _ = run(capsys, "shuffle", "x", "y")
    assert code == EXIT_OK
    assert out == "xy + q^-2 * yx"


def test_shuffle_right_method(capsys):
    assert run(capsys, "shuffle", "xy", "y", "--method", "right")[1] == run(capsys, "shuffle", "xy", "y")[1]


def test_apply_generator_and_operator(capsys):
    assert run(capsys, "apply", "--gen", "F1", "--to", "x")[1] == "[2]_q * xy"
    assert run(capsys, "apply", "--gen", "F0 F0", "--to", "1")[1] == "0"
    assert run(capsys, "apply", "--op", "AstarL Aell", "--to", "x")[1] == "(q^2 + 1) * x"


def test_apply_needs_a_map(capsys):
    code, _, _ = run(capsys, "apply", "--to", "x")
    assert code == EXIT_USAGE


def test_dims_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "dims", "--space", "U", "--max", "3")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["command"] == "dims"
    assert report["results"][0]["details"]["table"][1][1] == 2


def test_dims_text_marks_the_window(capsys):
    _, out, _ = run(capsys, "dims", "--space", "bold-U", "--max", "2")
    lines = out.splitlines()
    assert lines[0] == "dim bold-U(r,s)"
    assert lines[-1].split() == ["2", "0", ".", "."]


def test_basis_listed(capsys):
    code, out, _ = run(capsys, "basis", "--r", "2", "--s", "3", "--listed")
    assert code == EXIT_OK
    assert "1. xyxyy + xyyxy" in out


def test_matrix_latex(capsys):
    code, out, _ = run(capsys, "--format", "latex", "matrix", "--gen", "F0", "--from", "2,1+1,2", "--to", "2,2")
    assert code == EXIT_OK
    assert "\\begin{pmatrix}" in out
    assert "0 & [3]_q" in out


def test_genfunc(capsys):
    assert run(capsys, "genfunc", "p", "--max", "6")[1] == "p: 1 1 2 3 5 7 11"


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "highest-weight")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "7 passed, 0 failed, 0 skipped"


def test_verify_with_maxlen(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify", "intertwiners", "--maxlen", "3")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["params"]["maxlen"] == 3
    assert {result["details"]["checked"] for result in report["results"]} == {15}
    assert run(capsys, "verify", "appendix-a", "--max", "4", "--maxlen", "3")[0] == EXIT_OK


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "nosuch"],
        ["verify", "intertwiners", "--maxlen", "0"],
        ["verify", "series", "--max", "20"],
        ["shuffle", "x$", "y"],
        ["matrix", "--gen", "G7", "--from", "1,0", "--to", "1,1"],
        ["basis", "--r", "20", "--s", "0"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_missing_fixture_directory(capsys, fixture_dir, tmp_path):
    code, _, err = run(capsys, "--fixtures", str(tmp_path / "absent"), "verify", "appendix-c")
    assert code == EXIT_USAGE
    assert "does not exist" in err


def test_empty_fixture_directory(capsys, fixture_dir, tmp_path):
    code, _, err = run(capsys, "--fixtures", str(tmp_path), "verify", "appendix-c")
    assert code == EXIT_USAGE
    assert "not found" in err


def test_failing_report_sets_the_exit_code():
    report = Report(command="verify demo", results=[passed("a"), failed("b", examples=["xy"])])
    text = format_report(report, "text")
    assert "FAIL b" in text
    assert text.splitlines()[-1] == "1 passed, 1 failed, 0 skipped"
    assert not report.ok
    assert EXIT_FAILED_CHECK == 1
