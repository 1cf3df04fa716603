import pytest

from app.services.verification_service import (
    ASSOCIATIVITY_LENGTH,
    SUITE_NAMES,
    VerificationServiceError,
    default_window,
    run_suite,
)


def _by_name(report, name):
    return next(result for result in report.results if result.name == name)


def test_word_length_is_independent_of_the_window():
    report = run_suite("qserre", window=2, maxlen=5)
    assert report.ok
    assert report.params["maxlen"] == 5
    assert _by_name(report, "shuffle associativity").details["maxlen"] == 5
    assert _by_name(report, "left and right shuffle recursions agree").details["maxlen"] == 5


@pytest.mark.slow
def test_associativity_defaults_to_length_nine():
    report = run_suite("qserre", window=4)
    assert ASSOCIATIVITY_LENGTH == 9
    assert _by_name(report, "shuffle associativity").details["maxlen"] == 9
    assert report.ok


def test_intertwiners_follow_maxlen():
    report = run_suite("intertwiners", maxlen=3)
    assert report.ok
    # 1 + 2 + 4 + 8 words of length <= 3
    assert {result.details["checked"] for result in report.results} == {15}


@pytest.mark.parametrize("kwargs", [{"maxlen": 0}, {"maxlen": 13}, {"window": 13}, {"row": 4}])
def test_rejects_out_of_range_parameters(kwargs):
    with pytest.raises(VerificationServiceError):
        run_suite("intertwiners", **kwargs)


def test_unknown_suite():
    with pytest.raises(VerificationServiceError):
        run_suite("nosuch")


def test_listed_bases_default_to_their_full_window():
    assert default_window("appendix-c") == 10
    assert "all" in SUITE_NAMES
