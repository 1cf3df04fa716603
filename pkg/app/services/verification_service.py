import logging
from typing import Callable, Dict, List, Optional

from app.core.config import settings
from app.schemas.report import CheckResult, Report
from app.services import appendix, nilpotent, operators, qshuffle, repmodule, series, subalgebra

logger = logging.getLogger(__name__)

# Word-level checks grow as 2^n; these are the default lengths when --maxlen is not given.
WORD_CHECK_LIMIT = 6
ASSOCIATIVITY_LENGTH = 9
NONNILPOTENCE_STEPS = 4
LISTED_BASES_WINDOW = 10


class VerificationServiceError(Exception):
    """Custom exception for unknown suites and out-of-range suite parameters."""
    pass


SuiteRunner = Callable[[int, Optional[int], Optional[int]], List[CheckResult]]


def _word_length(window: int, maxlen: Optional[int]) -> int:
    return min(window, WORD_CHECK_LIMIT) if maxlen is None else maxlen


def _qserre(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    length = ASSOCIATIVITY_LENGTH if maxlen is None else maxlen
    results = qshuffle.check_qserre_shuffle()
    results.append(qshuffle.check_associativity(length))
    results.append(qshuffle.check_recursions_agree(length))
    return results


def _appendix_a(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    maxlen = _word_length(window, maxlen)
    results = operators.check_appendixA_global(maxlen)
    results += operators.check_xy_commutations(maxlen)
    results += operators.check_appendixA_onU(window)
    results += operators.check_grading_shifts(maxlen)
    results += operators.check_local_nilpotency(maxlen)
    results.append(operators.check_starred_kernel(maxlen))
    return results


def _intertwiners(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    return operators.check_intertwiners(_word_length(window, maxlen))


def _subalgebra(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    results = [subalgebra.check_dims_against_series(window)]
    results += subalgebra.closure_check_starred(window)
    if window + 1 <= subalgebra.u_cache.cap:
        results += subalgebra.closure_check_multipliers(window)
    results += subalgebra.check_symmetry_invariance(window)
    results.append(subalgebra.check_grading_eigenvalues(window))
    return results


def _presentation(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    rows = [row] if row is not None else [0, 1, 2, 3]
    results: List[CheckResult] = []
    for current in rows:
        if current == 0:
            results += repmodule.verify_presentation(window, repmodule.action_table(0))
        else:
            results += repmodule.variant_action_check(current, window)
    return results


def _basic_module(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    results = repmodule.check_basic_module(window)
    results.append(repmodule.reach_one_check(window))
    results.append(repmodule.bold_v_decomposition_check(window))
    results += repmodule.bold_v_closure_check(_word_length(window, maxlen))
    for current in (1, 2, 3):
        results.append(repmodule.variant_basic_module_check(current, window))
    return results


def _highest_weight(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    return repmodule.highest_weight_check(repmodule.action_table(row or 0))


def _weights(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    return repmodule.weight_eigenvalue_check(window)


def _appendix_c(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    return appendix.verify_listed_bases(window)


def _appendix_d(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    return appendix.verify_appendixD()


def _appendix_e(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    return nilpotent.check_appendixE(min(window, subalgebra.u_cache.cap - 1))


def _nilpotence(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    results = nilpotent.nonnilpotence_witness(min(NONNILPOTENCE_STEPS, settings.HARD_CAP - 2))
    results.append(nilpotent.check_nilpotency_on_bold_u(window))
    return results


def _series(window: int, row: Optional[int], maxlen: Optional[int]) -> List[CheckResult]:
    return series.check_series(settings.HARD_CAP)


SUITES: Dict[str, SuiteRunner] = {
    "qserre": _qserre,
    "appendix-a": _appendix_a,
    "intertwiners": _intertwiners,
    "subalgebra": _subalgebra,
    "presentation": _presentation,
    "basic-module": _basic_module,
    "highest-weight": _highest_weight,
    "weights": _weights,
    "appendix-c": _appendix_c,
    "appendix-d": _appendix_d,
    "appendix-e": _appendix_e,
    "nilpotence": _nilpotence,
    "series": _series,
}
SUITE_NAMES = tuple(SUITES) + ("all",)


def default_window(suite: str) -> int:
    """The listed bases reach total degree 10, so that suite defaults to it on its own."""
    return LISTED_BASES_WINDOW if suite == "appendix-c" else settings.MAX_DEGREE


def run_suite(
    suite: str, window: Optional[int] = None, row: Optional[int] = None, maxlen: Optional[int] = None
) -> Report:
    """Runs one named suite, or every suite in registry order for `all`.

    `maxlen` bounds the word-level checks (relations, intertwiners, associativity) separately from the degree window.
    """
    if suite not in SUITE_NAMES:
        raise VerificationServiceError(f"Unknown suite {suite!r}; choose one of {', '.join(SUITE_NAMES)}.")
    window = default_window(suite) if window is None else window
    if window < 0 or window > settings.HARD_CAP:
        raise VerificationServiceError(f"The window must lie in 0..{settings.HARD_CAP}, got {window}.")
    if row is not None and row not in (0, 1, 2, 3):
        raise VerificationServiceError(f"Rows are 0 to 3, got {row}.")
    if maxlen is not None and (maxlen < 1 or maxlen > settings.HARD_CAP):
        raise VerificationServiceError(f"maxlen must lie in 1..{settings.HARD_CAP}, got {maxlen}.")

    names = list(SUITES) if suite == "all" else [suite]
    results: List[CheckResult] = []
    for name in names:
        logger.info(f"Running suite {name} with window {window}.")
        suite_results = SUITES[name](window, row, maxlen)
        failing = sum(1 for result in suite_results if result.status == "fail")
        logger.info(f"Suite {name}: {len(suite_results)} checks, {failing} failing.")
        results += suite_results
    return Report(command=f"verify {suite}", params={"max": window, "row": row, "maxlen": maxlen}, results=results)
