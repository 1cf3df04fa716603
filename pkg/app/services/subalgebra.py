"""The shuffle subalgebra generated by x and y, one graded component at a time."""
from __future__ import annotations

import logging
import threading
from typing import Dict, List, Optional

from app.core.config import settings
from app.schemas.report import CheckResult, outcome
from app.services.freeword import Bidegree, FreeElement, bidegrees_up_to, render_element, words_of_bidegree
from app.services.linalg import EchelonBasis, LinalgError, echelonize, zero_basis
from app.services.operators import MULTIPLIERS, STARRED, OperatorId, apply
from app.services.qfield import LaurentPoly
from app.services.qshuffle import shuffle_monomial
from app.services.series import expand_phi

logger = logging.getLogger(__name__)


class SubalgebraError(Exception):
    """Custom exception for requests beyond the configured degree cap."""
    pass


class USubspaceCache:
    """Lazily built echelon bases of every component U(r,s) up to a total-degree cap.

    U(r,s) is spanned by x * U(r-1,s) and y * U(r,s-1), which is the span of all
    shuffle monomials with r x's and s y's.
    """

    def __init__(self, cap: Optional[int] = None):
        self.cap = settings.SUBALGEBRA_CAP if cap is None else cap
        self._bases: Dict[Bidegree, EchelonBasis] = {(0, 0): echelonize([FreeElement.one()], (0, 0))}
        self._lock = threading.RLock()

    def component(self, r: int, s: int) -> EchelonBasis:
        if r < 0 or s < 0:
            return zero_basis((r, s))
        if r + s > self.cap:
            raise SubalgebraError(f"U({r},{s}) lies beyond the degree cap {self.cap}.")
        cached = self._bases.get((r, s))
        if cached is not None:
            return cached
        with self._lock:
            if (r, s) not in self._bases:
                spanning: List[FreeElement] = []
                spanning += [apply(OperatorId.Aell, v) for v in self.component(r - 1, s)]
                spanning += [apply(OperatorId.Bell, v) for v in self.component(r, s - 1)]
                basis = echelonize(spanning, (r, s))
                logger.info(f"Built U({r},{s}) with dimension {basis.dim}.")
                self._bases[(r, s)] = basis
            return self._bases[(r, s)]

    def built(self) -> List[Bidegree]:
        return sorted(self._bases, key=lambda d: (d[0] + d[1], d[0]))


u_cache = USubspaceCache()


def u_component(r: int, s: int) -> EchelonBasis:
    return u_cache.component(r, s)


def u_basis_vectors(window: int) -> List[FreeElement]:
    """Every basis vector of every U(r,s) with r + s <= window, ordered by (r + s, r)."""
    return [v for r, s in bidegrees_up_to(window) for v in u_component(r, s)]


def u_component_by_monomials(r: int, s: int) -> EchelonBasis:
    """Brute-force span of all shuffle monomials; a cross-check for small bidegrees."""
    return echelonize([shuffle_monomial(letters) for letters in words_of_bidegree(r, s)], (r, s))


def dims_table(maxdeg: int) -> List[List[Optional[int]]]:
    """dim U(r,s) for r + s <= maxdeg; row r, column s; None outside the window."""
    if maxdeg > u_cache.cap:
        raise SubalgebraError(f"maxdeg {maxdeg} exceeds the degree cap {u_cache.cap}.")
    table: List[List[Optional[int]]] = [[None] * (maxdeg + 1) for _ in range(maxdeg + 1)]
    for r, s in bidegrees_up_to(maxdeg):
        table[r][s] = u_component(r, s).dim
    return table


_STARRED_SHIFT = {
    OperatorId.AstarL: (-1, 0),
    OperatorId.AstarR: (-1, 0),
    OperatorId.BstarL: (0, -1),
    OperatorId.BstarR: (0, -1),
}
_MULTIPLIER_SHIFT = {
    OperatorId.Aell: (1, 0),
    OperatorId.Ar: (1, 0),
    OperatorId.Bell: (0, 1),
    OperatorId.Br: (0, 1),
}


def _closure(ops, shifts, window: int, label: str) -> List[CheckResult]:
    results = []
    for op in ops:
        dr, ds = shifts[op]
        checked, escapes = 0, []
        for r, s in bidegrees_up_to(window):
            target = u_component(r + dr, s + ds)
            for v in u_component(r, s):
                image = apply(op, v)
                checked += 1
                try:
                    member = target.contains(image)
                except LinalgError:
                    member = False
                if not member:
                    escapes.append({"from": f"{r},{s}", "vector": render_element(v)})
        if escapes:
            logger.warning(f"{op} maps {len(escapes)} basis vectors outside the subalgebra.")
        results.append(outcome(f"{label} of U under {op}", not escapes, checked=checked, examples=escapes[:5]))
    return results


def closure_check_starred(window: int) -> List[CheckResult]:
    """Each starred map sends U(r,s) into the matching lowered component."""
    return _closure(STARRED, _STARRED_SHIFT, window, "starred closure")


def closure_check_multipliers(window: int) -> List[CheckResult]:
    """Left and right shuffle multiplication by a letter preserve U; needs window + 1 <= cap."""
    return _closure(MULTIPLIERS, _MULTIPLIER_SHIFT, window, "shuffle closure")


def check_symmetry_invariance(window: int) -> List[CheckResult]:
    swaps = {
        OperatorId.Sigma: lambda r, s: (s, r),
        OperatorId.Dagger: lambda r, s: (r, s),
        OperatorId.Tau: lambda r, s: (s, r),
    }
    results = []
    for phi, target_of in swaps.items():
        bad = []
        for r, s in bidegrees_up_to(window):
            target = u_component(*target_of(r, s))
            bad += [f"{r},{s}" for v in u_component(r, s) if not target.contains(apply(phi, v))]
        results.append(outcome(f"U invariant under {phi}", not bad, examples=sorted(set(bad))[:5]))
    return results


def check_grading_eigenvalues(window: int) -> CheckResult:
    """X, Y, K act on U(r,s) by q^r, q^s, q^(2r-2s)."""
    bad = []
    for r, s in bidegrees_up_to(window):
        scalars = {OperatorId.X: r, OperatorId.Y: s, OperatorId.K: 2 * r - 2 * s}
        for v in u_component(r, s):
            for op, exponent in scalars.items():
                if apply(op, v) != v * LaurentPoly.monomial(exponent):
                    bad.append(f"{op} on U({r},{s})")
    return outcome("grading eigenvalues on U", not bad, examples=bad[:5])


def check_dims_against_series(maxdeg: int) -> CheckResult:
    """dim U(r,s) equals the coefficient of t^r u^s in the product generating function."""
    phi = expand_phi(maxdeg)
    diffs = []
    for r, s in bidegrees_up_to(maxdeg):
        computed, expected = u_component(r, s).dim, phi.coefficient(r, s)
        if computed != expected:
            diffs.append({"r": r, "s": s, "computed": computed, "expected": expected})
    return outcome("dim U(r,s) = d(r,s)", not diffs, window=maxdeg, diffs=diffs)
