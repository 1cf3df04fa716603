"""Truncated generating functions for the dimension tables, and the identities among them."""
from __future__ import annotations

import logging
from typing import Dict, List, Optional, Tuple

from sympy import ZZ
from sympy.polys.rings import ring

from app.schemas.report import CheckResult, outcome, skipped

logger = logging.getLogger(__name__)

BIVARIATE, T, U = ring("t,u", ZZ)
UNIVARIATE, Z = ring("z", ZZ)


class BiSeries:
    """A power series in t, u known exactly up to total degree `cap`."""

    __slots__ = ("poly", "cap")

    def __init__(self, poly, cap: int):
        self.cap = cap
        self.poly = BIVARIATE.from_dict({m: c for m, c in poly.items() if m[0] + m[1] <= cap})

    @classmethod
    def one(cls, cap: int) -> "BiSeries":
        return cls(BIVARIATE.one, cap)

    @classmethod
    def from_coefficients(cls, coefficients: Dict[Tuple[int, int], int], cap: int) -> "BiSeries":
        return cls(BIVARIATE.from_dict({m: c for m, c in coefficients.items() if c}), cap)

    def coefficient(self, r: int, s: int) -> int:
        return int(self.poly.get((r, s), 0))

    def coefficients(self) -> Dict[Tuple[int, int], int]:
        return {(r, s): int(c) for (r, s), c in self.poly.items()}

    def __mul__(self, other: "BiSeries") -> "BiSeries":
        return BiSeries(self.poly * other.poly, min(self.cap, other.cap))

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        return BiSeries(self.poly - other.poly, min(self.cap, other.cap))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BiSeries):
            return NotImplemented
        return self.cap == other.cap and self.poly == other.poly

    def swap(self) -> "BiSeries":
        """f(u, t)."""
        return BiSeries(BIVARIATE.from_dict({(s, r): c for (r, s), c in self.poly.items()}), self.cap)

    def times_polynomial(self, poly) -> "BiSeries":
        return BiSeries(self.poly * poly, self.cap)

    def matrix(self, rows: int, cols: int) -> List[List[Optional[int]]]:
        """Coefficient (r, s) at row r, column s; None beyond the cap."""
        return [[self.coefficient(r, s) if r + s <= self.cap else None for s in range(cols)] for r in range(rows)]

    def __repr__(self) -> str:
        return f"BiSeries({self.poly.as_expr()}, cap={self.cap})"


def geometric(monomial, cap: int) -> BiSeries:
    """1 / (1 - m) = 1 + m + m^2 + ... for a monomial m of positive total degree."""
    ((exponents, _),) = monomial.items()
    step = exponents[0] + exponents[1]
    terms = BIVARIATE.zero
    power = BIVARIATE.one
    for _ in range(cap // step + 1):
        terms += power
        power *= monomial
    return BiSeries(terms, cap)


def _infinite_product(factors_for, first_degree, cap: int) -> BiSeries:
    """Multiplies 1/(1 - m) over the monomials of factor n while factor n can contribute below the cap."""
    result = BiSeries.one(cap)
    n = 1
    while first_degree(n) <= cap:
        for monomial in factors_for(n):
            result = result * geometric(monomial, cap)
        n += 1
    return result


def expand_phi(cap: int) -> BiSeries:
    """prod_n 1 / ((1 - t^n u^(n-1)) (1 - t^n u^n) (1 - t^(n-1) u^n))."""
    return _infinite_product(
        lambda n: (T**n * U ** (n - 1), T**n * U**n, T ** (n - 1) * U**n),
        lambda n: 2 * n - 1,
        cap,
    )


def expand_delta(cap: int) -> BiSeries:
    """prod_n 1 / ((1 - t^n u^(n-1)) (1 - t^n u^n) (1 - t^n u^(n+1)))."""
    return _infinite_product(
        lambda n: (T**n * U ** (n - 1), T**n * U**n, T**n * U ** (n + 1)),
        lambda n: 2 * n - 1,
        cap,
    )


def expand_phi_weight(cap: int) -> BiSeries:
    """sum over integers n of t^(n^2) u^(n^2 - n)."""
    coefficients: Dict[Tuple[int, int], int] = {}
    n = 0
    while 2 * n * n - n <= cap or 2 * n * n + n <= cap:
        for k in {n, -n}:
            monomial = (k * k, k * k - k)
            if sum(monomial) <= cap:
                coefficients[monomial] = 1
        n += 1
    return BiSeries.from_coefficients(coefficients, cap)


def _univariate(poly, cap: int) -> List[int]:
    return [int(poly.get((k,), 0)) for k in range(cap + 1)]


def _univariate_truncate(poly, cap: int):
    return UNIVARIATE.from_dict({m: c for m, c in poly.items() if m[0] <= cap})


def expand_p(cap: int) -> List[int]:
    """Partition numbers p_0..p_cap from prod_n 1 / (1 - z^n)."""
    result = UNIVARIATE.one
    for n in range(1, cap + 1):
        factor = UNIVARIATE.from_dict({(n * k,): 1 for k in range(cap // n + 1)})
        result = _univariate_truncate(result * factor, cap)
    return _univariate(result, cap)


def expand_mu(cap: int) -> List[int]:
    """Coefficients of p(z)^3."""
    p = UNIVARIATE.from_dict({(k,): c for k, c in enumerate(expand_p(cap)) if c})
    return _univariate(_univariate_truncate(p**3, cap), cap)


def partition_counts(cap: int) -> List[int]:
    """Independent count of partitions by dynamic programming over largest parts."""
    counts = [1] + [0] * cap
    for part in range(1, cap + 1):
        for total in range(part, cap + 1):
            counts[total] += counts[total - part]
    return counts


def bold_dimension_series(cap: int) -> BiSeries:
    """p(tu) * phi(t, u)."""
    p = expand_p(cap // 2)
    p_tu = BiSeries.from_coefficients({(k, k): c for k, c in enumerate(p)}, cap)
    return p_tu * expand_phi_weight(cap)


def bold_dimension(r: int, s: int) -> int:
    """p_n with n = r - (r - s)^2, or 0 when n < 0."""
    n = r - (r - s) ** 2
    return partition_counts(n)[n] if n >= 0 else 0


def check_delta_identities(cap: int) -> List[CheckResult]:
    if cap < 2:
        raise ValueError("The identities need a cap of at least 2.")
    phi, delta = expand_phi(cap), expand_delta(cap)
    results = [
        outcome("delta(t,u) = phi(t,u) (1 - u)", delta == phi.times_polynomial(1 - U), cap=cap),
        outcome("delta(u,t) = phi(t,u) (1 - t)", delta.swap() == phi.times_polynomial(1 - T), cap=cap),
        outcome("phi(t,u) = phi(u,t)", phi == phi.swap(), cap=cap),
    ]
    negative = [f"{r},{s}" for (r, s), c in delta.coefficients().items() if c < 0]
    results.append(outcome("delta coefficients are nonnegative", not negative, examples=negative[:5]))
    d = phi.coefficients()
    broken = [
        f"{r},{s}"
        for r in range(cap + 1)
        for s in range(cap + 1 - r)
        if (s > 0 and d.get((r, s - 1), 0) > d.get((r, s), 0)) or (r > 0 and d.get((r - 1, s), 0) > d.get((r, s), 0))
    ]
    results.append(outcome("d(r,s) is monotone in r and in s", not broken, examples=broken[:5]))
    # row r of delta vanishes beyond s = 2r, so delta(t,1) is exact for 3r <= cap
    mu = expand_mu(cap)
    rows = cap // 3
    delta_t1 = [sum(delta.coefficient(r, s) for s in range(2 * r + 1)) for r in range(rows + 1)]
    results.append(outcome("delta(t,1) = p(t)^3", delta_t1 == mu[: rows + 1], rows=rows, values=delta_t1))
    p = expand_p(cap)
    results.append(outcome("product formula for p matches partition counting", p == partition_counts(cap), values=p))
    results.append(
        outcome("mu = p^3", mu == _cube_by_convolution(partition_counts(cap)), values=mu)
    )
    return results


def _cube_by_convolution(p: List[int]) -> List[int]:
    n = len(p)
    square = [sum(p[i] * p[k - i] for i in range(k + 1)) for k in range(n)]
    return [sum(square[i] * p[k - i] for i in range(k + 1)) for k in range(n)]


def _stabilized(values: List[int], increments: List[int], last_nonzero: int) -> Optional[int]:
    """The constant a line settles at, provided the truncation proves it.

    Increments along line r vanish beyond position 2r, so the window must reach
    that position, and the last three entries must agree with zero increments.
    """
    if len(values) < 3 or len(values) - 1 < last_nonzero:
        return None
    if len(set(values[-3:])) != 1 or any(increments[-2:]):
        return None
    return values[-1]


def check_max(cap: int) -> List[CheckResult]:
    """The stable value of each row (and column) of d equals mu_r, where the truncation shows stabilization."""
    phi, delta = expand_phi(cap), expand_delta(cap)
    delta_swapped = delta.swap()
    mu = expand_mu(cap)
    results: List[CheckResult] = []
    for r in range(cap + 1):
        span = range(cap + 1 - r)
        for label, line, increments in (
            ("row", [phi.coefficient(r, s) for s in span], [delta.coefficient(r, s) for s in span]),
            ("column", [phi.coefficient(k, r) for k in span], [delta_swapped.coefficient(k, r) for k in span]),
        ):
            stable = _stabilized(line, increments, 2 * r)
            name = f"max of {label} {r} of d equals mu_{r}"
            if stable is None:
                results.append(skipped(name, reason="not stabilized inside the window", cap=cap))
            else:
                results.append(outcome(name, stable == mu[r] and max(line) == stable, value=stable, expected=mu[r]))
    return results


def check_bold_dimension_series(window: int, bold_dims: Dict[Tuple[int, int], int]) -> List[CheckResult]:
    """sum dim U(r,s) t^r u^s against p(tu) phi(t,u), and against the closed formula."""
    series = bold_dimension_series(window)
    diffs = []
    formula_diffs = []
    for (r, s), dim in sorted(bold_dims.items()):
        if r + s > window:
            continue
        if series.coefficient(r, s) != dim:
            diffs.append({"r": r, "s": s, "computed": dim, "expected": series.coefficient(r, s)})
        if bold_dimension(r, s) != dim:
            formula_diffs.append({"r": r, "s": s, "computed": dim, "expected": bold_dimension(r, s)})
    return [
        outcome("sum of dim bold-U = p(tu) phi(t,u)", not diffs, window=window, diffs=diffs),
        outcome("dim bold-U(r,s) = p(r - (r-s)^2)", not formula_diffs, window=window, diffs=formula_diffs),
    ]


def check_phi_weight_terms(cap: int) -> CheckResult:
    series = expand_phi_weight(cap)
    expected = {(0, 0): 1, (1, 0): 1, (1, 2): 1, (4, 2): 1, (4, 6): 1}
    found = {m: series.coefficient(*m) for m in expected if sum(m) <= cap}
    return outcome("leading terms of phi(t,u)", all(v == 1 for v in found.values()), terms={f"{r},{s}": c for (r, s), c in found.items()})


SERIES_NAMES = ("phi", "delta", "p", "mu", "phi-weight")


def genfunc(name: str, cap: int):
    """Named expansion for the CLI and the API: a BiSeries or a coefficient list."""
    if name == "phi":
        return expand_phi(cap)
    if name == "delta":
        return expand_delta(cap)
    if name == "p":
        return expand_p(cap)
    if name == "mu":
        return expand_mu(cap)
    if name == "phi-weight":
        return expand_phi_weight(cap)
    raise ValueError(f"Unknown generating function {name!r}; choose one of {', '.join(SERIES_NAMES)}.")


def check_series(cap: int) -> List[CheckResult]:
    results = check_delta_identities(cap) + check_max(cap)
    results.append(check_phi_weight_terms(cap))
    logger.info(f"Series identities checked to order {cap}.")
    return results

