"""Locally nilpotent maps with a q-Weyl partner, and the nilpotency of the step generators on bold-U."""
from __future__ import annotations

import logging
from typing import Dict, List, Tuple

from app.core.config import settings
from app.schemas.report import CheckResult, outcome, skipped
from app.services.freeword import Bidegree, FreeElement, bidegrees_up_to, render_element
from app.services.linalg import EchelonBasis, kernel_of_map, rank, sum_of
from app.services.operators import OperatorId, apply
from app.services.qfield import LaurentPoly, RatFunc, qint
from app.services.repmodule import STEP_GENERATORS, SHIFTS, GeneratorId, act, bold_u_by_intersection
from app.services.series import bold_dimension
from app.services.subalgebra import SubalgebraError, u_component

logger = logging.getLogger(__name__)

# (S, T) pairs with S T - q^2 T S = I, and the bidegree step of T
WEYL_PAIRS: Tuple[Tuple[OperatorId, OperatorId, Bidegree], ...] = (
    (OperatorId.AstarL, OperatorId.Aell, (1, 0)),
    (OperatorId.BstarL, OperatorId.Bell, (0, 1)),
)


def eigen_constant(n: int) -> LaurentPoly:
    """q^n [n+1]_q, the value of S T on the n-th eigen-kernel."""
    return qint(n + 1).shift(n)


def eigen_kernel(s_op: OperatorId, t_op: OperatorId, n: int, component: EchelonBasis) -> EchelonBasis:
    """V_n inside one graded component: the kernel of S T - q^n [n+1]_q I."""
    constant = eigen_constant(n)
    return kernel_of_map(lambda v: apply(s_op, apply(t_op, v)) - v * constant, component.vectors)


def _power(op: OperatorId, v: FreeElement, n: int) -> FreeElement:
    for _ in range(n):
        v = apply(op, v)
    return v


def _pair_checks(s_op: OperatorId, t_op: OperatorId, step: Bidegree, window: int) -> List[CheckResult]:
    not_injective, not_surjective, decomposition, inverses = [], [], [], []
    for r, s in bidegrees_up_to(window):
        component = u_component(r, s)
        if not component.dim:
            continue
        if rank([apply(t_op, v) for v in component]) != component.dim:
            not_injective.append(f"{r},{s}")
        raised = u_component(r + step[0], s + step[1])
        if rank([apply(s_op, v) for v in raised]) != component.dim:
            not_surjective.append(f"{r},{s}")
        # S lowers the stepped degree, so S^(top+1) kills this component
        top = r if step == (1, 0) else s
        kernels = [eigen_kernel(s_op, t_op, k, component) for k in range(top + 1)]
        for n in range(top + 1):
            power_kernel = kernel_of_map(lambda v, n=n: _power(s_op, v, n + 1), component.vectors)
            partial = kernels[: n + 1]
            direct = sum(k.dim for k in partial) == sum_of(*partial).dim
            if power_kernel != sum_of(*partial) or not direct:
                decomposition.append(f"n={n} at {r},{s}")
        for n in range(1, top + 1):
            scale = RatFunc.coerce(LaurentPoly.monomial(1 - n)) / RatFunc.coerce(qint(n))
            for v in kernels[n]:
                if apply(t_op, apply(s_op, v)) * scale != v:
                    inverses.append(f"V_{n} at {r},{s}: {render_element(v)}")
            for w in kernels[n - 1]:
                if apply(s_op, apply(t_op, w)) * scale != w:
                    inverses.append(f"V_{n - 1} at {r},{s}: {render_element(w)}")
    pair = f"({s_op}, {t_op})"
    return [
        outcome(f"{pair}: {t_op} is injective on U", not not_injective, window=window, examples=not_injective[:5]),
        outcome(f"{pair}: {s_op} maps onto U", not not_surjective, window=window, examples=not_surjective[:5]),
        outcome(f"{pair}: ker S^(n+1) = V_0 + ... + V_n", not decomposition, window=window, examples=decomposition[:5]),
        outcome(f"{pair}: S and q^(1-n)/[n] T are inverse between V_n and V_(n-1)", not inverses, examples=inverses[:5]),
    ]


def check_appendixE(window: int) -> List[CheckResult]:
    """Injectivity, surjectivity and the eigen-kernel decomposition for both Weyl pairs on U."""
    if window + 1 > settings.SUBALGEBRA_CAP:
        raise SubalgebraError(f"The surjectivity check needs window + 1 <= {settings.SUBALGEBRA_CAP}, got {window}.")
    results: List[CheckResult] = []
    for s_op, t_op, step in WEYL_PAIRS:
        logger.info(f"Checking the Weyl pair ({s_op}, {t_op}) up to degree {window}.")
        results += _pair_checks(s_op, t_op, step, window)
    return results


def nonnilpotence_witness(n: int) -> List[CheckResult]:
    """F0^k(xx) and F1^k(y) stay nonzero for k <= n, so the lowering generators are not nilpotent on all of U."""
    if n + 2 > settings.HARD_CAP:
        raise SubalgebraError(f"n + 2 must not exceed {settings.HARD_CAP}, got n = {n}.")
    results = []
    for g, start in ((GeneratorId.F0, "xx"), (GeneratorId.F1, "y")):
        value = FreeElement.word(start)
        vanished = None
        for k in range(1, n + 1):
            value = act(g, value)
            if not value:
                vanished = k
                break
        results.append(
            outcome(f"{g}^k({start}) is nonzero for k <= {n}", vanished is None, vanished_at=vanished, last=render_element(value))
        )
    return results


def nilpotency_orders(window: int) -> Dict[str, Dict[str, int]]:
    """Smallest k with g^k v = 0, for each step generator g and each basis vector v of bold-U(r,s)."""
    orders: Dict[str, Dict[str, int]] = {}
    for r, s in bidegrees_up_to(window):
        for index, v in enumerate(bold_u_by_intersection(r, s)):
            label = f"{r},{s}#{index + 1}"
            orders[label] = {}
            for g in STEP_GENERATORS:
                dr, ds = SHIFTS[g]
                bound = _first_empty_step(r, s, dr, ds)
                value, k = v, 0
                while value and k < bound:
                    value = act(g, value)
                    k += 1
                orders[label][str(g)] = k if not value else -1
    return orders


def _first_empty_step(r: int, s: int, dr: int, ds: int) -> int:
    """Smallest k > 0 for which bold-U(r + k dr, s + k ds) is zero."""
    k = 1
    while True:
        a, b = r + k * dr, s + k * ds
        if a < 0 or b < 0 or bold_dimension(a, b) == 0:
            return k
        k += 1


def check_nilpotency_on_bold_u(window: int) -> CheckResult:
    orders = nilpotency_orders(window)
    stuck = [f"{g} on {label}" for label, per in orders.items() for g, k in per.items() if k < 0]
    if not orders:
        return skipped("step generators are nilpotent on bold-U", reason="no vectors in the window")
    return outcome("step generators are nilpotent on bold-U", not stuck, window=window, orders=orders, examples=stuck[:5])
