"""The quantum affine algebra acting on the shuffle subalgebra, and its basic submodule."""
from __future__ import annotations

import logging
import threading
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Deque, Dict, List, Optional, Tuple

from app.core.config import settings
from app.schemas.report import CheckResult, info, outcome
from app.services.freeword import (
    Bidegree,
    FreeElement,
    bidegrees_up_to,
    bold_v_decomposition,
    concat_mul,
    in_bold_v,
    render_element,
    supported_in_bold_v,
    words_up_to_length,
)
from app.services.grammar import ExpressionSyntaxError, split_equation
from app.services.linalg import EchelonBasis, echelonize, intersect_with_predicate, zero_basis
from app.services.operators import OperatorExpr, OperatorId, apply, apply_expr, apply_sequence, parse_operator_expr, reach_one
from app.services.qfield import LaurentPoly, Q_MINUS_Q_INV, RatFunc
from app.services.qshuffle import shuffle_words
from app.services.relations import FixtureError, Relation, check_relations, load_relations, read_sections
from app.services.series import check_bold_dimension_series
from app.services.subalgebra import SubalgebraError, u_basis_vectors, u_component

logger = logging.getLogger(__name__)

GENERATION_MARGIN = 2
MAX_GENERATION_STEPS = 10_000


class RepModuleError(Exception):
    """Custom exception for malformed action tables and a submodule closure that fails to settle."""
    pass


class GeneratorId(str, Enum):
    E0 = "E0"
    F0 = "F0"
    K0 = "K0"
    K0inv = "K0inv"
    E1 = "E1"
    F1 = "F1"
    K1 = "K1"
    K1inv = "K1inv"
    D = "D"
    Dinv = "Dinv"

    def __str__(self) -> str:
        return self.value


RAISING = (GeneratorId.E0, GeneratorId.E1)
LOWERING = (GeneratorId.F0, GeneratorId.F1)
STEP_GENERATORS = RAISING + LOWERING

# bidegree shift of each step generator under the defining action
SHIFTS: Dict[GeneratorId, Bidegree] = {
    GeneratorId.E0: (-1, 0),
    GeneratorId.E1: (0, -1),
    GeneratorId.F0: (1, 0),
    GeneratorId.F1: (0, 1),
}


def resolve_generator(name: str) -> GeneratorId:
    return GeneratorId(name)


@dataclass(frozen=True, eq=False)
class ActionTable:
    """One row of generator actions written in the named maps."""
    row: int
    intertwiner: Optional[OperatorId]
    expressions: Dict[GeneratorId, OperatorExpr]

    def expression(self, g: GeneratorId) -> OperatorExpr:
        return self.expressions[g]

    def act(self, g: GeneratorId, e: FreeElement) -> FreeElement:
        return apply_expr(self.expressions[g], e)

    def describe(self) -> Dict[str, str]:
        return {str(g): self.expressions[g].render() for g in GeneratorId}


def _parse_header(header: str, path: Path) -> Tuple[int, Optional[OperatorId]]:
    parts = header.split()
    if len(parts) not in (2, 3) or parts[0] != "row" or not parts[1].isdigit():
        raise FixtureError(f"{path.name}: bad action-table header [{header}].")
    intertwiner = None
    if len(parts) == 3:
        try:
            intertwiner = OperatorId(parts[2])
        except ValueError as exc:
            raise FixtureError(f"{path.name}: unknown intertwiner {parts[2]!r} in [{header}].") from exc
    return int(parts[1]), intertwiner


def load_action_tables(fixture_dir: Optional[Path] = None) -> Dict[int, ActionTable]:
    return _load_action_tables((fixture_dir or settings.FIXTURE_DIR) / "action_tables.txt")


@lru_cache(maxsize=None)
def _load_action_tables(path: Path) -> Dict[int, ActionTable]:
    tables: Dict[int, ActionTable] = {}
    for header, lines in read_sections(path).items():
        row, intertwiner = _parse_header(header, path)
        expressions: Dict[GeneratorId, OperatorExpr] = {}
        for line in lines:
            try:
                lhs, rhs = split_equation(line)
                expressions[resolve_generator(lhs)] = parse_operator_expr(rhs)
            except (ExpressionSyntaxError, ValueError) as exc:
                raise FixtureError(f"{path.name} [{header}]: {exc}") from exc
        missing = [str(g) for g in GeneratorId if g not in expressions]
        if missing:
            raise FixtureError(f"{path.name} [{header}] has no action for {', '.join(missing)}.")
        tables[row] = ActionTable(row=row, intertwiner=intertwiner, expressions=expressions)
    if 0 not in tables:
        raise FixtureError(f"{path.name} does not define [row 0].")
    return tables


def action_table(row: int = 0, fixture_dir: Optional[Path] = None) -> ActionTable:
    tables = load_action_tables(fixture_dir)
    if row not in tables:
        raise RepModuleError(f"No action table for row {row}; known rows: {sorted(tables)}.")
    return tables[row]


def act(g: GeneratorId, e: FreeElement, table: Optional[ActionTable] = None) -> FreeElement:
    """The image of e under generator g; the defining action unless a row is given."""
    return (table or action_table(0)).act(g, e)


def presentation_relations(fixture_dir: Optional[Path] = None) -> Dict[str, Tuple[Relation, ...]]:
    return _presentation_relations((fixture_dir or settings.FIXTURE_DIR) / "presentation.txt")


@lru_cache(maxsize=None)
def _presentation_relations(path: Path) -> Dict[str, Tuple[Relation, ...]]:
    return {section: tuple(items) for section, items in load_relations(path, resolve_generator).items()}


def verify_presentation(window: int, table: Optional[ActionTable] = None) -> List[CheckResult]:
    """Every defining relation of the algebra on every basis vector of U(r,s), r + s <= window."""
    table = table or action_table(0)
    vectors = u_basis_vectors(window)
    results: List[CheckResult] = []
    for section, relations in presentation_relations().items():
        prefix = f"presentation row {table.row} {section}"
        results += check_relations(relations, vectors, table.act, prefix)
    failing = sum(1 for r in results if r.status == "fail")
    logger.info(f"Presentation row {table.row}: {len(results)} relations on {len(vectors)} vectors, {failing} failing.")
    return results


def weight(r: int, s: int) -> Tuple[int, int, int]:
    """Exponents of q by which K0, K1, D act on U(r,s)."""
    return 2 * s - 2 * r + 1, 2 * r - 2 * s, -r


def check_weight_module(window: int) -> CheckResult:
    """Distinct bidegrees carry distinct weights, so the U(r,s) are the weight spaces."""
    seen: Dict[Tuple[int, int, int], Bidegree] = {}
    clashes = []
    for r, s in bidegrees_up_to(window):
        w = weight(r, s)
        if w in seen:
            clashes.append(f"{seen[w]} and {(r, s)}")
        seen[w] = (r, s)
    return outcome("bidegrees are separated by weights", not clashes, window=window, clashes=clashes)


def highest_weight_check(table: Optional[ActionTable] = None) -> List[CheckResult]:
    """K0 1 = q 1, K1 1 = 1, D 1 = 1, E0 1 = 0, F0^2 1 = 0, E1 1 = 0, F1 1 = 0."""
    table = table or action_table(0)
    one = FreeElement.one()
    g = GeneratorId
    expectations = [
        ("K0 1 = q 1", table.act(g.K0, one), one * LaurentPoly.monomial(1)),
        ("K1 1 = 1", table.act(g.K1, one), one),
        ("D 1 = 1", table.act(g.D, one), one),
        ("E0 1 = 0", table.act(g.E0, one), FreeElement.zero()),
        ("F0^2 1 = 0", table.act(g.F0, table.act(g.F0, one)), FreeElement.zero()),
        ("E1 1 = 0", table.act(g.E1, one), FreeElement.zero()),
        ("F1 1 = 0", table.act(g.F1, one), FreeElement.zero()),
    ]
    results = [
        outcome(f"highest weight: {name}", value == expected, value=render_element(value))
        for name, value, expected in expectations
    ]
    results.append(info("highest weight: F0 1", value=render_element(table.act(g.F0, one))))
    return results


def _eigenvalue_failures(vectors, r: int, s: int, table: ActionTable) -> List[str]:
    k0, k1, d = weight(r, s)
    scalars = {
        GeneratorId.K0: k0,
        GeneratorId.K0inv: -k0,
        GeneratorId.K1: k1,
        GeneratorId.K1inv: -k1,
        GeneratorId.D: d,
        GeneratorId.Dinv: -d,
    }
    bad = []
    for v in vectors:
        for g, exponent in scalars.items():
            if table.act(g, v) != v * LaurentPoly.monomial(exponent):
                bad.append(f"{g} on ({r},{s})")
        for g, (dr, ds) in SHIFTS.items():
            image = table.act(g, v)
            if image and image.bidegree() != (r + dr, s + ds):
                bad.append(f"{g} leaves ({r},{s}) for {image.bidegree()}")
    return bad


def weight_eigenvalue_check(window: int) -> List[CheckResult]:
    """Diagonal generators act by their weights and step generators shift the bidegree, on U and on bold-U."""
    table = action_table(0)
    on_u, on_bold = [], []
    for r, s in bidegrees_up_to(window):
        on_u += _eigenvalue_failures(u_component(r, s).vectors, r, s, table)
        on_bold += _eigenvalue_failures(bold_u_cache.by_intersection(r, s).vectors, r, s, table)
    return [
        outcome("weights and shifts on U", not on_u, window=window, examples=sorted(set(on_u))[:5]),
        outcome("weights and shifts on bold-U", not on_bold, window=window, examples=sorted(set(on_bold))[:5]),
        check_weight_module(window),
    ]


def _generate(window: int, table: ActionTable, margin: int) -> Dict[Bidegree, EchelonBasis]:
    """Closure of span{1} under E0, E1, F0, F1, kept below total degree window + margin."""
    limit = window + margin
    spaces: Dict[Bidegree, EchelonBasis] = {(0, 0): echelonize([FreeElement.one()], (0, 0))}
    pending: Deque[Bidegree] = deque([(0, 0)])
    steps = 0
    while pending:
        steps += 1
        if steps > MAX_GENERATION_STEPS:
            raise RepModuleError(f"Generation from 1 did not settle within {MAX_GENERATION_STEPS} steps.")
        source = pending.popleft()
        images: Dict[Bidegree, List[FreeElement]] = {}
        for g in STEP_GENERATORS:
            for v in spaces[source]:
                image = table.act(g, v)
                if not image:
                    continue
                degree = image.bidegree()
                if not isinstance(degree, tuple):
                    raise RepModuleError(f"{g} sends a vector of {source} to an inhomogeneous element.")
                if sum(degree) <= limit:
                    images.setdefault(degree, []).append(image)
        for degree in sorted(images, key=lambda d: (d[0] + d[1], d[0])):
            old = spaces.get(degree, zero_basis(degree))
            new = echelonize(list(old.vectors) + images[degree], degree)
            if new.dim > old.dim:
                spaces[degree] = new
                if degree not in pending:
                    pending.append(degree)
    logger.debug(f"Generation for row {table.row} settled after {steps} steps.")
    return spaces


class BoldUCache:
    """Components of the submodule generated by 1, by either construction, tagged with provenance."""

    def __init__(self):
        self._intersection: Dict[Bidegree, EchelonBasis] = {}
        self._generation: Dict[int, Tuple[int, Dict[Bidegree, EchelonBasis]]] = {}
        self._lock = threading.RLock()

    def by_intersection(self, r: int, s: int) -> EchelonBasis:
        """Elements of U(r,s) supported on words beginning with neither y nor xx."""
        cached = self._intersection.get((r, s))
        if cached is not None:
            return cached
        with self._lock:
            if (r, s) not in self._intersection:
                basis = intersect_with_predicate(u_component(r, s), in_bold_v)
                logger.info(f"bold-U({r},{s}) by intersection has dimension {basis.dim}.")
                self._intersection[(r, s)] = basis
            return self._intersection[(r, s)]

    def by_generation(self, window: int, table: Optional[ActionTable] = None) -> Dict[Bidegree, EchelonBasis]:
        table = table or action_table(0)
        if window + GENERATION_MARGIN > settings.HARD_CAP:
            raise SubalgebraError(
                f"Generation needs window + {GENERATION_MARGIN} <= {settings.HARD_CAP}, got window {window}."
            )
        with self._lock:
            done = self._generation.get(table.row)
            if done is None or done[0] < window:
                logger.info(f"Generating bold-U from 1 under row {table.row} up to degree {window}.")
                done = (window, _generate(window, table, GENERATION_MARGIN))
                self._generation[table.row] = done
        spaces = done[1]
        return {(r, s): spaces.get((r, s), zero_basis((r, s))) for r, s in bidegrees_up_to(window)}

    def provenance(self) -> Dict[str, List[str]]:
        generated = {f"row {row}": [f"{r},{s}" for r, s in sorted(spaces)] for row, (_, spaces) in self._generation.items()}
        return {"intersection": [f"{r},{s}" for r, s in sorted(self._intersection)], **generated}


bold_u_cache = BoldUCache()


def bold_u_by_intersection(r: int, s: int) -> EchelonBasis:
    return bold_u_cache.by_intersection(r, s)


def bold_u_by_generation(window: int, table: Optional[ActionTable] = None) -> Dict[Bidegree, EchelonBasis]:
    return bold_u_cache.by_generation(window, table)


def bold_dims_table(maxdeg: int) -> List[List[Optional[int]]]:
    table: List[List[Optional[int]]] = [[None] * (maxdeg + 1) for _ in range(maxdeg + 1)]
    for r, s in bidegrees_up_to(maxdeg):
        table[r][s] = bold_u_by_intersection(r, s).dim
    return table


def check_basic_module(window: int) -> List[CheckResult]:
    """Both constructions agree, and the dimensions follow the partition formula and its series."""
    generated = bold_u_by_generation(window)
    mismatches, dims = [], {}
    for r, s in bidegrees_up_to(window):
        by_intersection = bold_u_by_intersection(r, s)
        dims[(r, s)] = by_intersection.dim
        if generated[(r, s)] != by_intersection:
            mismatches.append(
                {"r": r, "s": s, "generation": generated[(r, s)].dim, "intersection": by_intersection.dim}
            )
    if mismatches:
        logger.warning(f"Generation and intersection disagree on {len(mismatches)} components.")
    results = [outcome("bold-U by generation equals bold-U by intersection", not mismatches, window=window, diffs=mismatches)]
    results += check_bold_dimension_series(window, dims)
    return results


def reach_one_check(window: int) -> CheckResult:
    """Every basis vector of every bold-U(r,s) is carried to a multiple of 1 by E0 and E1 alone."""
    bad, checked = [], 0
    for r, s in bidegrees_up_to(window):
        for v in bold_u_by_intersection(r, s):
            checked += 1
            steps = reach_one(v, "right")
            end = apply_sequence(steps, v)
            if end.support() != [""] or any(op not in (OperatorId.AstarR, OperatorId.BstarR) for op in steps):
                bad.append(render_element(v))
    return outcome("every bold-U vector reaches 1 under E0, E1", not bad, checked=checked, examples=bad[:5])


def variant_action_check(row: int, window: int) -> List[CheckResult]:
    """The row's relations hold, and its intertwiner carries the defining action onto the row's action."""
    if row not in (1, 2, 3):
        raise RepModuleError(f"Variant rows are 1, 2 and 3, got {row}.")
    base, table = action_table(0), action_table(row)
    results = verify_presentation(window, table)
    phi = table.intertwiner
    if phi is None:
        raise RepModuleError(f"Row {row} names no intertwiner.")
    vectors = u_basis_vectors(window)
    for g in GeneratorId:
        examples = []
        for v in vectors:
            lhs = apply(phi, base.act(g, v))
            rhs = table.act(g, apply(phi, v))
            if lhs != rhs:
                examples.append({"vector": render_element(v), "lhs": render_element(lhs), "rhs": render_element(rhs)})
        results.append(
            outcome(f"row {row}: {phi}({g} v) = {g}'({phi} v)", not examples, checked=len(vectors), examples=examples[:5])
        )
    return results


def variant_basic_module_check(row: int, window: int) -> CheckResult:
    """The submodule generated by 1 under a variant row is the intertwiner's image of bold-U."""
    table = action_table(row)
    phi = table.intertwiner
    base = bold_u_by_generation(window)
    variant = bold_u_by_generation(window, table)
    bad = []
    for (r, s), basis in base.items():
        image = echelonize([apply(phi, v) for v in basis])
        target_degree = image.bidegree or ((s, r) if phi in (OperatorId.Sigma, OperatorId.Tau) else (r, s))
        if variant.get(target_degree, zero_basis(target_degree)).vectors != image.vectors:
            bad.append(f"{r},{s}")
    return outcome(f"row {row}: generated submodule is {phi}(bold-U)", not bad, window=window, examples=bad[:5])


def f_numerator_oracle(g: GeneratorId, word: str) -> FreeElement:
    """(q - q^-1) F0 and (q - q^-1) F1 on 1, x and words xyw, in closed form.

    On xyw with w of bidegree (r, s):
      (q - q^-1) F0: xy (q^(1+2s-2r) w*x - q^-1 x*w)
      (q - q^-1) F1: xy ((q^2 - q^-2) yw + q^(2r-2s) w*y - y*w)
    """
    if word == "":
        return FreeElement({"x": Q_MINUS_Q_INV}) if g is GeneratorId.F0 else FreeElement.zero()
    if word == "x":
        return FreeElement.zero() if g is GeneratorId.F0 else FreeElement({"xy": LaurentPoly({2: 1, -2: -1})})
    if not word.startswith("xy"):
        raise ValueError(f"The closed form covers 1, x and words beginning with xy, got {word!r}.")
    w = word[2:]
    r, s = w.count("x"), w.count("y")
    prefix = FreeElement.word("xy")
    if g is GeneratorId.F0:
        tail = _product(w, "x") * LaurentPoly.monomial(1 + 2 * s - 2 * r) - _product("x", w) * LaurentPoly.monomial(-1)
    elif g is GeneratorId.F1:
        tail = (
            FreeElement({"y" + w: LaurentPoly({2: 1, -2: -1})})
            + _product(w, "y") * LaurentPoly.monomial(2 * r - 2 * s)
            - _product("y", w)
        )
    else:
        raise ValueError(f"The closed form covers F0 and F1, got {g}.")
    return concat_mul(prefix, tail)


def _product(u: str, v: str) -> FreeElement:
    return FreeElement({w: c for w, c in shuffle_words(u, v).items()})


def bold_v_decomposition_check(maxlen: int) -> CheckResult:
    """Every allowed word is 1, x, or begins with xy."""
    bad = [w for w in words_up_to_length(maxlen) if in_bold_v(w) and bold_v_decomposition(w) is None]
    return outcome("allowed words split as 1, x and xy-prefixed words", not bad, maxlen=maxlen, examples=bad[:5])


def bold_v_closure_check(maxlen: int) -> List[CheckResult]:
    """E0, E1, F0, F1 keep the span of allowed words, checked word by word with the closed forms for F."""
    table = action_table(0)
    escapes: Dict[GeneratorId, List[str]] = {g: [] for g in STEP_GENERATORS}
    oracle_misses: List[str] = []
    scale = RatFunc.coerce(Q_MINUS_Q_INV)
    checked = 0
    for word in words_up_to_length(maxlen):
        if not in_bold_v(word):
            continue
        checked += 1
        v = FreeElement.word(word)
        for g in STEP_GENERATORS:
            image = table.act(g, v)
            if not supported_in_bold_v(image):
                escapes[g].append(word or "1")
            if g in LOWERING and image * scale != f_numerator_oracle(g, word):
                oracle_misses.append(f"{g} on {word or '1'}")
    results = [
        outcome(f"allowed words closed under {g}", not bad, checked=checked, examples=bad[:5])
        for g, bad in escapes.items()
    ]
    results.append(outcome("F0, F1 on allowed words match the closed forms", not oracle_misses, examples=oracle_misses[:5]))
    return results

