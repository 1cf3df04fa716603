"""Golden-data checks: listed bases of bold-U(r,s) and the matrices of the generators on them."""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.config import settings
from app.schemas.report import CheckResult, failed, outcome, skipped
from app.services.freeword import Bidegree, FreeElement, in_bold_v, parse_element, render_element
from app.services.grammar import ExpressionSyntaxError
from app.services.linalg import Basis, DirectSum, GradedMatrix, LinalgError, OrderedBasis, graded_block
from app.services.qfield import RatFunc, parse_scalar, render_scalar
from app.services.relations import FixtureError, read_sections
from app.services.repmodule import GeneratorId, act, bold_u_by_intersection
from app.services.subalgebra import u_component

logger = logging.getLogger(__name__)

_LISTED_LINE = re.compile(r"^(\d+)\s+(\d+)\s*\|\s*(.+)$")
_BLOCK_HEADER = re.compile(r"^(\w+)\s+(?:from\s+(\S+)\s+to\s+(\S+)|on\s+(\S+))$")


def parse_space(text: str) -> List[Bidegree]:
    """`2,1+1,2` -> [(2, 1), (1, 2)]."""
    degrees = []
    for piece in text.split("+"):
        try:
            r, s = (int(part) for part in piece.strip().split(","))
        except ValueError as exc:
            raise ExpressionSyntaxError(f"Expected r,s pairs joined by '+', got {text!r}.") from exc
        if r < 0 or s < 0:
            raise ExpressionSyntaxError(f"Negative bidegree in {text!r}.")
        degrees.append((r, s))
    return degrees


def load_listed_bases(fixture_dir: Optional[Path] = None) -> Dict[Bidegree, Tuple[FreeElement, ...]]:
    return _load_listed_bases((fixture_dir or settings.FIXTURE_DIR) / "appendix_c.txt")


@lru_cache(maxsize=None)
def _load_listed_bases(path: Path) -> Dict[Bidegree, Tuple[FreeElement, ...]]:
    listed: Dict[Bidegree, List[FreeElement]] = {}
    for section, lines in read_sections(path).items():
        for line in lines:
            match = _LISTED_LINE.match(line)
            if not match:
                raise FixtureError(f"{path.name} [{section}]: expected `r s | vector`, got {line!r}.")
            r, s, text = int(match.group(1)), int(match.group(2)), match.group(3)
            try:
                listed.setdefault((r, s), []).append(parse_element(text))
            except ExpressionSyntaxError as exc:
                raise FixtureError(f"{path.name} [{section}] {r} {s}: {exc}") from exc
    return {degree: tuple(vectors) for degree, vectors in listed.items()}


def listed_basis(r: int, s: int, fixture_dir: Optional[Path] = None) -> Optional[OrderedBasis]:
    vectors = load_listed_bases(fixture_dir).get((r, s))
    return OrderedBasis((r, s), vectors) if vectors else None


def verify_appendixC(r: int, s: int, fixture_dir: Optional[Path] = None) -> List[CheckResult]:
    """The listed vectors for (r,s) lie in U(r,s), avoid forbidden leading letters, and form a basis of bold-U(r,s)."""
    basis = listed_basis(r, s, fixture_dir)
    label = f"listed basis {r},{s}"
    if basis is None:
        return [failed(label, reason="no vectors listed for this bidegree")]
    component = u_component(r, s)
    outside = [render_element(v) for v in basis.vectors if not component.contains(v)]
    forbidden = [render_element(v) for v in basis.vectors if not all(in_bold_v(w) for w in v.support())]
    independent = basis.is_independent()
    expected = bold_u_by_intersection(r, s).dim
    results = [
        outcome(f"{label}: vectors lie in U({r},{s})", not outside, examples=outside[:5]),
        outcome(f"{label}: no word begins with y or xx", not forbidden, examples=forbidden[:5]),
        outcome(f"{label}: vectors are independent", independent, count=len(basis)),
        outcome(f"{label}: count equals dim bold-U({r},{s})", len(basis) == expected, count=len(basis), dim=expected),
    ]
    if any(result.status == "fail" for result in results):
        logger.warning(f"The listed basis for ({r},{s}) fails verification.")
    return results


def verify_listed_bases(window: int, fixture_dir: Optional[Path] = None) -> List[CheckResult]:
    """Runs the listed-basis check for every listed bidegree with r + s <= window; larger ones are skipped."""
    results: List[CheckResult] = []
    for r, s in sorted(load_listed_bases(fixture_dir), key=lambda d: (d[0] + d[1], d[0])):
        if r + s > window:
            results.append(skipped(f"listed basis {r},{s}", reason=f"beyond the window {window}"))
            continue
        results += verify_appendixC(r, s, fixture_dir)
    return results


@dataclass(frozen=True)
class PrintedBlock:
    """One displayed matrix: a generator between two sums of components."""
    generator: GeneratorId
    source: Tuple[Bidegree, ...]
    target: Tuple[Bidegree, ...]
    entries: Tuple[Tuple[RatFunc, ...], ...]

    @property
    def label(self) -> str:
        def space(degrees):
            return "+".join(f"{r},{s}" for r, s in degrees)

        if self.source == self.target:
            return f"{self.generator} on {space(self.source)}"
        return f"{self.generator} from {space(self.source)} to {space(self.target)}"


def _parse_rows(lines: Sequence[str]) -> Tuple[Tuple[RatFunc, ...], ...]:
    if len(lines) == 1 and lines[0].split()[0] == "diag":
        diagonal = [parse_scalar(token) for token in lines[0].split()[1:]]
        return tuple(
            tuple(value if i == j else RatFunc(0) for j in range(len(diagonal))) for i, value in enumerate(diagonal)
        )
    rows = tuple(tuple(parse_scalar(token) for token in line.split()) for line in lines)
    if len({len(row) for row in rows}) != 1:
        raise FixtureError(f"Ragged matrix rows: {list(lines)}.")
    return rows


def load_printed_blocks(fixture_dir: Optional[Path] = None) -> Tuple[PrintedBlock, ...]:
    return _load_printed_blocks((fixture_dir or settings.FIXTURE_DIR) / "appendix_d.txt")


@lru_cache(maxsize=None)
def _load_printed_blocks(path: Path) -> Tuple[PrintedBlock, ...]:
    blocks = []
    for header, lines in read_sections(path).items():
        match = _BLOCK_HEADER.match(header)
        if not match:
            raise FixtureError(f"{path.name}: bad block header [{header}].")
        try:
            generator = GeneratorId(match.group(1))
            if match.group(4):
                source = target = tuple(parse_space(match.group(4)))
            else:
                source, target = tuple(parse_space(match.group(2))), tuple(parse_space(match.group(3)))
            entries = _parse_rows(lines)
        except (ExpressionSyntaxError, ValueError) as exc:
            raise FixtureError(f"{path.name} [{header}]: {exc}") from exc
        blocks.append(PrintedBlock(generator=generator, source=source, target=target, entries=entries))
    return tuple(blocks)


def basis_of_space(degrees: Sequence[Bidegree], fixture_dir: Optional[Path] = None) -> DirectSum:
    """Listed bases where available, otherwise the echelon basis of bold-U, concatenated in order."""
    summands: List[Basis] = []
    for r, s in degrees:
        listed = listed_basis(r, s, fixture_dir)
        summands.append(listed if listed is not None else bold_u_by_intersection(r, s))
    return DirectSum(summands)


def matrix_block(
    generator: GeneratorId,
    source: Sequence[Bidegree],
    target: Sequence[Bidegree],
    fixture_dir: Optional[Path] = None,
) -> GradedMatrix:
    """The matrix of a generator from one sum of bold-U components to another."""
    domain, codomain = basis_of_space(source, fixture_dir), basis_of_space(target, fixture_dir)

    def space(degrees):
        return "+".join(f"U({r},{s})" for r, s in degrees)

    return graded_block(
        lambda v: act(generator, v),
        domain,
        codomain,
        name=str(generator),
        domain_label=space(source),
        codomain_label=space(target),
    )


def _entry_diffs(block: PrintedBlock, computed: GradedMatrix) -> List[Dict[str, object]]:
    diffs = []
    if computed.shape != (len(block.entries), len(block.entries[0])):
        return [{"shape": list(computed.shape), "expected": [len(block.entries), len(block.entries[0])]}]
    for i, row in enumerate(block.entries):
        for j, expected in enumerate(row):
            value = computed.entries[i][j]
            if value != expected:
                diffs.append({"row": i + 1, "column": j + 1, "computed": render_scalar(value), "expected": render_scalar(expected)})
    return diffs


def verify_appendixD(fixture_dir: Optional[Path] = None) -> List[CheckResult]:
    """Recomputes every printed block on the listed bases and compares it entry by entry."""
    results: List[CheckResult] = []
    non_laurent: List[str] = []
    for block in load_printed_blocks(fixture_dir):
        try:
            computed = matrix_block(block.generator, block.source, block.target, fixture_dir)
        except LinalgError as exc:
            results.append(failed(block.label, error=str(exc)))
            continue
        diffs = _entry_diffs(block, computed)
        if diffs:
            logger.warning(f"{block.label} differs from the printed matrix in {len(diffs)} entries.")
        results.append(outcome(block.label, not diffs, diffs=diffs[:10]))
        if any(not value.is_laurent() for row in computed.entries for value in row):
            non_laurent.append(block.label)
    results.append(outcome("all printed blocks have Laurent polynomial entries", not non_laurent, examples=non_laurent[:5]))
    return results
