"""Formal noncommutative expressions over named maps, and relation fixtures built from them.

A `FormalExpr` is a finite sum of coefficient * (s1 s2 ... sk); as an operator
the rightmost symbol acts first.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Generic, Iterable, List, Mapping, Optional, Sequence, Tuple, TypeVar

from app.schemas.report import CheckResult, failed, passed
from app.services.freeword import FreeElement, linear_combination, render_element
from app.services.grammar import ExpressionSyntaxError, parse_expression, split_equation
from app.services.qfield import RatFunc, Scalar, is_single_term, render_scalar

logger = logging.getLogger(__name__)

S = TypeVar("S")
Action = Callable[[S, FreeElement], FreeElement]


class FixtureError(Exception):
    """Custom exception for unreadable or inconsistent golden-data files."""
    pass


@dataclass(frozen=True)
class FormalExpr(Generic[S]):
    terms: Tuple[Tuple[Tuple[S, ...], RatFunc], ...] = ()

    @classmethod
    def from_map(cls, terms: Mapping[Tuple[S, ...], RatFunc]) -> "FormalExpr[S]":
        clean = tuple((seq, coeff) for seq, coeff in terms.items() if coeff)
        return cls(clean)

    @classmethod
    def symbol(cls, name: S) -> "FormalExpr[S]":
        return cls((((name,), RatFunc(1)),))

    @classmethod
    def scalar(cls, value: Scalar) -> "FormalExpr[S]":
        return cls.from_map({(): RatFunc.coerce(value)})

    def as_map(self) -> Dict[Tuple[S, ...], RatFunc]:
        return dict(self.terms)

    def __add__(self, other: "FormalExpr[S]") -> "FormalExpr[S]":
        merged = self.as_map()
        for seq, coeff in other.terms:
            merged[seq] = merged[seq] + coeff if seq in merged else coeff
        return FormalExpr.from_map(merged)

    def __sub__(self, other: "FormalExpr[S]") -> "FormalExpr[S]":
        return self + other.scale(RatFunc(-1))

    def scale(self, factor: Scalar) -> "FormalExpr[S]":
        factor = RatFunc.coerce(factor)
        return FormalExpr.from_map({seq: coeff * factor for seq, coeff in self.terms})

    def compose(self, other: "FormalExpr[S]") -> "FormalExpr[S]":
        """self after other."""
        merged: Dict[Tuple[S, ...], RatFunc] = {}
        for seq1, c1 in self.terms:
            for seq2, c2 in other.terms:
                seq = seq1 + seq2
                value = c1 * c2
                merged[seq] = merged[seq] + value if seq in merged else value
        return FormalExpr.from_map(merged)

    def substitute(self, mapping: Callable[[S], S]) -> "FormalExpr[S]":
        return FormalExpr.from_map({tuple(mapping(s) for s in seq): c for seq, c in self.terms})

    def evaluate(self, action: Action, element: FreeElement, cache: Optional[Dict] = None) -> FreeElement:
        """Applies the expression to an element, sharing common suffix applications."""
        cache = {} if cache is None else cache
        cache.setdefault((), element)

        def run(seq: Tuple[S, ...]) -> FreeElement:
            if seq in cache:
                return cache[seq]
            inner = run(seq[1:])
            value = action(seq[0], inner) if inner else inner
            cache[seq] = value
            return value

        return linear_combination((coeff, run(seq)) for seq, coeff in self.terms)

    def render(self, name: Callable[[S], str] = str) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for seq, coeff in self.terms:
            ops = " ".join(name(s) for s in seq) or "I"
            text = render_scalar(coeff)
            negative = text.startswith("-") and is_single_term(text)
            text = text[1:] if negative else text
            body = ops if text == "1" else f"{text if is_single_term(text) else f'({text})'} {ops}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)


class FormalAlgebra(Generic[S]):
    """Grammar callbacks for operator and generator expressions; `I` is the identity."""

    def __init__(self, resolve: Callable[[str], S]):
        self.resolve = resolve

    def scalar(self, value: RatFunc) -> FormalExpr[S]:
        return FormalExpr.scalar(value)

    def symbol(self, name: str) -> FormalExpr[S]:
        if name == "I":
            return FormalExpr.scalar(1)
        try:
            return FormalExpr.symbol(self.resolve(name))
        except (KeyError, ValueError) as exc:
            raise ExpressionSyntaxError(f"Unknown symbol {name!r}.") from exc

    def add(self, left: FormalExpr[S], right: FormalExpr[S]) -> FormalExpr[S]:
        return left + right

    def mul(self, left: FormalExpr[S], right: FormalExpr[S]) -> FormalExpr[S]:
        return left.compose(right)

    def scale(self, value: FormalExpr[S], factor: RatFunc) -> FormalExpr[S]:
        return value.scale(factor)

    def as_scalar(self, value: FormalExpr[S]) -> Optional[RatFunc]:
        if all(not seq for seq, _ in value.terms):
            return value.as_map().get((), RatFunc(0))
        return None


def parse_formal(text: str, resolve: Callable[[str], S]) -> FormalExpr[S]:
    return parse_expression(text, FormalAlgebra(resolve))


@dataclass(frozen=True)
class Relation(Generic[S]):
    """lhs = rhs as maps; `difference` is lhs - rhs."""
    text: str
    section: str
    lhs: FormalExpr[S]
    rhs: FormalExpr[S]

    @property
    def difference(self) -> FormalExpr[S]:
        return self.lhs - self.rhs


def parse_relation(text: str, resolve: Callable[[str], S], section: str = "") -> Relation[S]:
    lhs, rhs = split_equation(text)
    return Relation(text=text, section=section, lhs=parse_formal(lhs, resolve), rhs=parse_formal(rhs, resolve))


def read_sections(path: Path) -> Dict[str, List[str]]:
    """Reads `[section]` headed blocks of non-comment lines."""
    if not path.is_file():
        raise FixtureError(f"Fixture file not found: {path}")
    sections: Dict[str, List[str]] = {}
    current: Optional[str] = None
    for number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]") and "]_q" not in line:
            current = line[1:-1].strip()
            sections.setdefault(current, [])
            continue
        if current is None:
            raise FixtureError(f"{path.name}:{number}: content before the first [section] header.")
        sections[current].append(line)
    return sections


def load_relations(path: Path, resolve: Callable[[str], S]) -> Dict[str, List[Relation[S]]]:
    relations: Dict[str, List[Relation[S]]] = {}
    for section, lines in read_sections(path).items():
        try:
            relations[section] = [parse_relation(line, resolve, section) for line in lines]
        except ExpressionSyntaxError as exc:
            raise FixtureError(f"{path.name} [{section}]: {exc}") from exc
    return relations


@dataclass
class RelationTally:
    """Per-relation pass/fail bookkeeping across many test vectors."""
    relation: Relation
    checked: int = 0
    failing: int = 0
    examples: List[Dict[str, str]] = field(default_factory=list)

    def record(self, vector: FreeElement, lhs: FreeElement, rhs: FreeElement) -> None:
        self.checked += 1
        if lhs == rhs:
            return
        self.failing += 1
        if len(self.examples) < 5:
            self.examples.append(
                {"vector": render_element(vector), "lhs": render_element(lhs), "rhs": render_element(rhs)}
            )

    def result(self, prefix: str) -> CheckResult:
        name = f"{prefix}: {self.relation.text}"
        if self.failing:
            logger.warning(f"{name} fails on {self.failing} of {self.checked} vectors.")
            return failed(name, checked=self.checked, failing=self.failing, examples=self.examples)
        return passed(name, checked=self.checked)


def check_relations(
    relations: Sequence[Relation[S]],
    vectors: Iterable[FreeElement],
    action: Action,
    prefix: str,
) -> List[CheckResult]:
    """Evaluates both sides of every relation on every vector."""
    tallies = [RelationTally(relation) for relation in relations]
    for vector in vectors:
        cache: Dict = {}
        for tally in tallies:
            lhs = tally.relation.lhs.evaluate(action, vector, cache)
            rhs = tally.relation.rhs.evaluate(action, vector, cache)
            tally.record(vector, lhs, rhs)
    return [tally.result(prefix) for tally in tallies]
