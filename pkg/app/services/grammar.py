"""Recursive-descent parser shared by scalars, elements, operator and generator expressions.

    expression := ['+'|'-'] term (('+'|'-') term)*
    term       := factor (['*'|'/'] factor)*        juxtaposition multiplies
    factor     := atom ('^' ['+'|'-'] INT)*
    atom       := INT | 'q' | '[' INT ']_q' | NAME | '(' expression ')'

Products of names are noncommutative; the algebra passed in decides what a
name means (a word, an operator, a generator).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Generic, List, Optional, Protocol, TypeVar

from app.services.qfield import RatFunc, qint, q_power

T = TypeVar("T")

_TOKEN = re.compile(
    r"\s*(?:(?P<qint>\[\s*(?P<n>\d+)\s*\]_q)|(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*/^()]))"
)


class ExpressionSyntaxError(ValueError):
    """Custom exception for malformed expressions in fixtures, requests and CLI arguments."""
    pass


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    stripped = text.rstrip()
    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if not match:
            raise ExpressionSyntaxError(f"Unexpected character {stripped[position]!r} at {position} in {text!r}.")
        if match.group("qint"):
            tokens.append(Token("qint", match.group("n"), match.start("qint")))
        else:
            kind = match.lastgroup
            tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    return tokens


class ExpressionAlgebra(Protocol[T]):
    def scalar(self, value: RatFunc) -> T: ...

    def symbol(self, name: str) -> T: ...

    def add(self, left: T, right: T) -> T: ...

    def mul(self, left: T, right: T) -> T: ...

    def scale(self, value: T, factor: RatFunc) -> T: ...

    def as_scalar(self, value: T) -> Optional[RatFunc]: ...


class ScalarAlgebra:
    """Q(q) itself; the only admissible name is q."""

    def scalar(self, value: RatFunc) -> RatFunc:
        return value

    def symbol(self, name: str) -> RatFunc:
        raise ExpressionSyntaxError(f"Unknown name {name!r} in a scalar expression.")

    def add(self, left: RatFunc, right: RatFunc) -> RatFunc:
        return left + right

    def mul(self, left: RatFunc, right: RatFunc) -> RatFunc:
        return left * right

    def scale(self, value: RatFunc, factor: RatFunc) -> RatFunc:
        return value * factor

    def as_scalar(self, value: RatFunc) -> Optional[RatFunc]:
        return value


class _Parser(Generic[T]):
    def __init__(self, text: str, algebra: ExpressionAlgebra[T]):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.algebra = algebra

    def peek(self) -> Optional[Token]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def take(self) -> Token:
        token = self.peek()
        if token is None:
            raise ExpressionSyntaxError(f"Unexpected end of expression in {self.text!r}.")
        self.index += 1
        return token

    def expect(self, text: str) -> None:
        token = self.take()
        if token.text != text:
            raise ExpressionSyntaxError(f"Expected {text!r} at {token.position} in {self.text!r}, got {token.text!r}.")

    def parse(self) -> T:
        if not self.tokens:
            raise ExpressionSyntaxError("Empty expression.")
        value = self.expression()
        if self.peek() is not None:
            token = self.peek()
            raise ExpressionSyntaxError(f"Unexpected {token.text!r} at {token.position} in {self.text!r}.")
        return value

    def expression(self) -> T:
        negate = False
        token = self.peek()
        if token is not None and token.text in "+-" and token.kind == "op":
            negate = self.take().text == "-"
        value = self.term()
        if negate:
            value = self.algebra.scale(value, RatFunc(-1))
        while True:
            token = self.peek()
            if token is None or token.kind != "op" or token.text not in "+-":
                return value
            self.take()
            right = self.term()
            if token.text == "-":
                right = self.algebra.scale(right, RatFunc(-1))
            value = self.algebra.add(value, right)

    def _starts_factor(self, token: Optional[Token]) -> bool:
        return token is not None and (token.kind in ("int", "qint", "name") or token.text == "(")

    def term(self) -> T:
        value = self.factor()
        while True:
            token = self.peek()
            if token is not None and token.kind == "op" and token.text in "*/":
                self.take()
                right = self.factor()
                if token.text == "*":
                    value = self.algebra.mul(value, right)
                else:
                    divisor = self.algebra.as_scalar(right)
                    if divisor is None:
                        raise ExpressionSyntaxError(f"Only scalars may divide, near {token.position} in {self.text!r}.")
                    if not divisor:
                        raise ExpressionSyntaxError(f"Division by zero in {self.text!r}.")
                    value = self.algebra.scale(value, 1 / divisor)
            elif self._starts_factor(token):
                value = self.algebra.mul(value, self.factor())
            else:
                return value

    def factor(self) -> T:
        value = self.atom()
        while self.peek() is not None and self.peek().text == "^":
            self.take()
            sign = 1
            if self.peek() is not None and self.peek().text in ("+", "-"):
                sign = -1 if self.take().text == "-" else 1
            token = self.take()
            if token.kind != "int":
                raise ExpressionSyntaxError(f"Exponents must be integers, near {token.position} in {self.text!r}.")
            value = self.power(value, sign * int(token.text))
        return value

    def power(self, value: T, exponent: int) -> T:
        if exponent < 0:
            base = self.algebra.as_scalar(value)
            if base is None or not base:
                raise ExpressionSyntaxError(f"Negative powers need a nonzero scalar base in {self.text!r}.")
            return self.algebra.scalar(base ** exponent)
        result = self.algebra.scalar(RatFunc(1))
        for _ in range(exponent):
            result = self.algebra.mul(result, value)
        return result

    def atom(self) -> T:
        token = self.take()
        if token.kind == "int":
            return self.algebra.scalar(RatFunc(int(token.text)))
        if token.kind == "qint":
            return self.algebra.scalar(RatFunc.coerce(qint(int(token.text))))
        if token.kind == "name":
            if token.text == "q":
                return self.algebra.scalar(RatFunc.coerce(q_power(1)))
            return self.algebra.symbol(token.text)
        if token.text == "(":
            value = self.expression()
            self.expect(")")
            return value
        raise ExpressionSyntaxError(f"Unexpected {token.text!r} at {token.position} in {self.text!r}.")


def parse_expression(text: str, algebra: ExpressionAlgebra[T]) -> T:
    return _Parser(text, algebra).parse()


def split_equation(text: str) -> tuple:
    """Splits `lhs = rhs`; a bare expression means `expr = 0`."""
    if text.count("=") > 1:
        raise ExpressionSyntaxError(f"More than one '=' in {text!r}.")
    if "=" not in text:
        return text.strip(), "0"
    lhs, rhs = text.split("=")
    if not lhs.strip() or not rhs.strip():
        raise ExpressionSyntaxError(f"Empty side in {text!r}.")
    return lhs.strip(), rhs.strip()
