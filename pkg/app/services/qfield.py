"""Exact scalars for the whole package.

`LaurentPoly` is a sparse element of Z[q, q^-1]; `RatFunc` is an element of
Q(q) backed by a sympy fraction-field element, which keeps numerator and
denominator coprime with a positive leading denominator coefficient.
"""
from __future__ import annotations

from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from sympy import Symbol, ZZ

Q = Symbol("q")
RATIONAL_FUNCTIONS = ZZ.frac_field(Q)
FIELD = RATIONAL_FUNCTIONS.field
RING = FIELD.ring


class QFieldError(Exception):
    """Custom exception for exact scalar arithmetic errors."""
    pass


class LaurentPoly:
    """A finite sum of c_e q^e with integer c_e, stored without zero terms."""

    __slots__ = ("_terms", "_hash", "_ratfunc")

    def __init__(self, terms: Optional[Mapping[int, int]] = None):
        clean: Dict[int, int] = {}
        if terms:
            for exponent, coeff in terms.items():
                coeff = int(coeff)
                if coeff:
                    clean[int(exponent)] = coeff
        self._terms = clean
        self._hash = None
        self._ratfunc = None

    @classmethod
    def _wrap(cls, terms: Dict[int, int]) -> "LaurentPoly":
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        poly._ratfunc = None
        return poly

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, coeff: int) -> "LaurentPoly":
        return cls({0: coeff})

    def items(self) -> Iterable[Tuple[int, int]]:
        """Terms in descending exponent order."""
        return sorted(self._terms.items(), reverse=True)

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    @property
    def min_degree(self) -> int:
        if not self._terms:
            raise QFieldError("The zero Laurent polynomial has no degree.")
        return min(self._terms)

    @property
    def max_degree(self) -> int:
        if not self._terms:
            raise QFieldError("The zero Laurent polynomial has no degree.")
        return max(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, RatFunc):
            return other == self
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = _laurent_hash(self._terms)
        return self._hash

    @staticmethod
    def _coerce(other) -> Optional["LaurentPoly"]:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for exponent, coeff in other._terms.items():
            total = terms.get(exponent, 0) + coeff
            if total:
                terms[exponent] = total
            else:
                terms.pop(exponent, None)
        return LaurentPoly._wrap(terms)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._wrap({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms: Dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                terms[e1 + e2] = terms.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self._terms) == 1:
                ((exponent, coeff),) = self._terms.items()
                if coeff in (1, -1):
                    return LaurentPoly.monomial(exponent * n, coeff ** (-n))
            raise QFieldError("Only units of Z[q, q^-1] have negative powers.")
        result = LaurentPoly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiplies by q^k."""
        if not k:
            return self
        return LaurentPoly._wrap({e + k: c for e, c in self._terms.items()})

    def to_ratfunc(self) -> "RatFunc":
        if self._ratfunc is None:
            self._ratfunc = RatFunc._from_raw(_laurent_to_element(self._terms))
        return self._ratfunc

    def __repr__(self) -> str:
        return f"LaurentPoly('{render_laurent(self)}')"

    def __str__(self) -> str:
        return render_laurent(self)


def _laurent_hash(terms: Mapping[int, int]) -> int:
    """Shared by LaurentPoly and RatFunc; constants hash like the int they equal."""
    if not terms or set(terms) == {0}:
        return hash(terms.get(0, 0))
    return hash(frozenset(terms.items()))


def _laurent_to_element(terms: Mapping[int, int]):
    if not terms:
        return FIELD.zero
    low = min(terms)
    if low >= 0:
        return FIELD.raw_new(RING.from_dict({(e,): c for e, c in terms.items()}), RING.one)
    numer = RING.from_dict({(e - low,): c for e, c in terms.items()})
    # numer has a nonzero constant term, so it is already coprime to q^-low
    return FIELD.raw_new(numer, RING.from_dict({(-low,): 1}))


def _poly_terms(poly) -> Dict[int, int]:
    return {monom[0]: int(coeff) for monom, coeff in poly.items()}


Scalar = Union[int, LaurentPoly, "RatFunc"]


class RatFunc:
    """An element of Q(q); equality and hashing use the reduced form."""

    __slots__ = ("_element",)

    def __init__(self, value: Scalar = 0):
        if isinstance(value, RatFunc):
            self._element = value._element
        elif isinstance(value, LaurentPoly):
            self._element = value.to_ratfunc()._element
        elif isinstance(value, int):
            self._element = FIELD.ground_new(value)
        else:
            raise QFieldError(f"Cannot build a scalar from {type(value).__name__}.")

    @classmethod
    def _from_raw(cls, element) -> "RatFunc":
        scalar = cls.__new__(cls)
        scalar._element = element
        return scalar

    @classmethod
    def from_element(cls, element) -> "RatFunc":
        """Wraps an element of RATIONAL_FUNCTIONS (already reduced by sympy)."""
        return cls._from_raw(element)

    @classmethod
    def from_parts(cls, num: LaurentPoly, den: LaurentPoly) -> "RatFunc":
        if not den:
            raise QFieldError("Division by zero.")
        return cls._from_raw(num.to_ratfunc()._element / den.to_ratfunc()._element)

    @classmethod
    def coerce(cls, value: Scalar) -> "RatFunc":
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, LaurentPoly):
            return value.to_ratfunc()
        return cls(value)

    @property
    def element(self):
        """The underlying sympy fraction-field element."""
        return self._element

    @property
    def num(self) -> LaurentPoly:
        return self._parts()[0]

    @property
    def den(self) -> LaurentPoly:
        return self._parts()[1]

    def _parts(self) -> Tuple[LaurentPoly, LaurentPoly]:
        num = _poly_terms(self._element.numer)
        den = _poly_terms(self._element.denom)
        low = min(den)
        if den[low] < 0:
            num = {e: -c for e, c in num.items()}
            den = {e: -c for e, c in den.items()}
        return LaurentPoly(num).shift(-low), LaurentPoly(den).shift(-low)

    def is_laurent(self) -> bool:
        denom = self._element.denom
        return len(denom) == 1 and denom.LC == 1

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise QFieldError(f"{self} is not a Laurent polynomial.")
        (shift,) = self._element.denom.LM
        return LaurentPoly(_poly_terms(self._element.numer)).shift(-shift)

    def __bool__(self) -> bool:
        return bool(self._element)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, LaurentPoly)):
            other = RatFunc.coerce(other)
        if isinstance(other, RatFunc):
            return self._element == other._element
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_laurent():
            return _laurent_hash(self.as_laurent()._terms)
        return hash(self._element)

    def __add__(self, other):
        if not isinstance(other, (int, LaurentPoly, RatFunc)):
            return NotImplemented
        return RatFunc._from_raw(self._element + RatFunc.coerce(other)._element)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc._from_raw(-self._element)

    def __sub__(self, other):
        if not isinstance(other, (int, LaurentPoly, RatFunc)):
            return NotImplemented
        return RatFunc._from_raw(self._element - RatFunc.coerce(other)._element)

    def __rsub__(self, other):
        if not isinstance(other, (int, LaurentPoly, RatFunc)):
            return NotImplemented
        return RatFunc._from_raw(RatFunc.coerce(other)._element - self._element)

    def __mul__(self, other):
        if not isinstance(other, (int, LaurentPoly, RatFunc)):
            return NotImplemented
        return RatFunc._from_raw(self._element * RatFunc.coerce(other)._element)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (int, LaurentPoly, RatFunc)):
            return NotImplemented
        divisor = RatFunc.coerce(other)
        if not divisor:
            raise QFieldError("Division by zero.")
        return RatFunc._from_raw(self._element / divisor._element)

    def __rtruediv__(self, other):
        if not isinstance(other, (int, LaurentPoly, RatFunc)):
            return NotImplemented
        return RatFunc.coerce(other) / self

    def __pow__(self, n: int) -> "RatFunc":
        if n >= 0:
            return RatFunc._from_raw(self._element ** n)
        if not self:
            raise QFieldError("Division by zero.")
        return RatFunc._from_raw(FIELD.one / self._element ** -n)

    def __repr__(self) -> str:
        return f"RatFunc('{render_scalar(self)}')"

    def __str__(self) -> str:
        return render_scalar(self)


def q_power(k: int) -> LaurentPoly:
    return LaurentPoly.monomial(k)


def qint(n: int) -> LaurentPoly:
    """Returns [n]_q = q^(n-1) + q^(n-3) + ... + q^(1-n)."""
    if n < 0:
        raise QFieldError(f"qint expects a nonnegative integer, got {n}.")
    return LaurentPoly({n - 1 - 2 * i: 1 for i in range(n)})


Q_MINUS_Q_INV = LaurentPoly({1: 1, -1: -1})


def _qint_index(poly: LaurentPoly) -> Optional[Tuple[int, int]]:
    """Recognizes +-[n]_q for n >= 2; returns (sign, n)."""
    n = len(poly)
    if n < 2:
        return None
    signs = {c for _, c in poly.items()}
    if signs not in ({1}, {-1}):
        return None
    if poly == qint(n) * signs.pop():
        return (-1 if poly.coefficient(n - 1) < 0 else 1), n
    return None


def render_laurent(poly: LaurentPoly, qints: bool = True) -> str:
    """Renders terms as `c*q^e`, highest exponent first; [n]_q is recognized."""
    if not poly:
        return "0"
    if qints:
        found = _qint_index(poly)
        if found:
            sign, n = found
            return f"{'-' if sign < 0 else ''}[{n}]_q"
    pieces = []
    for index, (exponent, coeff) in enumerate(poly.items()):
        magnitude = abs(coeff)
        if exponent == 0:
            body = str(magnitude)
        else:
            monomial = "q" if exponent == 1 else f"q^{exponent}"
            body = monomial if magnitude == 1 else f"{magnitude}*{monomial}"
        if index == 0:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(pieces)


def _wrap_if_compound(text: str) -> str:
    return f"({text})" if (" + " in text or " - " in text) else text


def render_scalar(value: Scalar, qints: bool = True) -> str:
    """Laurent values render as polynomials in q, everything else as (num)/(den)."""
    value = RatFunc.coerce(value)
    if value.is_laurent():
        return render_laurent(value.as_laurent(), qints)
    num = render_laurent(value.num, qints)
    den = render_laurent(value.den, qints)
    return f"{_wrap_if_compound(num)}/{_wrap_if_compound(den)}"


def is_single_term(text: str) -> bool:
    """True for rendered scalars that need no parentheses as a coefficient."""
    return " + " not in text and " - " not in text and "/" not in text


def parse_scalar(text: str) -> RatFunc:
    """Parses the scalar grammar (e.g. `q^2 + 1 + q^-2`, `[3]_q`, `(q - q^-1)/2`)."""
    from app.services.grammar import ScalarAlgebra, parse_expression

    return parse_expression(text, ScalarAlgebra())
