"""Words in x, y and the free algebra of their Q(q)-linear combinations."""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from app.services.grammar import ExpressionSyntaxError, parse_expression
from app.services.qfield import LaurentPoly, RatFunc, Scalar, is_single_term, render_scalar

Word = str
Bidegree = Tuple[int, int]
LETTERS = ("x", "y")
INHOMOGENEOUS = "inhomogeneous"

_SWAP = str.maketrans("xy", "yx")


class FreeWordError(Exception):
    """Custom exception for malformed words and grading errors."""
    pass


def word_key(word: Word) -> Tuple[int, str]:
    """Canonical order: by length, then lexicographic with x < y."""
    return len(word), word


def check_word(word: Word) -> Word:
    if word.strip("xy"):
        raise FreeWordError(f"Words use only the letters x and y, got {word!r}.")
    return word


def bidegree_of_word(word: Word) -> Bidegree:
    r = word.count("x")
    return r, len(word) - r


@lru_cache(maxsize=None)
def words_of_bidegree(r: int, s: int) -> Tuple[Word, ...]:
    """All C(r+s, r) words with r x's and s y's, in canonical order."""
    if r < 0 or s < 0:
        return ()
    if r == 0 and s == 0:
        return ("",)
    words: List[Word] = []
    if r > 0:
        words.extend("x" + w for w in words_of_bidegree(r - 1, s))
    if s > 0:
        words.extend("y" + w for w in words_of_bidegree(r, s - 1))
    return tuple(words)


def words_up_to_length(maxlen: int) -> List[Word]:
    return [w for n in range(maxlen + 1) for r in range(n + 1) for w in words_of_bidegree(r, n - r)]


def bidegrees_up_to(total: int) -> List[Bidegree]:
    """All (r, s) with r + s <= total, ordered by (r + s, r)."""
    return [(r, n - r) for n in range(total + 1) for r in range(n + 1)]


def sigma_word(word: Word) -> Word:
    return word.translate(_SWAP)


def dagger_word(word: Word) -> Word:
    return word[::-1]


def tau_word(word: Word) -> Word:
    return word[::-1].translate(_SWAP)


def in_bold_v(word: Word) -> bool:
    """Allowed words: those beginning with neither y nor xx."""
    return not (word.startswith("y") or word.startswith("xx"))


def bold_v_decomposition(word: Word) -> Optional[str]:
    """Which summand of 1, x, xy*(anything) an allowed word falls in; None for a forbidden word."""
    if word == "":
        return "one"
    if word == "x":
        return "x"
    if word.startswith("xy"):
        return "xy-prefixed"
    return None


class FreeElement:
    """A finite Q(q)-linear combination of words, stored without zero coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Word, Scalar]] = None):
        clean: Dict[Word, RatFunc] = {}
        if terms:
            for word, coeff in terms.items():
                coeff = RatFunc.coerce(coeff)
                if coeff:
                    clean[check_word(word)] = coeff
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: Dict[Word, RatFunc]) -> "FreeElement":
        element = cls.__new__(cls)
        element._terms = terms
        element._hash = None
        return element

    @classmethod
    def word(cls, word: Word, coeff: Scalar = 1) -> "FreeElement":
        return cls({word: coeff})

    @classmethod
    def one(cls) -> "FreeElement":
        return cls._wrap({"": RatFunc(1)})

    @classmethod
    def zero(cls) -> "FreeElement":
        return cls._wrap({})

    def items(self) -> List[Tuple[Word, RatFunc]]:
        """Terms in canonical word order."""
        return sorted(self._terms.items(), key=lambda item: word_key(item[0]))

    def support(self) -> List[Word]:
        return sorted(self._terms, key=word_key)

    def coefficient(self, word: Word) -> RatFunc:
        return self._terms.get(word, RatFunc(0))

    def __contains__(self, word: Word) -> bool:
        return word in self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self) -> Iterator[Word]:
        return iter(self.support())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "FreeElement") -> "FreeElement":
        if not isinstance(other, FreeElement):
            return NotImplemented
        builder = ElementBuilder()
        builder.add_element(self)
        builder.add_element(other)
        return builder.build()

    def __neg__(self) -> "FreeElement":
        return FreeElement._wrap({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, factor: Scalar) -> "FreeElement":
        if not isinstance(factor, (int, LaurentPoly, RatFunc)):
            return NotImplemented
        factor = RatFunc.coerce(factor)
        if not factor:
            return FreeElement.zero()
        return FreeElement._wrap({w: c * factor for w, c in self._terms.items()})

    __rmul__ = __mul__

    def map_words(self, fn: Callable[[Word], Word]) -> "FreeElement":
        """Linear extension of a bijection on words."""
        return FreeElement._wrap({fn(w): c for w, c in self._terms.items()})

    def scale_words(self, fn: Callable[[Word], LaurentPoly]) -> "FreeElement":
        """Multiplies each word's coefficient by fn(word)."""
        builder = ElementBuilder()
        for word, coeff in self._terms.items():
            builder.add(word, coeff, fn(word))
        return builder.build()

    def bidegrees(self) -> List[Bidegree]:
        return sorted({bidegree_of_word(w) for w in self._terms}, key=lambda d: (d[0] + d[1], d[0]))

    def bidegree(self) -> Union[Bidegree, str]:
        if not self._terms:
            raise FreeWordError("The zero element has no bidegree.")
        degrees = self.bidegrees()
        return degrees[0] if len(degrees) == 1 else INHOMOGENEOUS

    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def homogeneous_parts(self) -> Dict[Bidegree, "FreeElement"]:
        parts: Dict[Bidegree, Dict[Word, RatFunc]] = {}
        for word, coeff in self._terms.items():
            parts.setdefault(bidegree_of_word(word), {})[word] = coeff
        return {d: FreeElement._wrap(parts[d]) for d in sorted(parts, key=lambda d: (d[0] + d[1], d[0]))}

    def is_laurent(self) -> bool:
        return all(c.is_laurent() for c in self._terms.values())

    def __repr__(self) -> str:
        return f"FreeElement('{render_element(self)}')"

    def __str__(self) -> str:
        return render_element(self)


class ElementBuilder:
    """Accumulates word coefficients, keeping Laurent contributions out of Q(q) until the end."""

    __slots__ = ("_laurent", "_general")

    def __init__(self):
        self._laurent: Dict[Word, LaurentPoly] = {}
        self._general: Dict[Word, RatFunc] = {}

    def add_laurent(self, word: Word, coeff: LaurentPoly) -> None:
        current = self._laurent.get(word)
        self._laurent[word] = coeff if current is None else current + coeff

    def add(self, word: Word, coeff: RatFunc, factor: Optional[LaurentPoly] = None) -> None:
        if coeff.is_laurent():
            laurent = coeff.as_laurent()
            self.add_laurent(word, laurent if factor is None else laurent * factor)
            return
        value = coeff if factor is None else coeff * factor
        current = self._general.get(word)
        self._general[word] = value if current is None else current + value

    def add_element(self, element: FreeElement, factor: Optional[LaurentPoly] = None) -> None:
        for word, coeff in element._terms.items():
            self.add(word, coeff, factor)

    def build(self) -> FreeElement:
        terms: Dict[Word, RatFunc] = {}
        for word, coeff in self._laurent.items():
            if coeff:
                terms[word] = coeff.to_ratfunc()
        for word, coeff in self._general.items():
            total = terms[word] + coeff if word in terms else coeff
            if total:
                terms[word] = total
            else:
                terms.pop(word, None)
        return FreeElement._wrap(terms)


def linear_combination(pairs: Iterable[Tuple[Scalar, FreeElement]]) -> FreeElement:
    builder = ElementBuilder()
    for coeff, element in pairs:
        coeff = RatFunc.coerce(coeff)
        if not coeff:
            continue
        if coeff.is_laurent():
            builder.add_element(element, coeff.as_laurent())
        else:
            for word, value in element.items():
                builder.add(word, value * coeff)
    return builder.build()


def concat_mul(a: FreeElement, b: FreeElement) -> FreeElement:
    """Bilinear extension of word concatenation."""
    builder = ElementBuilder()
    for u, cu in a.items():
        for v, cv in b.items():
            builder.add(u + v, cu * cv)
    return builder.build()


def sigma(e: FreeElement) -> FreeElement:
    return e.map_words(sigma_word)


def dagger(e: FreeElement) -> FreeElement:
    return e.map_words(dagger_word)


def tau(e: FreeElement) -> FreeElement:
    return e.map_words(tau_word)


def supported_in_bold_v(e: FreeElement) -> bool:
    return all(in_bold_v(w) for w in e.support())


def render_element(e: FreeElement) -> str:
    """Renders `coeff * word` terms in canonical order; the empty word is `1`."""
    if not e:
        return "0"
    pieces: List[str] = []
    for word, coeff in e.items():
        text = render_scalar(coeff)
        negative = text.startswith("-") and is_single_term(text)
        if negative:
            text = text[1:]
        if word == "":
            body = text if is_single_term(text) else f"({text})"
        elif text == "1":
            body = word
        else:
            body = f"{text if is_single_term(text) else f'({text})'} * {word}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


class ElementAlgebra:
    """Grammar callbacks: names are words, juxtaposition is concatenation."""

    def scalar(self, value: RatFunc) -> FreeElement:
        return FreeElement.one() * value

    def symbol(self, name: str) -> FreeElement:
        if name.strip("xy"):
            raise ExpressionSyntaxError(f"{name!r} is not a word in x and y.")
        return FreeElement.word(name)

    def add(self, left: FreeElement, right: FreeElement) -> FreeElement:
        return left + right

    def mul(self, left: FreeElement, right: FreeElement) -> FreeElement:
        return concat_mul(left, right)

    def scale(self, value: FreeElement, factor: RatFunc) -> FreeElement:
        return value * factor

    def as_scalar(self, value: FreeElement) -> Optional[RatFunc]:
        if all(w == "" for w in value.support()):
            return value.coefficient("")
        return None


def parse_element(text: str) -> FreeElement:
    """Parses e.g. `xyxyy + [3]_q xyyxy`, `q^-2 * yx`, or `1`."""
    return parse_expression(text, ElementAlgebra())
