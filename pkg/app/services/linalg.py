"""Exact linear algebra over Q(q) on graded pieces of the free algebra.

Row reduction is delegated to sympy's sparse `DomainMatrix.rref` over the
fraction field Z(q). Columns are always the canonical word order, so the
reduced echelon form (and every basis derived from it) is unique.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Protocol, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from app.services.freeword import Bidegree, FreeElement, Word, linear_combination, render_element, word_key
from app.services.qfield import FIELD, RATIONAL_FUNCTIONS, RING, RatFunc, render_scalar


class LinalgError(Exception):
    """Custom exception for bidegree mismatches and closure failures in graded linear algebra."""
    pass


Row = Dict[int, object]


def _primitive(row: Dict[int, object]) -> Row:
    """Scales a row of fraction-field entries to coprime polynomial entries."""
    denominator = RING.one
    for value in row.values():
        denominator = denominator.lcm(value.denom)
    numerators = {j: value.numer * denominator.exquo(value.denom) for j, value in row.items()}
    content = None
    for value in numerators.values():
        content = value if content is None else content.gcd(value)
    return {j: FIELD.raw_new(value.exquo(content), RING.one) for j, value in numerators.items()}


def reduce_rows(rows: Sequence[Row], ncols: int) -> List[Tuple[int, Row]]:
    """Reduced row echelon form; returns (pivot column, row) pairs with pivot entries 1."""
    nonzero = {i: _primitive(row) for i, row in enumerate(rows) if row}
    if not nonzero or ncols == 0:
        return []
    matrix = DomainMatrix(nonzero, (len(rows), ncols), RATIONAL_FUNCTIONS)
    reduced, pivots = matrix.rref()
    grouped: Dict[int, Row] = {}
    for (i, j), value in reduced.to_dok().items():
        if value:
            grouped.setdefault(i, {})[j] = value
    return [(pivot, grouped[i]) for i, pivot in enumerate(pivots)]


def _columns(elements: Sequence[FreeElement]) -> List[Word]:
    words = set()
    for element in elements:
        words.update(element.support())
    return sorted(words, key=word_key)


def _to_row(element: FreeElement, index: Dict[Word, int]) -> Row:
    return {index[w]: c.element for w, c in element.items()}


def _common_bidegree(elements: Sequence[FreeElement], bidegree: Optional[Bidegree]) -> Optional[Bidegree]:
    for element in elements:
        if not element:
            continue
        degree = element.bidegree()
        if not isinstance(degree, tuple):
            raise LinalgError(f"Inhomogeneous element {render_element(element)}.")
        if bidegree is None:
            bidegree = degree
        elif degree != bidegree:
            raise LinalgError(f"Mixed bidegrees {bidegree} and {degree} in one graded component.")
    return bidegree


@dataclass(frozen=True)
class EchelonBasis:
    """Reduced row-echelon basis of a subspace of one graded component."""
    bidegree: Optional[Bidegree]
    vectors: Tuple[FreeElement, ...]
    pivots: Tuple[Word, ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def member(self, e: FreeElement) -> Optional[Tuple[RatFunc, ...]]:
        """Coordinates of e in this basis, or None when e is not in the span."""
        if not e:
            return tuple(RatFunc(0) for _ in self.vectors)
        degree = e.bidegree()
        if self.bidegree is not None and degree != self.bidegree:
            raise LinalgError(f"Element of bidegree {degree} tested against a basis of {self.bidegree}.")
        coords = tuple(e.coefficient(p) for p in self.pivots)
        return coords if self.reconstruct(coords) == e else None

    def coordinates(self, e: FreeElement) -> Optional[Tuple[RatFunc, ...]]:
        if e and e.bidegree() != self.bidegree:
            return None
        return self.member(e)

    def contains(self, e: FreeElement) -> bool:
        return self.member(e) is not None

    def reconstruct(self, coords: Sequence[RatFunc]) -> FreeElement:
        return linear_combination(zip(coords, self.vectors))


def echelonize(spanning: Sequence[FreeElement], bidegree: Optional[Bidegree] = None) -> EchelonBasis:
    """Reduced echelon basis of the span of homogeneous elements of one bidegree."""
    bidegree = _common_bidegree(spanning, bidegree)
    nonzero = [e for e in spanning if e]
    columns = _columns(nonzero)
    index = {w: j for j, w in enumerate(columns)}
    reduced = reduce_rows([_to_row(e, index) for e in nonzero], len(columns))
    vectors = tuple(
        FreeElement({columns[j]: RatFunc.from_element(value) for j, value in row.items()}) for _, row in reduced
    )
    pivots = tuple(columns[pivot] for pivot, _ in reduced)
    return EchelonBasis(bidegree=bidegree, vectors=vectors, pivots=pivots)


def rank(elements: Sequence[FreeElement]) -> int:
    """Rank of any finite family, homogeneous or not."""
    nonzero = [e for e in elements if e]
    columns = _columns(nonzero)
    index = {w: j for j, w in enumerate(columns)}
    return len(reduce_rows([_to_row(e, index) for e in nonzero], len(columns)))


def left_kernel(rows: Sequence[FreeElement]) -> List[Tuple[RatFunc, ...]]:
    """Basis of {lambda : sum_i lambda_i rows_i = 0}, via reduction of [rows | identity]."""
    columns = _columns(rows)
    index = {w: j for j, w in enumerate(columns)}
    width = len(columns)
    augmented = []
    for i, element in enumerate(rows):
        row = _to_row(element, index)
        row[width + i] = FIELD.one
        augmented.append(row)
    combos = []
    for pivot, row in reduce_rows(augmented, width + len(rows)):
        if pivot >= width:
            combos.append(tuple(RatFunc.from_element(row.get(width + i, FIELD.zero)) for i in range(len(rows))))
    return combos


def kernel_of_map(action: Callable[[FreeElement], FreeElement], basis: Sequence[FreeElement]) -> EchelonBasis:
    """Kernel of a linear map restricted to span(basis), as an echelon basis."""
    basis = list(basis)
    bidegree = _common_bidegree(basis, None)
    images = [action(v) for v in basis]
    kernel = [linear_combination(zip(combo, basis)) for combo in left_kernel(images)]
    return echelonize(kernel, bidegree)


def intersect_with_predicate(b: EchelonBasis, allowed: Callable[[Word], bool]) -> EchelonBasis:
    """Elements of span(b) supported on allowed words: the kernel of the forbidden-word projection."""
    def projection(v: FreeElement) -> FreeElement:
        return FreeElement({w: c for w, c in v.items() if not allowed(w)})

    if not b.vectors:
        return b
    return kernel_of_map(projection, b.vectors)


def sum_of(*bases: EchelonBasis) -> EchelonBasis:
    bidegree = next((b.bidegree for b in bases if b.bidegree is not None), None)
    return echelonize([v for b in bases for v in b.vectors], bidegree)


def zero_basis(bidegree: Bidegree) -> EchelonBasis:
    return EchelonBasis(bidegree=bidegree, vectors=(), pivots=())


class Basis(Protocol):
    vectors: Sequence[FreeElement]

    def coordinates(self, e: FreeElement) -> Optional[Tuple[RatFunc, ...]]: ...


class OrderedBasis:
    """An independent family of one bidegree kept in a given order (e.g. a published table)."""

    def __init__(self, bidegree: Bidegree, vectors: Sequence[FreeElement]):
        if _common_bidegree(vectors, bidegree) != bidegree:
            raise LinalgError(f"Vectors do not lie in bidegree {bidegree}.")
        self.bidegree = bidegree
        self.vectors = tuple(vectors)
        self._echelon: Optional[EchelonBasis] = None
        self._transform: Optional[List[Tuple[RatFunc, ...]]] = None

    def __len__(self) -> int:
        return len(self.vectors)

    def _prepare(self) -> None:
        if self._echelon is not None:
            return
        columns = _columns(self.vectors)
        index = {w: j for j, w in enumerate(columns)}
        width = len(columns)
        augmented = []
        for i, element in enumerate(self.vectors):
            row = _to_row(element, index)
            row[width + i] = FIELD.one
            augmented.append(row)
        reduced = reduce_rows(augmented, width + len(self.vectors))
        if any(pivot >= width for pivot, _ in reduced):
            raise LinalgError(f"The vectors listed for {self.bidegree} are linearly dependent.")
        vectors, transform = [], []
        for pivot, row in reduced:
            vectors.append(FreeElement({columns[j]: RatFunc.from_element(v) for j, v in row.items() if j < width}))
            transform.append(tuple(RatFunc.from_element(row.get(width + i, FIELD.zero)) for i in range(len(self.vectors))))
        self._echelon = EchelonBasis(self.bidegree, tuple(vectors), tuple(columns[p] for p, _ in reduced))
        self._transform = transform

    def is_independent(self) -> bool:
        try:
            self._prepare()
        except LinalgError:
            return False
        return True

    @property
    def echelon(self) -> EchelonBasis:
        self._prepare()
        return self._echelon

    def coordinates(self, e: FreeElement) -> Optional[Tuple[RatFunc, ...]]:
        self._prepare()
        if e and e.bidegree() != self.bidegree:
            return None
        echelon_coords = self._echelon.member(e)
        if echelon_coords is None:
            return None
        coords = []
        for i in range(len(self.vectors)):
            total = RatFunc(0)
            for k, c in enumerate(echelon_coords):
                if c:
                    total = total + c * self._transform[k][i]
            coords.append(total)
        return tuple(coords)


class DirectSum:
    """Concatenation of bases of distinct bidegrees, in the given order."""

    def __init__(self, summands: Sequence[Basis]):
        self.summands = list(summands)
        self.vectors = tuple(v for b in self.summands for v in b.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def coordinates(self, e: FreeElement) -> Optional[Tuple[RatFunc, ...]]:
        parts = e.homogeneous_parts()
        coords: List[RatFunc] = []
        used = set()
        for summand in self.summands:
            degree = getattr(summand, "bidegree", None)
            part = parts.get(degree, FreeElement.zero()) if degree is not None else FreeElement.zero()
            if degree in parts:
                used.add(degree)
            local = summand.coordinates(part)
            if local is None:
                return None
            coords.extend(local)
        if any(degree not in used for degree in parts):
            return None
        return tuple(coords)


@dataclass(frozen=True)
class GradedMatrix:
    """entries[i][j] is the coefficient of codomain vector i in the image of domain vector j."""
    name: str
    domain: str
    codomain: str
    entries: Tuple[Tuple[RatFunc, ...], ...]
    columns: int = 0

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.entries), self.columns

    def rows_as_text(self) -> List[List[str]]:
        return [[render_scalar(c) for c in row] for row in self.entries]

    def render(self, fmt: str = "text") -> str:
        cells = self.rows_as_text()
        if fmt == "latex":
            body = " \\\\\n".join(" & ".join(latex_scalar(c) for c in row) for row in cells)
            return f"% {self.name}: {self.domain} -> {self.codomain}\n\\begin{{pmatrix}}\n{body}\n\\end{{pmatrix}}"
        width = max((len(c) for row in cells for c in row), default=1)
        lines = [f"{self.name}: {self.domain} -> {self.codomain}"]
        lines += ["  " + "  ".join(c.rjust(width) for c in row) for row in cells]
        return "\n".join(lines)


def latex_scalar(text: str) -> str:
    return re.sub(r"\^(-?\d+)", r"^{\1}", text.replace("*", ""))


def graded_block(
    action: Callable[[FreeElement], FreeElement],
    domain: Basis,
    codomain: Basis,
    name: str = "",
    domain_label: str = "",
    codomain_label: str = "",
) -> GradedMatrix:
    """Matrix of an operator between two bases; images must lie in the codomain span."""
    columns = []
    for j, vector in enumerate(domain.vectors):
        image = action(vector)
        coords = codomain.coordinates(image)
        if coords is None:
            raise LinalgError(
                f"{name or 'operator'} maps domain vector {j + 1} ({render_element(vector)}) outside the codomain span."
            )
        columns.append(coords)
    rows = len(codomain.vectors)
    entries = tuple(tuple(columns[j][i] for j in range(len(columns))) for i in range(rows))
    return GradedMatrix(name=name, domain=domain_label, codomain=codomain_label, entries=entries, columns=len(columns))
