"""Named linear maps on the free algebra and the relation checks among them."""
from __future__ import annotations

import logging
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from app.core.config import settings
from app.schemas.report import CheckResult, info, outcome
from app.services.freeword import (
    ElementBuilder,
    FreeElement,
    FreeWordError,
    bidegree_of_word,
    bidegrees_up_to,
    dagger,
    render_element,
    sigma,
    tau,
    words_of_bidegree,
    words_up_to_length,
)
from app.services.linalg import kernel_of_map
from app.services.qfield import LaurentPoly
from app.services.qshuffle import shuffle_words
from app.services.relations import FormalExpr, Relation, check_relations, load_relations, parse_formal

logger = logging.getLogger(__name__)


class OperatorId(str, Enum):
    X = "X"
    Xinv = "Xinv"
    Y = "Y"
    Yinv = "Yinv"
    K = "K"
    Kinv = "Kinv"
    AstarL = "AstarL"
    BstarL = "BstarL"
    AstarR = "AstarR"
    BstarR = "BstarR"
    Aell = "Aell"
    Bell = "Bell"
    Ar = "Ar"
    Br = "Br"
    Sigma = "Sigma"
    Dagger = "Dagger"
    Tau = "Tau"

    def __str__(self) -> str:
        return self.value


OperatorExpr = FormalExpr[OperatorId]

STARRED = (OperatorId.AstarL, OperatorId.BstarL, OperatorId.AstarR, OperatorId.BstarR)
MULTIPLIERS = (OperatorId.Aell, OperatorId.Bell, OperatorId.Ar, OperatorId.Br)
GRADINGS = (OperatorId.X, OperatorId.Xinv, OperatorId.Y, OperatorId.Yinv, OperatorId.K, OperatorId.Kinv)

# letter and end of the word each starred map deletes
_DELETION = {
    OperatorId.AstarL: ("x", "left"),
    OperatorId.BstarL: ("y", "left"),
    OperatorId.AstarR: ("x", "right"),
    OperatorId.BstarR: ("y", "right"),
}
# letter and side of the shuffle multiplication
_MULTIPLICATION = {
    OperatorId.Aell: ("x", "left"),
    OperatorId.Bell: ("y", "left"),
    OperatorId.Ar: ("x", "right"),
    OperatorId.Br: ("y", "right"),
}


def _grading_exponent(op: OperatorId, word: str) -> int:
    r, s = bidegree_of_word(word)
    return {
        OperatorId.X: r,
        OperatorId.Xinv: -r,
        OperatorId.Y: s,
        OperatorId.Yinv: -s,
        OperatorId.K: 2 * r - 2 * s,
        OperatorId.Kinv: 2 * s - 2 * r,
    }[op]


def _delete(e: FreeElement, letter: str, side: str) -> FreeElement:
    terms = {}
    for word, coeff in e.items():
        if side == "left" and word.startswith(letter):
            terms[word[1:]] = coeff
        elif side == "right" and word.endswith(letter):
            terms[word[:-1]] = coeff
    return FreeElement(terms)


def _multiply(e: FreeElement, letter: str, side: str) -> FreeElement:
    builder = ElementBuilder()
    for word, coeff in e.items():
        product = shuffle_words(letter, word) if side == "left" else shuffle_words(word, letter)
        laurent = coeff.as_laurent() if coeff.is_laurent() else None
        for w, c in product.items():
            if laurent is not None:
                builder.add_laurent(w, c * laurent)
            else:
                builder.add(w, coeff, c)
    return builder.build()


def apply(op: OperatorId, e: FreeElement) -> FreeElement:
    """Applies one named map to an element of the free algebra."""
    if not e:
        return e
    if op in _DELETION:
        return _delete(e, *_DELETION[op])
    if op in _MULTIPLICATION:
        return _multiply(e, *_MULTIPLICATION[op])
    if op in GRADINGS:
        return e.scale_words(lambda w: LaurentPoly.monomial(_grading_exponent(op, w)))
    if op is OperatorId.Sigma:
        return sigma(e)
    if op is OperatorId.Dagger:
        return dagger(e)
    if op is OperatorId.Tau:
        return tau(e)
    raise ValueError(f"Unknown operator {op!r}.")


def resolve_operator(name: str) -> OperatorId:
    return OperatorId(name)


def parse_operator_expr(text: str) -> OperatorExpr:
    """Parses e.g. `q/(q - q^-1) Ar Kinv - q^-1/(q - q^-1) Aell`."""
    return parse_formal(text, resolve_operator)


def apply_expr(expr: OperatorExpr, e: FreeElement) -> FreeElement:
    return expr.evaluate(apply, e)


# Each symmetry phi satisfies phi(op(v)) = SWAPS[phi][op](phi(v)).
_SIGMA_SWAP = {
    OperatorId.X: OperatorId.Y,
    OperatorId.Xinv: OperatorId.Yinv,
    OperatorId.K: OperatorId.Kinv,
    OperatorId.AstarL: OperatorId.BstarL,
    OperatorId.AstarR: OperatorId.BstarR,
    OperatorId.Aell: OperatorId.Bell,
    OperatorId.Ar: OperatorId.Br,
}
_DAGGER_SWAP = {
    OperatorId.X: OperatorId.X,
    OperatorId.Xinv: OperatorId.Xinv,
    OperatorId.Y: OperatorId.Y,
    OperatorId.Yinv: OperatorId.Yinv,
    OperatorId.K: OperatorId.K,
    OperatorId.Kinv: OperatorId.Kinv,
    OperatorId.AstarL: OperatorId.AstarR,
    OperatorId.BstarL: OperatorId.BstarR,
    OperatorId.Aell: OperatorId.Ar,
    OperatorId.Bell: OperatorId.Br,
}
_TAU_SWAP = {
    OperatorId.X: OperatorId.Y,
    OperatorId.Xinv: OperatorId.Yinv,
    OperatorId.K: OperatorId.Kinv,
    OperatorId.AstarL: OperatorId.BstarR,
    OperatorId.BstarL: OperatorId.AstarR,
    OperatorId.Aell: OperatorId.Br,
    OperatorId.Bell: OperatorId.Ar,
}


def _involution(table: Dict[OperatorId, OperatorId]) -> Dict[OperatorId, OperatorId]:
    full = dict(table)
    full.update({v: k for k, v in table.items()})
    return full


SWAPS: Dict[OperatorId, Dict[OperatorId, OperatorId]] = {
    OperatorId.Sigma: _involution(_SIGMA_SWAP),
    OperatorId.Dagger: _involution(_DAGGER_SWAP),
    OperatorId.Tau: _involution(_TAU_SWAP),
}


def appendix_a_relations(fixture_dir: Optional[Path] = None) -> Dict[str, Tuple[Relation, ...]]:
    return _appendix_a_relations((fixture_dir or settings.FIXTURE_DIR) / "appendix_a.txt")


@lru_cache(maxsize=None)
def _appendix_a_relations(path: Path) -> Dict[str, Tuple[Relation, ...]]:
    return {section: tuple(items) for section, items in load_relations(path, resolve_operator).items()}


def check_appendixA_global(maxlen: int, fixture_dir: Optional[Path] = None) -> List[CheckResult]:
    """Every operator identity claimed on the whole free algebra, on all words up to maxlen."""
    if maxlen < 1:
        raise ValueError("maxlen must be at least 1.")
    vectors = [FreeElement.word(w) for w in words_up_to_length(maxlen)]
    relations = appendix_a_relations(fixture_dir)["global"]
    logger.info(f"Checking {len(relations)} global relations on {len(vectors)} words.")
    return check_relations(relations, vectors, apply, "appendix-a global")


def check_xy_commutations(maxlen: int, fixture_dir: Optional[Path] = None) -> List[CheckResult]:
    vectors = [FreeElement.word(w) for w in words_up_to_length(maxlen)]
    return check_relations(appendix_a_relations(fixture_dir)["xy-commutations"], vectors, apply, "xy-commutation")


def check_appendixA_onU(window: int, fixture_dir: Optional[Path] = None) -> List[CheckResult]:
    """The starred q-Serre relations, claimed only on the shuffle subalgebra."""
    from app.services.subalgebra import u_basis_vectors

    relations = appendix_a_relations(fixture_dir)["on-U"]
    results = check_relations(relations, u_basis_vectors(window), apply, "appendix-a on U")
    # outside the subalgebra the first relation need not vanish
    witness = FreeElement.word("yxxx")
    value = relations[0].difference.evaluate(apply, witness)
    results.append(
        info(
            "appendix-a on U: value of the first relation on yxxx",
            relation=relations[0].text,
            value=render_element(value),
        )
    )
    return results


def check_intertwiners(maxlen: int) -> List[CheckResult]:
    """phi(op(w)) = swap(op)(phi(w)) for phi in sigma, dagger, tau, on all words up to maxlen."""
    words = words_up_to_length(maxlen)
    results: List[CheckResult] = []
    for phi, table in SWAPS.items():
        for op in sorted(table, key=lambda o: list(OperatorId).index(o)):
            partner = table[op]
            examples = []
            for word in words:
                w = FreeElement.word(word)
                lhs = apply(phi, apply(op, w))
                rhs = apply(partner, apply(phi, w))
                if lhs != rhs:
                    examples.append({"word": word or "1", "lhs": render_element(lhs), "rhs": render_element(rhs)})
            name = f"intertwiner: {phi} {op} = {partner} {phi}"
            if examples:
                logger.warning(f"{name} fails on {len(examples)} words.")
            results.append(outcome(name, not examples, checked=len(words), examples=examples[:5]))
    return results


def check_grading_shifts(maxlen: int) -> List[CheckResult]:
    """Starred maps lower and shuffle multiplications raise the matching degree by one."""
    shifts = {
        OperatorId.AstarL: (-1, 0), OperatorId.AstarR: (-1, 0),
        OperatorId.BstarL: (0, -1), OperatorId.BstarR: (0, -1),
        OperatorId.Aell: (1, 0), OperatorId.Ar: (1, 0),
        OperatorId.Bell: (0, 1), OperatorId.Br: (0, 1),
    }
    results = []
    for op, (dr, ds) in shifts.items():
        bad = []
        for word in words_up_to_length(maxlen):
            image = apply(op, FreeElement.word(word))
            r, s = bidegree_of_word(word)
            if image and image.bidegree() != (r + dr, s + ds):
                bad.append(word)
        results.append(outcome(f"grading shift of {op}", not bad, examples=bad[:5]))
    return results


def check_local_nilpotency(maxlen: int) -> List[CheckResult]:
    """(S)^(n+1) w = 0 for each starred map S and each word w of length n."""
    results = []
    for op in STARRED:
        bad = []
        for word in words_up_to_length(maxlen):
            value = FreeElement.word(word)
            for _ in range(len(word) + 1):
                value = apply(op, value)
            if value:
                bad.append(word)
        results.append(outcome(f"local nilpotency of {op}", not bad, examples=bad[:5]))
    return results


def check_starred_kernel(maxlen: int) -> CheckResult:
    """The common kernel of AstarL and BstarL on words up to maxlen is spanned by the empty word."""
    dims = {}
    for r, s in bidegrees_up_to(maxlen):
        basis = [FreeElement.word(w) for w in words_of_bidegree(r, s)]
        kernel = kernel_of_map(lambda v: apply(OperatorId.AstarL, v) + apply(OperatorId.BstarL, v), basis)
        if kernel:
            dims[f"{r},{s}"] = len(kernel)
    return outcome("common kernel of AstarL and BstarL", dims == {"0,0": 1}, kernel_dims=dims)


def reach_one(e: FreeElement, side: str = "left") -> List[OperatorId]:
    """A sequence of starred maps (applied in order) carrying e to a nonzero multiple of the empty word.

    Each step deletes the first (left) or last (right) letter of the leading
    word, so the image keeps that word's shortened form with the same coefficient.
    """
    if not e:
        raise FreeWordError("reach_one needs a nonzero element.")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}.")
    steps: List[OperatorId] = []
    current = e
    while current.support() != [""]:
        longest = max(len(w) for w in current.support())
        leading = next(w for w in current.support() if len(w) == longest)
        letter = leading[0] if side == "left" else leading[-1]
        if side == "left":
            op = OperatorId.AstarL if letter == "x" else OperatorId.BstarL
        else:
            op = OperatorId.AstarR if letter == "x" else OperatorId.BstarR
        current = apply(op, current)
        steps.append(op)
    return steps


def apply_sequence(steps: List[OperatorId], e: FreeElement) -> FreeElement:
    for op in steps:
        e = apply(op, e)
    return e
