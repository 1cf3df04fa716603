import logging
from typing import Any, Dict, List, Optional

from app.schemas.report import Report, info
from app.services import appendix, repmodule, series, subalgebra
from app.services.freeword import FreeElement, parse_element, render_element
from app.services.operators import apply, parse_operator_expr
from app.services.qfield import render_scalar
from app.services.qshuffle import shuffle, shuffle_right
from app.services.relations import parse_formal

logger = logging.getLogger(__name__)

SPACES = ("U", "bold-U")


class AlgebraServiceError(Exception):
    """Custom exception for requests naming an unknown space, generator or series."""
    pass


def element_details(e: FreeElement) -> Dict[str, Any]:
    return {
        "expression": render_element(e),
        "terms": [[word or "1", render_scalar(coeff)] for word, coeff in e.items()],
    }


def shuffle_report(left: str, right: str, method: str = "left") -> Report:
    """Expands left * right with the chosen recursion."""
    if method not in ("left", "right"):
        raise AlgebraServiceError(f"method must be 'left' or 'right', got {method!r}.")
    a, b = parse_element(left), parse_element(right)
    product = shuffle(a, b) if method == "left" else shuffle_right(a, b)
    return Report(
        command="shuffle",
        params={"left": left, "right": right, "method": method},
        results=[info("product", **element_details(product))],
    )


def apply_report(element: str, generator: Optional[str] = None, operator: Optional[str] = None, row: int = 0) -> Report:
    """Applies a generator expression (under an action-table row) or an operator expression to an element."""
    if (generator is None) == (operator is None):
        raise AlgebraServiceError("Give exactly one of a generator or an operator expression.")
    e = parse_element(element)
    if generator is not None:
        table = repmodule.action_table(row)
        image = parse_formal(generator, repmodule.resolve_generator).evaluate(table.act, e)
        params = {"generator": generator, "row": row, "element": element}
    else:
        image = parse_operator_expr(operator).evaluate(apply, e)
        params = {"operator": operator, "element": element}
    return Report(command="apply", params=params, results=[info("image", **element_details(image))])


def _check_space(space: str) -> None:
    if space not in SPACES:
        raise AlgebraServiceError(f"space must be one of {', '.join(SPACES)}, got {space!r}.")


def dims_report(space: str, maxdeg: int) -> Report:
    _check_space(space)
    table = subalgebra.dims_table(maxdeg) if space == "U" else repmodule.bold_dims_table(maxdeg)
    return Report(
        command="dims",
        params={"space": space, "max": maxdeg},
        results=[info(f"dim {space}(r,s)", table=table)],
    )


def basis_report(space: str, r: int, s: int, listed: bool = False) -> Report:
    """The echelon basis of U(r,s) or bold-U(r,s); with `listed`, the published ordering for bold-U."""
    _check_space(space)
    if listed:
        if space != "bold-U":
            raise AlgebraServiceError("Only bold-U has a listed basis.")
        ordered = appendix.listed_basis(r, s)
        vectors: List[FreeElement] = list(ordered.vectors) if ordered is not None else []
    elif space == "U":
        vectors = list(subalgebra.u_component(r, s))
    else:
        vectors = list(repmodule.bold_u_by_intersection(r, s))
    return Report(
        command="basis",
        params={"space": space, "r": r, "s": s, "listed": listed},
        results=[
            info(
                f"basis of {space}({r},{s})",
                r=r,
                s=s,
                dim=len(vectors),
                vectors=[[[word or "1", render_scalar(c)] for word, c in v.items()] for v in vectors],
                rendered=[render_element(v) for v in vectors],
            )
        ],
    )


def matrix_report(generator: str, source: str, target: str) -> Report:
    try:
        g = repmodule.GeneratorId(generator)
    except ValueError as exc:
        raise AlgebraServiceError(f"Unknown generator {generator!r}.") from exc
    block = appendix.matrix_block(g, appendix.parse_space(source), appendix.parse_space(target))
    logger.debug(f"{g} block {source} -> {target} has shape {block.shape}.")
    return Report(
        command="matrix",
        params={"gen": generator, "from": source, "to": target},
        results=[info(f"{g}: {block.domain} -> {block.codomain}", rows=block.rows_as_text(), shape=list(block.shape))],
    )


def genfunc_report(name: str, cap: int) -> Report:
    try:
        value = series.genfunc(name, cap)
    except ValueError as exc:
        raise AlgebraServiceError(str(exc)) from exc
    if isinstance(value, series.BiSeries):
        details = {"table": value.matrix(cap + 1, cap + 1)}
    else:
        details = {"coefficients": value}
    return Report(command="genfunc", params={"name": name, "max": cap}, results=[info(name, **details)])
