import logging
import asyncio
from typing import Literal, Optional
from fastapi import APIRouter, HTTPException, Query

from app.core.config import settings
from app.schemas.algebra import ApplyRequest, MatrixRequest, ShuffleRequest
from app.schemas.report import Report
from app.services import algebra_service
from app.services.freeword import FreeWordError
from app.services.grammar import ExpressionSyntaxError
from app.services.linalg import LinalgError
from app.services.qfield import QFieldError
from app.services.relations import FixtureError
from app.services.repmodule import RepModuleError
from app.services.subalgebra import SubalgebraError

router = APIRouter()

# Errors caused by the request itself; anything else is a 500.
CLIENT_ERRORS = (
    algebra_service.AlgebraServiceError,
    ExpressionSyntaxError,
    FreeWordError,
    QFieldError,
    RepModuleError,
    SubalgebraError,
)


async def _run(func, *args, **kwargs) -> Report:
    try:
        return await asyncio.to_thread(func, *args, **kwargs)
    except CLIENT_ERRORS as e:
        raise HTTPException(status_code=400, detail=str(e))
    except LinalgError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except FixtureError as e:
        logging.error(f"Golden data could not be read: {e}", exc_info=True)
        raise HTTPException(status_code=500, detail=f"Fixture error: {e}")
    except Exception as e:
        logging.exception(f"An unexpected error occurred in {func.__name__}: {e}")
        raise HTTPException(status_code=500, detail=f"An unexpected error occurred: {e}")


def _window(max_degree: int) -> int:
    if max_degree > settings.HARD_CAP:
        raise HTTPException(status_code=400, detail=f"max_degree may not exceed {settings.HARD_CAP}.")
    return max_degree


@router.post("/shuffle", response_model=Report)
async def shuffle(request: ShuffleRequest):
    """
    Expands the q-shuffle product of two elements.
    """
    return await _run(algebra_service.shuffle_report, request.left, request.right, request.method)


@router.post("/apply", response_model=Report)
async def apply(request: ApplyRequest):
    """
    Applies a generator expression under an action-table row, or an operator expression.
    """
    return await _run(
        algebra_service.apply_report,
        request.element,
        generator=request.generator,
        operator=request.operator,
        row=request.row,
    )


@router.get("/dims", response_model=Report)
async def dims(
    space: Literal["U", "bold-U"] = Query("U"),
    max_degree: Optional[int] = Query(None, ge=0),
):
    """
    Tabulates dim U(r,s) or dim bold-U(r,s) for r + s up to the window.
    """
    window = _window(settings.MAX_DEGREE if max_degree is None else max_degree)
    return await _run(algebra_service.dims_report, space, window)


@router.get("/basis", response_model=Report)
async def basis(
    r: int = Query(..., ge=0),
    s: int = Query(..., ge=0),
    space: Literal["U", "bold-U"] = Query("bold-U"),
    listed: bool = Query(False),
):
    """
    Returns a basis of one graded component.
    """
    _window(r + s)
    return await _run(algebra_service.basis_report, space, r, s, listed=listed)


@router.post("/matrix", response_model=Report)
async def matrix(request: MatrixRequest):
    """
    Computes the matrix of a generator on listed (or echelon) bases.
    """
    return await _run(algebra_service.matrix_report, request.generator, request.source, request.target)


@router.get("/genfunc/{name}", response_model=Report)
async def genfunc(name: str, max_degree: Optional[int] = Query(None, ge=0)):
    """
    Expands a named generating function to the given order.
    """
    window = _window(settings.MAX_DEGREE if max_degree is None else max_degree)
    return await _run(algebra_service.genfunc_report, name, window)
