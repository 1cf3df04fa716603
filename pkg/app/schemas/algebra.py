from pydantic import BaseModel, Field
from typing import Literal, Optional

class ShuffleRequest(BaseModel):
    """Request model for a q-shuffle product."""
    left: str = Field(..., description="An element such as 'xy' or '(q+q^-1)*x + yx'.")
    right: str = Field(..., description="The right-hand factor, in the same syntax.")
    method: Literal["left", "right"] = Field("left", description="Which recursion expands the product.")

class ApplyRequest(BaseModel):
    """Request model for applying a generator or an operator to an element."""
    element: str = Field(..., description="The element acted on.")
    generator: Optional[str] = Field(None, description="A product of generators such as 'F0 F1' or 'K0'.")
    operator: Optional[str] = Field(None, description="An expression in the word operators such as 'AstarL Aell'.")
    row: int = Field(0, ge=0, le=3, description="Action-table row used with `generator`.")

class MatrixRequest(BaseModel):
    """Request model for the matrix of a generator between sums of bold-U components."""
    generator: str = Field(..., description="One of E0, E1, F0, F1, K0, K1, D and their inverses.")
    source: str = Field(..., description="Domain components as r,s pairs joined by '+', e.g. '2,1+1,2'.")
    target: str = Field(..., description="Codomain components in the same syntax.")
