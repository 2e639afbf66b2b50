"""Wire formats: instance documents and result documents.

These pydantic models define the JSON bodies of the HTTP endpoints and the
documents the CLI reads and prints. Exact values always travel as rational
strings ('a' or 'a/b'); JSON numbers are only used for the binary64
convenience rendering and structural integers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Annotated, Literal, Optional

from pydantic import BaseModel, Field

from .model import (
    Marginal,
    ProductDistribution,
    TwoPointTarget,
    parse_rational,
    validate_instance,
)


class MarginalDoc(BaseModel):
    support: list[str]
    probs: list[str]


class TargetDoc(BaseModel):
    y1: list[str]
    y2: list[str]
    t: str


class InstanceDocument(BaseModel):
    """JSON encoding of one solver instance; all scalars are rational strings."""

    marginals: list[MarginalDoc]
    target: TargetDoc
    p: float = Field(default=2, gt=0)

    def to_model(self) -> tuple[ProductDistribution, TwoPointTarget]:
        """Parse and validate into exact model objects."""
        mu = ProductDistribution(
            marginals=[
                Marginal(
                    support=[parse_rational(s) for s in doc.support],
                    probs=[parse_rational(s) for s in doc.probs],
                )
                for doc in self.marginals
            ]
        )
        target = TwoPointTarget(
            y1=[parse_rational(s) for s in self.target.y1],
            y2=[parse_rational(s) for s in self.target.y2],
            t=parse_rational(self.target.t),
        )
        validate_instance(mu, target)
        return mu, target


class ResultDocument(BaseModel):
    """Solver answer; value_rational is absent only in float mode."""

    value_rational: Optional[str] = None
    value_decimal: float
    mode: Literal["exact", "float", "approx"]
    grid_N: Optional[int] = None
    minkowski_size: Optional[int] = None
    n_t: Optional[int] = None
    error_bound: Optional[str] = None
    oracle_calls: Optional[int] = None


class BruteRequest(BaseModel):
    instance: InstanceDocument
    p: Optional[float] = Field(default=None, ge=1)
    mode: Literal["exact", "float"] = "exact"
    cap: Optional[int] = Field(default=None, ge=1)


class ApproxRequest(BaseModel):
    instance: InstanceDocument
    eps: str


class CountRequest(BaseModel):
    weights: list[Annotated[int, Field(ge=0)]]
    capacity: int = Field(ge=0)
    via: Literal["ot", "dp", "both"] = "both"
    noise: Optional[str] = None


class PlanRequest(BaseModel):
    instance: InstanceDocument
    atom: list[int]  # 0-based support index per marginal


class PlanResponse(BaseModel):
    threshold: str
    fraction: str
    pi1: str
    pi2: str


class ErrorResponse(BaseModel):
    error: str
    message: str
    exit_code: int


def exact_result(value: Fraction, **extra) -> ResultDocument:
    """ResultDocument for an exact rational value; float field is correctly rounded."""
    try:
        decimal = float(value)
    except OverflowError:
        decimal = math.inf if value > 0 else -math.inf
    return ResultDocument(
        value_rational=str(value),
        value_decimal=decimal,
        **extra,
    )
