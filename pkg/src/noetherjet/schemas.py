"""Pydantic request/response models for the verification service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str = "ok"


class SymmetrySchema(BaseModel):
    name: str
    xi_x: str
    xi_y: str
    xi_t: str
    eta: str
    potential: list[str] | None = None
    tabulated_flux: list[str] | None = None


class CatalogResponse(BaseModel):
    symmetries: list[SymmetrySchema]


class VerifyRequest(BaseModel):
    symmetries: list[str] | None = Field(
        default=None, description="Subset of names; null means all"
    )
    include_paper: bool = Field(
        default=False, description="Also check the tabulated fluxes"
    )
    file_content: str | None = Field(
        default=None, description="Symmetry file replacing the built-in catalog"
    )
    errata_content: str | None = Field(
        default=None, description="Errata overlay applied on top of the records"
    )
    max_order: int = Field(default=3, ge=2)
    seed: int = 0
    numeric_points: int = Field(default=20, ge=0)


class CheckRecordSchema(BaseModel):
    check_id: str
    symmetry: str
    kind: Literal["defect", "constructed", "paper", "bracket"]
    status: Literal["pass", "fail"]
    residual: str
    detail: str = ""


class VerifyResponse(BaseModel):
    records: list[CheckRecordSchema]
    passed: bool


class BracketTableRequest(BaseModel):
    max_order: int = Field(default=3, ge=2)
    seed: int = 0
    numeric_points: int = Field(default=20, ge=0)


class BracketEntrySchema(BaseModel):
    left: str
    right: str
    combination: str


class BracketTableResponse(BaseModel):
    entries: list[BracketEntrySchema]


class EulerLagrangeRequest(BaseModel):
    lagrangian: str | None = Field(
        default=None, description="Expression text; null means the built-in Lagrangian"
    )
    max_order: int = Field(default=3, ge=2)


class ReduceRequest(BaseModel):
    expr: str
    max_order: int = Field(default=3, ge=2)


class ExprResponse(BaseModel):
    result: str


class EvalRequest(BaseModel):
    expr: str
    point: dict[str, str] = Field(
        description="Jet variable name to rational value, e.g. {'x': '1/2'}"
    )
    max_order: int = Field(default=3, ge=2)


class EvalResponse(BaseModel):
    value: str


class ErrorDetail(BaseModel):
    error: str
    message: str
