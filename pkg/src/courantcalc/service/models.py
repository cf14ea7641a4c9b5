"""Pydantic request/response models for the service endpoints.

Structures travel either as preset names or as full schema-1 objects;
polynomials, cochains, and rationals are exchanged in their text grammar.
"""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field

StructureSpec = str | dict[str, Any]


class StructureRequest(BaseModel):
    structure: StructureSpec


class CheckAxiomsRequest(StructureRequest):
    seed: int = 20240401
    samples: int = Field(default=3, ge=1, le=20)


class AxiomCheckOut(BaseModel):
    axiom: str
    passed: bool
    witness: dict[str, Any] | None = None


class CheckAxiomsResponse(BaseModel):
    structure: str
    seed: int
    passed: bool
    checks: list[AxiomCheckOut]


class BracketRequest(StructureRequest):
    a: list[str]
    b: list[str]


class SectionResponse(BaseModel):
    section: list[str]


class DifferentialRequest(StructureRequest):
    cochain: str


class CochainResponse(BaseModel):
    cochain: str
    degree: int


class CupRequest(StructureRequest):
    omega: str
    tau: str


class EvaluateRequest(StructureRequest):
    cochain: str
    sections: list[list[str]]


class ValueResponse(BaseModel):
    value: str


class SymbolRequest(StructureRequest):
    cochain: str
    sections: list[list[str]] = Field(default_factory=list)


class VectorFieldResponse(BaseModel):
    vector_field: list[str]


class ConnectionSpec(BaseModel):
    m: int
    gamma: list[list[list[str]]]
    fiber_pairing: list[list[str]] | None = None


class ConnectionRequest(StructureRequest):
    connection: ConnectionSpec


class CurvatureResponse(BaseModel):
    entries: list[list[str]]
    degree: int = 2


class BianchiResponse(BaseModel):
    ok: bool


class ModularResponse(BaseModel):
    xi: str
    closed: bool


class UnimodularRequest(StructureRequest):
    bound: int = Field(default=2, ge=0, le=8)


class UnimodularResponse(BaseModel):
    ok: bool
    xi: str
    bound: int
    status: str
    witness: str | None = None


class ChernRequest(ConnectionRequest):
    k: int = Field(default=1, ge=1, le=4)


class ChernResponse(BaseModel):
    cochain: str
    degree: int
    closed: bool


class PathSpec(BaseModel):
    m: int
    gamma_t: list[list[list[str]]]
    fiber_pairing: list[list[str]] | None = None


class ChernSimonsRequest(StructureRequest):
    k: int = Field(default=1, ge=1, le=4)
    path: PathSpec | None = None
    conn0: ConnectionSpec | None = None
    conn1: ConnectionSpec | None = None


class ChernSimonsResponse(BaseModel):
    cochain: str
    degree: int
    transgression_ok: bool


class SecondaryRequest(StructureRequest):
    linear: list[list[list[str]]]
    metric: list[list[str]]
    k: int = Field(default=1, ge=1, le=3)


class CohomologyRequest(StructureRequest):
    k: int = Field(ge=0)
    cochain: str | None = None
    bound: int = Field(default=2, ge=0, le=8)


class CohomologyResponse(BaseModel):
    k: int
    dim: int | None = None
    representatives: list[str] | None = None
    closed: bool | None = None
    exact_status: str | None = None
    witness: str | None = None


class FrameSpec(BaseModel):
    sections: list[list[str]]


class DiracRequest(StructureRequest):
    frame: FrameSpec


class DiracResponse(BaseModel):
    ok: bool
    rank_ok: bool
    isotropic: bool
    involutive: bool
    witness: dict[str, Any] | None = None
    closure: list[list[list[str]]] | None = None


class RestrictRequest(StructureRequest):
    cochain: str
    frame: FrameSpec


class RestrictResponse(BaseModel):
    degree: int
    components: dict[str, str]


class SelfTestRequest(BaseModel):
    seed: int = 20240401


class SelfTestCheckOut(BaseModel):
    name: str
    passed: bool
    details: str | None = None


class SelfTestResponse(BaseModel):
    seed: int
    passed: bool
    checks: list[SelfTestCheckOut]


class PresetList(BaseModel):
    presets: list[str]
