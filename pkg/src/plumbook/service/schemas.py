"""Request/response models for the verification service.

Graphs, interchange documents and relation files arrive as plain JSON
objects and are parsed by the core package, so their positioned error
messages survive; everything else is typed here.
"""

from typing import Literal, Optional

from pydantic import BaseModel, Field

Status = Literal["ok", "hypothesis_rejected", "check_failed"]


class ValidateRequest(BaseModel):
    graph: dict


class ValidateResponse(BaseModel):
    status: Status
    report: dict
    lemma_conditions: Optional[dict] = None


class CompileRequest(BaseModel):
    graph: dict
    force: bool = False


class CompileResponse(BaseModel):
    status: Status
    openbook: Optional[dict] = None
    hypothesis_violation: bool = False


class AreasRequest(BaseModel):
    graph: dict
    b_over_pi: Optional[list] = Field(
        default=None,
        description="prescribed areas divided by pi, as rationals "
                    "(strings like '3/2', or integers); default: all 1")


class AreasResponse(BaseModel):
    status: Status
    assignment: Optional[dict] = None
    detail: Optional[str] = None


class VerifyModelsRequest(BaseModel):
    constants: dict
    checks: list[str] = Field(default=["all"])
    samples: int = Field(default=1000, gt=0)
    h: float = Field(default=1e-4, gt=0)
    tolerance: float = Field(default=1e-6, gt=0)
    seed: int = 0


class VerifyModelsResponse(BaseModel):
    status: Status
    reports: list[dict]


class HomologyCheckRequest(BaseModel):
    openbook: dict
    word1: list[dict]
    word2: list[dict]


class HomologyCheckResponse(BaseModel):
    status: Status
    equal: bool
    action1: list[list[int]]
    action2: list[list[int]]
    caveat: str = "homology-level necessary condition"


class SubstituteRequest(BaseModel):
    graph: dict
    relation_name: Optional[str] = None
    relation: Optional[dict] = None


class SubstituteResponse(BaseModel):
    status: Status
    report: dict


class InvariantsRequest(BaseModel):
    graph: dict


class InvariantsResponse(BaseModel):
    status: Status
    boundary_homology: dict
    euler: dict
    sigma_plumbing: int


class RelationListResponse(BaseModel):
    relations: list[dict]
