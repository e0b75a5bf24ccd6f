# app/api/schemas/oracle.py

from typing import List, Optional

from pydantic import BaseModel, Field

from app.api.schemas.qubo import Graph, JsspInstance, QuboPayload, Schedule


class ExactResult(BaseModel):
    best_x: Optional[List[int]] = None
    best_value: Optional[float] = None
    optima_count: int = Field(0, ge=0)
    elapsed: float = Field(0.0, ge=0, description="Wall time in seconds")
    feasible: bool = True
    feasible_count: Optional[int] = None
    schedule: Optional[Schedule] = None


class ExactQuboRequest(QuboPayload):
    n: int = Field(..., ge=1)


class ExactMaxCutRequest(BaseModel):
    graph: Graph


class ExactJsspRequest(BaseModel):
    instance: JsspInstance
