# app/api/schemas/bench.py

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from app.api.schemas.solver import TraceEntry
from app.core.config import settings


class ExperimentSpec(BaseModel):
    """One benchmark invocation: which problem, which instances, which solver settings."""
    kind: Literal["maxcut", "jssp"]
    backend: Literal["local-sim"] = "local-sim"

    # maxcut: generated graphs
    sizes: List[int] = Field(default_factory=lambda: [2, 3, 4, 6, 8, 12, 15, 20, 25])
    density: float = Field(0.8, gt=0, le=1)

    # jssp: instance file (None means the bundled kitchen instance)
    instance_path: Optional[str] = None
    t_max: Optional[int] = Field(None, ge=1)
    weights: Tuple[float, float, float, float] = (1.0, 2.0, 5.0, 1.0)
    gamma: float = Field(1.0, ge=0)

    loops: Literal[1, 2] = 1
    input_state: Optional[List[int]] = Field(None, description="Overrides the size-based input-state table")
    iterations: int = Field(20, ge=1)
    batch_size: int = Field(20, ge=1)
    repeats: int = Field(10, ge=1)
    seed: int = Field(0, ge=0)
    exact: bool = True
    out: str = Field(default_factory=lambda: settings.OUTPUT_DIR)
    plots: bool = True

    @field_validator("sizes")
    @classmethod
    def valid_sizes(cls, value):
        if not value:
            raise ValueError("sizes must not be empty")
        if any(n < 2 for n in value):
            raise ValueError(f"Graph sizes must be >= 2, got {value}")
        return value

    @field_validator("weights")
    @classmethod
    def non_negative(cls, value):
        if any(w < 0 for w in value):
            raise ValueError(f"Constraint weights must be non-negative, got {value}")
        return value

    @model_validator(mode="after")
    def sizes_within_oracle(self):
        if self.kind == "maxcut" and self.exact:
            too_big = [n for n in self.sizes if n > settings.MAX_EXACT_VARIABLES]
            if too_big:
                raise ValueError(
                    f"Sizes {too_big} exceed MAX_EXACT_VARIABLES={settings.MAX_EXACT_VARIABLES}; "
                    "disable the exact comparison or lower them"
                )
        return self


# Column order of results.csv; timing columns last so they can be dropped for comparisons.
RECORD_COLUMNS = [
    "kind", "size", "repeat", "seed", "input_state", "tile_width", "tiles", "padding",
    "best_cost", "final_cost", "exact_value", "quality", "makespan", "success",
    "circuit_run_count", "candidate_count",
]
TIMING_COLUMNS = ["bbs_time", "exact_time"]


class ExperimentRecord(BaseModel):
    kind: Literal["maxcut", "jssp"]
    size: int
    repeat: int
    seed: int
    input_state: str
    tile_width: int
    tiles: int
    padding: int
    best_cost: float
    final_cost: float
    exact_value: Optional[float] = None
    quality: Optional[float] = Field(None, ge=0, le=1)
    makespan: Optional[int] = None
    success: Optional[bool] = None
    circuit_run_count: int
    candidate_count: int
    bbs_time: float = Field(..., ge=0)
    exact_time: Optional[float] = Field(None, ge=0)
    best_sample: List[int]
    trace: List[TraceEntry] = Field(default_factory=list)
    gantt: Optional[List[dict]] = None

    def row(self) -> dict:
        data = self.model_dump()
        return {column: data[column] for column in RECORD_COLUMNS + TIMING_COLUMNS}


class SizeAggregate(BaseModel):
    size: int
    runs: int
    quality_mean: Optional[float] = None
    quality_min: Optional[float] = None
    quality_max: Optional[float] = None
    best_cost_mean: float
    bbs_time_mean: float
    exact_time_mean: Optional[float] = None
    success_rate: Optional[float] = None


class ExperimentReport(BaseModel):
    spec: ExperimentSpec
    records: List[ExperimentRecord]
    aggregates: List[SizeAggregate] = Field(default_factory=list)
