# app/api/schemas/solver.py

from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.special import expit

from app.api.schemas.qubo import Graph, JsspInstance, Schedule, ViolationReport
from app.core.config import settings


class SpsaSettings(BaseModel):
    a: float = Field(default_factory=lambda: settings.SPSA_A, gt=0, description="Step-size numerator")
    c: float = Field(default_factory=lambda: settings.SPSA_C, gt=0, description="Perturbation numerator")
    alpha: float = Field(default_factory=lambda: settings.SPSA_ALPHA, gt=0)
    gamma: float = Field(default_factory=lambda: settings.SPSA_GAMMA, gt=0)
    stability: Optional[float] = Field(None, ge=0, description="Offset A; None means a fraction of the iteration budget")
    calibrate: bool = Field(default_factory=lambda: settings.SPSA_CALIBRATE, description="Derive a from measured gradients")
    target_step: float = Field(default_factory=lambda: settings.SPSA_TARGET_STEP, gt=0)
    calibration_steps: int = Field(default_factory=lambda: settings.SPSA_CALIBRATION_STEPS, ge=1)


class BbsConfig(BaseModel):
    iterations: int = Field(20, ge=1)
    batch_size: int = Field(20, ge=1, description="Samples per iteration")
    input_state: List[int] = Field([1, 0, 1, 0], description="Fock template fed to every tile")
    loops: Literal[1, 2] = 1
    spsa: SpsaSettings = Field(default_factory=SpsaSettings)
    bitflip_enabled: bool = True
    per_tile_gradients: bool = Field(False, description="Perturb one tile at a time (quadratic circuit count)")
    smooth_flips: bool = Field(True, description="Score gradients on the exact expectation over the flip layer")
    rng_seed: int = Field(0, ge=0)
    record_parameters: bool = True

    @field_validator("input_state")
    @classmethod
    def has_photons(cls, value):
        if not value:
            raise ValueError("input_state must have at least one mode")
        if any(v < 0 for v in value):
            raise ValueError(f"input_state occupations must be non-negative, got {value}")
        if sum(value) < 1:
            raise ValueError("input_state must carry at least one photon")
        return value

    def stability_offset(self) -> float:
        if self.spsa.stability is not None:
            return self.spsa.stability
        return settings.SPSA_STABILITY_FRACTION * self.iterations


class TilingPlan(BaseModel):
    n_vars: int = Field(..., ge=1)
    tile_width: int = Field(..., ge=1)
    tile_count: int = Field(..., ge=1)
    padding: int = Field(..., ge=0)

    @model_validator(mode="after")
    def consistent(self):
        if self.tile_count * self.tile_width - self.n_vars != self.padding:
            raise ValueError("padding must equal tile_count * tile_width - n_vars")
        if self.padding >= self.tile_width:
            raise ValueError("padding must be smaller than one tile")
        return self

    def tile_variables(self, tile: int) -> range:
        """Problem variables covered by a tile (the padded tail excluded)."""
        return range(tile * self.tile_width, min((tile + 1) * self.tile_width, self.n_vars))


class SolverParams(BaseModel):
    """Beam-splitter angles per tile plus one bit-flip logit per problem variable."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    thetas: np.ndarray
    flip_logits: np.ndarray
    bitflip_enabled: bool = True

    def flip_probabilities(self) -> np.ndarray:
        return expit(self.flip_logits)

    def pack(self) -> np.ndarray:
        parts = [self.thetas.reshape(-1)]
        if self.bitflip_enabled:
            parts.append(self.flip_logits)
        return np.concatenate(parts)

    def unpack(self, vector: np.ndarray) -> "SolverParams":
        size = self.thetas.size
        thetas = np.asarray(vector[:size], dtype=float).reshape(self.thetas.shape)
        logits = np.asarray(vector[size:], dtype=float) if self.bitflip_enabled else self.flip_logits
        return SolverParams(thetas=thetas, flip_logits=logits, bitflip_enabled=self.bitflip_enabled)

    @property
    def parameter_count(self) -> int:
        return self.pack().size


class TraceEntry(BaseModel):
    iteration: int
    mean_cost: float
    min_cost: float
    max_cost: float
    best_cost: float
    a_k: float
    c_k: float
    params: Optional[List[float]] = None


class BbsRun(BaseModel):
    config: BbsConfig
    plan: TilingPlan
    trace: List[TraceEntry]
    best_sample: List[int]
    best_cost: float
    final_sample: List[int]
    final_cost: float
    circuit_run_count: int
    candidate_count: int
    step_size: float = Field(..., description="SPSA numerator a after calibration")

    def learning_curve(self) -> dict:
        return {
            "iteration": [e.iteration for e in self.trace],
            "mean": [e.mean_cost for e in self.trace],
            "min": [e.min_cost for e in self.trace],
            "max": [e.max_cost for e in self.trace],
            "best": [e.best_cost for e in self.trace],
        }


# Request / response bodies

class SolveMaxCutRequest(BaseModel):
    graph: Graph
    config: BbsConfig = Field(default_factory=BbsConfig)


class SolveMaxCutResponse(BaseModel):
    run: BbsRun
    cut: int


class SolveJsspRequest(BaseModel):
    instance: JsspInstance
    weights: Tuple[float, float, float, float] = (1.0, 2.0, 5.0, 1.0)
    gamma: float = Field(1.0, ge=0)
    config: BbsConfig = Field(default_factory=BbsConfig)


class SolveJsspResponse(BaseModel):
    run: BbsRun
    variables: List[str]
    schedule: Optional[Schedule] = None
    violations: Optional[ViolationReport] = None
