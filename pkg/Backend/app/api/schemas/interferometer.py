# app/api/schemas/interferometer.py

from typing import List, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class FockState(BaseModel):
    """Photon count per qumode."""
    model_config = ConfigDict(frozen=True)

    occupations: Tuple[int, ...] = Field(..., examples=[(1, 0, 1, 0)])

    @field_validator("occupations")
    @classmethod
    def non_negative(cls, value):
        if any(v < 0 for v in value):
            raise ValueError(f"Occupations must be non-negative, got {list(value)}")
        return tuple(int(v) for v in value)

    @classmethod
    def of(cls, occupations) -> "FockState":
        return cls(occupations=tuple(int(v) for v in occupations))

    @property
    def total_photons(self) -> int:
        return sum(self.occupations)

    @property
    def modes(self) -> int:
        return len(self.occupations)

    def __len__(self):
        return len(self.occupations)


class InterferometerSpec(BaseModel):
    """
    Logical circuit of a loop-based time-bin interferometer.

    Every loop contributes one full cascade of beam-splitters on the adjacent mode pairs
    (0,1), (1,2), ..., (N-2,N-1); thetas are ordered loop by loop.
    """
    modes: int = Field(..., gt=0, examples=[8])
    loops: Literal[1, 2] = Field(1, examples=[1])
    thetas: List[float] = Field(default_factory=list, examples=[[0.1] * 7])

    @property
    def expected_parameters(self) -> int:
        return self.loops * (self.modes - 1)


class ModeUnitary(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray

    @field_validator("matrix")
    @classmethod
    def square_real(cls, value):
        value = np.asarray(value, dtype=float)
        if value.ndim != 2 or value.shape[0] != value.shape[1]:
            raise ValueError(f"Mode unitary must be square, got shape {value.shape}")
        return value

    @property
    def modes(self) -> int:
        return self.matrix.shape[0]

    def is_orthogonal(self, tol: float = 1e-12) -> bool:
        deviation = self.matrix.T @ self.matrix - np.eye(self.modes)
        return bool(np.max(np.abs(deviation), initial=0.0) < tol)


# Request / response bodies

class UnitaryRequest(BaseModel):
    spec: InterferometerSpec


class UnitaryResponse(BaseModel):
    matrix: List[List[float]]


class DistributionRequest(BaseModel):
    spec: InterferometerSpec
    input_state: List[int] = Field(..., examples=[[1, 0, 1, 0]])
    method: Literal["permanent", "evolution"] = Field("permanent", description="Computation path")


class PatternProbability(BaseModel):
    pattern: List[int]
    probability: float


class DistributionResponse(BaseModel):
    entries: List[PatternProbability]


class SampleRequest(BaseModel):
    spec: InterferometerSpec
    input_state: List[int] = Field(..., examples=[[1, 0, 1, 0]])
    shots: int = Field(100, ge=1)
    rng_seed: int = Field(0, ge=0)
    threshold: bool = Field(False, description="Return thresholded bits instead of photon counts")


class SampleResponse(BaseModel):
    samples: List[List[int]]
