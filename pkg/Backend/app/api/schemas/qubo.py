# app/api/schemas/qubo.py

from typing import Dict, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class QuboMatrix(BaseModel):
    """
    cost(x) = x^T q x + offset + reg_gamma * (sum(x) - reg_target)^2

    `q` is kept upper-triangular: any lower-triangular input is folded onto the upper
    triangle, which leaves x^T q x unchanged.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    q: np.ndarray
    reg_gamma: float = Field(0.0, ge=0)
    reg_target: int = Field(0, ge=0)
    offset: float = 0.0
    warnings: List[str] = Field(default_factory=list)

    @field_validator("q", mode="before")
    @classmethod
    def canonical(cls, value):
        value = np.array(value, dtype=float)
        if value.ndim != 2 or value.shape[0] != value.shape[1]:
            raise ValueError(f"Q must be square, got shape {value.shape}")
        if not np.all(np.isfinite(value)):
            raise ValueError("Q must be finite")
        return np.triu(value) + np.tril(value, -1).T

    @property
    def n(self) -> int:
        return self.q.shape[0]

    def to_payload(self) -> dict:
        return {
            "n": self.n,
            "q": self.q.tolist(),
            "gamma": self.reg_gamma,
            "reg_target": self.reg_target,
            "offset": self.offset,
        }


class QuboPayload(BaseModel):
    """JSON form of a QUBO, as written by dump_qubo and accepted by the oracle."""
    n: Optional[int] = Field(None, ge=1)
    q: List[List[float]]
    gamma: float = Field(0.0, ge=0)
    reg_target: int = Field(0, ge=0)
    offset: float = 0.0

    @model_validator(mode="after")
    def square(self):
        if not self.q or any(len(row) != len(self.q) for row in self.q):
            raise ValueError(f"q must be a non-empty square matrix, got row lengths {[len(r) for r in self.q]}")
        return self


class Graph(BaseModel):
    """Undirected simple graph on vertices 0..n-1."""
    n: int = Field(..., ge=1, examples=[4])
    edges: List[Tuple[int, int]] = Field(default_factory=list, examples=[[(0, 1), (1, 2)]])

    @model_validator(mode="after")
    def simple_graph(self):
        seen = set()
        normalized = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"Self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"Edge ({u}, {v}) references a vertex outside 0..{self.n - 1}")
            edge = (min(u, v), max(u, v))
            if edge in seen:
                raise ValueError(f"Duplicate edge {edge}")
            seen.add(edge)
            normalized.append(edge)
        self.edges = normalized
        return self

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=int)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a


class Operation(BaseModel):
    model_config = ConfigDict(frozen=True)

    machine: str
    duration: int = Field(..., ge=1)


class JsspInstance(BaseModel):
    """
    Jobs are ordered lists of operations; every operation needs one machine for a whole
    number of time units. JSON form:
    {"machines": [...], "t_max": 3, "jobs": {"name": [["machine", duration], ...]}}
    """
    machines: List[str]
    t_max: int = Field(..., ge=1)
    jobs: Dict[str, List[Operation]]

    @field_validator("jobs", mode="before")
    @classmethod
    def parse_pairs(cls, value):
        parsed = {}
        for name, operations in dict(value).items():
            parsed[name] = [
                {"machine": op[0], "duration": op[1]} if isinstance(op, (list, tuple)) else op
                for op in operations
            ]
        return parsed

    @model_validator(mode="after")
    def known_machines(self):
        for name, operations in self.jobs.items():
            if not operations:
                raise ValueError(f"Job '{name}' has no operations")
            for op in operations:
                if op.machine not in self.machines:
                    raise ValueError(f"Job '{name}' uses unknown machine '{op.machine}'")
        return self

    @property
    def job_names(self) -> List[str]:
        return list(self.jobs)

    @property
    def total_operations(self) -> int:
        return sum(len(ops) for ops in self.jobs.values())

    def operation(self, j: int, k: int) -> Operation:
        return self.jobs[self.job_names[j]][k]

    def machine_operations(self) -> Dict[str, List[Tuple[int, int]]]:
        """(job index, operation index) pairs per machine."""
        out: Dict[str, List[Tuple[int, int]]] = {m: [] for m in self.machines}
        for j, name in enumerate(self.job_names):
            for k, op in enumerate(self.jobs[name]):
                out[op.machine].append((j, k))
        return out

    def with_horizon(self, t_max: int) -> "JsspInstance":
        return self.model_copy(update={"t_max": t_max})

    def to_payload(self) -> dict:
        return {
            "machines": list(self.machines),
            "t_max": self.t_max,
            "jobs": {name: [[op.machine, op.duration] for op in ops] for name, ops in self.jobs.items()},
        }


class ScheduledOperation(BaseModel):
    job: str
    operation: int
    machine: str
    start: int
    duration: int

    @property
    def end(self) -> int:
        return self.start + self.duration


class Schedule(BaseModel):
    operations: List[ScheduledOperation]
    makespan: int

    def gantt_rows(self) -> List[dict]:
        return [
            {"job": op.job, "operation": op.operation, "machine": op.machine, "start": op.start, "duration": op.duration}
            for op in sorted(self.operations, key=lambda o: (o.machine, o.start, o.job))
        ]

    def start_times(self) -> Dict[Tuple[str, int], int]:
        return {(op.job, op.operation): op.start for op in self.operations}


class Violation(BaseModel):
    kind: Literal["H1", "H2", "H3", "HORIZON"]
    detail: str
    variables: List[int]


class ViolationReport(BaseModel):
    violations: List[Violation]

    def kinds(self) -> List[str]:
        return sorted({v.kind for v in self.violations})

    def of_kind(self, kind: str) -> List[Violation]:
        return [v for v in self.violations if v.kind == kind]


DecodedSchedule = Union[Schedule, ViolationReport]


# Request / response bodies

class MaxCutEncodeRequest(BaseModel):
    graph: Graph


class JsspEncodeRequest(BaseModel):
    instance: JsspInstance
    weights: Tuple[float, float, float, float] = Field((1.0, 2.0, 5.0, 1.0), description="w1..w4")
    gamma: float = Field(1.0, ge=0)

    @field_validator("weights")
    @classmethod
    def non_negative(cls, value):
        if any(w < 0 for w in value):
            raise ValueError(f"Constraint weights must be non-negative, got {value}")
        return value


class QuboResponse(BaseModel):
    n: int
    q: List[List[float]]
    gamma: float
    reg_target: int
    offset: float
    variables: Optional[List[str]] = None
    warnings: List[str] = Field(default_factory=list)
