from typing import Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

from app.api.schemas.qubo import (
    DecodedSchedule,
    Graph,
    JsspInstance,
    QuboMatrix,
    QuboPayload,
    Schedule,
    ScheduledOperation,
    Violation,
    ViolationReport,
)
from app.core.exceptions import DimensionMismatchError, InfeasibleHorizonError
from app.core.logging_config import setup_logging
from app.helpers.utils import read_json, write_json

logger = setup_logging()

DEFAULT_WEIGHTS = (1.0, 2.0, 5.0, 1.0)

Triple = Tuple[int, int, int]


def _as_bits(x, n: int) -> np.ndarray:
    bits = np.asarray(x, dtype=float).reshape(-1)
    if bits.size != n:
        raise DimensionMismatchError(f"Assignment has {bits.size} bits, the problem has {n} variables")
    return bits


def cost(q: QuboMatrix, x) -> float:
    """x^T Q x + offset + gamma * (sum(x) - target)^2."""
    bits = _as_bits(x, q.n)
    value = float(bits @ q.q @ bits) + q.offset
    if q.reg_gamma:
        value += q.reg_gamma * (bits.sum() - q.reg_target) ** 2
    return value


def batch_cost(q: QuboMatrix, candidates) -> np.ndarray:
    """Cost of every row of a (count, n) 0/1 matrix."""
    x = np.asarray(candidates, dtype=float)
    if x.ndim != 2 or x.shape[1] != q.n:
        raise DimensionMismatchError(f"Candidates of shape {x.shape} do not match {q.n} variables")
    values = np.einsum("bi,ij,bj->b", x, q.q, x) + q.offset
    if q.reg_gamma:
        values += q.reg_gamma * (x.sum(axis=1) - q.reg_target) ** 2
    return values


def expected_cost(q: QuboMatrix, means) -> np.ndarray:
    """
    Expected cost of independent Bernoulli bits, one row of P(x_i = 1) per candidate.
    Pair terms factorize and x_i^2 = x_i keeps the diagonal linear; 0/1 rows give batch_cost.
    """
    m = np.asarray(means, dtype=float)
    if m.ndim != 2 or m.shape[1] != q.n:
        raise DimensionMismatchError(f"Means of shape {m.shape} do not match {q.n} variables")
    values = np.einsum("bi,ij,bj->b", m, np.triu(q.q, 1), m) + m @ np.diag(q.q) + q.offset
    if q.reg_gamma:
        variance = (m * (1 - m)).sum(axis=1)
        values += q.reg_gamma * ((m.sum(axis=1) - q.reg_target) ** 2 + variance)
    return values


def fold_regularizer(q: QuboMatrix) -> QuboMatrix:
    """
    Same cost function with gamma * (sum x - T)^2 expanded into Q and the offset:
    gamma * ((1 - 2T) sum x_i + 2 sum_{i<j} x_i x_j + T^2).
    """
    if not q.reg_gamma:
        return q
    folded = q.q.copy()
    gamma, target = q.reg_gamma, q.reg_target
    folded[np.triu_indices(q.n, 1)] += 2.0 * gamma
    folded[np.diag_indices(q.n)] += gamma * (1 - 2 * target)
    return QuboMatrix(q=folded, offset=q.offset + gamma * target ** 2, warnings=list(q.warnings))


# Max-Cut

def encode_maxcut(g: Graph) -> QuboMatrix:
    """
    Q[i, i] = -deg(v_i), Q[i, j] = 2 for every edge (i < j). Minimizing x^T Q x maximizes
    the cut, with cut_size(x) = -cost(x).
    """
    q = np.zeros((g.n, g.n))
    for u, v in g.edges:
        q[u, v] += 2.0
    q[np.diag_indices(g.n)] = -g.degrees()
    warnings = []
    if not g.edges:
        message = f"Graph on {g.n} vertices has no edges; every assignment cuts 0"
        logger.warning(message)
        warnings.append(message)
    return QuboMatrix(q=q, warnings=warnings)


def cut_size(g: Graph, x) -> int:
    bits = _as_bits(x, g.n).astype(int)
    return int(sum(bits[u] + bits[v] - 2 * bits[u] * bits[v] for u, v in g.edges))


# Job-shop scheduling

class VariableMap:
    """
    Bijection between dense indices and (job, operation, start time) triples, all
    zero-based. Order is job-major, then operation, then start time.
    """

    def __init__(self, instance: JsspInstance, triples: Sequence[Triple]):
        self.instance = instance
        self.triples: List[Triple] = list(triples)
        self._index: Dict[Triple, int] = {triple: i for i, triple in enumerate(self.triples)}

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def __contains__(self, triple) -> bool:
        return tuple(triple) in self._index

    def index(self, j: int, k: int, t: int) -> int:
        return self._index[(j, k, t)]

    def triple(self, i: int) -> Triple:
        return self.triples[i]

    def label(self, i: int) -> str:
        j, k, t = self.triples[i]
        return f"x_{j + 1},{k + 1},{t}"

    def labels(self) -> List[str]:
        return [self.label(i) for i in range(len(self))]

    def operation_variables(self, j: int, k: int) -> List[int]:
        return [i for i, (jj, kk, _) in enumerate(self.triples) if (jj, kk) == (j, k)]

    def operations(self) -> List[Tuple[int, int]]:
        return [(j, k) for j, name in enumerate(self.instance.job_names) for k in range(len(self.instance.jobs[name]))]


def start_window(instance: JsspInstance, j: int, k: int) -> Tuple[int, int]:
    """
    Inclusive range of useful start times: no earlier than the summed durations of the
    preceding operations, late enough that the rest of the job still ends by t_max.
    """
    durations = [op.duration for op in instance.jobs[instance.job_names[j]]]
    earliest = sum(durations[:k])
    latest = instance.t_max - sum(durations[k:])
    return earliest, latest


def build_variable_map(inst: JsspInstance, prune: bool = True) -> VariableMap:
    """
    Time-indexed variables x_{j,k,t}. With pruning only starts inside the operation's
    start window survive; without it every t in [0, t_max) is kept.
    """
    triples: List[Triple] = []
    for j, name in enumerate(inst.job_names):
        for k in range(len(inst.jobs[name])):
            if prune:
                earliest, latest = start_window(inst, j, k)
                if latest < earliest:
                    raise InfeasibleHorizonError(job=name, operation=k + 1, t_max=inst.t_max)
                times = range(earliest, latest + 1)
            else:
                times = range(inst.t_max)
            triples.extend((j, k, t) for t in times)
    logger.debug(f"Variable map: {len(triples)} variables (prune={prune}, t_max={inst.t_max})")
    return VariableMap(inst, triples)


def _add_pair(q: np.ndarray, a: int, b: int, value: float) -> None:
    q[min(a, b), max(a, b)] += value


def constraint_matrices(vmap: VariableMap) -> Dict[str, Tuple[np.ndarray, float]]:
    """
    Unweighted penalty terms as (upper-triangular matrix, constant offset):

    H1 single start: sum over operations of (sum_t x - 1)^2, expanded to -1 on the
       diagonal, +2 per pair inside the window and +1 kept as offset.
    H2 machine sharing: +1 per pair of different operations on one machine whose
       intervals [t, t + l) overlap.
    H3 precedence: +1 per pair (j,k,t), (j,k+1,t') with t' < t + l_{j,k}.
    H4 makespan: (t + l - 1) / t_max on the diagonal of every final-operation variable.
    """
    inst = vmap.instance
    n = len(vmap)
    h1, h2, h3, h4 = (np.zeros((n, n)) for _ in range(4))
    h1_offset = 0.0

    for j, k in vmap.operations():
        window = vmap.operation_variables(j, k)
        h1_offset += 1.0
        for pos, a in enumerate(window):
            h1[a, a] -= 1.0
            for b in window[pos + 1:]:
                _add_pair(h1, a, b, 2.0)

    for machine, ops in inst.machine_operations().items():
        variables = [i for i, (j, k, _) in enumerate(vmap.triples) if (j, k) in ops]
        for pos, a in enumerate(variables):
            ja, ka, ta = vmap.triple(a)
            la = inst.operation(ja, ka).duration
            for b in variables[pos + 1:]:
                jb, kb, tb = vmap.triple(b)
                if (ja, ka) == (jb, kb):
                    continue
                lb = inst.operation(jb, kb).duration
                if ta < tb + lb and tb < ta + la:
                    _add_pair(h2, a, b, 1.0)

    for j, name in enumerate(inst.job_names):
        operations = inst.jobs[name]
        for k in range(len(operations) - 1):
            duration = operations[k].duration
            for a in vmap.operation_variables(j, k):
                t = vmap.triple(a)[2]
                for b in vmap.operation_variables(j, k + 1):
                    if vmap.triple(b)[2] < t + duration:
                        _add_pair(h3, a, b, 1.0)

        last = len(operations) - 1
        for a in vmap.operation_variables(j, last):
            t = vmap.triple(a)[2]
            h4[a, a] += (t + operations[last].duration - 1) / inst.t_max

    return {"H1": (h1, h1_offset), "H2": (h2, 0.0), "H3": (h3, 0.0), "H4": (h4, 0.0)}


def encode_jssp(inst: JsspInstance, weights=DEFAULT_WEIGHTS, gamma: float = 1.0) -> Tuple[QuboMatrix, VariableMap]:
    """
    Q = w1 H1 + w2 H2 + w3 H3 + w4 H4 over the pruned variables, with the
    regularizer gamma * (sum x - |O|)^2.
    """
    weights = tuple(float(w) for w in weights)
    if len(weights) != 4 or any(w < 0 for w in weights):
        raise ValueError(f"Expected four non-negative weights, got {weights}")
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma}")

    vmap = build_variable_map(inst)
    parts = constraint_matrices(vmap)
    q = np.zeros((len(vmap), len(vmap)))
    offset = 0.0
    for w, (matrix, constant) in zip(weights, parts.values()):
        q += w * matrix
        offset += w * constant
    logger.info(
        f"Encoded JSSP with {inst.total_operations} operations into {len(vmap)} variables "
        f"(weights={weights}, gamma={gamma})"
    )
    return QuboMatrix(q=q, reg_gamma=gamma, reg_target=inst.total_operations, offset=offset), vmap


def constraint_breakdown(vmap: VariableMap, x, weights=DEFAULT_WEIGHTS, gamma: float = 1.0) -> Dict[str, float]:
    """Weighted contribution of each penalty term and of the regularizer to cost(x)."""
    bits = _as_bits(x, len(vmap))
    out = {}
    for w, (name, (matrix, constant)) in zip(weights, constraint_matrices(vmap).items()):
        out[name] = float(w) * (float(bits @ matrix @ bits) + constant)
    out["regularizer"] = gamma * float(bits.sum() - vmap.instance.total_operations) ** 2
    return out


def decode_schedule(vmap: VariableMap, x) -> DecodedSchedule:
    """
    Schedule when x picks exactly one start per operation with no machine clash,
    precedence break or overrun of t_max; otherwise a report of every violation.
    """
    inst = vmap.instance
    bits = _as_bits(x, len(vmap)).astype(int)
    selected = [i for i in range(len(vmap)) if bits[i]]
    violations: List[Violation] = []

    starts: Dict[Tuple[int, int], int] = {}
    for j, k in vmap.operations():
        window = vmap.operation_variables(j, k)
        chosen = [i for i in window if bits[i]]
        if len(chosen) != 1:
            violations.append(Violation(
                kind="H1",
                detail=f"{inst.job_names[j]} operation {k + 1} has {len(chosen)} start times",
                variables=chosen or window,
            ))
        else:
            starts[(j, k)] = vmap.triple(chosen[0])[2]

    for pos, a in enumerate(selected):
        ja, ka, ta = vmap.triple(a)
        op_a = inst.operation(ja, ka)
        if ta + op_a.duration > inst.t_max:
            violations.append(Violation(
                kind="HORIZON",
                detail=f"{inst.job_names[ja]} operation {ka + 1} ends at {ta + op_a.duration} > t_max={inst.t_max}",
                variables=[a],
            ))
        for b in selected[pos + 1:]:
            jb, kb, tb = vmap.triple(b)
            op_b = inst.operation(jb, kb)
            if (ja, ka) != (jb, kb) and op_a.machine == op_b.machine:
                if ta < tb + op_b.duration and tb < ta + op_a.duration:
                    violations.append(Violation(
                        kind="H2",
                        detail=f"machine {op_a.machine}: {inst.job_names[ja]} op {ka + 1} at {ta} overlaps "
                               f"{inst.job_names[jb]} op {kb + 1} at {tb}",
                        variables=[a, b],
                    ))
            if ja == jb and kb == ka + 1 and tb < ta + op_a.duration:
                violations.append(Violation(
                    kind="H3",
                    detail=f"{inst.job_names[ja]} op {kb + 1} starts at {tb} before op {ka + 1} ends at {ta + op_a.duration}",
                    variables=[a, b],
                ))

    if violations:
        return ViolationReport(violations=violations)

    scheduled = [
        ScheduledOperation(
            job=inst.job_names[j],
            operation=k + 1,
            machine=inst.operation(j, k).machine,
            start=t,
            duration=inst.operation(j, k).duration,
        )
        for (j, k), t in sorted(starts.items())
    ]
    return Schedule(operations=scheduled, makespan=max(op.end for op in scheduled))


# File formats

def load_graph(path) -> Graph:
    return Graph.model_validate(read_json(path))


def dump_graph(g: Graph, path) -> None:
    write_json(path, {"n": g.n, "edges": [list(e) for e in g.edges]})


def load_jssp_instance(path) -> JsspInstance:
    return JsspInstance.model_validate(read_json(path))


def qubo_from_payload(payload: Union[dict, QuboPayload]) -> QuboMatrix:
    """QUBO from its JSON form {"n", "q", "gamma", "reg_target", "offset"}; malformed bodies raise ValidationError."""
    body = payload if isinstance(payload, QuboPayload) else QuboPayload.model_validate(payload)
    q = np.asarray(body.q, dtype=float)
    if body.n is not None and q.shape != (body.n, body.n):
        raise DimensionMismatchError(f"QUBO file declares n={body.n} but q has shape {q.shape}")
    return QuboMatrix(q=q, reg_gamma=body.gamma, reg_target=body.reg_target, offset=body.offset)


def load_qubo(path) -> QuboMatrix:
    return qubo_from_payload(read_json(path))


def dump_qubo(q: QuboMatrix, path) -> None:
    write_json(path, q.to_payload())
