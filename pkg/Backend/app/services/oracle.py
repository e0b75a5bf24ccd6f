import time
from itertools import product
from typing import Optional

import numpy as np

from app.api.schemas.oracle import ExactResult
from app.api.schemas.qubo import Graph, JsspInstance, QuboMatrix, Schedule
from app.core.config import settings
from app.core.exceptions import CapacityError, InfeasibleHorizonError
from app.core.logging_config import setup_logging
from app.helpers.gray_code import minimize_binary_quadratic
from app.services.qubo import build_variable_map, cost, decode_schedule, fold_regularizer

logger = setup_logging()


def _check_capacity(n: int, cap: Optional[int], what: str) -> None:
    cap = settings.MAX_EXACT_VARIABLES if cap is None else cap
    if n > cap:
        raise CapacityError(f"Exhaustive {what} over {n} variables exceeds the cap of {cap}")


def exact_qubo(q: QuboMatrix, cap: Optional[int] = None, block_bits: Optional[int] = None) -> ExactResult:
    """
    Exhaustive minimum of cost(x) over all 2^n assignments (Gray-code scan).
    Ties go to the lexicographically smallest x.
    """
    _check_capacity(q.n, cap, "QUBO search")
    started = time.perf_counter()
    folded = fold_regularizer(q)
    scan = minimize_binary_quadratic(folded.q, block_bits or settings.EXACT_BLOCK_BITS)
    best_x = [int(b) for b in scan.x]
    elapsed = time.perf_counter() - started
    logger.debug(f"Exact QUBO n={q.n}: value {scan.value + folded.offset} ({scan.count} optima) in {elapsed:.4f}s")
    return ExactResult(best_x=best_x, best_value=cost(q, best_x), optima_count=scan.count, elapsed=elapsed)


def exact_maxcut(g: Graph, cap: Optional[int] = None, block_bits: Optional[int] = None) -> ExactResult:
    """
    Maximum cut by exhaustive search straight from the adjacency matrix. Vertex 0 is
    pinned to side 0 (every cut has a mirror image), so only 2^(n-1) cuts are scanned
    and the optimum count is doubled.
    """
    _check_capacity(g.n, cap, "Max-Cut search")
    started = time.perf_counter()
    adjacency = g.adjacency()
    # -cut(x) = sum over edges of 2 x_i x_j - x_i - x_j
    negated_cut = np.triu(2.0 * adjacency, 1) - np.diag(adjacency.sum(axis=1))
    scan = minimize_binary_quadratic(negated_cut[1:, 1:], block_bits or settings.EXACT_BLOCK_BITS)
    best_x = [0] + [int(b) for b in scan.x]
    elapsed = time.perf_counter() - started
    best_cut = int(round(-scan.value))
    logger.debug(f"Exact Max-Cut |V|={g.n}: cut {best_cut} in {elapsed:.4f}s")
    return ExactResult(best_x=best_x, best_value=best_cut, optima_count=2 * scan.count, elapsed=elapsed)


def exact_jssp(inst: JsspInstance, cap: Optional[int] = None) -> ExactResult:
    """
    Minimal makespan over feasible schedules of the pruned time-indexed model.

    Only assignments with one start per operation can satisfy the single-start
    constraint, so the scan walks the product of start windows and keeps what
    decode_schedule accepts. No feasible schedule is a result, not an error.
    """
    started = time.perf_counter()
    try:
        vmap = build_variable_map(inst)
    except InfeasibleHorizonError as e:
        logger.info(f"No feasible schedule: {e}")
        return ExactResult(feasible=False, feasible_count=0, elapsed=time.perf_counter() - started)
    _check_capacity(len(vmap), cap, "JSSP search")

    windows = [vmap.operation_variables(j, k) for j, k in vmap.operations()]
    best_x, best_schedule = None, None
    best_makespan, optima, feasible = None, 0, 0
    for choice in product(*windows):
        x = np.zeros(len(vmap), dtype=int)
        x[list(choice)] = 1
        decoded = decode_schedule(vmap, x)
        if not isinstance(decoded, Schedule):
            continue
        feasible += 1
        bits = x.tolist()
        if best_makespan is None or decoded.makespan < best_makespan:
            best_makespan, optima = decoded.makespan, 1
            best_x, best_schedule = bits, decoded
        elif decoded.makespan == best_makespan:
            optima += 1
            if bits < best_x:
                best_x, best_schedule = bits, decoded

    elapsed = time.perf_counter() - started
    if best_makespan is None:
        logger.info(f"No feasible schedule within t_max={inst.t_max}")
        return ExactResult(feasible=False, feasible_count=0, elapsed=elapsed)
    logger.debug(f"Exact JSSP: makespan {best_makespan}, {feasible} feasible schedules, {elapsed:.4f}s")
    return ExactResult(
        best_x=best_x,
        best_value=best_makespan,
        optima_count=optima,
        elapsed=elapsed,
        feasible=True,
        feasible_count=feasible,
        schedule=best_schedule,
    )
