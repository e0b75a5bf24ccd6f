import math
from typing import List, Optional, Tuple

import numpy as np

from app.api.schemas.interferometer import InterferometerSpec
from app.api.schemas.qubo import Graph, QuboMatrix
from app.api.schemas.solver import BbsConfig, BbsRun, SolverParams, TilingPlan, TraceEntry
from app.core.exceptions import DimensionMismatchError, UndefinedQualityError
from app.core.logging_config import setup_logging
from app.helpers.utils import derive_rng
from app.services.interferometer import (
    PatternLike,
    _occupations,
    build_unitary,
    output_distribution,
    parameter_count,
    threshold_patterns,
)
from app.services.qubo import batch_cost as qubo_batch_cost
from app.services.qubo import cut_size, expected_cost
from app.services.spsa import SpsaOptimizer, spsa_step

logger = setup_logging()

# Stream labels for derive_rng(seed, label, ...)
_INIT, _DIRECTION, _BATCH, _FINAL, _CALIBRATION_DIRECTION, _CALIBRATION_BATCH = range(6)


def plan_tiling(n_vars: int, input_state: PatternLike) -> TilingPlan:
    """Split n_vars bits into ceil(n_vars / width) tiles of the input template's width."""
    if n_vars < 1:
        raise ValueError(f"n_vars must be >= 1, got {n_vars}")
    width = len(_occupations(input_state))
    tiles = math.ceil(n_vars / width)
    return TilingPlan(n_vars=n_vars, tile_width=width, tile_count=tiles, padding=tiles * width - n_vars)


def init_params(plan: TilingPlan, config: BbsConfig, rng: np.random.Generator) -> SolverParams:
    """Angles uniform in (-pi/4, pi/4); flip logits 0, i.e. every flip starts at probability 1/2."""
    per_tile = parameter_count(plan.tile_width, config.loops)
    thetas = rng.uniform(-np.pi / 4, np.pi / 4, size=(plan.tile_count, per_tile))
    return SolverParams(thetas=thetas, flip_logits=np.zeros(plan.n_vars), bitflip_enabled=config.bitflip_enabled)


def _check_params(params: SolverParams, plan: TilingPlan, config: BbsConfig) -> None:
    expected = (plan.tile_count, parameter_count(plan.tile_width, config.loops))
    if params.thetas.shape != expected:
        raise DimensionMismatchError(f"thetas have shape {params.thetas.shape}, the plan needs {expected}")
    if params.flip_logits.shape != (plan.n_vars,):
        raise DimensionMismatchError(f"{params.flip_logits.size} flip logits for {plan.n_vars} variables")


def draw_readouts(
    params: SolverParams,
    plan: TilingPlan,
    config: BbsConfig,
    rng: np.random.Generator,
    count: int,
) -> np.ndarray:
    """Thresholded tile patterns, concatenated with the padded tail cut off; no flips yet."""
    _check_params(params, plan, config)
    segments = []
    for tile in range(plan.tile_count):
        spec = InterferometerSpec(modes=plan.tile_width, loops=config.loops, thetas=params.thetas[tile].tolist())
        distribution = output_distribution(build_unitary(spec), config.input_state)
        segments.append(threshold_patterns(distribution.draw(rng, count)))
    return np.hstack(segments)[:, :plan.n_vars]


def apply_flips(readouts: np.ndarray, params: SolverParams, config: BbsConfig, rng: np.random.Generator) -> np.ndarray:
    if not config.bitflip_enabled:
        return readouts
    flips = rng.random(readouts.shape) < params.flip_probabilities()
    return readouts ^ flips.astype(np.int8)


def flip_means(readouts: np.ndarray, params: SolverParams) -> np.ndarray:
    """P(x_i = 1) for each readout once the flip layer has acted."""
    p = params.flip_probabilities()
    return readouts + p * (1 - 2 * readouts)


def draw_candidates(
    params: SolverParams,
    plan: TilingPlan,
    config: BbsConfig,
    rng: np.random.Generator,
    count: int,
) -> np.ndarray:
    """
    `count` candidate bit-vectors: every tile samples its interferometer, the patterns
    are thresholded and concatenated, the padded tail is cut off, and each bit is then
    flipped with its trained probability.

    Returns:
    - int8 array of shape (count, n_vars).
    """
    return apply_flips(draw_readouts(params, plan, config, rng, count), params, config, rng)


def draw_candidate(params: SolverParams, plan: TilingPlan, config: BbsConfig, rng: np.random.Generator) -> List[int]:
    return draw_candidates(params, plan, config, rng, 1)[0].tolist()


def batch_cost(
    q: QuboMatrix,
    params: SolverParams,
    plan: TilingPlan,
    config: BbsConfig,
    rng: np.random.Generator,
) -> Tuple[float, Tuple[List[int], float]]:
    """Mean cost of one batch and the batch's best (first-seen on ties) candidate."""
    if q.n != plan.n_vars:
        raise DimensionMismatchError(f"QUBO has {q.n} variables, the tiling plan {plan.n_vars}")
    candidates = draw_candidates(params, plan, config, rng, config.batch_size)
    costs = qubo_batch_cost(q, candidates)
    best = int(np.argmin(costs))
    return float(costs.mean()), (candidates[best].tolist(), float(costs[best]))


class BinaryBosonicSolver:
    """
    Hybrid loop: tiles of simulated interferometers propose bit-vectors, a classical
    bit-flip layer perturbs them, and SPSA trains angles and flip logits together
    against the mean batch cost.
    """

    def __init__(self, q: QuboMatrix, config: BbsConfig):
        if q.n < 1:
            raise ValueError("QUBO must have at least one variable")
        self.q = q
        self.config = config
        self.plan = plan_tiling(q.n, config.input_state)
        self.optimizer = SpsaOptimizer.for_config(config)
        self.circuit_runs = 0
        self.candidates_seen = 0
        self.best_sample: Optional[List[int]] = None
        self.best_cost = math.inf
        self.params: Optional[SolverParams] = None

    def _evaluate(self, params: SolverParams, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, float]:
        """
        One batch: the sampled candidates, their costs, and the training objective.
        With smooth_flips the objective averages the exact expectation over the flip
        layer for each readout instead of the single flipped draw.
        """
        readouts = draw_readouts(params, self.plan, self.config, rng, self.config.batch_size)
        candidates = apply_flips(readouts, params, self.config, rng)
        costs = qubo_batch_cost(self.q, candidates)
        self.circuit_runs += self.config.batch_size * self.plan.tile_count
        self.candidates_seen += len(candidates)
        best = int(np.argmin(costs))
        if costs[best] < self.best_cost:
            self.best_cost = float(costs[best])
            self.best_sample = candidates[best].tolist()
        if self.config.bitflip_enabled and self.config.smooth_flips:
            objective = float(expected_cost(self.q, flip_means(readouts, params)).mean())
        else:
            objective = float(costs.mean())
        return candidates, costs, objective

    def _difference(
        self,
        params: SolverParams,
        vector: np.ndarray,
        delta: np.ndarray,
        c_k: float,
        rng_key: Tuple[int, ...],
    ) -> Tuple[float, List[np.ndarray]]:
        # both sides replay the same random stream
        seed = self.config.rng_seed
        _, plus, f_plus = self._evaluate(params.unpack(vector + c_k * delta), derive_rng(seed, *rng_key))
        _, minus, f_minus = self._evaluate(params.unpack(vector - c_k * delta), derive_rng(seed, *rng_key))
        return f_plus - f_minus, [plus, minus]

    def _calibrate(self, params: SolverParams, vector: np.ndarray) -> None:
        spsa, seed = self.config.spsa, self.config.rng_seed
        if not spsa.calibrate or vector.size == 0:
            return
        _, c_0 = self.optimizer.gains(0)
        magnitudes = []
        for step in range(spsa.calibration_steps):
            delta = self.optimizer.perturbation(derive_rng(seed, _CALIBRATION_DIRECTION, step), vector.size)
            diff, _ = self._difference(params, vector, delta, c_0, (_CALIBRATION_BATCH, step))
            magnitudes.append(abs(diff) / (2.0 * c_0))
        magnitude = float(np.mean(magnitudes))
        a = self.optimizer.calibrate(magnitude, spsa.target_step)
        logger.info(f"SPSA calibrated over {spsa.calibration_steps} estimates: mean |g| {magnitude:.4g}, a={a:.4g}")

    def _segments(self, params: SolverParams) -> List[np.ndarray]:
        """Indices of the flat parameter vector owned by each tile."""
        per_tile = params.thetas.shape[1]
        out = []
        for tile in range(self.plan.tile_count):
            owned = list(range(tile * per_tile, (tile + 1) * per_tile))
            if params.bitflip_enabled:
                offset = params.thetas.size
                owned += [offset + i for i in self.plan.tile_variables(tile)]
            out.append(np.array(owned, dtype=int))
        return out

    def _gradient(self, params: SolverParams, vector: np.ndarray, k: int, c_k: float) -> Tuple[np.ndarray, List[np.ndarray]]:
        seed = self.config.rng_seed
        if not self.config.per_tile_gradients:
            delta = self.optimizer.perturbation(derive_rng(seed, _DIRECTION, k), vector.size)
            diff, batches = self._difference(params, vector, delta, c_k, (_BATCH, k))
            return self.optimizer.gradient(diff, 0.0, delta, c_k), batches

        grad = np.zeros_like(vector)
        batches = []
        for tile, owned in enumerate(self._segments(params)):
            if owned.size == 0:
                continue
            delta = np.zeros_like(vector)
            delta[owned] = self.optimizer.perturbation(derive_rng(seed, _DIRECTION, k, tile), owned.size)
            diff, pair = self._difference(params, vector, delta, c_k, (_BATCH, k, tile))
            grad[owned] = self.optimizer.gradient(diff, 0.0, delta[owned], c_k)
            batches += pair
        return grad, batches

    def solve(self) -> BbsRun:
        config, seed = self.config, self.config.rng_seed
        logger.info(
            f"BBS start: {self.plan.n_vars} variables, {self.plan.tile_count} tile(s) of width "
            f"{self.plan.tile_width} (padding {self.plan.padding}), loops={config.loops}, "
            f"{config.iterations}x{config.batch_size}, seed={seed}"
        )
        params = init_params(self.plan, config, derive_rng(seed, _INIT))
        vector = params.pack()
        trace: List[TraceEntry] = []

        try:
            self._calibrate(params, vector)
            for k in range(config.iterations):
                a_k, c_k = self.optimizer.gains(k)
                grad, batches = self._gradient(params, vector, k, c_k)
                vector = spsa_step(vector, grad, k, self.optimizer)
                costs = np.concatenate(batches)
                trace.append(TraceEntry(
                    iteration=k,
                    mean_cost=float(costs.mean()),
                    min_cost=float(costs.min()),
                    max_cost=float(costs.max()),
                    best_cost=self.best_cost,
                    a_k=a_k,
                    c_k=c_k,
                    params=vector.tolist() if config.record_parameters else None,
                ))
                logger.debug(
                    f"iteration {k}: mean {trace[-1].mean_cost:.4f}, min {trace[-1].min_cost:.4f}, "
                    f"best {self.best_cost:.4f}"
                )

            self.params = params.unpack(vector)
            final_candidates, final_costs, _ = self._evaluate(self.params, derive_rng(seed, _FINAL))
            final_best = int(np.argmin(final_costs))
        except Exception as e:
            logger.error(f"Error while running BBS: {e}")
            raise

        logger.info(
            f"BBS done: best cost {self.best_cost:.4f} after {self.candidates_seen} candidates, "
            f"{self.circuit_runs} tile-circuit runs"
        )
        return BbsRun(
            config=config,
            plan=self.plan,
            trace=trace,
            best_sample=self.best_sample,
            best_cost=self.best_cost,
            final_sample=final_candidates[final_best].tolist(),
            final_cost=float(final_costs[final_best]),
            circuit_run_count=self.circuit_runs,
            candidate_count=self.candidates_seen,
            step_size=self.optimizer.a,
        )


def solve(q: QuboMatrix, config: BbsConfig) -> BbsRun:
    return BinaryBosonicSolver(q, config).solve()


def quality(g: Graph, x, exact_cut: int) -> float:
    """Cut found over the optimal cut."""
    if exact_cut < 1:
        raise UndefinedQualityError(f"Quality is undefined when the optimal cut is {exact_cut}")
    return cut_size(g, x) / exact_cut
