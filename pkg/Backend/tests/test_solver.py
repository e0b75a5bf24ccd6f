import numpy as np
import pytest
from parameterized import parameterized

from app.api.schemas.interferometer import InterferometerSpec
from app.api.schemas.qubo import Graph, QuboMatrix, Schedule
from app.api.schemas.solver import BbsConfig, SolverParams, SpsaSettings
from app.core.exceptions import DimensionMismatchError, UndefinedQualityError
from app.helpers.utils import derive_rng
from app.services.bench import SIZE_PRESETS
from app.services.interferometer import build_unitary, output_distribution
from app.services.oracle import exact_maxcut, exact_qubo
from app.services.qubo import decode_schedule, encode_jssp, encode_maxcut
from app.services.solver import (
    BinaryBosonicSolver,
    batch_cost,
    draw_candidate,
    draw_candidates,
    init_params,
    plan_tiling,
    quality,
    solve,
)
from tests.conftest import KITCHEN_OPTIMUM


@parameterized.expand([(size, state, tiles) for size, (state, tiles) in SIZE_PRESETS.items()])
def test_tiling_matches_the_input_state_table(size, state, tiles):
    plan = plan_tiling(size, state)
    assert plan.tile_width == len(state)
    assert plan.tile_count == tiles
    assert plan.padding == tiles * len(state) - size


def test_tiling_twenty_variables_on_four_modes_needs_five_tiles():
    plan = plan_tiling(20, [1, 0, 1, 0])
    assert (plan.tile_count, plan.padding) == (5, 0)


def test_tiling_kitchen_instance():
    plan = plan_tiling(7, [1, 0, 1, 0])
    assert (plan.tile_width, plan.tile_count, plan.padding) == (4, 2, 1)
    assert list(plan.tile_variables(1)) == [4, 5, 6]


def test_tiling_needs_variables():
    with pytest.raises(ValueError):
        plan_tiling(0, [1, 0])


def test_init_params_shapes():
    config = BbsConfig(loops=2)
    plan = plan_tiling(7, config.input_state)
    params = init_params(plan, config, derive_rng(0))
    assert params.thetas.shape == (2, 6)
    assert (np.abs(params.thetas) <= np.pi / 4).all()
    assert np.allclose(params.flip_probabilities(), 0.5)
    assert params.parameter_count == 12 + 7


def test_pack_unpack_round_trip():
    config = BbsConfig()
    plan = plan_tiling(7, config.input_state)
    params = init_params(plan, config, derive_rng(1))
    restored = params.unpack(params.pack())
    assert np.array_equal(restored.thetas, params.thetas)
    assert np.array_equal(restored.flip_logits, params.flip_logits)


def identity_params(plan, logit, bitflip=True):
    return SolverParams(
        thetas=np.zeros((plan.tile_count, plan.tile_width - 1)),
        flip_logits=np.full(plan.n_vars, logit),
        bitflip_enabled=bitflip,
    )


def test_identity_circuit_reproduces_the_input_pattern():
    config = BbsConfig(bitflip_enabled=False)
    plan = plan_tiling(7, config.input_state)
    bits = draw_candidates(identity_params(plan, 0.0, bitflip=False), plan, config, derive_rng(0), 5)
    assert bits.shape == (5, 7)
    assert (bits == [1, 0, 1, 0, 1, 0, 1]).all()


def test_saturated_flip_layer_inverts_every_bit():
    config = BbsConfig()
    plan = plan_tiling(7, config.input_state)
    bit_vector = draw_candidate(identity_params(plan, 50.0), plan, config, derive_rng(0))
    assert bit_vector == [0, 1, 0, 1, 0, 1, 0]


def test_candidates_are_seed_deterministic():
    config = BbsConfig()
    plan = plan_tiling(9, config.input_state)
    params = init_params(plan, config, derive_rng(3))
    first = draw_candidates(params, plan, config, derive_rng(3, 1), 30)
    again = draw_candidates(params, plan, config, derive_rng(3, 1), 30)
    assert np.array_equal(first, again)
    assert set(np.unique(first)) <= {0, 1}


def test_wrong_parameter_shape_rejected():
    config = BbsConfig()
    plan = plan_tiling(7, config.input_state)
    params = SolverParams(thetas=np.zeros((1, 3)), flip_logits=np.zeros(7))
    with pytest.raises(DimensionMismatchError):
        draw_candidates(params, plan, config, derive_rng(0), 1)


def test_batch_cost_checks_dimensions(k3):
    config = BbsConfig(batch_size=10)
    plan = plan_tiling(4, config.input_state)
    params = init_params(plan, config, derive_rng(0))
    with pytest.raises(DimensionMismatchError):
        batch_cost(encode_maxcut(k3), params, plan, config, derive_rng(0))


def test_batch_cost_reports_the_batch_best(k3):
    config = BbsConfig(batch_size=25, input_state=[1, 0, 1])
    plan = plan_tiling(3, config.input_state)
    params = init_params(plan, config, derive_rng(0))
    q = encode_maxcut(k3)
    mean, (best_x, best_cost) = batch_cost(q, params, plan, config, derive_rng(5))
    assert best_cost <= mean
    assert best_cost == -sum(best_x[u] != best_x[v] for u, v in k3.edges)


def test_solve_k2_finds_the_cut(k2):
    run = solve(encode_maxcut(k2), BbsConfig(iterations=5, batch_size=10, input_state=[1, 0]))
    assert run.best_cost == -1
    assert quality(k2, run.best_sample, 1) == 1.0


def test_single_variable_problem():
    run = solve(QuboMatrix(q=np.array([[-1.0]])), BbsConfig(iterations=10, batch_size=10, input_state=[1, 0]))
    assert run.plan.padding == 1
    assert run.best_sample == [1]
    assert run.best_cost == -1


def test_trained_flip_layer_settles_on_the_single_variable_optimum():
    config = BbsConfig(input_state=[1], rng_seed=0)
    solver = BinaryBosonicSolver(QuboMatrix(q=np.array([[-1.0]])), config)
    run = solver.solve()
    assert run.plan.tile_width == 1 and run.plan.padding == 0
    assert solver.params.flip_probabilities()[0] < 0.1
    draws = draw_candidates(solver.params, solver.plan, config, derive_rng(99), 4000)
    assert draws.mean() >= 0.9
    assert run.step_size > config.spsa.a


def test_uncalibrated_gains_keep_the_configured_step_size():
    config = BbsConfig(iterations=3, batch_size=5, input_state=[1], spsa=SpsaSettings(calibrate=False))
    run = solve(QuboMatrix(q=np.array([[-1.0]])), config)
    assert run.step_size == config.spsa.a


def test_sampled_and_smoothed_objectives_share_the_incumbent(k2):
    base = dict(iterations=4, batch_size=8, input_state=[1, 0], rng_seed=3)
    smooth = solve(encode_maxcut(k2), BbsConfig(**base))
    sampled = solve(encode_maxcut(k2), BbsConfig(smooth_flips=False, **base))
    assert smooth.best_cost == sampled.best_cost == -1


def test_candidate_marginals_match_the_thresholded_distribution():
    config = BbsConfig(input_state=[1, 0, 1, 0], bitflip_enabled=False)
    plan = plan_tiling(4, config.input_state)
    params = init_params(plan, config, derive_rng(21))
    rng = derive_rng(22)
    draws = np.array([draw_candidate(params, plan, config, rng) for _ in range(2000)])

    spec = InterferometerSpec(modes=4, loops=1, thetas=params.thetas[0].tolist())
    exact = output_distribution(build_unitary(spec), config.input_state).click_marginals()
    sigma = np.sqrt(exact * (1 - exact) / len(draws))
    assert (np.abs(draws.mean(axis=0) - exact) <= 5 * sigma + 1e-12).all()


def test_batch_cost_of_the_zero_matrix_is_zero():
    config = BbsConfig(batch_size=15)
    plan = plan_tiling(6, config.input_state)
    params = init_params(plan, config, derive_rng(4))
    mean, (_, best_cost) = batch_cost(QuboMatrix(q=np.zeros((6, 6))), params, plan, config, derive_rng(5))
    assert mean == 0.0 and best_cost == 0.0


def test_batch_cost_of_a_forced_k2_cut(k2):
    config = BbsConfig(batch_size=10, input_state=[1, 0], bitflip_enabled=False)
    plan = plan_tiling(2, config.input_state)
    mean, (best_x, _) = batch_cost(encode_maxcut(k2), identity_params(plan, 0.0, bitflip=False), plan, config, derive_rng(0))
    assert mean == -1.0
    assert best_x == [1, 0]


def test_batch_cost_of_the_forced_kitchen_optimum(kitchen):
    q, _ = encode_jssp(kitchen)
    config = BbsConfig(batch_size=10)
    plan = plan_tiling(7, config.input_state)
    # the identity circuit reads 1010101; saturated flips turn it into the optimum
    flip = np.array(KITCHEN_OPTIMUM) != np.array([1, 0, 1, 0, 1, 0, 1])
    params = SolverParams(thetas=np.zeros((2, 3)), flip_logits=np.where(flip, 50.0, -50.0))
    mean, (best_x, _) = batch_cost(q, params, plan, config, derive_rng(0))
    assert best_x == KITCHEN_OPTIMUM
    assert np.isclose(mean, exact_qubo(q).best_value)


def test_quality_ratios(k3):
    assert quality(k3, [1, 0, 0], 2) == 1.0
    assert quality(k3, [1, 1, 1], 2) == 0.0
    path = Graph(n=3, edges=[(0, 1), (1, 2)])
    assert quality(path, [1, 1, 0], exact_maxcut(path).best_value) == 0.5


def test_run_is_reproducible_and_best_is_monotone():
    g = Graph(n=6, edges=[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
    config = BbsConfig(iterations=8, batch_size=12, input_state=[1, 0, 1], rng_seed=11)
    first = solve(encode_maxcut(g), config)
    again = solve(encode_maxcut(g), config)
    assert first.best_sample == again.best_sample
    assert [e.mean_cost for e in first.trace] == [e.mean_cost for e in again.trace]

    best = [e.best_cost for e in first.trace]
    assert all(b >= a for a, b in zip(best[1:], best))
    assert all(e.min_cost <= e.mean_cost <= e.max_cost for e in first.trace)
    assert first.best_cost <= first.final_cost


def test_circuit_run_accounting():
    config = BbsConfig(iterations=4, batch_size=5)
    run = solve(QuboMatrix(q=-np.eye(7)), config)
    calibration = 2 * config.spsa.calibration_steps
    assert run.plan.tile_count == 2
    assert run.candidate_count == (calibration + 2 * 4 + 1) * 5
    assert run.circuit_run_count == (calibration + 2 * 4 + 1) * 5 * 2


def test_per_tile_gradients_cost_one_evaluation_pair_per_tile():
    config = BbsConfig(iterations=3, batch_size=5, per_tile_gradients=True, spsa=SpsaSettings(calibrate=False))
    run = solve(QuboMatrix(q=-np.eye(7)), config)
    assert run.candidate_count == (2 * 2 * 3 + 1) * 5
    assert run.circuit_run_count == run.candidate_count * 2


def test_without_bitflips_only_angles_are_trained():
    config = BbsConfig(iterations=2, batch_size=5, bitflip_enabled=False)
    solver = BinaryBosonicSolver(QuboMatrix(q=-np.eye(7)), config)
    run = solver.solve()
    assert len(run.trace[-1].params) == 2 * 3


def test_quality_is_undefined_without_edges():
    g = Graph(n=3, edges=[])
    with pytest.raises(UndefinedQualityError):
        quality(g, [0, 1, 0], exact_maxcut(g).best_value)


def test_kitchen_instance_reaches_the_optimal_schedule(kitchen):
    q, vmap = encode_jssp(kitchen)
    found = 0
    for seed in range(10):
        run = solve(q, BbsConfig(iterations=20, batch_size=20, input_state=[1, 0, 1, 0], rng_seed=seed))
        assert run.plan.tile_count == 2 and run.plan.padding == 1
        decoded = decode_schedule(vmap, run.best_sample)
        found += isinstance(decoded, Schedule) and decoded.makespan == 3
    assert found >= 8
