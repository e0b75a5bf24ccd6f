import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from parameterized import parameterized

from app.api.schemas.interferometer import FockState, InterferometerSpec
from app.core.exceptions import (
    CapacityError,
    DegenerateInputError,
    DimensionMismatchError,
    ParameterCountError,
)
from app.services.interferometer import (
    build_unitary,
    evolve_state,
    output_distribution,
    pad_state,
    parameter_count,
    sample,
    threshold_readout,
)


def spec_of(modes, thetas, loops=1):
    return InterferometerSpec(modes=modes, loops=loops, thetas=list(thetas))


@st.composite
def circuits(draw):
    modes = draw(st.integers(min_value=1, max_value=8))
    loops = draw(st.sampled_from([1, 2]))
    thetas = draw(st.lists(
        st.floats(min_value=-np.pi, max_value=np.pi, allow_nan=False),
        min_size=parameter_count(modes, loops),
        max_size=parameter_count(modes, loops),
    ))
    placements = draw(st.lists(st.integers(min_value=0, max_value=modes - 1), min_size=1, max_size=3))
    occupations = [placements.count(mode) for mode in range(modes)]
    return spec_of(modes, thetas, loops), occupations


@parameterized.expand([(2, 1), (2, 2), (5, 1), (8, 2)])
def test_unitary_is_orthogonal(modes, loops):
    thetas = np.random.default_rng(modes).uniform(-np.pi, np.pi, parameter_count(modes, loops))
    u = build_unitary(spec_of(modes, thetas, loops))
    assert u.matrix.shape == (modes, modes)
    assert u.is_orthogonal()


def test_zero_angles_give_identity():
    assert np.allclose(build_unitary(spec_of(4, [0.0, 0.0, 0.0])).matrix, np.eye(4))


def test_single_mode_interferometer_has_no_parameters():
    assert np.allclose(build_unitary(spec_of(1, [])).matrix, [[1.0]])


@parameterized.expand([(4, 1, 2), (4, 2, 3), (3, 1, 4)])
def test_wrong_parameter_count_names_the_expected_count(modes, loops, given_count):
    with pytest.raises(ParameterCountError) as err:
        build_unitary(spec_of(modes, [0.1] * given_count, loops))
    assert err.value.expected == loops * (modes - 1)
    assert err.value.got == given_count


def test_hong_ou_mandel_dip():
    dist = output_distribution(build_unitary(spec_of(2, [np.pi / 4])), [1, 1])
    assert dist.probability([1, 1]) < 1e-12
    assert np.isclose(dist[[2, 0]], 0.5)
    assert np.isclose(dist[[0, 2]], 0.5)


@parameterized.expand([(0.0,), (0.4,), (np.pi / 3,), (-1.1,)])
def test_single_photon_splits_by_cos_and_sin(theta):
    dist = output_distribution(build_unitary(spec_of(2, [theta])), [1, 0])
    assert np.isclose(dist[[1, 0]], np.cos(theta) ** 2)
    assert np.isclose(dist[[0, 1]], np.sin(theta) ** 2)


@settings(max_examples=60, deadline=None)
@given(circuits())
def test_permanent_and_fock_evolution_agree(circuit):
    spec, occupations = circuit
    by_permanent = output_distribution(build_unitary(spec), occupations)
    by_evolution = evolve_state(spec, occupations)

    assert np.allclose(by_permanent.probabilities, by_evolution.probabilities, atol=1e-10, rtol=0)
    assert abs(by_permanent.total() - 1.0) < 1e-9
    assert abs(by_evolution.total() - 1.0) < 1e-9
    assert (by_permanent.patterns.sum(axis=1) == sum(occupations)).all()


def test_distribution_is_keyed_by_fock_states():
    dist = output_distribution(build_unitary(spec_of(3, [0.2, 0.7])), [1, 0, 1])
    assert all(isinstance(p, FockState) for p in dist)
    assert len(dist) == 6
    assert dist.probability([3, 0, 0]) == 0.0


def test_mode_means_and_click_marginals():
    dist = output_distribution(build_unitary(spec_of(4, [0.3, -0.5, 1.0])), [1, 0, 1, 0])
    assert np.isclose(dist.mode_means().sum(), 2.0)
    clicks = dist.click_marginals()
    assert ((clicks >= 0) & (clicks <= 1)).all()
    assert np.isclose(sum(dist.threshold_distribution().values()), 1.0)


def test_input_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        output_distribution(build_unitary(spec_of(3, [0.1, 0.2])), [1, 0])


def test_vacuum_input_is_degenerate():
    with pytest.raises(DegenerateInputError):
        evolve_state(spec_of(2, [0.1]), [0, 0])


def test_pattern_space_cap():
    with pytest.raises(CapacityError):
        output_distribution(build_unitary(spec_of(4, [0.1, 0.2, 0.3])), [1, 0, 1, 0], cap=5)


def test_threshold_readout():
    assert threshold_readout([0, 2, 1, 0]) == [0, 1, 1, 0]
    assert threshold_readout(FockState.of([3])) == [1]


def test_pad_state():
    assert pad_state([1, 0, 1], 5).occupations == (1, 0, 1, 0, 0)
    with pytest.raises(DimensionMismatchError):
        pad_state([1, 0, 1], 2)


def test_sampling_is_seed_deterministic():
    spec = spec_of(4, [0.3, 0.9, -0.4])
    first = sample(spec, [1, 0, 1, 0], 50, rng_seed=7)
    again = sample(spec, [1, 0, 1, 0], 50, rng_seed=7)
    assert first == again
    assert all(s.total_photons == 2 for s in first)


def test_sampling_frequencies_follow_the_distribution():
    spec = spec_of(2, [np.pi / 4])
    shots = sample(spec, [1, 1], 2000, rng_seed=1)
    counts = {s.occupations: 0 for s in shots}
    for s in shots:
        counts[s.occupations] += 1
    assert (1, 1) not in counts
    assert abs(counts[(2, 0)] / 2000 - 0.5) < 0.05


def test_quarter_turn_cascade_permutes_modes():
    u = build_unitary(spec_of(3, [np.pi / 2, np.pi / 2])).matrix
    assert np.allclose(np.abs(u), [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    dist = output_distribution(build_unitary(spec_of(3, [np.pi / 2, np.pi / 2])), [1, 0, 0])
    assert np.isclose(dist[[0, 0, 1]], 1.0)
    assert np.isclose(dist.total(), 1.0)


@parameterized.expand([(3, 1), (5, 1), (5, 2), (7, 2)])
def test_single_photon_follows_squared_column(modes, loops):
    thetas = np.random.default_rng(modes + loops).uniform(-np.pi, np.pi, parameter_count(modes, loops))
    u = build_unitary(spec_of(modes, thetas, loops))
    for source in range(modes):
        dist = output_distribution(u, np.eye(modes, dtype=int)[source])
        for target in range(modes):
            assert np.isclose(dist[np.eye(modes, dtype=int)[target]], u.matrix[target, source] ** 2)


def test_padded_input_on_eight_modes_keeps_two_photons():
    thetas = np.random.default_rng(8).uniform(-np.pi, np.pi, parameter_count(8, 1))
    dist = evolve_state(spec_of(8, thetas), pad_state([1, 0, 1], 8))
    assert (dist.patterns.sum(axis=1) == 2).all()
    assert len(dist) == 36
    assert abs(dist.total() - 1.0) < 1e-9


def test_sampling_three_modes_within_five_sigma():
    spec = spec_of(3, [0.7, -1.2])
    state = [1, 1, 0]
    shots = 1000
    exact = output_distribution(build_unitary(spec), state)
    counts = {}
    for s in sample(spec, state, shots, rng_seed=42):
        counts[s.occupations] = counts.get(s.occupations, 0) + 1
    for pattern, p in zip(exact.patterns, exact.probabilities):
        observed = counts.get(tuple(int(v) for v in pattern), 0) / shots
        sigma = np.sqrt(p * (1 - p) / shots)
        assert abs(observed - p) <= 5 * sigma + 1e-12
