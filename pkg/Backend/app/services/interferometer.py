from collections.abc import Mapping
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence, Union

import numpy as np

from app.api.schemas.interferometer import FockState, InterferometerSpec, ModeUnitary
from app.core.config import settings
from app.core.exceptions import (
    CapacityError,
    DegenerateInputError,
    DimensionMismatchError,
    ParameterCountError,
)
from app.core.logging_config import setup_logging
from app.helpers.fock import basis_size, fock_basis, occupation_factorials, two_mode_transfer
from app.helpers.permanent import permanent

logger = setup_logging()

PatternLike = Union[FockState, Sequence[int], np.ndarray]


def _occupations(pattern: PatternLike) -> tuple:
    if isinstance(pattern, FockState):
        return pattern.occupations
    return tuple(int(v) for v in pattern)


@lru_cache(maxsize=256)
def _cached_basis(photons: int, modes: int) -> np.ndarray:
    patterns = fock_basis(photons, modes)
    patterns.setflags(write=False)
    return patterns


@lru_cache(maxsize=256)
def _cached_factorials(photons: int, modes: int) -> np.ndarray:
    out = np.array([occupation_factorials(p) for p in _cached_basis(photons, modes)], dtype=float)
    out.setflags(write=False)
    return out


class PatternDistribution(Mapping):
    """
    Probabilities over every output pattern with the input's photon number.

    Keys are FockState objects; lookups also accept plain sequences. Patterns outside the
    enumerated basis have probability 0 through `probability()`.
    """

    def __init__(self, patterns: np.ndarray, probabilities: np.ndarray):
        self.patterns = patterns
        self.probabilities = np.asarray(probabilities, dtype=float)
        self._index = {tuple(int(v) for v in row): i for i, row in enumerate(patterns)}

    def __getitem__(self, key: PatternLike) -> float:
        return float(self.probabilities[self._index[_occupations(key)]])

    def __iter__(self) -> Iterator[FockState]:
        for row in self.patterns:
            yield FockState.of(row)

    def __len__(self) -> int:
        return len(self.patterns)

    def probability(self, pattern: PatternLike) -> float:
        i = self._index.get(_occupations(pattern))
        return 0.0 if i is None else float(self.probabilities[i])

    def total(self) -> float:
        return float(self.probabilities.sum())

    def support(self, tol: float = 1e-15) -> List[FockState]:
        return [FockState.of(row) for row, p in zip(self.patterns, self.probabilities) if p > tol]

    def mode_means(self) -> np.ndarray:
        """Expected photon count per mode."""
        return self.probabilities @ self.patterns

    def threshold_distribution(self) -> dict:
        """Distribution over threshold bit-vectors (tuple -> probability)."""
        merged: dict = {}
        for bits, p in zip(threshold_patterns(self.patterns), self.probabilities):
            key = tuple(int(b) for b in bits)
            merged[key] = merged.get(key, 0.0) + float(p)
        return merged

    def click_marginals(self) -> np.ndarray:
        """Probability that each mode registers at least one photon."""
        return self.probabilities @ threshold_patterns(self.patterns)

    def draw(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """`count` i.i.d. pattern rows."""
        weights = self.probabilities / self.probabilities.sum()
        picks = rng.choice(len(self.patterns), size=count, p=weights)
        return self.patterns[picks]


def parameter_count(modes: int, loops: int) -> int:
    return loops * (modes - 1)


def pad_state(state: PatternLike, modes: int) -> FockState:
    """Append empty modes so the state spans `modes` qumodes."""
    occupations = _occupations(state)
    if len(occupations) > modes:
        raise DimensionMismatchError(f"State {list(occupations)} has more than {modes} modes")
    return FockState.of(occupations + (0,) * (modes - len(occupations)))


def _check_parameters(spec: InterferometerSpec) -> None:
    expected = parameter_count(spec.modes, spec.loops)
    if len(spec.thetas) != expected:
        raise ParameterCountError(expected=expected, got=len(spec.thetas), modes=spec.modes, loops=spec.loops)


def _check_input(modes: int, state: PatternLike, cap: Optional[int]) -> tuple:
    occupations = _occupations(state)
    if len(occupations) != modes:
        raise DimensionMismatchError(
            f"Input state has {len(occupations)} modes but the interferometer has {modes}"
        )
    if any(v < 0 for v in occupations):
        raise DegenerateInputError(f"Negative occupation in {list(occupations)}")
    photons = sum(occupations)
    if photons == 0:
        raise DegenerateInputError("Input state carries no photons; the output distribution is undefined")
    cap = settings.PATTERN_SPACE_CAP if cap is None else cap
    size = basis_size(photons, modes)
    if size > cap:
        raise CapacityError(
            f"{photons} photons over {modes} modes span {size} patterns, above the cap of {cap}"
        )
    return occupations


def build_unitary(spec: InterferometerSpec) -> ModeUnitary:
    """
    Compose the beam-splitter cascade into one N x N orthogonal matrix.

    Column i holds the output amplitudes of a photon injected in mode i. Each splitter
    R(theta) = [[cos, sin], [-sin, cos]] acts on rows (i, i+1) of the running product,
    first loop entirely before the second.
    """
    _check_parameters(spec)
    n = spec.modes
    u = np.eye(n)
    thetas = iter(spec.thetas)
    for _ in range(spec.loops):
        for i in range(n - 1):
            theta = next(thetas)
            c, s = np.cos(theta), np.sin(theta)
            upper, lower = u[i].copy(), u[i + 1].copy()
            u[i] = c * upper + s * lower
            u[i + 1] = -s * upper + c * lower
    return ModeUnitary(matrix=u)


def output_distribution(u: ModeUnitary, input_state: PatternLike, cap: Optional[int] = None) -> PatternDistribution:
    """
    Output probabilities through the permanent formula
    P(t | s) = |Perm(U[t, s])|^2 / (prod s_i! prod t_j!),
    with U[t, s] repeating row j t_j times and column i s_i times.
    """
    modes = u.modes
    occupations = _check_input(modes, input_state, cap)
    photons = sum(occupations)

    patterns = _cached_basis(photons, modes)
    out_factorials = _cached_factorials(photons, modes)
    columns = np.repeat(np.arange(modes), occupations)
    in_factorial = occupation_factorials(occupations)

    amplitudes = np.empty(len(patterns))
    for row, pattern in enumerate(patterns):
        rows = np.repeat(np.arange(modes), pattern)
        amplitudes[row] = permanent(u.matrix[np.ix_(rows, columns)])
    probabilities = amplitudes ** 2 / (out_factorials * in_factorial)
    logger.debug(f"Permanent distribution over {len(patterns)} patterns for input {list(occupations)}")
    return PatternDistribution(patterns, probabilities)


def evolve_state(spec: InterferometerSpec, input_state: PatternLike, cap: Optional[int] = None) -> PatternDistribution:
    """
    Same distribution as output_distribution, computed without permanents: the state
    vector is expanded in the Fock basis and every two-mode splitter is applied exactly,
    in circuit order.
    """
    _check_parameters(spec)
    modes = spec.modes
    occupations = _check_input(modes, input_state, cap)
    photons = sum(occupations)

    patterns = _cached_basis(photons, modes)
    index = {tuple(int(v) for v in row): i for i, row in enumerate(patterns)}
    state = np.zeros(len(patterns))
    state[index[occupations]] = 1.0

    thetas = iter(spec.thetas)
    for _ in range(spec.loops):
        for i in range(modes - 1):
            theta = next(thetas)
            transfers = {}
            evolved = np.zeros_like(state)
            for source in np.flatnonzero(state):
                pattern = [int(v) for v in patterns[source]]
                p, q = pattern[i], pattern[i + 1]
                pair_total = p + q
                if pair_total not in transfers:
                    transfers[pair_total] = two_mode_transfer(theta, pair_total)
                column = transfers[pair_total][:, p]
                for m in range(pair_total + 1):
                    pattern[i], pattern[i + 1] = m, pair_total - m
                    evolved[index[tuple(pattern)]] += column[m] * state[source]
            state = evolved

    logger.debug(f"Fock evolution over {len(patterns)} patterns for input {list(occupations)}")
    return PatternDistribution(patterns, state ** 2)


def threshold_readout(pattern: PatternLike) -> List[int]:
    """Bit i is 1 when mode i registered any photon."""
    return [1 if v > 0 else 0 for v in _occupations(pattern)]


def threshold_patterns(patterns: np.ndarray) -> np.ndarray:
    return (np.asarray(patterns) > 0).astype(np.int8)


def sample(spec: InterferometerSpec, input_state: PatternLike, shots: int, rng_seed: int) -> List[FockState]:
    """
    `shots` i.i.d. output patterns drawn from the exact distribution; identical seeds
    give identical sequences.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    try:
        distribution = output_distribution(build_unitary(spec), input_state)
        rng = np.random.default_rng(rng_seed)
        rows = distribution.draw(rng, shots)
        logger.debug(f"Sampled {shots} shots from {spec.modes}-mode interferometer (seed {rng_seed})")
        return [FockState.of(row) for row in rows]
    except Exception as e:
        logger.error(f"Error while sampling interferometer: {e}")
        raise
