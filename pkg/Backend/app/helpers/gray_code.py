from dataclasses import dataclass
from typing import Optional

import numpy as np


def to_gray_code(x: int) -> int:
    """Convert a counter index to its corresponding Gray code."""
    return (x >> 1) ^ x


def flipped_bit(step: int) -> int:
    """Bit that changes between Gray codes step - 1 and step (step >= 1)."""
    return (step & -step).bit_length() - 1


def bit_block(bits: int) -> np.ndarray:
    """All 2^bits assignments as rows; bit i of the row index is column i."""
    rows = np.arange(2 ** bits, dtype=np.int64)
    return ((rows[:, None] >> np.arange(bits)) & 1).astype(np.int8)


def lex_min_row(rows: np.ndarray) -> np.ndarray:
    """Lexicographically smallest row of a 0/1 matrix."""
    candidates = rows
    for column in range(rows.shape[1]):
        smallest = candidates[:, column].min()
        candidates = candidates[candidates[:, column] == smallest]
        if len(candidates) == 1:
            break
    return candidates[0]


@dataclass
class ScanResult:
    value: float
    count: int
    x: np.ndarray


class _Incumbent:
    def __init__(self, tol: float):
        self.tol = tol
        self.value = np.inf
        self.count = 0
        self.x: Optional[np.ndarray] = None

    def offer(self, costs: np.ndarray, block: np.ndarray, x_high: np.ndarray) -> None:
        low = costs.min()
        if low < self.value - self.tol:
            self.value = low
            self.count = 0
            self.x = None
        if low > self.value + self.tol:
            return
        ties = np.flatnonzero(costs <= self.value + self.tol)
        self.count += int(ties.size)
        candidate = np.concatenate([lex_min_row(block[ties]), x_high.astype(np.int8)])
        if self.x is None or tuple(candidate.tolist()) < tuple(self.x.tolist()):
            self.x = candidate


def minimize_binary_quadratic(q, block_bits: int = 10, tol: float = 1e-9) -> ScanResult:
    """
    Exhaustive minimum of x^T q x over x in {0,1}^n.

    The first `block_bits` variables form a block whose 2^k costs live in one numpy
    vector; the remaining variables are walked in Gray-code order so each step flips a
    single variable and updates the whole block with its local field.

    Ties within `tol` count as optima; the lexicographically smallest x is kept.
    """
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    k = min(n, block_bits)
    h = n - k

    block = bit_block(k)
    as_float = block.astype(float)
    costs = np.einsum("ri,ij,rj->r", as_float, q[:k, :k], as_float)
    cross = as_float @ (q[:k, k:] + q[k:, :k].T)

    high = q[k:, k:]
    high_diag = np.diag(high).copy()
    high_pair = high + high.T
    np.fill_diagonal(high_pair, 0.0)
    x_high = np.zeros(h)

    incumbent = _Incumbent(tol)
    incumbent.offer(costs, block, x_high)
    for step in range(1, 2 ** h):
        b = flipped_bit(step)
        direction = 1.0 - 2.0 * x_high[b]
        costs += direction * (high_diag[b] + high_pair[b] @ x_high + cross[:, b])
        x_high[b] = 1.0 - x_high[b]
        incumbent.offer(costs, block, x_high)

    return ScanResult(value=float(incumbent.value), count=incumbent.count, x=incumbent.x)
