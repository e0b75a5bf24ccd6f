from itertools import combinations_with_replacement
from math import comb, factorial, sqrt

import numpy as np


def basis_size(photons: int, modes: int) -> int:
    """Number of occupation patterns of `photons` bosons over `modes` modes, C(n+N-1, n)."""
    return comb(photons + modes - 1, photons)


def fock_basis(photons: int, modes: int) -> np.ndarray:
    """
    All occupation patterns with the given total photon number.

    Rows come out in a fixed order (lexicographically descending, so the pattern with
    every photon in mode 0 is first).

    Returns:
    - int array of shape (basis_size, modes).
    """
    patterns = np.zeros((basis_size(photons, modes), modes), dtype=np.int64)
    for row, placement in enumerate(combinations_with_replacement(range(modes), photons)):
        for mode in placement:
            patterns[row, mode] += 1
    return patterns


def occupation_factorials(pattern) -> int:
    out = 1
    for occupation in pattern:
        out *= factorial(int(occupation))
    return out


def two_mode_transfer(theta: float, photons: int) -> np.ndarray:
    """
    Exact action of the real beam-splitter R(theta) = [[c, s], [-s, c]] on the
    two-mode Fock states with a fixed photon total M.

    The splitter maps creation operators a^+ -> c a^+ - s b^+ and b^+ -> s a^+ + c b^+.

    Returns:
    - (M+1) x (M+1) array T with T[m, p] the amplitude of |m, M-m> given |p, M-p>.
    """
    c, s = np.cos(theta), np.sin(theta)
    total = photons
    transfer = np.zeros((total + 1, total + 1))
    for p in range(total + 1):
        q = total - p
        norm_in = sqrt(factorial(p) * factorial(q))
        for r in range(p + 1):
            a_part = comb(p, r) * c ** r * (-s) ** (p - r)
            for u in range(q + 1):
                m = r + u
                b_part = comb(q, u) * s ** u * c ** (q - u)
                transfer[m, p] += a_part * b_part * sqrt(factorial(m) * factorial(total - m)) / norm_in
    return transfer
