import numpy as np


def glynn_permanent(matrix) -> float:
    """
    Permanent of a square matrix with Glynn's formula, walking the sign vectors
    delta in Gray-code order so every step updates the column sums with one row.

    perm(A) = 2^-(n-1) * sum_delta (prod_k delta_k) * prod_j (sum_i delta_i a_ij),
    delta_0 fixed to +1.

    Parameters:
    - matrix: square array (real or complex).

    Returns:
    - The permanent. The 0x0 matrix has permanent 1.
    """
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"Permanent needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return 1.0
    if n == 1:
        return a[0, 0]

    column_sums = a.sum(axis=0)
    delta = np.ones(n)
    sign = 1.0
    total = np.prod(column_sums)
    for step in range(1, 2 ** (n - 1)):
        row = (step & -step).bit_length()  # bit b of the Gray code flips row b + 1
        delta[row] = -delta[row]
        column_sums = column_sums + 2.0 * delta[row] * a[row]
        sign = -sign
        total += sign * np.prod(column_sums)
    return total / 2 ** (n - 1)


permanent = glynn_permanent
