"""Shared generators and the independent spectral radius oracle."""
import numpy as np

from rhobound import Matrix


def eig_rho(m) -> float:
    """Independent oracle: largest eigenvalue modulus via numpy's eigvals."""
    entries = m.entries if isinstance(m, Matrix) else np.asarray(m, dtype=float)
    return float(max(abs(np.linalg.eigvals(entries))))


def random_matrix(rng, n=None, min_n=2, max_n=6, scale=5.0, zero_fraction=0.3) -> Matrix:
    """Random nonnegative matrix with a sprinkling of exact zeros."""
    if n is None:
        n = int(rng.integers(min_n, max_n + 1))
    entries = rng.random((n, n)) * scale
    if zero_fraction:
        entries[rng.random((n, n)) < zero_fraction] = 0.0
    return Matrix(entries)


def positive_matrix(rng, n=None, min_n=2, max_n=6, scale=5.0) -> Matrix:
    """Strictly positive matrix; primitive, so every engine converges."""
    if n is None:
        n = int(rng.integers(min_n, max_n + 1))
    return Matrix(0.05 + rng.random((n, n)) * scale)


def dyadic_matrix(rng, n=None, min_n=2, max_n=6, high=40) -> Matrix:
    """Entries on the grid k/4: closed under the exact water-filling arithmetic."""
    if n is None:
        n = int(rng.integers(min_n, max_n + 1))
    return Matrix(rng.integers(0, high, size=(n, n)) / 4.0)


def random_partition(rng, n):
    from rhobound import IndexPartition

    return IndexPartition(int(rng.integers(0, n)) for _ in range(n))
