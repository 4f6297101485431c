"""Charge-sector dimensions from two-row partitions, with exact arithmetic.

The Sz = S sector of n spins splits into total-spin blocks; the block for
total spin S has dimension C(n, k) - C(n, k-1) with k = n/2 - S (the number
of standard Young tableaux of shape (n-k, k)).  Everything here is exact
big-integer combinatorics plus a small dense oracle for crosschecks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

__all__ = [
    "TwoRowPartition",
    "irrep_dim",
    "largest_irrep_dim",
    "schur_weyl_check",
    "scaling_ratio",
    "brute_force_sector_dim",
]

BRUTE_FORCE_MAX_SITES = 10


@dataclass(frozen=True)
class TwoRowPartition:
    """Partition (n - k, k) of n; labels the total-spin-(n/2 - k) sector."""

    n: int
    k: int

    def __post_init__(self) -> None:
        if not 0 <= self.k <= self.n // 2:
            raise ValueError(f"need 0 <= k <= n/2, got n={self.n}, k={self.k}")

    @property
    def total_spin(self) -> Fraction:
        return Fraction(self.n, 2) - self.k

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n - self.k, self.k)


def irrep_dim(n: int, k: int) -> int:
    """Dimension C(n, k) - C(n, k-1) of the two-row partition (n-k, k)."""
    part = TwoRowPartition(n, k)  # validates the range
    if part.k == 0:
        return 1
    return comb(n, k) - comb(n, k - 1)


def largest_irrep_dim(n: int) -> tuple[int, int]:
    """(max_k irrep_dim(n, k), argmax k)."""
    best_k = max(range(n // 2 + 1), key=lambda k: irrep_dim(n, k))
    return irrep_dim(n, best_k), best_k


def schur_weyl_check(n: int) -> bool:
    """Completeness: sum_k (n - 2k + 1) * irrep_dim(n, k) == 2^n exactly."""
    total = sum((n - 2 * k + 1) * irrep_dim(n, k) for k in range(n // 2 + 1))
    return total == 1 << n


def scaling_ratio(n: int) -> Fraction:
    """Exact 2^n / irrep_dim(n, n/2): Hilbert space over the spin-0 sector."""
    if n % 2 or not 4 <= n <= 100:
        raise ValueError(f"need even n in [4, 100], got {n}")
    return Fraction(1 << n, irrep_dim(n, n // 2))


def brute_force_sector_dim(n: int, total_spin: float) -> int:
    """Oracle: multiplicity of the S(S+1) eigenvalue of S^2 inside Sz = S.

    Builds the dense S^2 block on the fixed-Hamming-weight basis with
    weight (n - 2S)/2 and counts eigenvalues within 1e-8 of S(S+1).
    """
    if n > BRUTE_FORCE_MAX_SITES:
        raise ValueError(f"brute force capped at n={BRUTE_FORCE_MAX_SITES}")
    two_s = 2 * total_spin
    if round(two_s) != two_s:
        raise ValueError(f"total spin must be a half-integer, got {total_spin}")
    weight2 = n - int(round(two_s))
    if weight2 < 0 or weight2 % 2:
        raise ValueError(f"no Sz={total_spin} sector for n={n}")
    weight = weight2 // 2

    states = [s for s in range(1 << n) if bin(s).count("1") == weight]
    index = {s: row for row, s in enumerate(states)}
    dim = len(states)
    # S^2 = (3n/4 - n(n-1)/4) I + sum_{i<j} SWAP_ij on the sector
    mat = np.zeros((dim, dim))
    constant = 3 * n / 4 - n * (n - 1) / 4
    for s in states:
        row = index[s]
        mat[row, row] += constant
        for i in range(n):
            for j in range(i + 1, n):
                if ((s >> i) & 1) == ((s >> j) & 1):
                    mat[row, row] += 1.0
                else:
                    mat[index[s ^ (1 << i) ^ (1 << j)], row] += 1.0
    eigenvalues = np.linalg.eigvalsh(mat)
    target = total_spin * (total_spin + 1)
    return int(np.sum(np.abs(eigenvalues - target) < 1e-8))
