"""Heisenberg J1-J2 Hamiltonians in the Pauli convention.

Every term is coefficient * (X_i X_j + Y_i Y_j + Z_i Z_j) on one lattice
edge, with coefficient J1 on NN edges and J2 on NNN edges. States are
little-endian complex amplitude arrays: bit k of a basis index is qubit k.
The workhorse identity is sigma_i . sigma_j = 2*SWAP_ij - I, which turns the
matvec into amplitude transpositions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh
from scipy.sparse import coo_matrix
from scipy.sparse.linalg import eigsh

from .lattice import Edge, Lattice

__all__ = [
    "HeisenbergHamiltonian",
    "GroundTruth",
    "build_hamiltonian",
    "apply_hamiltonian",
    "expectation",
    "exact_ground_energy",
    "total_spin_sq_expectation",
    "total_sz_expectation",
    "convention_sweep",
    "pauli_term_list",
    "sector_basis",
    "sector_matrix",
]

DENSE_SECTOR_LIMIT = 4096
LANCZOS_TOL = 1e-10


@dataclass(frozen=True)
class HeisenbergHamiltonian:
    """Weighted edge list interpreted as sum of coefficient * sigma.sigma terms."""

    n: int
    terms: tuple[tuple[float, Edge], ...]

    def relabeled(self, new_label: list[int]) -> "HeisenbergHamiltonian":
        """Rewrite every edge under the site relabeling site -> new_label[site].

        Used to move a lattice Hamiltonian into snake-chain qubit coordinates,
        where circuit gates address consecutive chain positions.
        """
        terms = []
        for coeff, e in self.terms:
            a, b = new_label[e.a], new_label[e.b]
            terms.append((coeff, Edge(min(a, b), max(a, b), e.kind)))
        return HeisenbergHamiltonian(self.n, tuple(terms))


@dataclass(frozen=True)
class GroundTruth:
    energy: float
    sz_sector: float
    method: str  # "dense" | "lanczos"


def build_hamiltonian(lattice: Lattice, j1: float, j2: float = 0.0) -> HeisenbergHamiltonian:
    """Assemble J1 (NN) and J2 (NNN) terms; zero-coefficient terms are dropped."""
    terms: list[tuple[float, Edge]] = []
    if j1 != 0.0:
        terms += [(j1, e) for e in lattice.nn_edges]
    if j2 != 0.0:
        terms += [(j2, e) for e in lattice.nnn_edges]
    return HeisenbergHamiltonian(lattice.n_sites, tuple(terms))


@lru_cache(maxsize=1024)
def _swap_indices(n: int, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (i01, i10) that a SWAP on qubits i, j exchanges."""
    idx = np.arange(1 << n)
    sel = ((idx >> i) & 1 == 0) & ((idx >> j) & 1 == 1)
    i01 = idx[sel]
    return i01, i01 ^ ((1 << i) | (1 << j))


def _swapped(state: np.ndarray, n: int, i: int, j: int) -> np.ndarray:
    out = state.copy()
    i01, i10 = _swap_indices(n, i, j)
    out[i01] = state[i10]
    out[i10] = state[i01]
    return out


def apply_hamiltonian(H: HeisenbergHamiltonian, state: np.ndarray) -> np.ndarray:
    """Exact H|psi> via sigma.sigma = 2*SWAP - I per edge."""
    if state.shape != (1 << H.n,):
        raise ValueError(f"state dimension {state.shape} != 2^{H.n}")
    out = np.zeros_like(state, dtype=complex)
    for coeff, e in H.terms:
        out += (2.0 * coeff) * _swapped(state, H.n, e.a, e.b)
        out -= coeff * state
    return out


def expectation(H: HeisenbergHamiltonian, state: np.ndarray) -> float:
    """<psi|H|psi> for a normalized state."""
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > 1e-8:
        raise ValueError(f"state norm {norm} deviates from 1 beyond 1e-8")
    val = np.vdot(state, apply_hamiltonian(H, state))
    assert abs(val.imag) < 1e-10
    return float(val.real)


def total_spin_sq_expectation(state: np.ndarray) -> float:
    """<S^2> with S = sum_i sigma_i / 2.

    Uses S^2 = (3n/4) I + (1/2) sum_{i<j} sigma_i.sigma_j, which reduces to a
    constant plus a sum of SWAP expectations.
    """
    n = (state.shape[0] - 1).bit_length()
    val = 3 * n / 4 - n * (n - 1) / 4
    for i in range(n):
        for j in range(i + 1, n):
            val += np.vdot(state, _swapped(state, n, i, j)).real
    return float(val)


def total_sz_expectation(state: np.ndarray) -> float:
    """<Sz> with Sz = sum_i sigma^z_i / 2 = (n - 2 * weight) / 2 per basis state."""
    n = (state.shape[0] - 1).bit_length()
    weights = np.array([bin(s).count("1") for s in range(1 << n)])
    return float(np.abs(state) ** 2 @ (0.5 * (n - 2 * weights)))


def convention_sweep(rows: int, cols: int, j1: float = 1.0,
                     j2: float = 0.0) -> dict[str, float]:
    """Ground energies under the four (coupling form, boundary) conventions.

    Keys: 'pauli-open', 'pauli-periodic', 'spin-open', 'spin-periodic'.
    The spin form uses S_i.S_j = sigma_i.sigma_j / 4; periodic adds the
    wrap-around NN and NNN edges (deduplicated on 2-row/2-col geometries
    where a wrap edge coincides with an existing one).
    """
    n = rows * cols
    results: dict[str, float] = {}
    for boundary in ("open", "periodic"):
        pairs: dict[frozenset[int], str] = {}

        def add(r1: int, c1: int, r2: int, c2: int, kind: str) -> None:
            a = (r1 % rows) * cols + (c1 % cols)
            b = (r2 % rows) * cols + (c2 % cols)
            if a != b:
                pairs.setdefault(frozenset((a, b)), kind)

        for r in range(rows):
            for c in range(cols):
                right = boundary == "periodic" or c + 1 < cols
                down = boundary == "periodic" or r + 1 < rows
                if right:
                    add(r, c, r, c + 1, "nn")
                if down:
                    add(r, c, r + 1, c, "nn")
                if right and down:
                    add(r, c, r + 1, c + 1, "nnn")
                    add(r, c + 1, r + 1, c, "nnn")
        terms = tuple(
            (j1 if kind == "nn" else j2, Edge(min(sites), max(sites), kind))
            for sites, kind in sorted(pairs.items(), key=lambda kv: sorted(kv[0]))
            if (j1 if kind == "nn" else j2) != 0.0
        )
        energy = exact_ground_energy(HeisenbergHamiltonian(n, terms)).energy
        results[f"pauli-{boundary}"] = energy
        results[f"spin-{boundary}"] = energy / 4.0
    return results


def pauli_term_list(H: HeisenbergHamiltonian) -> list[tuple[float, tuple[int, int], str]]:
    """Expand each edge term into its three Pauli factors (for measurement grouping)."""
    out = []
    for coeff, e in H.terms:
        for axis in "XYZ":
            out.append((coeff, (e.a, e.b), axis))
    return out


def sector_basis(n: int, weight: int) -> list[int]:
    """Computational basis indices with the given Hamming weight, ascending."""
    return [s for s in range(1 << n) if bin(s).count("1") == weight]


def sector_matrix(H: HeisenbergHamiltonian, weight: int, sparse: bool = False):
    """Sector-restricted matrix in the fixed-Hamming-weight basis.

    Diagonal picks +coeff for equal bits and -coeff for unequal bits on each
    edge; unequal bits additionally couple to the bit-swapped state with 2*coeff.
    """
    states = sector_basis(H.n, weight)
    index = {s: k for k, s in enumerate(states)}
    dim = len(states)
    if sparse:
        rows, cols, vals = [], [], []

        def add(r, c, v):
            rows.append(r)
            cols.append(c)
            vals.append(v)
    else:
        M = np.zeros((dim, dim))

        def add(r, c, v):
            M[r, c] += v

    for s in states:
        k = index[s]
        for coeff, e in H.terms:
            if ((s >> e.a) & 1) == ((s >> e.b) & 1):
                add(k, k, coeff)
            else:
                add(k, k, -coeff)
                add(index[s ^ (1 << e.a) ^ (1 << e.b)], k, 2 * coeff)
    if sparse:
        return coo_matrix((vals, (rows, cols)), shape=(dim, dim)).tocsr()
    return M


def _sector_min_eigenvalue(H: HeisenbergHamiltonian, weight: int) -> tuple[float, str]:
    dim = math.comb(H.n, weight)
    if dim == 1:
        # single basis state: energy is the diagonal element
        M = sector_matrix(H, weight)
        return float(M[0, 0]), "dense"
    if dim <= DENSE_SECTOR_LIMIT:
        M = sector_matrix(H, weight)
        val = eigh(M, eigvals_only=True, subset_by_index=[0, 0])[0]
        return float(val), "dense"
    M = sector_matrix(H, weight, sparse=True)
    # deterministic generic start vector: the uniform vector lies in the
    # maximal-spin irrep and would never leave it under Krylov iteration
    v0 = np.random.Generator(np.random.Philox(key=0x5EC7)).standard_normal(dim)
    val = eigsh(M, k=1, which="SA", v0=v0, tol=LANCZOS_TOL,
                maxiter=50 * dim, return_eigenvectors=False)[0]
    return float(val), "lanczos"


def exact_ground_energy(H: HeisenbergHamiltonian) -> GroundTruth:
    """Global ground energy: minimum over all fixed-Sz sector ground energies.

    Sectors with mirrored Hamming weight share a spectrum (global spin flip
    commutes with H), so each pair is solved once. Ties prefer the sector
    with the smallest |Sz|, then the non-negative one.
    """
    if H.n > 16:
        raise ValueError("exact diagonalization is capped at 16 qubits")
    results: dict[int, tuple[float, str]] = {}
    for w in range(H.n + 1):
        if H.n - w in results:
            results[w] = results[H.n - w]
        else:
            results[w] = _sector_min_eigenvalue(H, w)

    def sort_key(w: int):
        energy, _ = results[w]
        sz = (H.n - 2 * w) / 2
        return (energy, abs(sz), -sz)

    best = min(range(H.n + 1), key=sort_key)
    energy, method = results[best]
    return GroundTruth(energy=energy, sz_sector=(H.n - 2 * best) / 2, method=method)
