"""Shared test helpers: finite-difference gradient oracle and lattice shortcuts."""

from __future__ import annotations

import numpy as np
from hypothesis import settings

from sncqa.hamiltonian import HeisenbergHamiltonian, expectation
from sncqa.simulator import StateVector, evaluate_circuit

settings.register_profile("suite", deadline=None, max_examples=25)
settings.load_profile("suite")


def circuit_energy(circuit, params, H: HeisenbergHamiltonian,
                   init_state: StateVector) -> float:
    return expectation(H, evaluate_circuit(circuit, params, init_state).amplitudes)


def finite_difference(circuit, params, H: HeisenbergHamiltonian,
                      init_state: StateVector, step: float = 1e-5) -> np.ndarray:
    """Central finite differences of the exact energy."""
    grad = np.zeros(len(params))
    for k in range(len(params)):
        plus = np.array(params, dtype=float)
        minus = plus.copy()
        plus[k] += step
        minus[k] -= step
        grad[k] = (circuit_energy(circuit, plus, H, init_state)
                   - circuit_energy(circuit, minus, H, init_state)) / (2 * step)
    return grad
