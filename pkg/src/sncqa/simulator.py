"""Statevector simulator: gate kernels, sampling, and gradients.

Conventions (stated once, asserted in tests):
  * little-endian basis indexing: bit k of a basis index is qubit k;
  * single-qubit rotations are exp(-i theta sigma / 2);
  * the exchange gate ESWAP is exp(-i theta SWAP) with no 1/2, so one
    parameter unit equals one unit of exchange angle.

All kernels mutate amplitude arrays in place and preserve the norm to
machine precision.  Circuits are consumed duck-typed: anything with
``n``, ``gates``, ``bindings`` and ``param_count`` attributes works
(see :mod:`sncqa.ansatz` for the concrete dataclass).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hamiltonian import HeisenbergHamiltonian, apply_hamiltonian, expectation

_SQ2 = 1.0 / np.sqrt(2.0)

_FIXED_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "SDG": np.array([[1, 0], [0, -1j]], dtype=complex),
    "SX": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
}

# controlled gates: name -> matrix applied to the target when the control is set
_FIXED_CTRL = {
    "CNOT": _FIXED_1Q["X"],
    "CY": _FIXED_1Q["Y"],
    "CZ": _FIXED_1Q["Z"],
}

_PAULI = {"RX": _FIXED_1Q["X"], "RY": _FIXED_1Q["Y"], "RZ": _FIXED_1Q["Z"]}

ROTATION_GATES = frozenset(_PAULI)
PARAMETRIC_GATES = ROTATION_GATES | {"ESWAP", "CRY"}
GATE_NAMES = frozenset(_FIXED_1Q) | frozenset(_FIXED_CTRL) | PARAMETRIC_GATES


@dataclass(frozen=True)
class GateOp:
    """One circuit element.

    ``angle`` carries a fixed rotation angle (decompositions emit those);
    parameter-bound gates leave it None and take their angle from the
    binding at evaluation time.
    """

    name: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        if self.name not in GATE_NAMES:
            raise ValueError(f"unknown gate {self.name!r}")
        want = 2 if self.name in ("ESWAP", "CNOT", "CY", "CZ", "CRY") else 1
        if len(self.qubits) != want:
            raise ValueError(f"{self.name} takes {want} qubit(s), got {self.qubits}")
        if want == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"{self.name} qubits must differ, got {self.qubits}")


@dataclass
class StateVector:
    """2^n complex amplitudes; bit k of the basis index is qubit k."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.amplitudes.shape != (1 << self.n,):
            raise ValueError(
                f"expected {1 << self.n} amplitudes, got {self.amplitudes.shape}"
            )
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=complex)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def zero_state(n: int) -> StateVector:
    amp = np.zeros(1 << n, dtype=complex)
    amp[0] = 1.0
    return StateVector(n, amp)


class RngStream:
    """Counter-based deterministic random stream.

    Philox keyed by the seed: the same seed reproduces the same sample
    sequence on every platform, and independent seeds give independent
    streams without any shared state.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.generator = np.random.Generator(np.random.Philox(key=self.seed))

    def derive(self, offset: int) -> "RngStream":
        """Independent child stream; used to fan one config seed out to trials."""
        return RngStream((self.seed << 20) ^ offset)


# ---------------------------------------------------------------------------
# kernels


@lru_cache(maxsize=4096)
def _1q_indices(n: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(1 << n)
    i0 = idx[(idx >> q) & 1 == 0]
    return i0, i0 + (1 << q)


@lru_cache(maxsize=4096)
def _ctrl_indices(n: int, c: int, t: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(1 << n)
    i0 = idx[(((idx >> c) & 1) == 1) & (((idx >> t) & 1) == 0)]
    return i0, i0 + (1 << t)


@lru_cache(maxsize=4096)
def _pair_indices(n: int, i: int, j: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    idx = np.arange(1 << n)
    bi, bj = (idx >> i) & 1, (idx >> j) & 1
    eq = idx[bi == bj]
    i01 = idx[(bi == 0) & (bj == 1)]
    return eq, i01, i01 ^ (1 << i) ^ (1 << j)


def _apply_2x2(amp: np.ndarray, i0: np.ndarray, i1: np.ndarray, U: np.ndarray) -> None:
    a, b = amp[i0], amp[i1]
    amp[i0] = U[0, 0] * a + U[0, 1] * b
    amp[i1] = U[1, 0] * a + U[1, 1] * b


def apply_1q(amp: np.ndarray, n: int, q: int, U: np.ndarray) -> None:
    if not 0 <= q < n:
        raise IndexError(f"qubit {q} out of range for n={n}")
    i0, i1 = _1q_indices(n, q)
    _apply_2x2(amp, i0, i1, U)


def apply_ctrl(amp: np.ndarray, n: int, c: int, t: int, U: np.ndarray) -> None:
    if not (0 <= c < n and 0 <= t < n) or c == t:
        raise IndexError(f"bad control/target ({c}, {t}) for n={n}")
    i0, i1 = _ctrl_indices(n, c, t)
    _apply_2x2(amp, i0, i1, U)


def apply_eswap_raw(amp: np.ndarray, n: int, i: int, j: int, theta: float) -> None:
    """exp(-i theta SWAP): equal bits pick up e^{-i theta}, unequal bits mix."""
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise IndexError(f"bad qubit pair ({i}, {j}) for n={n}")
    eq, i01, i10 = _pair_indices(n, i, j)
    c, s = np.cos(theta), np.sin(theta)
    amp[eq] *= complex(c, -s)
    a, b = amp[i01], amp[i10]
    amp[i01] = c * a - 1j * s * b
    amp[i10] = -1j * s * a + c * b


def apply_eswap(state: StateVector, i: int, j: int, theta: float) -> StateVector:
    apply_eswap_raw(state.amplitudes, state.n, i, j, theta)
    return state


def _rotation(name: str, theta: float) -> np.ndarray:
    half = 0.5 * theta
    if name == "RZ":
        return np.array([[np.exp(-1j * half), 0], [0, np.exp(1j * half)]])
    c, s = np.cos(half), np.sin(half)
    if name == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if name == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]])
    raise ValueError(f"not a rotation gate: {name}")


def _apply_named(amp: np.ndarray, n: int, gate: GateOp, theta: float | None) -> None:
    name, qs = gate.name, gate.qubits
    if name == "ESWAP":
        apply_eswap_raw(amp, n, qs[0], qs[1], theta)
    elif name in ROTATION_GATES:
        apply_1q(amp, n, qs[0], _rotation(name, theta))
    elif name == "CRY":
        apply_ctrl(amp, n, qs[0], qs[1], _rotation("RY", theta))
    elif name in _FIXED_1Q:
        apply_1q(amp, n, qs[0], _FIXED_1Q[name])
    elif name in _FIXED_CTRL:
        apply_ctrl(amp, n, qs[0], qs[1], _FIXED_CTRL[name])
    else:  # pragma: no cover - GateOp validates names
        raise ValueError(f"unknown gate {name!r}")


def apply_gate(state: StateVector, gate: GateOp, theta: float | None = None) -> StateVector:
    """Apply one gate in place.  ``theta`` overrides ``gate.angle`` if given."""
    angle = theta if theta is not None else gate.angle
    if gate.name in PARAMETRIC_GATES and angle is None:
        raise ValueError(f"{gate.name} needs an angle")
    _apply_named(state.amplitudes, state.n, gate, angle)
    return state


# ---------------------------------------------------------------------------
# circuit evaluation


def _resolved_angle(gate, binding, params, override=None) -> float | None:
    if override is not None:
        return override
    if binding is not None:
        idx, scale = binding
        return float(params[idx]) * scale
    return gate.angle


def _run(circuit, params: np.ndarray, amp: np.ndarray,
         overrides: dict[int, float] | None = None) -> None:
    for pos, (gate, binding) in enumerate(zip(circuit.gates, circuit.bindings)):
        theta = _resolved_angle(
            gate, binding, params,
            overrides.get(pos) if overrides else None,
        )
        if gate.name in PARAMETRIC_GATES and theta is None:
            raise ValueError(f"gate {pos} ({gate.name}) has no angle and no binding")
        _apply_named(amp, circuit.n, gate, theta)


def evaluate_circuit(circuit, params, init_state: StateVector) -> StateVector:
    """Run ``circuit`` on a copy of ``init_state`` with the given parameters."""
    params = np.asarray(params, dtype=float)
    if params.shape != (circuit.param_count,):
        raise ValueError(
            f"expected {circuit.param_count} parameters, got shape {params.shape}"
        )
    out = init_state.copy()
    _run(circuit, params, out.amplitudes)
    return out


def circuit_energy(circuit, params, H: HeisenbergHamiltonian,
                   init_state: StateVector) -> float:
    return expectation(H, evaluate_circuit(circuit, params, init_state).amplitudes)


# ---------------------------------------------------------------------------
# gradients


def _generator_times(amp: np.ndarray, n: int, gate: GateOp) -> np.ndarray:
    """Return (generator of gate) |amp> for the gate's angle parameterization."""
    name, qs = gate.name, gate.qubits
    if name == "ESWAP":
        # generator SWAP
        out = amp.copy()
        _, i01, i10 = _pair_indices(n, qs[0], qs[1])
        out[i01], out[i10] = amp[i10], amp[i01]
        return out
    if name in ROTATION_GATES:
        out = amp.copy()
        apply_1q(out, n, qs[0], 0.5 * _PAULI[name])
        return out
    if name == "CRY":
        # generator |1><1| (x) Y/2: zero outside the control-set block
        out = np.zeros_like(amp)
        i0, i1 = _ctrl_indices(n, qs[0], qs[1])
        half_y = 0.5 * _FIXED_1Q["Y"]
        out[i0] = half_y[0, 1] * amp[i1]
        out[i1] = half_y[1, 0] * amp[i0]
        return out
    raise ValueError(f"gate {name} is not differentiable")


def _unapply(amp: np.ndarray, n: int, gate: GateOp, theta: float | None) -> None:
    name = gate.name
    if name in PARAMETRIC_GATES:
        _apply_named(amp, n, gate, -theta)
    elif name == "S":
        apply_1q(amp, n, gate.qubits[0], _FIXED_1Q["SDG"])
    elif name == "SDG":
        apply_1q(amp, n, gate.qubits[0], _FIXED_1Q["S"])
    elif name == "SX":
        apply_1q(amp, n, gate.qubits[0], _FIXED_1Q["SX"].conj().T)
    else:
        # remaining fixed gates are involutions
        _apply_named(amp, n, gate, None)


def energy_and_gradient(circuit, params, H: HeisenbergHamiltonian,
                        init_state: StateVector) -> tuple[float, np.ndarray]:
    """Exact energy and d<H>/d(params) in one forward plus one reverse sweep.

    Adjoint method: after the forward pass, walk the circuit backwards
    keeping |ket> = U_{1..k}|init> and |bra> = U_{k+1..L}^dag H U|init>;
    each bound gate contributes 2 * scale * Im(<bra| G |ket>) to its
    parameter, with G the gate generator.  Parameters bound to several
    gates accumulate all their contributions.
    """
    params = np.asarray(params, dtype=float)
    ket = evaluate_circuit(circuit, params, init_state).amplitudes
    bra = apply_hamiltonian(H, ket)
    energy = float(np.vdot(ket, bra).real)
    grad = np.zeros(circuit.param_count)
    for gate, binding in zip(reversed(circuit.gates), reversed(circuit.bindings)):
        theta = _resolved_angle(gate, binding, params)
        if binding is not None:
            idx, scale = binding
            grad[idx] += 2.0 * scale * float(np.vdot(bra, _generator_times(ket, circuit.n, gate)).imag)
        _unapply(ket, circuit.n, gate, theta)
        _unapply(bra, circuit.n, gate, theta)
    return energy, grad


def adjoint_gradient(circuit, params, H: HeisenbergHamiltonian,
                     init_state: StateVector) -> np.ndarray:
    """Exact gradient of the energy with respect to every circuit parameter."""
    return energy_and_gradient(circuit, params, H, init_state)[1]


# shift rules: gate angle offset and prefactor for [E(+s) - E(-s)]
_SHIFT_RULES = {"ESWAP": (np.pi / 4, 1.0), "RX": (np.pi / 2, 0.5),
                "RY": (np.pi / 2, 0.5), "RZ": (np.pi / 2, 0.5)}


def parameter_shift_gradient(circuit, params, H: HeisenbergHamiltonian,
                             init_state: StateVector, shots: int | None = None,
                             rng: RngStream | None = None) -> np.ndarray:
    """Gradient from per-gate angle shifts.

    Each gate bound to a parameter contributes
    ``scale * prefactor * (E(theta_g + s) - E(theta_g - s))`` where
    (s, prefactor) is (pi/4, 1) for ESWAP and (pi/2, 1/2) for rotations;
    only the one gate's angle is shifted even when the parameter is shared.
    With ``shots`` set, energies come from :func:`sampled_energy`;
    otherwise exact expectations are used and the result matches
    :func:`adjoint_gradient` to numerical precision.
    """
    params = np.asarray(params, dtype=float)
    if shots is not None and rng is None:
        raise ValueError("shots-based gradient needs an RngStream")

    def estimate(overrides: dict[int, float]) -> float:
        out = init_state.copy()
        _run(circuit, params, out.amplitudes, overrides)
        if shots is None:
            return expectation(H, out.amplitudes)
        return sampled_energy(H, out, shots, rng)

    grad = np.zeros(circuit.param_count)
    for pos, (gate, binding) in enumerate(zip(circuit.gates, circuit.bindings)):
        if binding is None:
            continue
        if gate.name not in _SHIFT_RULES:
            raise ValueError(f"no shift rule for gate {gate.name}")
        shift, prefactor = _SHIFT_RULES[gate.name]
        idx, scale = binding
        theta = float(params[idx]) * scale
        plus = estimate({pos: theta + shift})
        minus = estimate({pos: theta - shift})
        grad[idx] += scale * prefactor * (plus - minus)
    return grad


# ---------------------------------------------------------------------------
# sampling

_BASIS_ROTATIONS = {"Z": None, "X": "H", "Y": "SDG_H"}


def _measurement_frame(state: StateVector, basis: str) -> np.ndarray:
    """Copy of the amplitudes rotated so a Z measurement reads out ``basis``."""
    if basis not in _BASIS_ROTATIONS:
        raise ValueError(f"basis must be X, Y or Z, got {basis!r}")
    amp = state.amplitudes.copy()
    if basis == "Z":
        return amp
    for q in range(state.n):
        if basis == "Y":
            apply_1q(amp, state.n, q, _FIXED_1Q["SDG"])
        apply_1q(amp, state.n, q, _FIXED_1Q["H"])
    return amp


def _draw_indices(amp: np.ndarray, shots: int, rng: RngStream) -> np.ndarray:
    """Inverse-CDF sampling of basis indices from |amp|^2."""
    cdf = np.cumsum(np.abs(amp) ** 2)
    cdf /= cdf[-1]
    u = rng.generator.random(shots)
    return np.searchsorted(cdf, u, side="right")


def sample_bitstrings(state: StateVector, basis: str, shots: int,
                      rng: RngStream) -> dict[str, int]:
    """Measure every qubit in ``basis``; keys are bitstrings with char k = qubit k."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    amp = _measurement_frame(state, basis)
    idx = _draw_indices(amp, shots, rng)
    values, counts = np.unique(idx, return_counts=True)
    width = state.n
    return {format(v, f"0{width}b")[::-1]: int(c) for v, c in zip(values, counts)}


def sampled_energy(H: HeisenbergHamiltonian, state: StateVector, shots: int,
                   rng: RngStream) -> float:
    """Shot-noise energy estimate from three settings (all-X, all-Y, all-Z).

    ``shots`` samples are drawn per setting (3 * shots total).  Each
    exchange term contributes coeff * mean((-1)^(bit_i xor bit_j)) in
    each of the three settings.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if state.n != H.n:
        raise ValueError(f"state has {state.n} qubits, Hamiltonian {H.n}")
    total = 0.0
    for basis in ("X", "Y", "Z"):
        amp = _measurement_frame(state, basis)
        idx = _draw_indices(amp, shots, rng)
        for coeff, edge in H.terms:
            parity = ((idx >> edge.a) ^ (idx >> edge.b)) & 1
            total += coeff * (1.0 - 2.0 * float(parity.mean()))
    return total
