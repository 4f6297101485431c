"""Circuit builders: exchange-symmetric ansatz, hardware-efficient baseline,
singlet initial states, primitive decomposition, and resource counts.

Circuit qubit k is snake-chain position k (see :func:`sncqa.lattice.snake_ordering`);
Hamiltonians must be relabeled into the same coordinates before evaluation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .lattice import Lattice, snake_ordering
from .simulator import (
    GateOp,
    StateVector,
    apply_1q,
    apply_ctrl,
    zero_state,
    _FIXED_1Q,
)

# target gate alphabet for hardware decompositions
PRIMITIVE_GATES = frozenset({"I", "RZ", "CNOT", "X", "H", "RY", "CY", "CRY", "SX"})

Binding = tuple[int, float]


@dataclass(frozen=True)
class ParamCircuit:
    """Immutable gate list with parameter bindings.

    ``bindings[g]`` is ``(param_index, scale)`` when gate ``g`` takes angle
    ``scale * params[param_index]``, or None for fixed gates.  One parameter
    may be bound to several gates (shared-angle exchange factors).
    """

    n: int
    gates: tuple[GateOp, ...]
    bindings: tuple[Binding | None, ...]
    param_count: int

    def __post_init__(self) -> None:
        if len(self.gates) != len(self.bindings):
            raise ValueError("gates and bindings must have equal length")
        seen = set()
        for gate, binding in zip(self.gates, self.bindings):
            if any(q >= self.n or q < 0 for q in gate.qubits):
                raise ValueError(f"gate {gate} out of range for n={self.n}")
            if binding is not None:
                idx, scale = binding
                if not 0 <= idx < self.param_count:
                    raise ValueError(f"parameter index {idx} out of range")
                if scale == 0.0:
                    raise ValueError("binding scale must be nonzero")
                seen.add(idx)
        if seen != set(range(self.param_count)):
            raise ValueError("every parameter index must be bound to >= 1 gate")


@dataclass(frozen=True)
class YjmElement:
    """Mixer element X_k = sum_{j<k} (j, k) in 1-based chain labels."""

    k: int

    @property
    def transpositions(self) -> tuple[tuple[int, int], ...]:
        return tuple((j, self.k) for j in range(1, self.k))


@dataclass(frozen=True)
class SnCQAConfig:
    layers: int
    yjm_sample_count: int
    trotter_slices: int = 1
    seed: int = 0
    share_matching_params: bool = False

    def __post_init__(self) -> None:
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if self.yjm_sample_count < 1:
            raise ValueError("yjm_sample_count must be >= 1")
        if self.trotter_slices < 1:
            raise ValueError("trotter_slices must be >= 1")


@dataclass(frozen=True)
class PheaConfig:
    layers: int

    def __post_init__(self) -> None:
        if self.layers < 1:
            raise ValueError("layers must be >= 1")


# ---------------------------------------------------------------------------
# initial states


def _singlet_pair(state: StateVector, a: int, b: int) -> None:
    # X(b), H(a), CNOT(a,b), Z(a) turns |00> into (|01> - |10>)/sqrt(2)
    amp, n = state.amplitudes, state.n
    apply_1q(amp, n, b, _FIXED_1Q["X"])
    apply_1q(amp, n, a, _FIXED_1Q["H"])
    apply_ctrl(amp, n, a, b, _FIXED_1Q["X"])
    apply_1q(amp, n, a, _FIXED_1Q["Z"])


def prepare_singlet_init(n: int) -> StateVector:
    """Product of n/2 two-qubit singlets on chain pairs (0,1), (2,3), ...

    The result has total magnetization 0 and total spin 0, and is built by a
    constant-depth sequence of X, H, CNOT, Z per pair.
    """
    if n < 2 or n % 2:
        raise ValueError(f"singlet initialization needs even n >= 2, got {n}")
    state = zero_state(n)
    for a in range(0, n - 1, 2):
        _singlet_pair(state, a, a + 1)
    return state


def prepare_sector_init(n: int, total_spin: float) -> StateVector:
    """(n - 2S)/2 singlet pairs plus 2S trailing spins up: <S^2> = S(S+1), <Sz> = S."""
    two_s = 2.0 * total_spin
    if two_s < 0 or round(two_s) != two_s:
        raise ValueError(f"total spin must be a non-negative half-integer, got {total_spin}")
    paired = n - int(round(two_s))
    if paired < 0 or paired % 2:
        raise ValueError(f"n/2 - S must be a non-negative integer, got n={n}, S={total_spin}")
    state = zero_state(n)
    for a in range(0, paired - 1, 2):
        _singlet_pair(state, a, a + 1)
    return state


# ---------------------------------------------------------------------------
# SnCQA


def chain_matching(n: int, layer: int) -> list[tuple[int, int]]:
    """Disjoint chain pairs for one exchange layer (1-based layer index).

    Odd layers use {(0,1), (2,3), ...}; even layers the complementary
    matching {(1,2), (3,4), ...} closed into a ring with (n-1, 0) when n is
    even, so both parities place floor(n/2) commuting exchange gates.
    """
    if layer % 2 == 1:
        return [(q, q + 1) for q in range(0, n - 1, 2)]
    if n == 2:
        return [(0, 1)]
    pairs = [(q, q + 1) for q in range(1, n - 1, 2)]
    if n % 2 == 0:
        pairs.append((0, n - 1))
    return pairs


def sample_yjm_elements(n: int, m: int, seed: int) -> list[YjmElement]:
    """Draw m mixer indices from {2, ..., n} without replacement, seeded.

    Indices are applied largest-first: the high-k elements couple every
    earlier qubit and carrying them adjacent to the measurement end of the
    layer keeps their parameters active at small initialization scales.
    """
    if not 1 <= m <= n - 1:
        raise ValueError(f"need 1 <= m <= n-1, got m={m}, n={n}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    ks = np.sort(rng.choice(np.arange(2, n + 1), size=m, replace=False))
    return [YjmElement(int(k)) for k in ks[::-1]]


def build_sncqa(lattice: Lattice, config: SnCQAConfig) -> ParamCircuit:
    """Alternating exchange-matching and mixer layers on the snake chain.

    Layer l in 1..p: (a) one exchange gate per :func:`chain_matching` pair,
    a fresh parameter each (or one per symmetry orbit of the underlying
    lattice edge when ``share_matching_params`` is set); (b) for each sampled
    mixer element X_k, one fresh parameter shared across its k-1 exchange
    factors e^{-i beta (j,k)}, j ascending, each factor split into
    ``trotter_slices`` equal slices.

    At the all-zero parameter vector the circuit is the identity.
    """
    n = lattice.n_sites
    if n < 2:
        raise ValueError("need at least 2 sites")
    elements = sample_yjm_elements(n, config.yjm_sample_count, config.seed)
    order = snake_ordering(lattice)
    nn_pairs = {frozenset(e.sites) for e in lattice.nn_edges}

    orbit_key: dict[frozenset[int], object] = {}
    if config.share_matching_params:
        from .lattice import edge_orbits, lattice_symmetry_group

        partition = edge_orbits(lattice, lattice_symmetry_group(lattice), "nn")
        for oid, orbit in enumerate(partition.orbits):
            for edge in orbit:
                orbit_key[frozenset(edge.sites)] = oid

    gates: list[GateOp] = []
    bindings: list[Binding | None] = []
    count = 0
    for layer in range(1, config.layers + 1):
        layer_orbit_param: dict[object, int] = {}
        for a, b in chain_matching(n, layer):
            sites = frozenset((order[a], order[b]))
            if config.share_matching_params and sites in nn_pairs:
                key = orbit_key[sites]
                if key not in layer_orbit_param:
                    layer_orbit_param[key] = count
                    count += 1
                idx = layer_orbit_param[key]
            else:
                idx = count
                count += 1
            gates.append(GateOp("ESWAP", (a, b)))
            bindings.append((idx, 1.0))
        for element in elements:
            idx = count
            count += 1
            scale = 1.0 / config.trotter_slices
            for _ in range(config.trotter_slices):
                for j, k in element.transpositions:
                    gates.append(GateOp("ESWAP", (j - 1, k - 1)))
                    bindings.append((idx, scale))
    return ParamCircuit(n, tuple(gates), tuple(bindings), count)


def sncqa_param_count(n: int, config: SnCQAConfig) -> int:
    """Closed-form parameter count (floor(n/2) + m) * p for fresh-parameter mode."""
    return (n // 2 + config.yjm_sample_count) * config.layers


def build_phea(n: int, config: PheaConfig) -> ParamCircuit:
    """Per layer: RZ, RY, RZ on every qubit (3np parameters) then a CNOT ladder."""
    if n < 2:
        raise ValueError("need at least 2 qubits")
    gates: list[GateOp] = []
    bindings: list[Binding | None] = []
    count = 0
    for _ in range(config.layers):
        for q in range(n):
            for name in ("RZ", "RY", "RZ"):
                gates.append(GateOp(name, (q,)))
                bindings.append((count, 1.0))
                count += 1
        for q in range(n - 1):
            gates.append(GateOp("CNOT", (q, q + 1)))
            bindings.append(None)
    return ParamCircuit(n, tuple(gates), tuple(bindings), count)


# ---------------------------------------------------------------------------
# decomposition and resources


def _eswap_expansion(a: int, b: int) -> list[tuple[GateOp, float]]:
    """Primitive sequence for exp(-i theta SWAP) on (a, b), theta left symbolic.

    Returns (gate, theta_factor) pairs; a zero factor marks a fixed gate.
    The composed unitary equals the exchange gate up to global phase for
    every theta.
    """
    return [
        (GateOp("CNOT", (a, b)), 0.0),
        (GateOp("RZ", (b,)), 1.0),
        (GateOp("RZ", (a,), angle=np.pi / 2), 0.0),
        (GateOp("CRY", (b, a)), 2.0),
        (GateOp("RZ", (a,), angle=-np.pi / 2), 0.0),
        (GateOp("CNOT", (a, b)), 0.0),
    ]


def decompose_to_primitives(circuit: ParamCircuit) -> ParamCircuit:
    """Rewrite every exchange gate into {CNOT, RZ, CRY}; other gates must
    already be primitive.  Parameter count and binding semantics are
    preserved (the CRY angle is twice the exchange angle, so its binding
    scale doubles), so the decomposed circuit evaluates and differentiates
    to the same energies.
    """
    gates: list[GateOp] = []
    bindings: list[Binding | None] = []
    for gate, binding in zip(circuit.gates, circuit.bindings):
        if gate.name == "ESWAP":
            a, b = gate.qubits
            for prim, factor in _eswap_expansion(a, b):
                if factor == 0.0:
                    gates.append(prim)
                    bindings.append(None)
                elif binding is not None:
                    idx, scale = binding
                    gates.append(prim)
                    bindings.append((idx, scale * factor))
                else:
                    gates.append(GateOp(prim.name, prim.qubits, angle=gate.angle * factor))
                    bindings.append(None)
        elif gate.name in PRIMITIVE_GATES:
            gates.append(gate)
            bindings.append(binding)
        else:
            raise ValueError(f"gate {gate.name} has no primitive decomposition")
    return ParamCircuit(circuit.n, tuple(gates), tuple(bindings), circuit.param_count)


@dataclass(frozen=True, eq=False)
class ResourceCounts:
    """Primitive-gate resources; ``eswap_count`` refers to the input circuit."""

    gate_counts: dict[str, int]
    two_qubit_count: int
    depth: int
    eswap_count: int


def count_resources(circuit: ParamCircuit) -> ResourceCounts:
    """Per-primitive counts, two-qubit count, and greedy-layered depth
    after decomposition."""
    eswaps = sum(1 for g in circuit.gates if g.name == "ESWAP")
    primitive = decompose_to_primitives(circuit)
    counts: dict[str, int] = {}
    frontier = [0] * circuit.n
    depth = 0
    two_qubit = 0
    for gate in primitive.gates:
        counts[gate.name] = counts.get(gate.name, 0) + 1
        if len(gate.qubits) == 2:
            two_qubit += 1
        layer = 1 + max(frontier[q] for q in gate.qubits)
        for q in gate.qubits:
            frontier[q] = layer
        depth = max(depth, layer)
    return ResourceCounts(counts, two_qubit, depth, eswaps)


# ---------------------------------------------------------------------------
# serialization (golden-file format: one gate per line)


def serialize_circuit(circuit: ParamCircuit) -> str:
    """One line per gate: ``NAME qubits...`` plus ``p<idx>[*scale]`` for bound
    gates or ``@angle`` for fixed-angle gates."""
    lines = [f"# n={circuit.n} params={circuit.param_count}"]
    for gate, binding in zip(circuit.gates, circuit.bindings):
        parts = [gate.name, *map(str, gate.qubits)]
        if binding is not None:
            idx, scale = binding
            parts.append(f"p{idx}" if scale == 1.0 else f"p{idx}*{scale!r}")
        elif gate.angle is not None:
            parts.append(f"@{gate.angle!r}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


_HEADER_RE = re.compile(r"#\s*n=(\d+)\s+params=(\d+)")


def parse_circuit(text: str) -> ParamCircuit:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    header = _HEADER_RE.match(lines[0]) if lines else None
    if header is None:
        raise ValueError("missing circuit header '# n=... params=...'")
    n, param_count = int(header.group(1)), int(header.group(2))
    gates: list[GateOp] = []
    bindings: list[Binding | None] = []
    for line in lines[1:]:
        tokens = line.split()
        name = tokens[0]
        qubits: list[int] = []
        binding: Binding | None = None
        angle: float | None = None
        for token in tokens[1:]:
            if token.startswith("p"):
                idx_text, _, scale_text = token[1:].partition("*")
                binding = (int(idx_text), float(scale_text) if scale_text else 1.0)
            elif token.startswith("@"):
                angle = float(token[1:])
            else:
                qubits.append(int(token))
        gates.append(GateOp(name, tuple(qubits), angle=angle))
        bindings.append(binding)
    return ParamCircuit(n, tuple(gates), tuple(bindings), param_count)
