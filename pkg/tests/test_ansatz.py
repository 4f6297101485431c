"""Circuit builders, initial states, decomposition, resources, serialization."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sncqa.ansatz import (
    ParamCircuit,
    PheaConfig,
    SnCQAConfig,
    YjmElement,
    build_phea,
    build_sncqa,
    chain_matching,
    count_resources,
    decompose_to_primitives,
    parse_circuit,
    prepare_sector_init,
    prepare_singlet_init,
    sample_yjm_elements,
    serialize_circuit,
    sncqa_param_count,
)
from sncqa.hamiltonian import (
    total_spin_sq_expectation,
    total_sz_expectation,
)
from sncqa.lattice import LatticeSpec, build_lattice
from sncqa.simulator import (
    GateOp,
    StateVector,
    adjoint_gradient,
    apply_eswap,
    evaluate_circuit,
    zero_state,
)
from sncqa.vqe import chain_hamiltonian


def _lattice(rows, cols):
    return build_lattice(LatticeSpec(rows, cols))


# ---------------------------------------------------------------------------
# parameter counting


@pytest.mark.parametrize("rows,cols,layers,m,expected", [
    (2, 2, 1, 3, 5),
    (2, 3, 3, 5, 24),
    (2, 4, 4, 7, 44),
    (3, 4, 10, 2, 80),
])
def test_sncqa_parameter_counts(rows, cols, layers, m, expected):
    lat = _lattice(rows, cols)
    config = SnCQAConfig(layers=layers, yjm_sample_count=m)
    circ = build_sncqa(lat, config)
    assert circ.param_count == expected
    assert sncqa_param_count(lat.n_sites, config) == expected


@pytest.mark.parametrize("n,layers,expected", [
    (4, 4, 48),
    (6, 10, 180),
    (8, 20, 480),
    (12, 40, 1440),
])
def test_phea_parameter_counts(n, layers, expected):
    assert build_phea(n, PheaConfig(layers)).param_count == expected


def test_shared_matching_mode_reduces_parameters():
    lat = _lattice(2, 3)
    fresh = build_sncqa(lat, SnCQAConfig(layers=2, yjm_sample_count=1))
    shared = build_sncqa(lat, SnCQAConfig(layers=2, yjm_sample_count=1,
                                          share_matching_params=True))
    assert fresh.param_count == 8
    # each layer: 3 matching gates collapse onto 2 edge orbits, plus 1 mixer
    assert shared.param_count == 6


# ---------------------------------------------------------------------------
# matchings and mixer sampling


def test_chain_matching_parities():
    assert chain_matching(6, 1) == [(0, 1), (2, 3), (4, 5)]
    assert chain_matching(6, 2) == [(1, 2), (3, 4), (0, 5)]
    assert chain_matching(8, 3) == [(0, 1), (2, 3), (4, 5), (6, 7)]
    assert chain_matching(8, 2) == [(1, 2), (3, 4), (5, 6), (0, 7)]
    assert chain_matching(2, 2) == [(0, 1)]
    assert chain_matching(5, 1) == [(0, 1), (2, 3)]
    assert chain_matching(5, 2) == [(1, 2), (3, 4)]


@given(n=st.integers(2, 16), layer=st.integers(1, 6))
def test_chain_matching_is_disjoint_and_full_size(n, layer):
    pairs = chain_matching(n, layer)
    used = [q for pair in pairs for q in pair]
    assert len(used) == len(set(used))
    assert all(0 <= q < n for q in used)
    if n % 2 == 0:
        assert len(pairs) == n // 2


def test_yjm_transpositions():
    assert YjmElement(4).transpositions == ((1, 4), (2, 4), (3, 4))
    assert YjmElement(2).transpositions == ((1, 2),)


def test_yjm_sampling_range_and_descending_order():
    for seed in range(5):
        ks = [e.k for e in sample_yjm_elements(8, 4, seed)]
        assert len(set(ks)) == 4
        assert all(2 <= k <= 8 for k in ks)
        assert ks == sorted(ks, reverse=True)


def test_yjm_sampling_is_seeded_and_seed_sensitive():
    a = [e.k for e in sample_yjm_elements(12, 3, 0)]
    b = [e.k for e in sample_yjm_elements(12, 3, 0)]
    c = [e.k for e in sample_yjm_elements(12, 3, 1)]
    assert a == b
    assert a != c


def test_yjm_sampling_exhaustive_when_m_is_n_minus_1():
    ks = [e.k for e in sample_yjm_elements(6, 5, 3)]
    assert ks == [6, 5, 4, 3, 2]


def test_yjm_sampling_validation():
    with pytest.raises(ValueError):
        sample_yjm_elements(6, 0, 0)
    with pytest.raises(ValueError):
        sample_yjm_elements(6, 6, 0)


# ---------------------------------------------------------------------------
# initial states


def test_singlet_pair_amplitudes():
    state = prepare_singlet_init(2)
    s = 1 / math.sqrt(2)
    assert np.allclose(state.amplitudes, [0, -s, s, 0], atol=1e-15)


def test_singlet_init_spin_quantum_numbers():
    for n in (2, 4, 6, 8):
        state = prepare_singlet_init(n)
        assert abs(state.norm() - 1.0) < 1e-14
        assert total_spin_sq_expectation(state.amplitudes) == pytest.approx(0.0, abs=1e-12)
        assert total_sz_expectation(state.amplitudes) == pytest.approx(0.0, abs=1e-12)


def test_singlet_init_validation():
    with pytest.raises(ValueError):
        prepare_singlet_init(3)
    with pytest.raises(ValueError):
        prepare_singlet_init(0)


def test_sector_init_quantum_numbers():
    for n, spin in [(3, 0.5), (4, 1.0), (6, 0.0), (5, 1.5)]:
        state = prepare_sector_init(n, spin)
        assert total_spin_sq_expectation(state.amplitudes) == pytest.approx(
            spin * (spin + 1), abs=1e-12)
        assert total_sz_expectation(state.amplitudes) == pytest.approx(spin, abs=1e-12)


def test_sector_init_validation():
    with pytest.raises(ValueError):
        prepare_sector_init(4, -0.5)
    with pytest.raises(ValueError):
        prepare_sector_init(4, 0.3)
    with pytest.raises(ValueError):
        prepare_sector_init(3, 0.0)  # would need 1.5 pairs


# ---------------------------------------------------------------------------
# circuit structure


def test_sncqa_uses_only_exchange_gates_with_full_bindings():
    circ = build_sncqa(_lattice(2, 3), SnCQAConfig(layers=2, yjm_sample_count=3))
    assert all(g.name == "ESWAP" for g in circ.gates)
    assert all(b is not None for b in circ.bindings)


def test_sncqa_identity_at_zero_parameters():
    for rows, cols in [(2, 2), (2, 3), (2, 4)]:
        lat = _lattice(rows, cols)
        circ = build_sncqa(lat, SnCQAConfig(layers=2, yjm_sample_count=2))
        init = prepare_singlet_init(lat.n_sites)
        out = evaluate_circuit(circ, np.zeros(circ.param_count), init)
        assert np.allclose(out.amplitudes, init.amplitudes, atol=1e-14)


def test_sncqa_mixer_factors_share_one_parameter_per_layer():
    # n=4, m=1, seed chosen so the sampled element is k=4: factors (0,3),(1,3),(2,3)
    lat = _lattice(2, 2)
    seed = next(s for s in range(50)
                if [e.k for e in sample_yjm_elements(4, 1, s)] == [4])
    circ = build_sncqa(lat, SnCQAConfig(layers=1, yjm_sample_count=1, seed=seed))
    mixer = [(g, b) for g, b in zip(circ.gates, circ.bindings)][2:]
    assert [g.qubits for g, _ in mixer] == [(0, 3), (1, 3), (2, 3)]
    indices = {b[0] for _, b in mixer}
    assert indices == {2}  # one fresh parameter after the 2 matching gates
    assert all(b[1] == 1.0 for _, b in mixer)


def test_sncqa_trotter_slices_split_mixer_factors():
    lat = _lattice(2, 2)
    base = build_sncqa(lat, SnCQAConfig(layers=1, yjm_sample_count=2, seed=1))
    split = build_sncqa(lat, SnCQAConfig(layers=1, yjm_sample_count=2, seed=1,
                                         trotter_slices=3))
    base_mixer = base.bindings[2:]
    split_mixer = split.bindings[2:]
    assert len(split_mixer) == 3 * len(base_mixer)
    assert all(b[1] == pytest.approx(1 / 3) for b in split_mixer)
    assert split.param_count == base.param_count


def _swap_matrix(n, i, j):
    dim = 1 << n
    M = np.zeros((dim, dim))
    for s in range(dim):
        bi, bj = (s >> i) & 1, (s >> j) & 1
        t = s if bi == bj else s ^ (1 << i) ^ (1 << j)
        M[t, s] = 1.0
    return M


def test_trotter_slices_converge_to_summed_generator():
    # isolate one mixer element with k=4 so its factors do not commute
    from scipy.linalg import expm

    lat = _lattice(2, 2)
    seed = next(s for s in range(50)
                if [e.k for e in sample_yjm_elements(4, 1, s)] == [4])
    beta = 0.9
    generator = sum(_swap_matrix(4, j, 3) for j in range(3))
    init = prepare_singlet_init(4)
    target = expm(-1j * beta * generator) @ init.amplitudes

    def trotter_error(slices):
        circ = build_sncqa(lat, SnCQAConfig(layers=1, yjm_sample_count=1,
                                            seed=seed, trotter_slices=slices))
        params = np.zeros(circ.param_count)
        params[2] = beta  # matching angles stay zero, only the mixer acts
        out = evaluate_circuit(circ, params, init)
        return np.linalg.norm(out.amplitudes - target)

    errors = [trotter_error(s) for s in (1, 4, 16)]
    assert errors[0] > errors[1] > errors[2]
    # first-order product formula: error decays like 1/slices
    assert errors[2] < errors[0] / 10
    assert errors[2] < 0.05


def test_sncqa_same_config_builds_identical_circuit():
    lat = _lattice(2, 4)
    config = SnCQAConfig(layers=3, yjm_sample_count=4, seed=9)
    assert build_sncqa(lat, config) == build_sncqa(lat, config)


def test_sncqa_preserves_spin_sector():
    lat = _lattice(2, 3)
    circ = build_sncqa(lat, SnCQAConfig(layers=2, yjm_sample_count=3, seed=2))
    init = prepare_singlet_init(6)
    rng = np.random.default_rng(0)
    for _ in range(10):
        params = rng.uniform(-math.pi, math.pi, circ.param_count)
        out = evaluate_circuit(circ, params, init)
        assert abs(out.norm() - 1.0) < 1e-12
        assert abs(total_spin_sq_expectation(out.amplitudes)) < 1e-10
        assert abs(total_sz_expectation(out.amplitudes)) < 1e-10


def test_phea_layer_structure():
    n, p = 4, 2
    circ = build_phea(n, PheaConfig(p))
    per_layer = 3 * n + (n - 1)
    assert len(circ.gates) == p * per_layer
    first = circ.gates[:per_layer]
    assert [g.name for g in first[:12]] == ["RZ", "RY", "RZ"] * 4
    assert [g.name for g in first[12:]] == ["CNOT"] * 3
    assert [g.qubits for g in first[12:]] == [(0, 1), (1, 2), (2, 3)]
    bound = [b for b in circ.bindings if b is not None]
    assert len(bound) == 3 * n * p
    assert len({b[0] for b in bound}) == 3 * n * p  # no sharing


def test_phea_breaks_spin_symmetry_generically():
    # the hardware-efficient ladder explores the full Hilbert space: a random
    # parameter point leaves the singlet sector
    circ = build_phea(4, PheaConfig(2))
    params = np.random.default_rng(1).uniform(-math.pi, math.pi, circ.param_count)
    out = evaluate_circuit(circ, params, prepare_singlet_init(4))
    assert abs(total_spin_sq_expectation(out.amplitudes)) > 1e-3


def test_builder_validation():
    with pytest.raises(ValueError):
        SnCQAConfig(layers=0, yjm_sample_count=1)
    with pytest.raises(ValueError):
        SnCQAConfig(layers=1, yjm_sample_count=0)
    with pytest.raises(ValueError):
        SnCQAConfig(layers=1, yjm_sample_count=1, trotter_slices=0)
    with pytest.raises(ValueError):
        PheaConfig(0)
    with pytest.raises(ValueError):
        build_sncqa(_lattice(2, 2), SnCQAConfig(layers=1, yjm_sample_count=4))


def test_param_circuit_validation():
    g = GateOp("RY", (0,))
    with pytest.raises(ValueError):
        ParamCircuit(1, (g,), (), 0)  # length mismatch
    with pytest.raises(ValueError):
        ParamCircuit(1, (g,), ((0, 0.0),), 1)  # zero scale
    with pytest.raises(ValueError):
        ParamCircuit(1, (g,), ((1, 1.0),), 1)  # index out of range
    with pytest.raises(ValueError):
        ParamCircuit(1, (g,), ((0, 1.0),), 2)  # unbound parameter
    with pytest.raises(ValueError):
        ParamCircuit(1, (GateOp("RY", (1,)),), ((0, 1.0),), 1)  # qubit range


# ---------------------------------------------------------------------------
# decomposition


def _gate_unitary(gates_and_angles, n=2):
    dim = 1 << n
    U = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        amp = np.zeros(dim, dtype=complex)
        amp[k] = 1.0
        state = StateVector(n, amp)
        for gate, theta in gates_and_angles:
            from sncqa.simulator import apply_gate
            apply_gate(state, gate, theta)
        U[:, k] = state.amplitudes
    return U


def test_eswap_decomposition_matches_unitary_up_to_phase():
    circ = ParamCircuit(2, (GateOp("ESWAP", (0, 1)),), ((0, 1.0),), 1)
    primitive = decompose_to_primitives(circ)
    rng = np.random.default_rng(7)
    for theta in rng.uniform(-2 * math.pi, 2 * math.pi, 100):
        target = _gate_unitary([(GateOp("ESWAP", (0, 1)), float(theta))])
        got = _gate_unitary([
            (g, float(theta) * b[1] if b is not None else None)
            for g, b in zip(primitive.gates, primitive.bindings)
        ])
        # strip the global phase before comparing
        k = np.argmax(np.abs(target))
        phase = got.flat[k] / target.flat[k]
        assert abs(abs(phase) - 1.0) < 1e-12
        assert np.max(np.abs(got - phase * target)) < 1e-10


def test_decomposed_circuit_preserves_energy_and_gradient():
    lat = _lattice(2, 2)
    circ = build_sncqa(lat, SnCQAConfig(layers=2, yjm_sample_count=2, seed=5))
    primitive = decompose_to_primitives(circ)
    assert primitive.param_count == circ.param_count
    assert all(g.name in {"CNOT", "RZ", "CRY"} for g in primitive.gates)
    H = chain_hamiltonian(2, 2)
    init = prepare_singlet_init(4)
    rng = np.random.default_rng(3)
    for _ in range(5):
        params = rng.uniform(-1.5, 1.5, circ.param_count)
        a = evaluate_circuit(circ, params, init)
        b = evaluate_circuit(primitive, params, init)
        overlap = abs(np.vdot(a.amplitudes, b.amplitudes))
        assert overlap == pytest.approx(1.0, abs=1e-12)
        ga = adjoint_gradient(circ, params, H, init)
        gb = adjoint_gradient(primitive, params, H, init)
        assert np.allclose(ga, gb, atol=1e-9)


def test_decompose_keeps_primitive_gates_and_rejects_unknown():
    phea = build_phea(3, PheaConfig(1))
    assert decompose_to_primitives(phea) == phea
    rx = ParamCircuit(1, (GateOp("RX", (0,)),), ((0, 1.0),), 1)
    with pytest.raises(ValueError):
        decompose_to_primitives(rx)


def test_decompose_fixed_angle_eswap():
    circ = ParamCircuit(2, (GateOp("ESWAP", (0, 1), angle=0.9),), (None,), 0)
    primitive = decompose_to_primitives(circ)
    target = _gate_unitary([(GateOp("ESWAP", (0, 1)), 0.9)])
    got = _gate_unitary([(g, None) for g in primitive.gates])
    phase = got[0, 0] / target[0, 0]
    assert np.max(np.abs(got - phase * target)) < 1e-10


# ---------------------------------------------------------------------------
# resources


def test_resource_counts_sncqa_formulas():
    lat = _lattice(2, 3)
    config = SnCQAConfig(layers=2, yjm_sample_count=2, seed=0)
    circ = build_sncqa(lat, config)
    elements = sample_yjm_elements(6, 2, 0)
    eswaps_per_layer = 3 + sum(e.k - 1 for e in elements)
    rc = count_resources(circ)
    assert rc.eswap_count == 2 * eswaps_per_layer
    assert rc.gate_counts["CNOT"] == 2 * rc.eswap_count
    assert rc.gate_counts["RZ"] == 3 * rc.eswap_count
    assert rc.gate_counts["CRY"] == rc.eswap_count
    assert rc.two_qubit_count == 3 * rc.eswap_count
    assert rc.depth >= 1


def test_resource_counts_scale_with_trotter_slices():
    lat = _lattice(2, 2)
    one = count_resources(build_sncqa(lat, SnCQAConfig(1, 2, seed=1)))
    three = count_resources(build_sncqa(lat, SnCQAConfig(1, 2, seed=1,
                                                         trotter_slices=3)))
    matching = 2
    mixer_one = one.eswap_count - matching
    assert three.eswap_count == matching + 3 * mixer_one


def test_resource_counts_phea():
    n, p = 5, 3
    rc = count_resources(build_phea(n, PheaConfig(p)))
    assert rc.eswap_count == 0
    assert rc.gate_counts["CNOT"] == p * (n - 1)
    assert rc.gate_counts["RZ"] == 2 * n * p
    assert rc.gate_counts["RY"] == n * p
    assert rc.two_qubit_count == p * (n - 1)


def test_depth_is_no_more_than_gate_count_and_respects_parallelism():
    circ = build_phea(6, PheaConfig(1))
    rc = count_resources(circ)
    assert rc.depth <= len(decompose_to_primitives(circ).gates)
    # the 18 single-qubit rotations run in 3 parallel layers; the ladder is serial
    assert rc.depth == 3 + 5


# ---------------------------------------------------------------------------
# serialization


def test_serialize_golden_small_circuit():
    lat = _lattice(1, 2)
    circ = build_sncqa(lat, SnCQAConfig(layers=1, yjm_sample_count=1, seed=0))
    assert serialize_circuit(circ) == (
        "# n=2 params=2\n"
        "ESWAP 0 1 p0\n"
        "ESWAP 0 1 p1\n"
    )


def test_serialize_scaled_and_fixed_angle_tokens():
    gates = (GateOp("ESWAP", (0, 1)), GateOp("RZ", (1,), angle=-math.pi / 2),
             GateOp("CNOT", (0, 1)))
    circ = ParamCircuit(2, gates, ((0, 0.5), None, None), 1)
    text = serialize_circuit(circ)
    assert "ESWAP 0 1 p0*0.5" in text
    assert f"RZ 1 @{-math.pi / 2!r}" in text
    assert "CNOT 0 1\n" in text


def test_serialization_round_trip_rebuilds_equal_circuit():
    lat = _lattice(2, 3)
    for circ in (
        build_sncqa(lat, SnCQAConfig(layers=2, yjm_sample_count=3, seed=4,
                                     trotter_slices=2)),
        build_phea(6, PheaConfig(2)),
        decompose_to_primitives(build_sncqa(lat, SnCQAConfig(1, 1, seed=0))),
    ):
        again = parse_circuit(serialize_circuit(circ))
        assert again == circ


def test_round_trip_preserves_evaluation():
    lat = _lattice(2, 2)
    circ = build_sncqa(lat, SnCQAConfig(layers=1, yjm_sample_count=2, seed=8))
    again = parse_circuit(serialize_circuit(circ))
    params = np.random.default_rng(2).uniform(-1, 1, circ.param_count)
    init = prepare_singlet_init(4)
    a = evaluate_circuit(circ, params, init)
    b = evaluate_circuit(again, params, init)
    assert np.array_equal(a.amplitudes, b.amplitudes)


def test_parse_rejects_missing_header():
    with pytest.raises(ValueError):
        parse_circuit("ESWAP 0 1 p0\n")


def test_eswap_application_matches_circuit_evaluation():
    # one exchange gate evaluated through the circuit path equals the kernel
    circ = ParamCircuit(2, (GateOp("ESWAP", (0, 1)),), ((0, 1.0),), 1)
    init = prepare_singlet_init(2)
    via_circuit = evaluate_circuit(circ, [0.7], init)
    direct = apply_eswap(init.copy(), 0, 1, 0.7)
    assert np.allclose(via_circuit.amplitudes, direct.amplitudes, atol=0)
