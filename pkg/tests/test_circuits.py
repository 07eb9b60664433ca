import json

import numpy as np
import pytest
from scipy.linalg import expm

from nftopt import (
    Gate,
    ParameterizedCircuit,
    StateVector,
    adjoint_compose,
    apply_gate,
    canonicalize_angle,
    load_circuit,
    run_circuit,
    save_circuit,
)
from nftopt.circuits import ROTATION_GENERATORS

from conftest import PAULI, circuit_matrix, random_circuit


def test_hadamard_on_zero():
    state = apply_gate(StateVector.zero(1), Gate("h", (0,)))
    expected = np.array([1, 1]) / np.sqrt(2)
    np.testing.assert_allclose(state.amplitudes, expected, atol=1e-15)


def test_rx_pi_on_zero():
    state = apply_gate(StateVector.zero(1), Gate("rx", (0,), param=0), angle=np.pi)
    np.testing.assert_allclose(state.amplitudes, [0, -1j], atol=1e-15)


def test_rz_matches_matrix_exponential():
    theta = 0.7
    state = apply_gate(StateVector.zero(1), Gate("rz", (0,), param=0), angle=theta)
    oracle = expm(-0.5j * theta * PAULI["Z"]) @ np.array([1, 0], dtype=complex)
    np.testing.assert_allclose(state.amplitudes, oracle, atol=1e-14)


def test_rotation_generators_square_to_identity():
    for gen in ROTATION_GENERATORS.values():
        np.testing.assert_array_equal(gen @ gen, np.eye(2))


def test_gate_validation_errors():
    with pytest.raises(ValueError):
        Gate("rx", (0,))  # neither param nor angle
    with pytest.raises(ValueError):
        Gate("h", (0,), angle=0.5)
    with pytest.raises(ValueError):
        Gate("cz", (0,))
    with pytest.raises(ValueError):
        Gate("unitary", (0,), matrix=np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError):
        Gate("nope", (0,))


def test_apply_gate_angle_rules():
    state = StateVector.zero(2)
    with pytest.raises(ValueError):
        apply_gate(state, Gate("rx", (0,), param=0))  # missing angle
    with pytest.raises(ValueError):
        apply_gate(state, Gate("h", (0,)), angle=0.3)
    with pytest.raises(ValueError):
        apply_gate(state, Gate("h", (5,)))  # target out of range


def test_bound_rotation_needs_no_angle():
    state = apply_gate(StateVector.zero(1), Gate("rx", (0,), angle=np.pi))
    np.testing.assert_allclose(state.amplitudes, [0, -1j], atol=1e-15)


def test_cnot_control_target_convention():
    # |q0=1, q1=0> -> CNOT(control=0, target=1) -> |11>
    state = apply_gate(StateVector.zero(2), Gate("x", (0,)))
    state = apply_gate(state, Gate("cnot", (0, 1)))
    np.testing.assert_allclose(state.amplitudes, [0, 0, 0, 1], atol=1e-15)


def test_empty_circuit_is_identity(rng):
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    amps /= np.linalg.norm(amps)
    circuit = ParameterizedCircuit(2, [], 0)
    out = run_circuit(circuit, [], StateVector(2, amps))
    np.testing.assert_allclose(out.amplitudes, amps)


def test_zero_rotation_is_identity():
    circuit = ParameterizedCircuit(1, [Gate("rx", (0,), param=0)], 1)
    out = run_circuit(circuit, [0.0])
    np.testing.assert_allclose(out.amplitudes, [1, 0], atol=1e-15)


def test_run_circuit_matches_dense_oracle(rng):
    for _ in range(10):
        circuit = random_circuit(rng, 3, 5)
        params = rng.uniform(-np.pi, np.pi, circuit.num_params)
        amps = rng.normal(size=8) + 1j * rng.normal(size=8)
        amps /= np.linalg.norm(amps)
        out = run_circuit(circuit, params, StateVector(3, amps))
        oracle = circuit_matrix(circuit, params) @ amps
        np.testing.assert_allclose(out.amplitudes, oracle, atol=1e-10)


def test_run_circuit_errors():
    circuit = ParameterizedCircuit(2, [Gate("rx", (0,), param=0)], 1)
    with pytest.raises(ValueError):
        run_circuit(circuit, [0.1, 0.2])  # parameter count mismatch
    with pytest.raises(ValueError):
        run_circuit(circuit, [0.1], StateVector.zero(3))  # dimension mismatch


def test_norm_preserved_on_random_circuits(rng):
    for _ in range(200):
        r = int(rng.integers(1, 5))
        circuit = random_circuit(rng, r, int(rng.integers(1, 7)))
        params = rng.uniform(-2 * np.pi, 2 * np.pi, circuit.num_params)
        out = run_circuit(circuit, params)
        assert abs(out.norm_squared() - 1.0) < 1e-12


def test_shared_parameter_slots_receive_same_value():
    gates = [Gate("rx", (0,), param=0), Gate("rx", (1,), param=0)]
    circuit = ParameterizedCircuit(2, gates, 1)
    assert list(circuit.usage_counts) == [2]
    out = run_circuit(circuit, [np.pi])
    # both qubits flipped: amplitude on |11>
    assert abs(abs(out.amplitudes[3]) - 1.0) < 1e-12


def test_unbound_parameter_rejected():
    with pytest.raises(ValueError):
        ParameterizedCircuit(1, [Gate("rx", (0,), param=0)], 2)


def test_adjoint_compose_identity(rng):
    circuit = random_circuit(rng, 2, 4)
    theta = rng.uniform(0, 2 * np.pi, circuit.num_params)
    composed = adjoint_compose(circuit.bind(theta), circuit)
    out = run_circuit(composed, theta)
    assert abs(abs(out.amplitudes[0]) - 1.0) < 1e-12  # |0..0> up to phase


def test_adjoint_compose_rx_overlap():
    a = ParameterizedCircuit(1, [Gate("rx", (0,), angle=0.4)], 0)
    b = ParameterizedCircuit(1, [Gate("rx", (0,), param=0)], 1)
    composed = adjoint_compose(a, b)
    assert composed.num_params == 1
    out = run_circuit(composed, [0.0])
    assert abs(abs(out.amplitudes[0]) ** 2 - np.cos(0.2) ** 2) < 1e-12


def test_adjoint_compose_fixed_self_adjoint():
    a = ParameterizedCircuit(1, [Gate("h", (0,))], 0)
    b = ParameterizedCircuit(1, [], 0)
    composed = adjoint_compose(a, b)
    out = run_circuit(composed, [])
    np.testing.assert_allclose(out.amplitudes, [1, 1] / np.sqrt(2), atol=1e-15)


def test_adjoint_compose_qubit_mismatch():
    a = ParameterizedCircuit(1, [], 0)
    b = ParameterizedCircuit(2, [], 0)
    with pytest.raises(ValueError):
        adjoint_compose(a, b)


def test_circuit_json_roundtrip(tmp_path, rng):
    circuit = random_circuit(rng, 3, 4)
    path = tmp_path / "circuit.json"
    save_circuit(circuit, path)
    data = json.loads(path.read_text())
    assert data["qubits"] == 3
    assert all(g["param"] is None or g["param"] >= 0 for g in data["gates"])
    loaded = load_circuit(path)
    assert loaded.num_params == circuit.num_params
    params = rng.uniform(-np.pi, np.pi, circuit.num_params)
    np.testing.assert_allclose(
        run_circuit(loaded, params).amplitudes,
        run_circuit(circuit, params).amplitudes,
    )


def test_canonicalize_angle_range():
    assert canonicalize_angle(np.pi) == -np.pi
    assert canonicalize_angle(-np.pi) == -np.pi
    assert abs(canonicalize_angle(3 * np.pi + 0.1) - (-np.pi + 0.1)) < 1e-12
    values = canonicalize_angle(np.linspace(-20, 20, 101))
    assert np.all(values >= -np.pi) and np.all(values < np.pi)
