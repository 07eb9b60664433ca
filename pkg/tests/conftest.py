"""Shared helpers: random instances and independent dense-matrix oracles."""

import numpy as np
import pytest
from scipy.linalg import expm

from nftopt import Gate, Observable, ParameterizedCircuit

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)
H2 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def embed(op, qubit, num_qubits):
    """Lift a 2x2 operator to the full little-endian space."""
    mat = np.eye(1, dtype=complex)
    for q in reversed(range(num_qubits)):
        mat = np.kron(mat, op if q == qubit else PAULI["I"])
    return mat


def gate_matrix(gate, num_qubits, angle=None):
    """Full-space matrix of one gate, built independently of the simulator."""
    if gate.name == "h":
        return embed(H2, gate.targets[0], num_qubits)
    if gate.name == "x":
        return embed(PAULI["X"], gate.targets[0], num_qubits)
    if gate.name == "cz":
        a, b = gate.targets
        return embed(P0, a, num_qubits) @ np.eye(2**num_qubits) + \
            embed(P1, a, num_qubits) @ embed(PAULI["Z"], b, num_qubits)
    if gate.name == "cnot":
        c, t = gate.targets
        return embed(P0, c, num_qubits) + \
            embed(P1, c, num_qubits) @ embed(PAULI["X"], t, num_qubits)
    if gate.name == "unitary" and len(gate.targets) == 1:
        return embed(gate.matrix, gate.targets[0], num_qubits)
    if gate.name in ("rx", "ry", "rz"):
        if angle is None:
            angle = gate.angle
        generator = embed(PAULI[gate.name[1].upper()], gate.targets[0], num_qubits)
        return expm(-0.5j * angle * generator)
    raise ValueError(f"no oracle for gate {gate.name}")


def circuit_matrix(circuit, params):
    """Dense unitary of the whole circuit by explicit matrix products."""
    mat = np.eye(2**circuit.num_qubits, dtype=complex)
    for gate in circuit.gates:
        angle = params[gate.param] if gate.param is not None else None
        mat = gate_matrix(gate, circuit.num_qubits, angle) @ mat
    return mat


def random_circuit(rng, num_qubits, num_rotations, fixed_per_rotation=1,
                   shared_groups=None):
    """Random supported circuit; every rotation gets its own parameter unless
    `shared_groups` assigns several rotations to one index."""
    gates = []
    if shared_groups is None:
        slots = list(range(num_rotations))
        num_params = num_rotations
    else:
        slots = []
        for index, count in enumerate(shared_groups):
            slots.extend([index] * count)
        num_params = len(shared_groups)
        num_rotations = len(slots)
    for slot in slots:
        for _ in range(rng.integers(0, fixed_per_rotation + 1)):
            kind = rng.choice(["h", "x", "cz", "cnot"])
            if kind in ("cz", "cnot") and num_qubits >= 2:
                pair = rng.choice(num_qubits, size=2, replace=False)
                gates.append(Gate(kind, tuple(int(q) for q in pair)))
            else:
                gates.append(Gate(str(rng.choice(["h", "x"])),
                                  (int(rng.integers(num_qubits)),)))
        name = str(rng.choice(["rx", "ry", "rz"]))
        gates.append(Gate(name, (int(rng.integers(num_qubits)),), param=slot))
    return ParameterizedCircuit(num_qubits, gates, num_params)


def random_observable(rng, num_qubits, num_terms=3):
    terms = []
    for _ in range(num_terms):
        ops = "".join(rng.choice(list("IXYZ"), size=num_qubits))
        if set(ops) == {"I"}:
            ops = "Z" + ops[1:]
        terms.append((float(rng.normal()), ops))
    return Observable(terms)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
