"""Dense state-vector simulation of parameterized quantum circuits.

Qubit ordering is little-endian throughout: qubit 0 is the least significant
bit of the amplitude index.  Circuits consist of fixed unitary gates (H, X,
CZ, CNOT, or user-supplied unitaries) and Pauli rotation gates
exp(-i*theta/2 * A) with A in {X, Y, Z}, so A^2 = I.  Rotation gates either
reference a circuit parameter slot or carry a bound constant angle.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .validation import (
    as_angle_array,
    check_positive_int,
    check_qubit_index,
    check_unitary,
)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)
# control = targets[0] (high-order bit of the 4x4 index), target = targets[1]
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

FIXED_GATES = {"h": _H, "x": _X, "cz": _CZ, "cnot": _CNOT}
ROTATION_GENERATORS = {"rx": _X, "ry": _Y, "rz": _Z}
PAULI_MATRICES = {"I": np.eye(2, dtype=complex), "X": _X, "Y": _Y, "Z": _Z}


@dataclass
class StateVector:
    """Dense complex amplitude vector over `num_qubits` qubits."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.num_qubits = check_positive_int(self.num_qubits, "num_qubits")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2**self.num_qubits,):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, "
                f"expected ({2 ** self.num_qubits},)"
            )

    @classmethod
    def zero(cls, num_qubits):
        """|0...0> on `num_qubits` qubits."""
        amps = np.zeros(2**num_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def from_amplitudes(cls, amplitudes):
        amps = np.asarray(amplitudes, dtype=complex)
        num_qubits = int(np.log2(amps.size))
        return cls(num_qubits, amps)

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def norm_squared(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def overlap(self, other):
        """Inner product <self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class Gate:
    """One circuit element.

    For rotation gates exactly one of `param` (a 0-based parameter slot) or
    `angle` (a bound constant) must be set.  `matrix` is only used for
    kind "unitary".
    """

    name: str
    targets: tuple
    param: int = None
    angle: float = None
    matrix: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"duplicate targets in gate {self.name}: {self.targets}")
        if self.name in ROTATION_GENERATORS:
            if len(self.targets) != 1:
                raise ValueError(f"{self.name} acts on exactly one qubit")
            if (self.param is None) == (self.angle is None):
                raise ValueError(
                    f"rotation gate {self.name} needs exactly one of param/angle"
                )
            if self.param is not None and self.param < 0:
                raise ValueError(f"negative parameter slot {self.param}")
        elif self.name in FIXED_GATES or self.name == "unitary":
            if self.param is not None or self.angle is not None:
                raise ValueError(f"fixed gate {self.name} takes no angle or param")
            if self.name in ("cz", "cnot"):
                if len(self.targets) != 2:
                    raise ValueError(f"{self.name} acts on exactly two qubits")
            elif self.name in ("h", "x"):
                if len(self.targets) != 1:
                    raise ValueError(f"{self.name} acts on exactly one qubit")
            else:
                mat = check_unitary(self.matrix)
                if mat.shape[0] != 2 ** len(self.targets):
                    raise ValueError(
                        f"unitary of shape {mat.shape} does not match "
                        f"{len(self.targets)} targets"
                    )
                object.__setattr__(self, "matrix", mat)
        else:
            raise ValueError(f"unknown gate name {self.name!r}")

    @property
    def is_rotation(self):
        return self.name in ROTATION_GENERATORS

    def resolved_matrix(self, angle=None):
        """Dense matrix of this gate; `angle` required for unbound rotations."""
        if self.is_rotation:
            if angle is None:
                angle = self.angle
            if angle is None:
                raise ValueError(f"rotation gate {self.name} needs an angle")
            gen = ROTATION_GENERATORS[self.name]
            return (
                np.cos(angle / 2) * np.eye(2, dtype=complex)
                - 1j * np.sin(angle / 2) * gen
            )
        if angle is not None:
            raise ValueError(f"fixed gate {self.name} takes no angle")
        if self.name == "unitary":
            return self.matrix
        return FIXED_GATES[self.name]

    def adjoint(self):
        """The Hermitian-conjugate gate (rotations must be bound)."""
        if self.is_rotation:
            if self.angle is None:
                raise ValueError("cannot take the adjoint of an unbound rotation")
            return Gate(self.name, self.targets, angle=-self.angle)
        if self.name == "unitary":
            return Gate(self.name, self.targets, matrix=self.matrix.conj().T)
        # H, X, CZ, CNOT are self-adjoint
        return self


def _apply_matrix(amps, mat, targets, num_qubits):
    """Apply a 2^k x 2^k matrix to the listed target qubits.

    targets[0] corresponds to the most significant bit of the matrix index.
    """
    k = len(targets)
    psi = amps.reshape((2,) * num_qubits)
    axes = [num_qubits - 1 - q for q in targets]
    psi = np.moveaxis(psi, axes, range(k))
    shape = psi.shape
    psi = (mat @ psi.reshape(2**k, -1)).reshape(shape)
    psi = np.moveaxis(psi, range(k), axes)
    return psi.reshape(2**num_qubits)


def apply_gate(state, gate, angle=None):
    """Return the state after applying `gate`; norm is preserved.

    `angle` must be supplied iff the gate is an unbound rotation.
    """
    for q in gate.targets:
        check_qubit_index(q, state.num_qubits)
    if gate.is_rotation and gate.angle is None:
        if angle is None:
            raise ValueError("angle required for an unbound rotation gate")
    elif angle is not None:
        raise ValueError(f"gate {gate.name} does not take an explicit angle")
    mat = gate.resolved_matrix(angle)
    return StateVector(
        state.num_qubits, _apply_matrix(state.amplitudes, mat, gate.targets, state.num_qubits)
    )


@dataclass
class ParameterizedCircuit:
    """Ordered gate list with a slot -> parameter-index binding.

    Several rotation slots may reference the same parameter index; the
    per-parameter usage counts drive the shared-parameter optimizer variant.
    """

    num_qubits: int
    gates: list = field(default_factory=list)
    num_params: int = 0

    def __post_init__(self):
        self.num_qubits = check_positive_int(self.num_qubits, "num_qubits")
        if self.num_params < 0:
            raise ValueError("num_params must be non-negative")
        used = set()
        for gate in self.gates:
            for q in gate.targets:
                check_qubit_index(q, self.num_qubits)
            if gate.param is not None:
                if gate.param >= self.num_params:
                    raise ValueError(
                        f"parameter slot {gate.param} out of range "
                        f"(num_params={self.num_params})"
                    )
                used.add(gate.param)
        missing = set(range(self.num_params)) - used
        if missing:
            raise ValueError(f"parameters never bound to a gate: {sorted(missing)}")

    @property
    def usage_counts(self):
        """S_j: number of rotation slots bound to each parameter index."""
        counts = np.zeros(self.num_params, dtype=int)
        for gate in self.gates:
            if gate.param is not None:
                counts[gate.param] += 1
        return counts

    def bind(self, params):
        """Return a parameter-free copy with all rotation slots bound."""
        params = as_angle_array(params, self.num_params)
        gates = [
            Gate(g.name, g.targets, angle=float(params[g.param]))
            if g.param is not None
            else g
            for g in self.gates
        ]
        return ParameterizedCircuit(self.num_qubits, gates, 0)


def run_circuit(circuit, params, input_state=None):
    """Apply all gates of `circuit` in order, with `params` bound to slots."""
    params = as_angle_array(params, circuit.num_params)
    if input_state is None:
        input_state = StateVector.zero(circuit.num_qubits)
    if input_state.num_qubits != circuit.num_qubits:
        raise ValueError(
            f"input state has {input_state.num_qubits} qubits, "
            f"circuit has {circuit.num_qubits}"
        )
    amps = input_state.amplitudes
    for gate in circuit.gates:
        if gate.param is not None:
            mat = gate.resolved_matrix(float(params[gate.param]))
        else:
            mat = gate.resolved_matrix()
        amps = _apply_matrix(amps, mat, gate.targets, circuit.num_qubits)
    return StateVector(circuit.num_qubits, amps)


def adjoint_compose(a, b):
    """Circuit applying b's gates, then the adjoint of `a` (gates reversed).

    `a` must have all rotations bound (num_params == 0); the composed
    circuit exposes exactly b's parameters.
    """
    if a.num_qubits != b.num_qubits:
        raise ValueError(
            f"qubit-count mismatch: {a.num_qubits} vs {b.num_qubits}"
        )
    if a.num_params != 0:
        raise ValueError("first circuit must be bound (no free parameters)")
    gates = list(b.gates) + [g.adjoint() for g in reversed(a.gates)]
    return ParameterizedCircuit(b.num_qubits, gates, b.num_params)


def circuit_to_dict(circuit):
    """JSON-serializable form: {"qubits": r, "gates": [...]}."""
    gates = []
    for g in circuit.gates:
        if g.name == "unitary":
            raise ValueError("user-supplied unitaries have no JSON form")
        entry = {"type": g.name, "targets": list(g.targets), "param": g.param}
        if g.angle is not None:
            entry["angle"] = g.angle
        gates.append(entry)
    return {"qubits": circuit.num_qubits, "gates": gates}


def circuit_from_dict(data):
    num_qubits = data["qubits"]
    gates = []
    max_param = -1
    for entry in data["gates"]:
        name = entry["type"]
        targets = entry["targets"]
        param = entry.get("param")
        angle = entry.get("angle")
        if name in ROTATION_GENERATORS:
            gates.append(Gate(name, targets, param=param, angle=angle))
            if param is not None:
                max_param = max(max_param, param)
        else:
            gates.append(Gate(name, targets))
    return ParameterizedCircuit(num_qubits, gates, max_param + 1)


def save_circuit(circuit, path):
    with open(path, "w") as fh:
        json.dump(circuit_to_dict(circuit), fh, indent=2)


def load_circuit(path):
    with open(path) as fh:
        return circuit_from_dict(json.load(fh))
