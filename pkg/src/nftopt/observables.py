"""Pauli-sum observables, cost functions, and exact expectation values.

Pauli strings are written with qubit 0 as the leftmost character, matching
the little-endian amplitude ordering of the simulator.
"""

import json
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .circuits import (
    PAULI_MATRICES,
    ParameterizedCircuit,
    StateVector,
    _apply_matrix,
    run_circuit,
)
from .validation import as_angle_array

_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class PauliString:
    """A tensor product of single-qubit Paulis, e.g. "XZIY"."""

    ops: str

    def __post_init__(self):
        if not self.ops or any(c not in "IXYZ" for c in self.ops):
            raise ValueError(f"invalid Pauli string {self.ops!r}")

    @property
    def num_qubits(self):
        return len(self.ops)

    @property
    def support(self):
        return tuple(q for q, c in enumerate(self.ops) if c != "I")

    def matrix(self):
        """Dense matrix in the little-endian basis (qubit 0 = LSB)."""
        factors = [PAULI_MATRICES[c] for c in reversed(self.ops)]
        return reduce(np.kron, factors)

    def apply(self, state):
        """The state P|psi> (cheap: one 2x2 application per non-identity)."""
        amps = state.amplitudes
        for q in self.support:
            amps = _apply_matrix(
                amps, PAULI_MATRICES[self.ops[q]], (q,), state.num_qubits
            )
        return StateVector(state.num_qubits, amps)


@dataclass
class Observable:
    """Weighted sum of Pauli strings with real coefficients (Hermitian)."""

    terms: list  # list of (coefficient, PauliString)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("an observable needs at least one term")
        cleaned = []
        r = None
        for coeff, pauli in self.terms:
            if isinstance(pauli, str):
                pauli = PauliString(pauli)
            coeff = float(coeff)
            if r is None:
                r = pauli.num_qubits
            elif pauli.num_qubits != r:
                raise ValueError("all Pauli strings must have the same length")
            cleaned.append((coeff, pauli))
        self.terms = cleaned

    @property
    def num_qubits(self):
        return self.terms[0][1].num_qubits

    def matrix(self):
        dim = 2**self.num_qubits
        mat = np.zeros((dim, dim), dtype=complex)
        for coeff, pauli in self.terms:
            mat += coeff * pauli.matrix()
        return mat


def exact_expectation(state, obs):
    """Real expectation value <psi|H|psi> of a Pauli-sum observable."""
    if obs.num_qubits != state.num_qubits:
        raise ValueError(
            f"observable on {obs.num_qubits} qubits, state on {state.num_qubits}"
        )
    value = 0j
    for coeff, pauli in obs.terms:
        value += coeff * state.overlap(pauli.apply(state))
    if abs(value.imag) > _IMAG_TOL:
        raise ValueError(f"expectation has imaginary residue {value.imag:.2e}")
    return float(value.real)


@dataclass
class CostSpec:
    """Weighted sum of expectation values over (weight, observable, input) terms.

    Input states default to |0...0>.
    """

    terms: list  # list of (weight, Observable, StateVector or None)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a cost needs at least one term")
        cleaned = []
        for term in self.terms:
            if len(term) == 2:
                weight, obs = term
                state = None
            else:
                weight, obs, state = term
            if state is None:
                state = StateVector.zero(obs.num_qubits)
            if abs(state.norm_squared() - 1.0) > 1e-9:
                raise ValueError("input states must be normalized")
            cleaned.append((float(weight), obs, state))
        self.terms = cleaned

    @property
    def num_qubits(self):
        return self.terms[0][1].num_qubits


@dataclass
class FidelityCostSpec:
    """Cost -|<0|target_circuit^dagger U(theta)|0>|^2, minimized at -1."""

    target_circuit: ParameterizedCircuit
    num_qubits: int = None
    _target_state: StateVector = field(default=None, repr=False)

    def __post_init__(self):
        if self.target_circuit.num_params != 0:
            raise ValueError("target circuit must have bound parameters")
        if self.num_qubits is None:
            self.num_qubits = self.target_circuit.num_qubits
        elif self.num_qubits != self.target_circuit.num_qubits:
            raise ValueError("qubit-count mismatch with target circuit")

    @property
    def target_state(self):
        if self._target_state is None:
            self._target_state = run_circuit(self.target_circuit, [])
        return self._target_state


def cost_exact(circuit, params, spec):
    """Exact value of a weighted-expectation cost."""
    params = as_angle_array(params, circuit.num_params)
    total = 0.0
    for weight, obs, input_state in spec.terms:
        state = run_circuit(circuit, params, input_state)
        total += weight * exact_expectation(state, obs)
    return total


def fidelity_cost_exact(circuit, params, spec):
    """Exact value of the fidelity cost, always in [-1, 0]."""
    if circuit.num_qubits != spec.num_qubits:
        raise ValueError("qubit-count mismatch between circuit and cost")
    state = run_circuit(circuit, params)
    overlap = spec.target_state.overlap(state)
    return -float(abs(overlap) ** 2)


def ground_truth(obs, max_qubits=12):
    """Lowest eigenvalue and a unit-norm ground state by dense diagonalization."""
    if obs.num_qubits > max_qubits:
        raise ValueError(
            f"dense diagonalization limited to {max_qubits} qubits, "
            f"got {obs.num_qubits}"
        )
    eigvals, eigvecs = np.linalg.eigh(obs.matrix())
    return float(eigvals[0]), StateVector(obs.num_qubits, eigvecs[:, 0])


def observable_to_dict(obs):
    return {
        "qubits": obs.num_qubits,
        "terms": [{"pauli": p.ops, "coeff": c} for c, p in obs.terms],
    }


def observable_from_dict(data):
    num_qubits = data["qubits"]
    terms = []
    for entry in data["terms"]:
        coeff = entry["coeff"]
        if not isinstance(coeff, (int, float)) or isinstance(coeff, bool):
            raise ValueError(f"coefficient must be a number, got {coeff!r}")
        pauli = PauliString(entry["pauli"])
        if pauli.num_qubits != num_qubits:
            raise ValueError(
                f"Pauli string {pauli.ops!r} does not match {num_qubits} qubits"
            )
        terms.append((coeff, pauli))
    return Observable(terms)


def save_observable(obs, path):
    with open(path, "w") as fh:
        json.dump(observable_to_dict(obs), fh, indent=2)


def load_observable(path):
    with open(path) as fh:
        return observable_from_dict(json.load(fh))
