"""Shot-based cost estimation and the global step counter.

One "step" is one estimation of the full cost function, exact or sampled,
regardless of how many Pauli terms it contains.  Pauli terms are measured
after a basis rotation (X -> H, Y -> S^dagger then H) with the full shot
budget per term; the all-zeros count of the fidelity task and the per-term
parity counts are drawn from binomials with the exact probabilities, which
is statistically identical to per-shot bitstring sampling.
"""

from dataclasses import dataclass

import numpy as np

from .circuits import Gate, StateVector, _apply_matrix, run_circuit
from .observables import (
    CostSpec,
    FidelityCostSpec,
    cost_exact,
    fidelity_cost_exact,
)
from .validation import as_angle_array, check_positive_int

_SDG = np.diag([1.0, -1.0j]).astype(complex)
_H = Gate("h", (0,)).resolved_matrix()
_Y_TO_Z = _H @ _SDG  # measure Y by applying S^dagger then H, then read Z


@dataclass
class ShotConfig:
    """Per-estimation shot budget and RNG seed."""

    shots: int = 1024
    rng_seed: int = 0

    def __post_init__(self):
        check_positive_int(self.shots, "shots")

    def make_rng(self):
        return np.random.default_rng(self.rng_seed)


class StepCounter:
    """Counts cost-function estimations across one optimization run."""

    def __init__(self):
        self.steps = 0

    def increment(self):
        self.steps += 1


def bitstring(index, num_qubits):
    """Render an amplitude index with qubit 0 as the leftmost character."""
    return format(index, f"0{num_qubits}b")[::-1]


def sample_bitstrings(state, shots, rng):
    """Histogram of `shots` computational-basis samples of `state`."""
    check_positive_int(shots, "shots")
    probs = state.probabilities()
    probs = probs / probs.sum()
    outcomes = rng.choice(probs.size, size=shots, p=probs)
    hist = {}
    for index, count in zip(*np.unique(outcomes, return_counts=True)):
        hist[bitstring(int(index), state.num_qubits)] = int(count)
    return hist


def _parity_even_probability(state, support):
    """Probability that the Z-basis parity over `support` qubits is even."""
    indices = np.arange(state.amplitudes.size)
    parity = np.zeros_like(indices)
    for q in support:
        parity ^= (indices >> q) & 1
    probs = state.probabilities()
    return float(probs[parity == 0].sum())


def sample_pauli_mean(state, pauli, shots, rng):
    """Unbiased estimate of <P> from `shots` basis-rotated measurements."""
    support = pauli.support
    if not support:
        return 1.0
    amps = state.amplitudes
    for q in support:
        op = pauli.ops[q]
        if op == "X":
            amps = _apply_matrix(amps, _H, (q,), state.num_qubits)
        elif op == "Y":
            amps = _apply_matrix(amps, _Y_TO_Z, (q,), state.num_qubits)
    rotated = StateVector(state.num_qubits, amps)
    p_even = min(max(_parity_even_probability(rotated, support), 0.0), 1.0)
    hits = rng.binomial(shots, p_even)
    return 2.0 * hits / shots - 1.0


def estimate_cost(circuit, params, spec, cfg, counter, rng=None):
    """Sampled (unbiased) cost estimate; increments `counter` by one.

    Pass an explicit `rng` to continue an existing stream; otherwise a fresh
    generator is derived from cfg.rng_seed.
    """
    counter.increment()
    if rng is None:
        rng = cfg.make_rng()
    params = as_angle_array(params, circuit.num_params)
    if isinstance(spec, FidelityCostSpec):
        p_zero = min(max(-fidelity_cost_exact(circuit, params, spec), 0.0), 1.0)
        hits = rng.binomial(cfg.shots, p_zero)
        return -hits / cfg.shots
    total = 0.0
    for weight, obs, input_state in spec.terms:
        state = run_circuit(circuit, params, input_state)
        for coeff, pauli in obs.terms:
            total += weight * coeff * sample_pauli_mean(state, pauli, cfg.shots, rng)
    return total


def exact_cost_counted(circuit, params, spec, counter):
    """Exact cost evaluation, still counted as one step."""
    counter.increment()
    if isinstance(spec, FidelityCostSpec):
        return fidelity_cost_exact(circuit, params, spec)
    return cost_exact(circuit, params, spec)


class CountedCost:
    """Step-counted cost interface shared by every optimizer.

    `estimate` increments the counter; `exact` does not and exists for
    reporting and test oracles.
    """

    def __init__(self, counter=None):
        self.counter = counter if counter is not None else StepCounter()

    @property
    def steps(self):
        return self.counter.steps

    @property
    def stochastic(self):
        raise NotImplementedError

    @property
    def num_params(self):
        raise NotImplementedError

    @property
    def usage_counts(self):
        return np.ones(self.num_params, dtype=int)

    def estimate(self, params):
        self.counter.increment()
        return self._evaluate(params)

    def exact(self, params):
        raise NotImplementedError

    def _evaluate(self, params):
        raise NotImplementedError


class CircuitCost(CountedCost):
    """Counted cost of a circuit against a CostSpec or FidelityCostSpec.

    shots=None means exact evaluation ("infinite shots"); otherwise each
    estimation samples with the given ShotConfig-style budget.
    """

    def __init__(self, circuit, spec, shots=None, rng=None, counter=None):
        super().__init__(counter)
        self.circuit = circuit
        self.spec = spec
        self.shots = shots
        if shots is not None:
            check_positive_int(shots, "shots")
            self.rng = rng if rng is not None else np.random.default_rng(0)
        else:
            self.rng = None
        self._cfg = ShotConfig(shots) if shots is not None else None

    @property
    def stochastic(self):
        return self.shots is not None

    @property
    def num_params(self):
        return self.circuit.num_params

    @property
    def usage_counts(self):
        return self.circuit.usage_counts

    def _evaluate(self, params):
        if self.shots is None:
            return self.exact(params)
        # counter already incremented by estimate(); pass a throwaway one
        return estimate_cost(
            self.circuit, params, self.spec, self._cfg, StepCounter(), self.rng
        )

    def exact(self, params):
        if isinstance(self.spec, FidelityCostSpec):
            return fidelity_cost_exact(self.circuit, params, self.spec)
        return cost_exact(self.circuit, params, self.spec)


class FunctionCost(CountedCost):
    """Counted wrapper around a plain deterministic function, for baselines."""

    def __init__(self, fn, num_params, counter=None):
        super().__init__(counter)
        self.fn = fn
        self._num_params = num_params

    @property
    def stochastic(self):
        return False

    @property
    def num_params(self):
        return self._num_params

    def _evaluate(self, params):
        return float(self.fn(np.asarray(params, dtype=float)))

    def exact(self, params):
        return float(self.fn(np.asarray(params, dtype=float)))
