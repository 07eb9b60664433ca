"""Benchmark harness: ansatz construction, tasks, seeded fleets, CDF output.

The hardware-efficient ansatz is one initial layer of per-qubit RX*RZ
followed by `depth` repeated blocks of a nearest-neighbor CZ ladder plus
another RX*RZ layer, giving 2*r*(depth+1) independent parameters.
"""

import csv
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .baselines import (
    GradientDescentOptimizer,
    NelderMeadOptimizer,
    SpsaOptimizer,
)
from .circuits import Gate, ParameterizedCircuit, run_circuit
from .nft import NftOptimizer
from .observables import (
    CostSpec,
    FidelityCostSpec,
    Observable,
    cost_exact,
    fidelity_cost_exact,
    ground_truth,
    load_observable,
)
from .sampling import CircuitCost

OPTIMIZERS = ("nft", "nft-multi", "nft-shared", "spsa", "nelder-mead", "gd")
DEFAULT_CHECKPOINTS = (1024, 2048, 4096, 8192)


@dataclass
class AnsatzSpec:
    qubits: int
    depth: int

    def __post_init__(self):
        if self.qubits < 1 or self.depth < 0:
            raise ValueError("need qubits >= 1 and depth >= 0")

    @property
    def num_params(self):
        return 2 * self.qubits * (self.depth + 1)


def build_ansatz(spec):
    """Hardware-efficient RX/RZ + CZ-ladder circuit with distinct parameters."""
    gates = []
    param = 0

    def rotation_layer():
        nonlocal param
        for q in range(spec.qubits):
            gates.append(Gate("rx", (q,), param=param))
            gates.append(Gate("rz", (q,), param=param + 1))
            param += 2

    rotation_layer()
    for _ in range(spec.depth):
        for q in range(spec.qubits - 1):
            gates.append(Gate("cz", (q, q + 1)))
        rotation_layer()
    return ParameterizedCircuit(spec.qubits, gates, param)


def make_task1(spec, rng):
    """Fidelity task: random target angles, cost -|<0|U^dag(t*)U(t)|0>|^2."""
    circuit = build_ansatz(spec)
    theta_star = rng.uniform(0.0, 2.0 * np.pi, circuit.num_params)
    target = circuit.bind(theta_star)
    return circuit, FidelityCostSpec(target)


@dataclass
class VqeTask:
    observable: Observable
    cost_spec: CostSpec
    ground_energy: float
    ground_state: object


def transverse_field_ising(num_qubits, coupling=1.0, fieldstrength=1.0):
    """-J * sum Z_i Z_{i+1} - h * sum X_i on an open chain."""
    terms = []
    for q in range(num_qubits - 1):
        ops = ["I"] * num_qubits
        ops[q] = ops[q + 1] = "Z"
        terms.append((-coupling, "".join(ops)))
    for q in range(num_qubits):
        ops = ["I"] * num_qubits
        ops[q] = "X"
        terms.append((-fieldstrength, "".join(ops)))
    return Observable(terms)


def make_task2(ansatz_spec, hamiltonian_file=None):
    """VQE task from a Hamiltonian JSON file or the built-in 4-qubit Ising."""
    if hamiltonian_file is not None:
        obs = load_observable(hamiltonian_file)
    else:
        obs = transverse_field_ising(ansatz_spec.qubits)
    if obs.num_qubits != ansatz_spec.qubits:
        raise ValueError(
            f"Hamiltonian acts on {obs.num_qubits} qubits, "
            f"ansatz has {ansatz_spec.qubits}"
        )
    energy, state = ground_truth(obs)
    return VqeTask(obs, CostSpec([(1.0, obs)]), energy, state)


@dataclass
class BenchmarkSpec:
    task: str = "fidelity"
    qubits: int = 5
    depth: int = 9
    optimizer: str = "nft"
    shots: int = 1024  # None means exact evaluation
    budget: int = 8192
    runs: int = 100
    seed: int = 0
    checkpoints: tuple = DEFAULT_CHECKPOINTS
    hamiltonian_file: str = None
    optimizer_options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.task not in ("fidelity", "vqe"):
            raise ValueError(f"unknown task {self.task!r}")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"unknown optimizer {self.optimizer!r}")
        self.checkpoints = tuple(sorted(int(c) for c in self.checkpoints))
        if not self.checkpoints:
            raise ValueError("at least one checkpoint is required")
        if self.budget < self.checkpoints[-1]:
            raise ValueError("budget must cover the largest checkpoint")

    @property
    def ansatz(self):
        return AnsatzSpec(self.qubits, self.depth)

    def to_dict(self):
        return {
            "task": self.task,
            "qubits": self.qubits,
            "depth": self.depth,
            "optimizer": self.optimizer,
            "shots": self.shots,
            "budget": self.budget,
            "runs": self.runs,
            "seed": self.seed,
            "checkpoints": list(self.checkpoints),
            "hamiltonian_file": self.hamiltonian_file,
            "optimizer_options": self.optimizer_options,
        }


@dataclass
class CdfTable:
    """Per-checkpoint sorted metric values across completed runs."""

    metric: str
    values: dict  # checkpoint -> sorted list of floats

    def cumulative(self, checkpoint):
        """(value, cumulative count) pairs for one checkpoint."""
        vals = self.values[checkpoint]
        return [(v, i + 1) for i, v in enumerate(vals)]


@dataclass
class BenchmarkResult:
    spec: BenchmarkSpec
    traces: list
    tables: dict  # metric name -> CdfTable
    primary_metric: str


def _make_optimizer(spec, run_seed):
    options = dict(spec.optimizer_options)
    name = spec.optimizer
    if name == "nft":
        return NftOptimizer(variant="single", max_steps=spec.budget,
                            seed=run_seed, **options)
    if name == "nft-multi":
        options.setdefault("subset_size", 2)
        return NftOptimizer(variant="multi", max_steps=spec.budget,
                            seed=run_seed, **options)
    if name == "nft-shared":
        return NftOptimizer(variant="shared", max_steps=spec.budget,
                            seed=run_seed, **options)
    if name == "spsa":
        return SpsaOptimizer(max_steps=spec.budget, seed=run_seed, **options)
    if name == "nelder-mead":
        return NelderMeadOptimizer(max_steps=spec.budget, **options)
    return GradientDescentOptimizer(max_steps=spec.budget, **options)


def run_benchmark(spec):
    """Run the configured optimizer fleet; returns traces plus CDF tables."""
    seed_seq = np.random.SeedSequence(spec.seed)
    task_seed, *run_seeds = seed_seq.spawn(spec.runs + 1)

    if spec.task == "fidelity":
        circuit, cost_spec = make_task1(spec.ansatz, np.random.default_rng(task_seed))
        metrics = {
            "fidelity": lambda params: -fidelity_cost_exact(circuit, params, cost_spec)
        }
        primary = "fidelity"
        vqe_task = None
    else:
        circuit = build_ansatz(spec.ansatz)
        vqe_task = make_task2(spec.ansatz, spec.hamiltonian_file)
        cost_spec = vqe_task.cost_spec

        def energy_difference(params):
            return cost_exact(circuit, params, cost_spec) - vqe_task.ground_energy

        def ground_state_fidelity(params):
            state = run_circuit(circuit, params)
            return float(abs(vqe_task.ground_state.overlap(state)) ** 2)

        metrics = {
            "energy_difference": energy_difference,
            "ground_state_fidelity": ground_state_fidelity,
        }
        primary = "energy_difference"

    traces = []
    checkpoint_values = {m: {c: [] for c in spec.checkpoints} for m in metrics}
    for run_seed in run_seeds:
        rng = np.random.default_rng(run_seed)
        initial = rng.uniform(0.0, 2.0 * np.pi, circuit.num_params)
        cost = CircuitCost(circuit, cost_spec, shots=spec.shots, rng=rng)
        optimizer = _make_optimizer(spec, rng.integers(2**63))
        optimizer.fit(cost, initial)
        traces.append(optimizer.trace_)
        for name, fn in metrics.items():
            for checkpoint in spec.checkpoints:
                point = optimizer.trace_.point_at_step(checkpoint)
                checkpoint_values[name][checkpoint].append(fn(point.params))

    tables = {
        name: CdfTable(name, {c: sorted(vals) for c, vals in per_cp.items()})
        for name, per_cp in checkpoint_values.items()
    }
    return BenchmarkResult(spec, traces, tables, primary)


def emit_results(result, out_dir):
    """Write manifest.json, runs/<k>.csv, and cdf_<checkpoint>.csv files."""
    os.makedirs(out_dir, exist_ok=True)
    runs_dir = os.path.join(out_dir, "runs")
    os.makedirs(runs_dir, exist_ok=True)

    manifest = {
        "spec": result.spec.to_dict(),
        "primary_metric": result.primary_metric,
        "metrics": sorted(result.tables),
        "completed_runs": len(result.traces),
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)

    primary = result.tables.get(result.primary_metric)
    for k, trace in enumerate(result.traces):
        path = os.path.join(runs_dir, f"{k}.csv")
        try:
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["step", "cost_estimate", "exact_metric"])
                for point in trace:
                    exact = "" if point.exact_cost is None else repr(point.exact_cost)
                    writer.writerow([point.step, repr(point.cost_estimate), exact])
        except OSError as exc:
            raise OSError(f"failed writing run trace {path}: {exc}") from exc

    checkpoints = result.spec.checkpoints if result.tables else ()
    for checkpoint in checkpoints:
        path = os.path.join(out_dir, f"cdf_{checkpoint}.csv")
        try:
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["metric", "value", "cumulative_count"])
                for name in sorted(result.tables):
                    for value, count in result.tables[name].cumulative(checkpoint):
                        writer.writerow([name, repr(float(value)), count])
        except OSError as exc:
            raise OSError(f"failed writing CDF table {path}: {exc}") from exc


def read_cdf_file(path):
    """Read one cdf_<checkpoint>.csv back into {metric: sorted values}."""
    tables = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            tables.setdefault(row["metric"], []).append(float(row["value"]))
    return tables
