"""Closed-form sinusoidal coordinate descent for parameterized quantum circuits.

Includes a dense state-vector simulator, Pauli-sum observables, shot-based
cost estimation with global step counting, the sequential minimal optimizer
in single/multi/shared-parameter variants, baseline optimizers, and a
benchmark harness with a `bench` CLI.
"""

from .baselines import (
    GradientDescentOptimizer,
    NelderMeadOptimizer,
    SpsaOptimizer,
    param_shift_gradient,
)
from .bench import (
    AnsatzSpec,
    BenchmarkSpec,
    CdfTable,
    build_ansatz,
    emit_results,
    make_task1,
    make_task2,
    run_benchmark,
    transverse_field_ising,
)
from .circuits import (
    Gate,
    ParameterizedCircuit,
    StateVector,
    adjoint_compose,
    apply_gate,
    load_circuit,
    run_circuit,
    save_circuit,
)
from .nft import NftOptimizer
from .observables import (
    CostSpec,
    FidelityCostSpec,
    Observable,
    PauliString,
    cost_exact,
    exact_expectation,
    fidelity_cost_exact,
    ground_truth,
    load_observable,
    save_observable,
)
from .sampling import (
    CircuitCost,
    FunctionCost,
    ShotConfig,
    StepCounter,
    estimate_cost,
    exact_cost_counted,
    sample_bitstrings,
)
from .trace import RunTrace, TracePoint
from .trigmodels import (
    FourierModel,
    SineModel,
    TrigTensorModel,
    fit_fourier,
    fit_sine_three_points,
    fit_trig_tensor,
    minimize_fourier,
    minimize_trig_tensor,
    sine_argmin,
)
from .validation import canonicalize_angle

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec",
    "BenchmarkSpec",
    "CdfTable",
    "CircuitCost",
    "CostSpec",
    "FidelityCostSpec",
    "FourierModel",
    "FunctionCost",
    "Gate",
    "GradientDescentOptimizer",
    "NelderMeadOptimizer",
    "NftOptimizer",
    "Observable",
    "ParameterizedCircuit",
    "PauliString",
    "RunTrace",
    "ShotConfig",
    "SineModel",
    "SpsaOptimizer",
    "StateVector",
    "StepCounter",
    "TracePoint",
    "TrigTensorModel",
    "adjoint_compose",
    "apply_gate",
    "build_ansatz",
    "canonicalize_angle",
    "cost_exact",
    "emit_results",
    "estimate_cost",
    "exact_cost_counted",
    "exact_expectation",
    "fidelity_cost_exact",
    "fit_fourier",
    "fit_sine_three_points",
    "fit_trig_tensor",
    "ground_truth",
    "load_circuit",
    "load_observable",
    "make_task1",
    "make_task2",
    "minimize_fourier",
    "minimize_trig_tensor",
    "param_shift_gradient",
    "run_benchmark",
    "run_circuit",
    "sample_bitstrings",
    "save_circuit",
    "save_observable",
    "sine_argmin",
    "transverse_field_ising",
]
