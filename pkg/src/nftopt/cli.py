"""`bench` command line interface for the optimizer benchmark harness."""

import argparse
import sys

import numpy as np

from .bench import (
    DEFAULT_CHECKPOINTS,
    OPTIMIZERS,
    BenchmarkSpec,
    emit_results,
    run_benchmark,
)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Run seeded optimizer fleets on the fidelity or VQE task "
                    "and emit per-run traces and CDF tables.",
    )
    parser.add_argument("--task", choices=["fidelity", "vqe"], default="fidelity")
    parser.add_argument("--qubits", type=int, default=5, metavar="R")
    parser.add_argument("--depth", type=int, default=9, metavar="D")
    parser.add_argument("--optimizer", choices=list(OPTIMIZERS), default="nft")
    shots = parser.add_mutually_exclusive_group()
    shots.add_argument("--shots", type=int, default=1024, metavar="N",
                       help="samples per cost estimation (default 1024)")
    shots.add_argument("--exact", action="store_true",
                       help="evaluate the cost exactly instead of sampling")
    parser.add_argument("--budget", type=int, default=8192, metavar="S",
                        help="step budget per run")
    parser.add_argument("--runs", type=int, default=100, metavar="K")
    parser.add_argument("--seed", type=int, default=0, metavar="M")
    parser.add_argument("--checkpoints", type=str,
                        default=",".join(str(c) for c in DEFAULT_CHECKPOINTS),
                        help="comma-separated step checkpoints")
    parser.add_argument("--hamiltonian", type=str, default=None, metavar="FILE",
                        help="Hamiltonian JSON for the vqe task "
                             "(default: built-in transverse-field Ising)")
    parser.add_argument("--out", type=str, required=True, metavar="DIR")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        checkpoints = [int(c) for c in args.checkpoints.split(",") if c.strip()]
        spec = BenchmarkSpec(
            task=args.task,
            qubits=args.qubits,
            depth=args.depth,
            optimizer=args.optimizer,
            shots=None if args.exact else args.shots,
            budget=args.budget,
            runs=args.runs,
            seed=args.seed,
            checkpoints=checkpoints,
            hamiltonian_file=args.hamiltonian,
        )
        result = run_benchmark(spec)
        emit_results(result, args.out)
    except (ValueError, OSError) as exc:
        print(f"bench: error: {exc}", file=sys.stderr)
        return 1

    table = result.tables[result.primary_metric]
    for checkpoint in spec.checkpoints:
        median = float(np.median(table.values[checkpoint]))
        print(f"step {checkpoint}: median {result.primary_metric} = {median:.6f}")
    print(f"results written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
