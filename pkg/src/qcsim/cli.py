"""``qcsim-bench`` command line.

Exit status: 0 success, 2 configuration error, 3 correctness-check failure,
4 capability error (e.g. dense backend asked for too many qubits).
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .bench import BACKENDS, EXPERIMENTS, BenchConfig, parse_range, run, write
from .errors import CapabilityError, CorrectnessError, HamiltonianParseError, InputError, NumericalError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CORRECTNESS = 3
EXIT_CAPABILITY = 4


def _range(text: str) -> tuple[int, int]:
    try:
        return parse_range(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qcsim-bench",
        description="Run a simulator benchmark and print a CSV or JSON table.",
    )
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--qubits", type=_range, metavar="A..B", help="inclusive width range")
    p.add_argument("--backend", choices=BACKENDS, default="auto")
    p.add_argument("--max-bond-dim", type=int, metavar="K")
    p.add_argument("--trunc-eps", type=float, metavar="E")
    p.add_argument("--steps", type=int, default=100, metavar="N", help="Trotter steps (xyz)")
    p.add_argument("--time", type=float, default=1.0, metavar="T", help="total evolution time (xyz)")
    p.add_argument("--layers", type=_range, default=(3, 10), metavar="L..M", help="ansatz depths (vqe-h2)")
    p.add_argument("--max-iter", type=int, default=350, metavar="N", help="Adam iteration limit (vqe-h2)")
    p.add_argument("--hamiltonian", metavar="PATH", help="Pauli-sum file replacing the bundled H2 data")
    p.add_argument("--seed", type=int, default=7, metavar="S")
    p.add_argument("--reps", type=int, default=1, metavar="R", help="timing repetitions, best is kept")
    p.add_argument("--out", metavar="PATH", help="write the table here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = BenchConfig(
            experiment=args.experiment,
            qubits=args.qubits,
            backend=args.backend,
            max_bond_dim=args.max_bond_dim,
            trunc_eps=args.trunc_eps,
            steps=args.steps,
            time=args.time,
            layers=args.layers,
            seed=args.seed,
            reps=args.reps,
            max_iter=args.max_iter,
            hamiltonian=args.hamiltonian,
        )
        result = run(config)
    except (InputError, HamiltonianParseError, ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except (CorrectnessError, NumericalError) as exc:
        print(f"correctness check failed: {exc}", file=sys.stderr)
        return EXIT_CORRECTNESS

    text = write(result, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    if result.failures:
        for msg in result.failures:
            print(f"correctness check failed: {msg}", file=sys.stderr)
        return EXIT_CORRECTNESS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
