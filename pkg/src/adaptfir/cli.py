"""Command-line entry point: ``adaptfir [flags]`` runs a step-size sweep."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .errors import InvalidArgumentError, NumericFailureError, SingularMatrixError, UndefinedMisadjustmentError
from .harness import ALGORITHMS, PAPER_MU_SWEEP, ExperimentSpec, emit_trace, format_summary, iter_sweep

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


def _float_list(positive: bool = False, allow_zero: bool = True):
    def parse(text: str) -> list[float]:
        try:
            vals = [float(t) for t in text.split(",") if t.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"malformed number list {text!r}")
        if not vals:
            raise argparse.ArgumentTypeError("empty list")
        if positive and not all(v > 0 for v in vals):
            raise argparse.ArgumentTypeError(f"values must be > 0, got {text!r}")
        if not allow_zero and any(v == 0 for v in vals):
            raise argparse.ArgumentTypeError(f"values must be non-zero, got {text!r}")
        return vals

    return parse


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed integer list {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _pos_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed integer {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _nonneg_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number {text!r}")
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return v


def _pos_float(text: str) -> float:
    v = _nonneg_float(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="adaptfir",
        description="Identify an FIR plant from white-noise excitation across a step-size sweep.",
    )
    p.add_argument("--plant", type=_float_list(), default=[1.0, 2.0], help="plant coefficients (default 1,2)")
    p.add_argument("--taps", type=_pos_int, default=2, help="adaptive filter length (default 2)")
    p.add_argument(
        "--mu", type=_float_list(positive=True), default=list(PAPER_MU_SWEEP), help="step sizes (default: full sweep)"
    )
    p.add_argument("--iterations", type=_pos_int, default=1000)
    p.add_argument("--seeds", type=_int_list, default=[1])
    p.add_argument("--algorithm", choices=ALGORITHMS, default="lms")
    p.add_argument("--block-length", type=_pos_int, default=8, help="tdlms block length")
    p.add_argument("--noise-variance", type=_nonneg_float, default=0.0)
    p.add_argument("--tolerance", type=_pos_float, default=0.01, help="relative convergence band")
    p.add_argument("--out", type=Path, default=None, help="summary file (default: stdout)")
    p.add_argument("--trace-dir", type=Path, default=None, help="write one trace CSV per run here")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def trace_filename(algorithm: str, mu: float, seed: int) -> str:
    return f"trace_{algorithm}_mu{mu:g}_seed{seed}.csv"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    prog = parser.prog
    try:
        spec = ExperimentSpec(
            plant=args.plant,
            taps=args.taps,
            mu_list=args.mu,
            iterations=args.iterations,
            seeds=args.seeds,
            algorithm=args.algorithm,
            block_length=args.block_length,
            noise_variance=args.noise_variance,
            tolerance=args.tolerance,
        )
        if args.trace_dir is not None:
            args.trace_dir.mkdir(parents=True, exist_ok=True)
        rows = []
        for row, trace in iter_sweep(spec):
            rows.append(row)
            if args.trace_dir is not None:
                emit_trace(trace, args.trace_dir / trace_filename(spec.algorithm, row.mu, row.seed))
        text = format_summary(rows, args.format)
        if args.out is None:
            sys.stdout.write(text)
        else:
            try:
                args.out.write_text(text)
            except OSError as exc:
                raise OSError(exc.errno, f"cannot write {args.out}: {exc.strerror}", str(args.out)) from exc
    except InvalidArgumentError as exc:
        print(f"{prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularMatrixError, NumericFailureError, UndefinedMisadjustmentError, ZeroDivisionError) as exc:
        print(f"{prog}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"{prog}: I/O error: {exc.strerror or exc} ({exc.filename})", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
