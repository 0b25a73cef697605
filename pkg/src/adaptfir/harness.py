"""System-identification experiment runner and result serialisation.

A run draws seeded white noise, passes it through the plant to get the
desired signal, adapts a filter from zero weights, and condenses the outcome
into a :class:`SummaryRow`. Only the adaptation loop is timed.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .adapt import LmsConfig, RunTrace, lms_run, tdlms_run
from .errors import InvalidArgumentError
from .estimation import Trajectory, estimate_correlation, newton_step, sda_run
from .metrics import accuracy, convergence_iteration, mse
from .signal import FirSystem, add_noise, fir_filter, generate_white_gaussian, tap_matrix

log = logging.getLogger(__name__)

ALGORITHMS = ("lms", "sda", "newton", "tdlms")

# Step sizes of the published sweep (first column of the results table).
PAPER_MU_SWEEP = (
    0.001, 0.002, 0.003, 0.004, 0.005, 0.006, 0.007, 0.008, 0.009,
    0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09,
    0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0,
)


@dataclass(frozen=True)
class ExperimentSpec:
    plant: FirSystem = field(default_factory=lambda: FirSystem([1.0, 2.0]))
    taps: int = 2
    mu_list: tuple[float, ...] = PAPER_MU_SWEEP
    iterations: int = 1000
    seeds: tuple[int, ...] = (1,)
    algorithm: str = "lms"
    block_length: int = 8
    noise_variance: float = 0.0
    tolerance: float = 0.01

    def __post_init__(self):
        if not isinstance(self.plant, FirSystem):
            object.__setattr__(self, "plant", FirSystem(self.plant))
        object.__setattr__(self, "mu_list", tuple(float(m) for m in self.mu_list))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if not self.mu_list:
            raise InvalidArgumentError("mu list is empty")
        if not all(np.isfinite(m) and m > 0 for m in self.mu_list):
            raise InvalidArgumentError(f"every mu must be finite and > 0, got {list(self.mu_list)}")
        if self.iterations < 1:
            raise InvalidArgumentError(f"iterations must be >= 1, got {self.iterations}")
        if self.taps < 1:
            raise InvalidArgumentError(f"taps must be >= 1, got {self.taps}")
        if not self.seeds:
            raise InvalidArgumentError("seed list is empty")
        if self.algorithm not in ALGORITHMS:
            raise InvalidArgumentError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.block_length < 1:
            raise InvalidArgumentError(f"block length must be >= 1, got {self.block_length}")
        if self.algorithm == "tdlms" and self.iterations < self.block_length:
            raise InvalidArgumentError(
                f"iterations ({self.iterations}) must cover at least one block of {self.block_length}"
            )
        if not self.noise_variance >= 0:
            raise InvalidArgumentError(f"noise variance must be >= 0, got {self.noise_variance}")
        if not self.tolerance > 0:
            raise InvalidArgumentError(f"tolerance must be > 0, got {self.tolerance}")


@dataclass
class SummaryRow:
    mu: float
    seed: int
    iterations: int
    mse: float
    final_weights: list[float]
    final_squared_error: float
    per_coefficient_convergence: list[int | None]
    combined_convergence: int | None
    accuracy_percent: float | None
    elapsed_seconds: float
    diverged: bool


def make_signals(spec: ExperimentSpec, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Excitation ``x`` and (optionally noisy) desired ``d`` for one run."""
    x = generate_white_gaussian(spec.iterations, seed)
    d = fir_filter(spec.plant, x)
    if spec.noise_variance > 0:
        d = add_noise(d, spec.noise_variance, seed)
    return x, d


def _trace_from_trajectory(traj: Trajectory, x: np.ndarray, d: np.ndarray, mu: float) -> RunTrace:
    # Iterate n filters sample n, mirroring the sample-by-sample LMS trace.
    W = np.array(traj.weights)
    X = tap_matrix(x, W.shape[1])[: W.shape[0] - 1]
    y = np.einsum("ij,ij->i", W[:-1], X)
    e = d[: y.size] - y
    return RunTrace(y=y, e=e, squared_error=e * e, weight_history=W, diverged=traj.diverged, mu=mu)


def _newton_trajectory(model, taps: int, iterations: int) -> Trajectory:
    w = np.zeros(taps)
    traj = Trajectory([w], [])
    for _ in range(iterations):
        w = newton_step(model, w)
        traj.weights.append(w)
    return traj


def run_single(spec: ExperimentSpec, mu: float, seed: int) -> tuple[SummaryRow, RunTrace]:
    x, d = make_signals(spec, seed)
    algo = spec.algorithm
    if algo == "lms":
        cfg = LmsConfig(mu, spec.taps)
        t0 = time.perf_counter()
        trace = lms_run(x, d, cfg)
        elapsed = time.perf_counter() - t0
    elif algo == "tdlms":
        t0 = time.perf_counter()
        trace = tdlms_run(x, d, spec.block_length, mu)
        elapsed = time.perf_counter() - t0
    else:
        model = estimate_correlation(x, d, spec.taps)
        t0 = time.perf_counter()
        if algo == "sda":
            traj = sda_run(model, np.zeros(spec.taps), mu, spec.iterations)
        else:
            traj = _newton_trajectory(model, spec.taps, spec.iterations)
        elapsed = time.perf_counter() - t0
        trace = _trace_from_trajectory(traj, x, d, mu)

    if algo == "tdlms":
        final = np.abs(trace.final_weights)
        n_coef = final.size
    else:
        final = trace.final_weights
        n_coef = spec.taps

    conv: list[int | None] = [None] * n_coef
    combined = None
    acc = None
    if not trace.diverged and algo != "tdlms":
        compare = [i for i in range(min(spec.taps, spec.plant.order)) if spec.plant.h[i] != 0]
        if compare:
            report = convergence_iteration(trace.weight_history, spec.plant, spec.tolerance, compare)
            for i, it in report.per_coefficient_iteration:
                conv[i] = it
            combined = report.combined_iteration
        if spec.taps == spec.plant.order and np.all(spec.plant.h != 0):
            acc = accuracy(final, spec.plant)

    row = SummaryRow(
        mu=float(mu),
        seed=int(seed),
        iterations=spec.iterations,
        mse=mse(trace.e),
        final_weights=[float(v) for v in final],
        final_squared_error=float(trace.squared_error[-1]),
        per_coefficient_convergence=conv,
        combined_convergence=combined,
        accuracy_percent=acc,
        elapsed_seconds=elapsed,
        diverged=bool(trace.diverged),
    )
    if row.diverged:
        log.info("run mu=%g seed=%d diverged after %d iterations", mu, seed, trace.iterations)
    return row, trace


def iter_sweep(spec: ExperimentSpec) -> Iterator[tuple[SummaryRow, RunTrace]]:
    """Yield ``(row, trace)`` for every (mu, seed) pair, ordered by mu then seed."""
    for mu in sorted(spec.mu_list):
        for seed in sorted(spec.seeds):
            yield run_single(spec, mu, seed)


def run_sweep(spec: ExperimentSpec) -> list[SummaryRow]:
    return [row for row, _ in iter_sweep(spec)]


# --- serialisation -------------------------------------------------------


def summary_header(n_weights: int) -> list[str]:
    return (
        ["mu", "seed", "iterations", "mse"]
        + [f"w_final_{i}" for i in range(n_weights)]
        + ["final_squared_error"]
        + [f"conv_iter_{i}" for i in range(n_weights)]
        + ["conv_combined", "accuracy_pct", "elapsed_s", "diverged"]
    )


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _row_values(row: SummaryRow) -> list:
    return (
        [row.mu, row.seed, row.iterations, row.mse]
        + list(row.final_weights)
        + [row.final_squared_error]
        + list(row.per_coefficient_convergence)
        + [row.combined_convergence, row.accuracy_percent, row.elapsed_seconds, row.diverged]
    )


def _weight_count(rows: Sequence[SummaryRow]) -> int:
    if not rows:
        raise InvalidArgumentError("no rows to emit")
    counts = {len(r.final_weights) for r in rows}
    if len(counts) != 1:
        raise InvalidArgumentError(f"rows disagree on weight count: {sorted(counts)}")
    return counts.pop()


def format_summary(rows: Sequence[SummaryRow], fmt: str = "csv") -> str:
    header = summary_header(_weight_count(rows))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in _row_values(row)])
        return buf.getvalue()
    if fmt == "json":
        records = [dict(zip(header, _row_values(row))) for row in rows]
        return json.dumps(records, indent=2) + "\n"
    raise InvalidArgumentError(f"unknown summary format {fmt!r}")


def _write_text(path, text: str) -> None:
    path = Path(path)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}", str(path)) from exc


def emit_summary(rows: Sequence[SummaryRow], fmt: str, path) -> Path:
    _write_text(path, format_summary(rows, fmt))
    return Path(path)


def _row_from_mapping(rec: dict, n: int) -> SummaryRow:
    def num(v, conv):
        if v is None or v == "":
            return None
        return conv(v)

    def flag(v):
        return v if isinstance(v, bool) else v == "true"

    return SummaryRow(
        mu=float(rec["mu"]),
        seed=int(rec["seed"]),
        iterations=int(rec["iterations"]),
        mse=float(rec["mse"]),
        final_weights=[float(rec[f"w_final_{i}"]) for i in range(n)],
        final_squared_error=float(rec["final_squared_error"]),
        per_coefficient_convergence=[num(rec[f"conv_iter_{i}"], int) for i in range(n)],
        combined_convergence=num(rec["conv_combined"], int),
        accuracy_percent=num(rec["accuracy_pct"], float),
        elapsed_seconds=float(rec["elapsed_s"]),
        diverged=flag(rec["diverged"]),
    )


def parse_summary(text: str, fmt: str = "csv") -> list[SummaryRow]:
    """Inverse of :func:`format_summary`."""
    if fmt == "json":
        records = json.loads(text)
    elif fmt == "csv":
        records = list(csv.DictReader(io.StringIO(text)))
    else:
        raise InvalidArgumentError(f"unknown summary format {fmt!r}")
    if not records:
        return []
    n = sum(1 for k in records[0] if k.startswith("w_final_"))
    return [_row_from_mapping(rec, n) for rec in records]


def read_summary(path, fmt: str | None = None) -> list[SummaryRow]:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    return parse_summary(path.read_text(), fmt)


def trace_table(trace: RunTrace) -> np.ndarray:
    """Weight rows aligned with samples: row n holds the weights used at sample n."""
    W = trace.weight_history
    if trace.block_length is not None:
        block_of = np.arange(trace.iterations) // trace.block_length
        return np.abs(W[block_of])
    return W[: trace.iterations]


def format_trace(trace: RunTrace) -> str:
    W = trace_table(trace)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "y", "e", "squared_error"] + [f"w_{i}" for i in range(W.shape[1])])
    for n in range(trace.iterations):
        writer.writerow(
            [n, _fmt(trace.y[n]), _fmt(trace.e[n]), _fmt(trace.squared_error[n])] + [_fmt(v) for v in W[n]]
        )
    return buf.getvalue()


def emit_trace(trace: RunTrace, path) -> Path:
    _write_text(path, format_trace(trace))
    return Path(path)


def read_trace(path) -> dict[str, np.ndarray]:
    """Load an emitted trace as column arrays (weights stacked under ``"w"``)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = np.array([[float(v) for v in rec] for rec in reader], dtype=np.float64).reshape(-1, len(header))
    cols = {name: data[:, i] for i, name in enumerate(header)}
    w_names = [h for h in header if h.startswith("w_")]
    return {
        "n": cols["n"].astype(int),
        "y": cols["y"],
        "e": cols["e"],
        "squared_error": cols["squared_error"],
        "w": np.column_stack([cols[h] for h in w_names]),
    }
