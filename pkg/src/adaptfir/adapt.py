"""Stochastic adaptive algorithms: sample-by-sample LMS and block transform-domain LMS."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dft import dft, idft
from .errors import InvalidArgumentError, NumericFailureError
from .estimation import DIVERGENCE_CEILING
from .signal import as_sequence


@dataclass(frozen=True)
class LmsConfig:
    mu: float
    taps: int

    def __post_init__(self):
        if not (np.isfinite(self.mu) and self.mu > 0):
            raise InvalidArgumentError(f"mu must be finite and > 0, got {self.mu}")
        if self.taps < 1:
            raise InvalidArgumentError(f"taps must be >= 1, got {self.taps}")


@dataclass(frozen=True)
class LmsState:
    w: tuple[float, ...]
    n: int = 0
    diverged: bool = False

    @classmethod
    def zeros(cls, taps: int) -> LmsState:
        return cls((0.0,) * taps)


@dataclass
class RunTrace:
    """Per-iteration record of an adaptive run.

    ``weight_history[n]`` is the weight vector in effect *before* update ``n``,
    so it holds one more row than ``y``. For transform-domain runs the rows are
    complex per-bin weights, one per block rather than one per sample.
    """

    y: np.ndarray
    e: np.ndarray
    squared_error: np.ndarray
    weight_history: np.ndarray
    diverged: bool = False
    mu: float = float("nan")
    block_length: int | None = None
    dropped_samples: int = 0

    @property
    def iterations(self) -> int:
        return int(self.e.size)

    @property
    def final_weights(self) -> np.ndarray:
        return self.weight_history[-1]


def _lms_update(w, x_vec, d, mu):
    # Counted work: N + 1 + N = 2N+1 multiplications, (N-1) + 1 + N = 2N additions.
    y = w[0] * x_vec[0]
    for i in range(1, len(w)):
        y = y + w[i] * x_vec[i]
    e = d - y
    g = mu * e
    return [wi + g * xi for wi, xi in zip(w, x_vec)], y, e


def _exceeds_ceiling(w) -> bool:
    return any(not abs(wi) <= DIVERGENCE_CEILING for wi in w)


def lms_step(state: LmsState, x_vec, d: float, config: LmsConfig):
    """One LMS iteration: ``y = w.x``, ``e = d - y``, ``w' = w + (mu e) x``.

    Returns ``(new_state, y, e)``.
    """
    x_vec = [float(v) for v in np.asarray(x_vec, dtype=np.float64).reshape(-1)]
    if len(x_vec) != config.taps or len(state.w) != config.taps:
        raise InvalidArgumentError(
            f"dimension mismatch: taps={config.taps}, len(w)={len(state.w)}, len(x_vec)={len(x_vec)}"
        )
    w, y, e = _lms_update([float(v) for v in state.w], x_vec, float(d), config.mu)
    new = LmsState(tuple(w), state.n + 1, state.diverged or _exceeds_ceiling(w))
    return new, y, e


def lms_run(x, d, config: LmsConfig, w0=None) -> RunTrace:
    """Run LMS over every sample of ``x``/``d`` with zero pre-history.

    If an update pushes any weight beyond the divergence ceiling the run stops
    there: that update is recorded, the trace is truncated and flagged.
    """
    x = as_sequence(x, "x")
    d = as_sequence(d, "d")
    if x.size != d.size or x.size < 1:
        raise InvalidArgumentError(f"x and d must be non-empty and equal length ({x.size} vs {d.size})")
    N = config.taps
    w = [0.0] * N if w0 is None else [float(v) for v in np.asarray(w0, dtype=np.float64).reshape(-1)]
    if len(w) != N:
        raise InvalidArgumentError(f"w0 has length {len(w)}, expected {N}")
    mu = config.mu
    xs = x.tolist()
    ds = d.tolist()
    line = [0.0] * N
    history = [w]
    ys, es = [], []
    diverged = False
    for n in range(len(xs)):
        line = [xs[n]] + line[:-1]
        w, y, e = _lms_update(w, line, ds[n], mu)
        history.append(w)
        ys.append(y)
        es.append(e)
        if _exceeds_ceiling(w):
            diverged = True
            break
    e_arr = np.array(es)
    return RunTrace(
        y=np.array(ys),
        e=e_arr,
        squared_error=e_arr * e_arr,
        weight_history=np.array(history),
        diverged=diverged,
        mu=mu,
    )


def stability_bound(x, taps: int) -> float:
    """Practical step-size limit ``2 / mean_n ||x_vec(n)||^2``."""
    x = as_sequence(x)
    if taps < 1 or x.size < taps:
        raise InvalidArgumentError(f"need 1 <= taps <= len(x); got taps={taps}, len(x)={x.size}")
    sq = x * x
    # ||x_vec(n)||^2 summed over n, with zero pre-history
    total = sum(float(np.sum(sq[: x.size - k])) for k in range(taps))
    power = total / x.size
    if power == 0.0:
        raise ZeroDivisionError("input signal is identically zero; stability bound is infinite")
    return 2.0 / power


def circular_block_filter(g, x, block_length: int) -> np.ndarray:
    """Filter each length-L block of ``x`` by circular convolution with ``g``.

    ``g`` is zero-padded to ``block_length``. This is the plant model under
    which transform-domain LMS has an exact per-bin optimum ``dft(g)``.
    """
    x = as_sequence(x)
    L = int(block_length)
    g = np.asarray(g, dtype=np.float64).reshape(-1)
    if L < 1 or g.size > L:
        raise InvalidArgumentError(f"need 1 <= len(g) <= block_length; got {g.size}, {L}")
    gp = np.zeros(L)
    gp[: g.size] = g
    blocks = x[: (x.size // L) * L].reshape(-1, L)
    out = np.zeros_like(blocks)
    for k, gk in enumerate(gp):
        if gk != 0.0:
            out += gk * np.roll(blocks, k, axis=1)
    return out.reshape(-1)


def tdlms_run(x, d, block_length: int, mu: float, imag_tol: float = 1e-6) -> RunTrace:
    """Transform-domain (block DFT) LMS with one weight update per block.

    Each bin ``k`` runs its own complex LMS: ``Y = W U``, ``E = D - Y``,
    ``W <- W + mu E conj(U)``. Multiplying spectra models *circular*
    convolution within a block; no overlap-save correction is applied.
    Samples past the last full block are dropped (see ``dropped_samples``).
    """
    L = int(block_length)
    if L < 1:
        raise InvalidArgumentError(f"block length must be >= 1, got {block_length}")
    if not (np.isfinite(mu) and mu > 0):
        raise InvalidArgumentError(f"mu must be finite and > 0, got {mu}")
    x = as_sequence(x, "x")
    d = as_sequence(d, "d")
    if x.size != d.size:
        raise InvalidArgumentError(f"x and d lengths differ ({x.size} vs {d.size})")
    n_blocks = x.size // L
    if n_blocks < 1:
        raise InvalidArgumentError(f"signal of length {x.size} holds no full block of {L}")
    W = np.zeros(L, dtype=np.complex128)
    history = [W]
    ys, es = [], []
    diverged = False
    for i in range(n_blocks):
        u_blk = x[i * L : (i + 1) * L]
        d_blk = d[i * L : (i + 1) * L]
        U = dft(u_blk)
        D = dft(d_blk)
        Y = W * U
        E = D - Y
        y_c = idft(Y)
        scale = max(1.0, float(np.max(np.abs(y_c))))
        if np.max(np.abs(y_c.imag)) > imag_tol * scale:
            raise NumericFailureError(f"block {i}: output has imaginary residue {np.max(np.abs(y_c.imag)):.3g}")
        y_blk = y_c.real
        ys.append(y_blk)
        es.append(d_blk - y_blk)
        W = W + mu * E * np.conj(U)
        history.append(W)
        if np.any(np.abs(W) > DIVERGENCE_CEILING):
            diverged = True
            break
    y = np.concatenate(ys)
    e = np.concatenate(es)
    return RunTrace(
        y=y,
        e=e,
        squared_error=e * e,
        weight_history=np.array(history),
        diverged=diverged,
        mu=float(mu),
        block_length=L,
        dropped_samples=x.size - n_blocks * L,
    )
