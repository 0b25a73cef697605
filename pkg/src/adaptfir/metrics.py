"""Error and identification metrics reported for each run."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, UndefinedMisadjustmentError
from .signal import FirSystem

MISADJUSTMENT_EPS = 1e-12


@dataclass(frozen=True)
class ConvergenceReport:
    per_coefficient_iteration: tuple[tuple[int, int | None], ...]
    combined_iteration: int | None
    tolerance: float = 0.01

    @property
    def iterations(self) -> list[int | None]:
        return [it for _, it in self.per_coefficient_iteration]


def mse(e) -> float:
    e = np.asarray(e, dtype=np.float64).reshape(-1)
    if e.size == 0:
        raise InvalidArgumentError("MSE of an empty sequence is undefined")
    return float(np.mean(e * e))


def steady_state_mse(trace, window: int) -> float:
    """Mean squared error over the last ``window`` iterations of a trace."""
    sq = np.asarray(trace.squared_error)
    if not 1 <= window <= sq.size:
        raise InvalidArgumentError(f"window must lie in [1, {sq.size}], got {window}")
    return float(np.mean(sq[-window:]))


def misadjustment(j_ss: float, j_min: float, eps: float = MISADJUSTMENT_EPS) -> float:
    """Relative excess MSE ``(j_ss - j_min) / j_min``."""
    if not j_min > eps:
        raise UndefinedMisadjustmentError(
            f"minimum MSE {j_min!r} is not above {eps!r}; misadjustment is undefined for a noiseless plant"
        )
    if j_ss < 0:
        raise InvalidArgumentError(f"steady-state MSE must be >= 0, got {j_ss}")
    return (j_ss - j_min) / j_min


def convergence_iteration(weight_history, h: FirSystem, tol: float = 0.01, positions=None) -> ConvergenceReport:
    """Iteration from which each coefficient stays within ``tol * |h_i|`` of ``h_i``.

    Entry must be sustained to the end of the history; a coefficient that
    leaves the band again is reported from its final re-entry, or ``None`` if
    it is outside the band at the end. ``positions`` restricts the comparison
    to selected coefficient indices.
    """
    if not tol > 0:
        raise InvalidArgumentError(f"tolerance must be > 0, got {tol}")
    W = np.asarray(weight_history, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] < 1:
        raise InvalidArgumentError(f"weight history must be a non-empty 2-D array, got shape {W.shape}")
    width = min(W.shape[1], h.order)
    positions = range(width) if positions is None else list(positions)
    if any(not 0 <= i < width for i in positions):
        raise InvalidArgumentError(f"positions {list(positions)} fall outside the {width} comparable coefficients")
    per = []
    for i in positions:
        hi = h.h[i]
        if hi == 0:
            raise InvalidArgumentError(f"h[{i}] is zero; relative tolerance undefined")
        outside = np.flatnonzero(~(np.abs(W[:, i] - hi) <= tol * abs(hi)))
        if outside.size == 0:
            per.append((i, 0))
        elif outside[-1] == W.shape[0] - 1:
            per.append((i, None))
        else:
            per.append((i, int(outside[-1]) + 1))
    its = [it for _, it in per]
    combined = max(its) if its and all(it is not None for it in its) else None
    return ConvergenceReport(tuple(per), combined, tol)


def accuracy(w_final, h: FirSystem) -> float:
    """Mean per-coefficient relative accuracy in percent: ``100 * mean(1 - |w-h|/|h|)``."""
    w = np.asarray(w_final, dtype=np.float64).reshape(-1)
    if w.size != h.order:
        raise InvalidArgumentError(f"weight length {w.size} differs from plant order {h.order}")
    if np.any(h.h == 0):
        raise InvalidArgumentError("accuracy is undefined for a plant with zero coefficients")
    return float(100.0 * np.mean(1.0 - np.abs(w - h.h) / np.abs(h.h)))
