"""Quadratic MSE surface and the deterministic solvers that minimise it.

The surface is ``J(w) = sigma_d2 - 2 w.p + w.R.w``. Everything here works on
an exact (or sample-estimated) ``CorrelationModel``; the stochastic
approximations live in :mod:`adaptfir.adapt`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, NumericFailureError, SingularMatrixError
from .signal import as_sequence, tap_matrix

DIVERGENCE_CEILING = 1e12
PIVOT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class CorrelationModel:
    """Autocorrelation ``R``, cross-correlation ``p`` and desired power ``sigma_d2``."""

    R: np.ndarray
    p: np.ndarray
    sigma_d2: float

    def __post_init__(self):
        R = np.array(self.R, dtype=np.float64)
        p = np.array(self.p, dtype=np.float64).reshape(-1)
        if R.ndim != 2 or R.shape[0] != R.shape[1] or R.shape[0] != p.size:
            raise InvalidArgumentError(f"R must be N x N and p length N; got {R.shape} and {p.shape}")
        if p.size < 1:
            raise InvalidArgumentError("model dimension must be >= 1")
        if not (np.all(np.isfinite(R)) and np.all(np.isfinite(p)) and np.isfinite(self.sigma_d2)):
            raise InvalidArgumentError("model entries must be finite")
        if np.any(np.abs(R - R.T) > 1e-12 * np.maximum(1.0, np.abs(R))):
            raise InvalidArgumentError("R is not symmetric")
        if self.sigma_d2 < 0:
            raise InvalidArgumentError(f"sigma_d2 must be >= 0, got {self.sigma_d2}")
        R.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "sigma_d2", float(self.sigma_d2))

    @property
    def N(self) -> int:
        return int(self.p.size)


@dataclass
class Trajectory:
    """Iterates of a deterministic solver, ``weights[0]`` being the start point."""

    weights: list[np.ndarray] = field(default_factory=list)
    costs: list[float] = field(default_factory=list)
    diverged: bool = False

    def __len__(self):
        return len(self.weights)

    @property
    def final(self) -> np.ndarray:
        return self.weights[-1]


def _check_w(model: CorrelationModel, w) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64).reshape(-1)
    if w.size != model.N:
        raise InvalidArgumentError(f"weight vector has length {w.size}, model has N={model.N}")
    return w


def estimate_correlation(x, d, taps: int) -> CorrelationModel:
    """Sample-average estimate of ``(R, p, sigma_d2)`` over every instant of ``x``.

    Uses the biased 1/M normalisation and zero pre-history, which keeps ``R``
    positive semidefinite.
    """
    x = as_sequence(x, "x")
    d = as_sequence(d, "d")
    if x.size != d.size:
        raise InvalidArgumentError(f"x and d lengths differ ({x.size} vs {d.size})")
    if taps < 1 or x.size < taps:
        raise InvalidArgumentError(f"need 1 <= taps <= len(x); got taps={taps}, len(x)={x.size}")
    M = x.size
    X = tap_matrix(x, taps)
    R = X.T @ X / M
    R = 0.5 * (R + R.T)
    p = X.T @ d / M
    return CorrelationModel(R, p, float(d @ d) / M)


def cost(model: CorrelationModel, w) -> float:
    w = _check_w(model, w)
    return float(model.sigma_d2 - 2.0 * (w @ model.p) + w @ model.R @ w)


def gradient(model: CorrelationModel, w) -> np.ndarray:
    w = _check_w(model, w)
    return -2.0 * model.p + 2.0 * (model.R @ w)


def hessian(model: CorrelationModel) -> np.ndarray:
    return 2.0 * model.R


def solve_linear(A, b) -> np.ndarray:
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting.

    Raises
    ------
    SingularMatrixError
        If a pivot is smaller than ``1e-12`` times the largest magnitude in
        its original row.
    """
    A = np.array(A, dtype=np.float64)
    x = np.array(b, dtype=np.float64).reshape(-1)
    n = x.size
    if A.shape != (n, n):
        raise InvalidArgumentError(f"shape mismatch: A {A.shape}, b ({n},)")
    row_scale = np.max(np.abs(A), axis=1)
    for col in range(n):
        piv = col + int(np.argmax(np.abs(A[col:, col])))
        if abs(A[piv, col]) <= PIVOT_TOLERANCE * max(row_scale[piv], np.finfo(float).tiny):
            raise SingularMatrixError(col, float(A[piv, col]))
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
            x[[col, piv]] = x[[piv, col]]
            row_scale[[col, piv]] = row_scale[[piv, col]]
        factors = A[col + 1 :, col] / A[col, col]
        A[col + 1 :, col:] -= np.outer(factors, A[col, col:])
        x[col + 1 :] -= factors * x[col]
    for row in range(n - 1, -1, -1):
        x[row] = (x[row] - A[row, row + 1 :] @ x[row + 1 :]) / A[row, row]
    return x


def wiener_solve(model: CorrelationModel) -> np.ndarray:
    """Optimal weights ``R^-1 p``, by direct solve (no explicit inverse)."""
    return solve_linear(model.R, model.p)


def newton_step(model: CorrelationModel, w) -> np.ndarray:
    """One Newton update ``w - H^-1 grad J(w)``.

    On the quadratic surface this lands on the Wiener solution from any start.
    """
    w = _check_w(model, w)
    return w - solve_linear(hessian(model), gradient(model, w))


def sda_run(model: CorrelationModel, w0, mu: float, iterations: int) -> Trajectory:
    """Steepest descent ``w <- w + mu (p - R w)`` for a fixed number of steps.

    The trajectory stops early, flagged ``diverged``, at the first iterate whose
    norm exceeds ``DIVERGENCE_CEILING``; that iterate is kept as the last entry.
    """
    if not mu > 0:
        raise InvalidArgumentError(f"mu must be > 0, got {mu}")
    if iterations < 1:
        raise InvalidArgumentError(f"iterations must be >= 1, got {iterations}")
    w = _check_w(model, w0).copy()
    traj = Trajectory([w], [cost(model, w)])
    for _ in range(iterations):
        w = w + mu * (model.p - model.R @ w)
        traj.weights.append(w)
        traj.costs.append(cost(model, w))
        if np.linalg.norm(w) > DIVERGENCE_CEILING:
            traj.diverged = True
            break
    return traj


def max_eigenvalue(R, rtol: float = 1e-9, max_iter: int = 10_000) -> float:
    """Largest eigenvalue of a symmetric PSD matrix by power iteration.

    Starts from the all-ones vector and stops once successive Rayleigh
    quotients agree to ``rtol``.
    """
    R = np.asarray(R, dtype=np.float64)
    if R.ndim != 2 or R.shape[0] != R.shape[1] or R.shape[0] < 1:
        raise InvalidArgumentError(f"R must be a non-empty square matrix, got shape {R.shape}")
    if R.shape[0] == 1:
        return float(R[0, 0])
    v = np.ones(R.shape[0]) / np.sqrt(R.shape[0])
    lam = float(v @ R @ v)
    for _ in range(max_iter):
        u = R @ v
        norm = np.linalg.norm(u)
        if norm == 0.0:
            return 0.0
        v = u / norm
        new = float(v @ R @ v)
        if abs(new - lam) <= rtol * abs(new):
            return new
        lam = new
    raise NumericFailureError(f"power iteration did not converge in {max_iter} iterations", lam)
