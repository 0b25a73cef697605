"""Excitation/desired signal generation and the tap-delay-line view.

Sequences are plain 1-D ``float64`` numpy arrays. Random streams come from
numpy's ``Generator`` with the PCG64 bit generator, seeded through
``SeedSequence``; normals are drawn with numpy's ziggurat transform. A given
``(n, seed)`` therefore yields bit-identical samples on any platform with
IEEE-754 doubles and the same numpy stream version.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

# Added to the seed entropy so measurement noise never reuses the excitation stream.
_NOISE_STREAM_KEY = 0x6E6F697365


def as_sequence(x, name: str = "x") -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite samples")
    return arr


@dataclass(frozen=True)
class FirSystem:
    """The unknown FIR plant, ``h[k]`` being the gain applied to ``x(n-k)``."""

    h: np.ndarray

    def __post_init__(self):
        h = as_sequence(self.h, "h")
        if h.size < 1:
            raise InvalidArgumentError("FIR system needs at least one coefficient")
        h.setflags(write=False)
        object.__setattr__(self, "h", h)

    @property
    def order(self) -> int:
        return int(self.h.size)


def _rng(entropy) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def generate_white_gaussian(n: int, seed: int) -> np.ndarray:
    """Draw ``n`` standard-normal samples from a generator keyed by ``seed``."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    return _rng(seed).standard_normal(n)


def fir_filter(system: FirSystem, x) -> np.ndarray:
    """Convolve ``x`` with the plant, keeping the first ``len(x)`` samples.

    Taps are accumulated in order k = 0, 1, ... so the result is bitwise equal
    to the textbook double loop ``y[n] += h[k] * x[n-k]``.
    """
    x = as_sequence(x)
    if x.size == 0:
        raise InvalidArgumentError("cannot filter an empty sequence")
    y = np.zeros_like(x)
    for k, hk in enumerate(system.h):
        if k >= x.size:
            break
        y[k:] += hk * x[: x.size - k]
    return y


def tap_vector(x, n: int, taps: int) -> np.ndarray:
    """Return ``[x(n), x(n-1), ..., x(n-taps+1)]`` with zeros before the start."""
    x = np.asarray(x, dtype=np.float64)
    if taps < 1:
        raise InvalidArgumentError(f"taps must be >= 1, got {taps}")
    if not 0 <= n < x.size:
        raise InvalidArgumentError(f"index n={n} outside [0, {x.size})")
    out = np.zeros(taps)
    avail = min(taps, n + 1)
    out[:avail] = x[n::-1][:avail]
    return out


def tap_matrix(x, taps: int) -> np.ndarray:
    """Stack every regressor of ``x`` as rows: row n is ``tap_vector(x, n, taps)``."""
    x = np.asarray(x, dtype=np.float64)
    X = np.zeros((x.size, taps))
    for k in range(min(taps, x.size)):
        X[k:, k] = x[: x.size - k]
    return X


def add_noise(x, variance: float, seed: int) -> np.ndarray:
    """Add zero-mean Gaussian noise of the given variance to ``x``."""
    if not variance >= 0:
        raise InvalidArgumentError(f"noise variance must be >= 0, got {variance}")
    x = as_sequence(x)
    if variance == 0:
        return x.copy()
    noise = _rng([seed, _NOISE_STREAM_KEY]).standard_normal(x.size)
    return x + np.sqrt(variance) * noise
