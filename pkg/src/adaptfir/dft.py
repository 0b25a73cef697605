"""Discrete Fourier transform: iterative radix-2 FFT, direct sum fallback."""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _bit_reverse_permutation(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


def _fft_radix2(a: np.ndarray) -> np.ndarray:
    n = a.size
    a = a[_bit_reverse_permutation(n)]
    half = 1
    while half < n:
        twiddle = np.exp(-2j * np.pi * np.arange(half) / (2 * half))
        a = a.reshape(-1, 2 * half)
        even = a[:, :half].copy()
        odd = a[:, half:] * twiddle
        a[:, :half] = even + odd
        a[:, half:] = even - odd
        a = a.reshape(-1)
        half *= 2
    return a


def _dft_direct(a: np.ndarray) -> np.ndarray:
    n = a.size
    k = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return kernel @ a


def dft(block) -> np.ndarray:
    """Forward DFT ``X[k] = sum_n x[n] exp(-2j pi k n / L)``."""
    a = np.asarray(block, dtype=np.complex128).reshape(-1)
    if a.size == 0:
        raise InvalidArgumentError("DFT of an empty block is undefined")
    if _is_pow2(a.size):
        return _fft_radix2(a)
    return _dft_direct(a)


def idft(spectrum) -> np.ndarray:
    """Inverse DFT with the 1/L normalisation, so ``idft(dft(x)) == x``."""
    s = np.asarray(spectrum, dtype=np.complex128).reshape(-1)
    if s.size == 0:
        raise InvalidArgumentError("inverse DFT of an empty spectrum is undefined")
    return np.conj(dft(np.conj(s))) / s.size
