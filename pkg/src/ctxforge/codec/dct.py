"""Orthonormal DCT-II and its inverse, from an explicit basis matrix.

The basis C has rows C[k, n] = s_k * cos(pi * (2n + 1) * k / (2N)) with
s_0 = sqrt(1/N) and s_k = sqrt(2/N) otherwise, so C @ C.T == I and the
inverse transform is simply C.T. A chunk of N frames transforms column by
column (one independent transform per action dimension).
"""

from __future__ import annotations

import functools

import numpy as np


@functools.lru_cache(maxsize=32)
def basis(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("transform length must be >= 1")
    k = np.arange(n)[:, None]
    m = np.arange(n)[None, :]
    c = np.cos(np.pi * (2 * m + 1) * k / (2 * n))
    c[0, :] *= np.sqrt(1.0 / n)
    c[1:, :] *= np.sqrt(2.0 / n)
    c.setflags(write=False)
    return c


def forward(block: np.ndarray) -> np.ndarray:
    """DCT-II along axis 0. ``block`` is (N,) or (N, D); returns same shape."""
    return basis(block.shape[0]) @ block


def inverse(coefs: np.ndarray) -> np.ndarray:
    """Inverse of :func:`forward` (DCT-III along axis 0)."""
    return basis(coefs.shape[0]).T @ coefs
