"""Binary gradient descent bit flipping (GDBF), the baseline for GDSU.

Hard-input, multi-bit flipping: every bit attaining the top local energy is
flipped in the same iteration. No random perturbation.
"""
from __future__ import annotations

import numpy as np

from .encoder import encode, syndrome
from .gdsu import BatchResult, DecodeResult, _gather_cols
from .qc_code import SparseParityMatrix


def bipolar(bits) -> np.ndarray:
    """Map bit ``b`` to ``1 - 2b``."""
    return 1 - 2 * np.asarray(bits, dtype=np.int64)


def binary_energy(x, y, s, h: SparseParityMatrix) -> np.ndarray:
    """``b_k + sum of binarized incident syndromes`` with ``b_k = +1`` iff ``x_k != y_k``."""
    s_bin = np.where(np.asarray(s) != 0, 1, -1)
    return np.where(np.asarray(x) != np.asarray(y), 1, -1) + _gather_cols(h, s_bin).sum(axis=-1)


def flip(x, mask) -> np.ndarray:
    return np.bitwise_xor(x, np.asarray(mask, dtype=x.dtype))


def gdbf_decode_batch(y, h: SparseParityMatrix, max_iters: int = 300) -> BatchResult:
    y = np.atleast_2d(np.asarray(y, dtype=np.uint8))
    if h.variant != "binary":
        raise ValueError("GDBF decodes the binary variant")
    if y.shape[-1] != h.n:
        raise ValueError(f"expected {h.n} bits, got {y.shape[-1]}")
    B = y.shape[0]
    x = y.copy()
    s = syndrome(h, x)
    iters = np.zeros(B, dtype=np.int64)
    live = np.flatnonzero(s.any(axis=-1))
    for _ in range(max_iters):
        if live.size == 0:
            break
        xs = x[live]
        e = binary_energy(xs, y[live], s[live], h)
        xs = flip(xs, e == e.max(axis=-1, keepdims=True))
        ss = syndrome(h, xs)
        x[live], s[live] = xs, ss
        iters[live] += 1
        live = live[ss.any(axis=-1)]
    ok = ~s.any(axis=-1)
    return BatchResult(x, ok, iters, s.sum(axis=-1).astype(np.float64), np.zeros(B, dtype=bool),
                       np.zeros(B, dtype=bool))


def gdbf_decode(y, h: SparseParityMatrix, max_iters: int = 300) -> DecodeResult:
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError("gdbf_decode takes a single frame")
    return gdbf_decode_batch(y[None, :], h, max_iters)[0]


def binary_encode(h: SparseParityMatrix, structure, s) -> np.ndarray:
    """GF(2) encoding over the same block schedule as the real encoder."""
    if h.variant != "binary":
        raise ValueError("binary_encode needs the binary variant")
    return encode(h, structure, np.asarray(s, dtype=np.uint8))
