"""Fixed-point symbols and exact integer encoding/decoding.

A value ``v`` is stored as the integer ``round(v * 2**scale)``. Data symbols
take ``p`` bits; a signed sum of ``d_c`` of them needs ``ceil(log2 d_c)``
guard bits, so check accumulations run on ``p + guard`` bit adders and
parity symbols are stored on ``p + guard + 1`` bits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .encoder import compute_lambda, encode
from .gdsu import DecodeResult, DecoderParams, decode_batch
from .qc_code import SparseParityMatrix


def guard_bits(d_c_max: int) -> int:
    return int(math.ceil(math.log2(d_c_max)))


def required_parity_bits(p: int, d_c_max: int) -> int:
    if p < 2 or d_c_max < 2:
        raise ValueError("need p >= 2 and d_c_max >= 2")
    return p + guard_bits(d_c_max) + 1


@dataclass(frozen=True)
class FixedPointFormat:
    p: int
    guard: int
    scale: int = 0  # fractional bits

    @classmethod
    def for_code(cls, p: int, h: SparseParityMatrix, scale: int = 0) -> "FixedPointFormat":
        return cls(p, guard_bits(int(h.params.row_degrees.max())), scale)

    @property
    def parity_bits(self) -> int:
        return self.p + self.guard + 1

    @property
    def adder_bits(self) -> int:
        return self.p + self.guard

    @property
    def data_max(self) -> int:
        return 2 ** (self.p - 1) - 1

    @property
    def adder_max(self) -> int:
        return 2 ** (self.adder_bits - 1) - 1

    @property
    def parity_max(self) -> int:
        return 2 ** (self.parity_bits - 1) - 1

    @property
    def lsb(self) -> float:
        return 2.0 ** -self.scale

    def satisfies_rule(self, d_c_max: int) -> bool:
        return self.guard >= guard_bits(d_c_max)


@dataclass(frozen=True)
class QuantizedVector:
    values: np.ndarray
    format: FixedPointFormat
    n_data: int  # leading positions held to p bits; the rest are parity

    def to_float(self) -> np.ndarray:
        return self.values.astype(np.float64) * self.format.lsb


def _check(values, bound, what, offset=0):
    bad = np.flatnonzero(np.abs(values) > bound)
    if bad.size:
        i = int(bad[0])
        raise OverflowError(f"{what} at position {i + offset} = {int(values[i])} exceeds +/-{bound}")


def to_grid(y, fmt: FixedPointFormat) -> np.ndarray:
    """Round to the nearest grid point, ties to even, without range checks."""
    return np.rint(np.asarray(y, dtype=np.float64) * 2.0 ** fmt.scale).astype(np.int64)


def quantize_frame(y, fmt: FixedPointFormat, n_data=None) -> QuantizedVector:
    """Quantize a frame; the first ``n_data`` positions (all by default) must fit ``p`` bits."""
    q = to_grid(y, fmt)
    n_data = q.shape[-1] if n_data is None else n_data
    _check(q[..., :n_data].ravel(), fmt.data_max, "data symbol")
    _check(q[..., n_data:].ravel(), fmt.parity_max, "parity symbol", n_data)
    return QuantizedVector(q, fmt, n_data)


def encode_fixed(h: SparseParityMatrix, s: QuantizedVector) -> QuantizedVector:
    """Exact integer encoding; raises if a check accumulation or parity symbol overflows."""
    fmt = s.format
    v = np.asarray(s.values, dtype=np.int64)
    _check(v.ravel(), fmt.data_max, "data symbol")
    _check(compute_lambda(h, v).ravel(), fmt.adder_max, "check accumulation")
    x = encode(h, None, v)
    _check(x[..., h.k:].ravel(), fmt.parity_max, "parity symbol", h.k)
    return QuantizedVector(x, fmt, h.k)


def decode_fixed_batch(yq: QuantizedVector, h: SparseParityMatrix,
                       params: DecoderParams = DecoderParams()):
    """Integer GDSU on a stack of frames; rounding never happens after quantization."""
    y = np.atleast_2d(np.asarray(yq.values, dtype=np.int64))
    fmt = yq.format
    return decode_batch(y, h, params, eps_zero=0.0, limit=(fmt.parity_max, fmt.adder_max))


def decode_fixed(yq: QuantizedVector, h: SparseParityMatrix,
                 params: DecoderParams = DecoderParams()) -> DecodeResult:
    """Integer GDSU on one frame; raises ``OverflowError`` if a register bound is exceeded."""
    res = decode_fixed_batch(yq, h, params)
    if res.overflow[0]:
        fmt = yq.format
        raise OverflowError(
            f"fixed-point overflow after {res.iterations[0]} iterations: a symbol exceeded "
            f"{fmt.parity_bits} bits or a check sum exceeded {fmt.adder_bits} bits")
    return res[0]
