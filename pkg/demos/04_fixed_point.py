"""
Fixed-point encoding and decoding
=================================

Data symbols on p bits, check accumulations on p + ceil(log2 d_c) bits and
parity symbols on one bit more. Decoding then runs on integers and matches
the floating-point decoder exactly.
"""

# %%
import numpy as np

from rnldpc import builtin_code, expand
from rnldpc.gdsu import decode_batch
from rnldpc.quantize import (FixedPointFormat, QuantizedVector, decode_fixed_batch, encode_fixed,
                             quantize_frame, required_parity_bits)

h = expand(builtin_code("wifi-r23"))
dc = int(h.params.row_degrees.max())
fmt = FixedPointFormat.for_code(8, h, scale=4)
print(f"d_c={dc}, parity bits={fmt.parity_bits} (rule gives {required_parity_bits(8, dc)})")

# %%
rng = np.random.default_rng(0)
S = quantize_frame(rng.uniform(-1, 1, (2000, h.k)), fmt)
C = encode_fixed(h, S).values
print("largest parity symbol:", np.abs(C[:, h.k:]).max(), "of", fmt.parity_max)

# %% [markdown]
# Errors of +/-5 are exactly representable at four fractional bits.

# %%
Y = C + (rng.random(C.shape) < 0.01) * rng.choice([-80, 80], C.shape)
rq = decode_fixed_batch(QuantizedVector(Y, fmt, h.k), h)
rf = decode_batch(Y * fmt.lsb, h)
print("identical decisions:", np.array_equal(rq.x_hat * fmt.lsb, rf.x_hat),
      "identical iterations:", np.array_equal(rq.iterations, rf.iterations))
print(f"fixed-point FER: {1 - rq.converged.mean():.4f}, overflows: {rq.overflow.sum()}")
