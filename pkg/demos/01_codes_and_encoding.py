"""
Real-number QC-LDPC codes and addition-only encoding
====================================================

A base matrix of cyclic shifts expands into a sparse parity-check matrix.
The real variant negates the upper staircase blocks so that a valid
codeword has a zero syndrome over the reals, not just modulo 2.
"""

# %%
import numpy as np

from rnldpc import builtin_code, encode, expand, syndrome

base = builtin_code("wifi-r23")
print(f"z={base.z}, {base.m_rows} block rows, {base.n_b} block columns")
print(base.as_array()[:2])

# %% [markdown]
# Expanding gives one signed entry per nonzero block row. The parity part
# has an h_b column followed by a two-block staircase.

# %%
h = expand(base, "real")
print(h.params.n, h.params.m, h.params.k, "nnz =", h.nnz)
print("h_b column:", h.structure.hb_col, "rows/shifts:", h.structure.hb_rows)

# %% [markdown]
# Encoding sums the source part row by row, recovers the h_b parity block
# from one signed combination of all block rows, then walks the staircase.
# Only additions, negations and cyclic shifts are involved.

# %%
from collections import Counter

rng = np.random.default_rng(0)
s = rng.integers(-8, 9, h.k)
ops = Counter()
x = encode(h, None, s, ops=ops)
print("operations:", dict(ops))
print("max |syndrome| =", np.abs(syndrome(h, x)).max())
print("parity magnitude range:", np.abs(x[h.k:]).max(), "vs source", np.abs(s).max())

# %% [markdown]
# The toy code ``t1`` (z = 1) is small enough to follow by hand.

# %%
t1 = expand(builtin_code("t1"))
print(t1.to_dense())
print(encode(t1, None, np.array([1, 2, 3])))
