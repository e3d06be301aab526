"""
One GDSU iteration, step by step
================================

A +5 error on the first symbol of the toy codeword (1, 2, 3, 3, 8, 12).
"""

# %%
import numpy as np

from rnldpc import builtin_code, decode, expand, syndrome
from rnldpc.gdsu import DecoderParams

h = expand(builtin_code("t1"))
c = np.array([1, 2, 3, 3, 8, 12])
y = c.copy()
y[0] += 5
print("syndrome:", syndrome(h, y))

# %% [markdown]
# The trace holds every intermediate quantity: binary local energies,
# the sign consensus ``d``, the scores, the active set and the corrections.

# %%
trace = []
res = decode(y, h, DecoderParams(sign_weighted_consensus=False), trace=trace)
for step in trace:
    for key in ("e_bin", "d", "scores", "active", "delta", "objective"):
        print(f"{key:>9}: {step[key]}")
print(res)

# %% [markdown]
# With entry-sign weighting (the default) the consensus on the negated
# staircase columns flips sign but the scores, and hence the decision,
# are unchanged here.

# %%
trace = []
decode(y, h, trace=trace)
print("weighted d:", trace[0]["d"], "scores:", trace[0]["scores"])

# %% [markdown]
# Any single error on a source symbol of a wifi code is removed in one
# iteration whatever its amplitude.

# %%
h23 = expand(builtin_code("wifi-r23"))
from rnldpc import encode

rng = np.random.default_rng(1)
c = encode(h23, None, rng.uniform(-1, 1, h23.k))
for amp in (0.75, 5.0, 123.25):
    y = c.copy()
    y[rng.integers(h23.k)] += amp
    r = decode(y, h23)
    print(amp, r.converged, r.iterations, np.abs(r.x_hat - c).max())
