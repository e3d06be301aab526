from itertools import combinations

import numpy as np
import pytest

from rnldpc.encoder import encode, syndrome
from rnldpc.gdbf import (binary_encode, binary_energy, bipolar, flip, gdbf_decode,
                         gdbf_decode_batch)


def reference_gdbf(y, H, max_iters=300):
    """Plain loop over a dense 0/1 matrix."""
    m, n = H.shape
    x = np.array(y, dtype=int)
    it = 0
    while it < max_iters:
        s = H @ x % 2
        if not s.any():
            break
        sbin = np.where(s == 1, 1, -1)
        e = [(1 if x[k] != y[k] else -1) + sum(sbin[r] for r in range(m) if H[r, k])
             for k in range(n)]
        top = max(e)
        for k in range(n):
            if e[k] == top:
                x[k] ^= 1
        it += 1
    return x, it


def test_t1_single_flip_example(codes):
    h = codes["t1"]["binary"]
    c = binary_encode(h, None, [1, 0, 1])
    assert c.tolist() == [1, 0, 1, 1, 0, 0]
    y = c.copy()
    y[0] ^= 1
    e = binary_energy(y, y, syndrome(h, y), h)
    assert e.tolist() == [1, -1, -1, -1, -1, 0]
    res = gdbf_decode(y, h)
    assert res.converged and res.iterations == 1
    assert res.x_hat.tolist() == c.tolist()


def test_valid_codeword_untouched(codes, rng):
    h = codes["wifi-r23"]["binary"]
    c = binary_encode(h, None, rng.integers(0, 2, h.k))
    res = gdbf_decode(c, h)
    assert res.converged and res.iterations == 0 and np.array_equal(res.x_hat, c)


def test_t1_all_low_weight_patterns_match_reference(codes):
    h = codes["t1"]["binary"]
    H = h.to_dense()
    patterns = [()] + [(i,) for i in range(6)] + list(combinations(range(6), 2))
    Y = np.zeros((len(patterns), 6), dtype=np.uint8)
    for f, pat in enumerate(patterns):
        Y[f, list(pat)] = 1
    res = gdbf_decode_batch(Y, h, max_iters=20)
    for f in range(len(Y)):
        x, it = reference_gdbf(Y[f], H, 20)
        assert np.array_equal(res.x_hat[f], x) and res.iterations[f] == it


def test_disjoint_equal_degree_pair_flips_together(codes):
    h = codes["wifi-r23"]["binary"]
    H = h.to_dense()
    dv = h.params.col_degrees
    top = dv[:h.k].max()
    cols = [k for k in range(h.k) if dv[k] == top]
    checks = {k: set(np.flatnonzero(H[:, k])) for k in cols}
    pairs = [(a, b) for a, b in combinations(cols, 2) if not checks[a] & checks[b]][:25]
    assert pairs
    for a, b in pairs:
        y = np.zeros(h.n, dtype=np.uint8)
        y[[a, b]] = 1
        e = binary_energy(y, y, syndrome(h, y), h)
        assert set(np.flatnonzero(e == e.max())) == {a, b}
        res = gdbf_decode(y, h)
        assert res.converged and res.iterations == 1 and not res.x_hat.any()


def test_flip_involution(rng):
    x = rng.integers(0, 2, 50, dtype=np.uint8)
    mask = rng.random(50) < 0.3
    assert np.array_equal(flip(flip(x, mask), mask), x)
    assert bipolar([0, 1]).tolist() == [1, -1]


@pytest.mark.parametrize("name", ["t1", "wifi-r23"])
def test_binary_encode_zero_syndrome(codes, name, rng):
    h = codes[name]["binary"]
    assert not binary_encode(h, None, np.zeros(h.k, dtype=np.uint8)).any()
    x = binary_encode(h, None, rng.integers(0, 2, (100, h.k)))
    assert not syndrome(h, x).any()
    assert np.array_equal(x, np.mod(encode(codes[name]["real"], None, x[:, :h.k].astype(int)), 2))


def test_rejects_real_variant(codes):
    with pytest.raises(ValueError):
        gdbf_decode(np.zeros(6, dtype=np.uint8), codes["t1"]["real"])
    with pytest.raises(ValueError):
        binary_encode(codes["t1"]["real"], None, [1, 0, 1])
