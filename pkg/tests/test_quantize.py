import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rnldpc.encoder import encode, syndrome
from rnldpc.gdsu import DecoderParams, decode, decode_batch
from rnldpc.quantize import (FixedPointFormat, QuantizedVector, decode_fixed, decode_fixed_batch,
                             encode_fixed, guard_bits, quantize_frame, required_parity_bits)


@pytest.mark.parametrize("p, dc, bits", [(8, 11, 13), (8, 2, 10), (16, 8, 20)])
def test_required_parity_bits(p, dc, bits):
    assert required_parity_bits(p, dc) == bits


def test_required_parity_bits_domain():
    with pytest.raises(ValueError):
        required_parity_bits(1, 4)
    with pytest.raises(ValueError):
        required_parity_bits(8, 1)


def test_format_for_code(r23):
    fmt = FixedPointFormat.for_code(8, r23)
    assert fmt.guard == guard_bits(12) == 4
    assert fmt.parity_bits == required_parity_bits(8, 12) == 13
    assert (fmt.data_max, fmt.adder_max, fmt.parity_max) == (127, 2047, 4095)
    assert fmt.satisfies_rule(12) and not FixedPointFormat(8, 3).satisfies_rule(12)


def test_quantize_examples():
    fmt = FixedPointFormat(8, 2)
    assert quantize_frame([3, -127, 0], fmt).values.tolist() == [3, -127, 0]
    with pytest.raises(OverflowError, match="position 1"):
        quantize_frame([0, 128], fmt)
    q = quantize_frame([0.5], FixedPointFormat(8, 2, scale=1))
    assert q.values.tolist() == [1] and q.to_float().tolist() == [0.5]
    # ties go to even
    assert quantize_frame([0.5, 1.5, 2.5, -0.5], fmt).values.tolist() == [0, 2, 2, 0]


@given(st.lists(st.floats(-7.9, 7.9), min_size=1, max_size=20), st.integers(0, 4))
def test_rounding_error_at_most_half_lsb(vals, scale):
    fmt = FixedPointFormat(8, 2, scale)
    q = quantize_frame(vals, fmt)
    assert np.all(np.abs(q.to_float() - np.array(vals)) <= fmt.lsb / 2 + 1e-12)


def test_parity_positions_use_wider_bound():
    fmt = FixedPointFormat(4, 2)
    q = quantize_frame([7, 20], fmt, n_data=1)
    assert q.values.tolist() == [7, 20]
    with pytest.raises(OverflowError, match="parity symbol at position 1"):
        quantize_frame([7, 64], fmt, n_data=1)


def test_encode_fixed_exact(r23, rng):
    fmt = FixedPointFormat.for_code(8, r23, scale=4)
    s = quantize_frame(rng.uniform(-1, 1, (50, r23.k)), fmt)
    x = encode_fixed(r23, s)
    assert x.values.dtype == np.int64
    assert not syndrome(r23, x.values).any()
    assert (np.abs(x.values[:, r23.k:]) <= fmt.parity_max).all()


def _row_attack(h, fmt):
    """All source symbols of the fullest check row at the top of the data range."""
    H = h.to_dense()
    r = int(np.argmax((H[:, :h.k] != 0).sum(axis=1)))
    s = np.where(H[r, :h.k] != 0, fmt.data_max * H[r, :h.k], 0).astype(np.int64)
    return s, int(np.abs(H[r, :h.k]).sum())


def test_guard_bits_cover_worst_row_sum(r23):
    fmt = FixedPointFormat.for_code(8, r23)
    s, terms = _row_attack(r23, fmt)
    assert terms * fmt.data_max <= fmt.adder_max
    # bound for any d_c-term sum of p-bit values
    dc = int(r23.params.row_degrees.max())
    assert dc * 2 ** (fmt.p - 1) <= 2 ** fmt.adder_bits


def test_one_guard_bit_short_overflows(r23):
    short = FixedPointFormat(8, guard_bits(12) - 1)
    s, terms = _row_attack(r23, short)
    assert terms * short.data_max > short.adder_max
    with pytest.raises(OverflowError, match="check accumulation"):
        encode_fixed(r23, QuantizedVector(s, short, r23.k))
    y = np.concatenate([s, np.zeros(r23.m, dtype=np.int64)])
    with pytest.raises(OverflowError):
        decode_fixed(QuantizedVector(y, short, r23.k), r23)
    res = decode_fixed_batch(QuantizedVector(y[None], short, r23.k), r23)
    assert res.overflow[0] and not res.converged[0]
    # the correct format takes the same frame without complaint
    full = FixedPointFormat.for_code(8, r23)
    decode_fixed(QuantizedVector(y, full, r23.k), r23)


def test_t1_fixed_matches_float_trace(t1):
    fmt = FixedPointFormat.for_code(8, t1)
    y = np.array([6, 2, 3, 3, 8, 12])
    ta, tb = [], []
    rf = decode(y.astype(float), t1, DecoderParams(sign_weighted_consensus=False), trace=ta)
    rq = decode_fixed(quantize_frame(y, fmt, 3), t1, DecoderParams(sign_weighted_consensus=False))
    decode(y, t1, DecoderParams(sign_weighted_consensus=False), trace=tb)
    assert rq.x_hat.tolist() == [1, 2, 3, 3, 8, 12] and rq.iterations == rf.iterations == 1
    for a, b in zip(ta, tb):
        for key in ("scores", "d", "e_bin", "delta"):
            assert np.array_equal(a[key], b[key])
        assert a["active"] == b["active"]


def test_fixed_matches_float_frame_by_frame(r23, rng):
    fmt = FixedPointFormat.for_code(8, r23, scale=4)
    S = quantize_frame(rng.uniform(-1, 1, (400, r23.k)), fmt)
    C = encode_fixed(r23, S).values
    hit = rng.random(C.shape) < 0.015
    Y = C + hit * rng.choice([-80, 80], C.shape)  # +/-5 at scale 4
    rq = decode_fixed_batch(QuantizedVector(Y, fmt, r23.k), r23)
    rf = decode_batch(Y * fmt.lsb, r23)
    assert not rq.overflow.any()
    assert np.array_equal(rq.converged, rf.converged)
    assert np.array_equal(rq.iterations, rf.iterations)
    assert np.array_equal(rq.x_hat * fmt.lsb, rf.x_hat)
