"""Gradient Descent Symbol Update (GDSU) decoding of real-number LDPC codewords.

Each iteration binarizes the syndrome, scores every symbol by its local
energy plus the weighted sign consensus of its checks, and corrects the
symbols attaining the top score. The correction sign comes from a majority
vote over the incident syndrome signs (falling back to the sign of the
received symbol) and the magnitude is the smallest nonzero incident
syndrome magnitude.

The per-step functions work on one frame or a stack of frames; the decoding
loop itself runs a whole batch at once so Monte Carlo runs stay fast.
Integer input is decoded in exact integer arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .encoder import syndrome
from .qc_code import SparseParityMatrix

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class DecoderParams:
    beta: ArrayLike = 1.0
    t: ArrayLike = 1.0
    max_iters: int = 300
    eps_zero: Optional[float] = None  # None: 0 for integers, scale-aware for floats
    # True multiplies each incident syndrome sign by the entry sign H(m, k);
    # False is the unweighted sum, which cancels on mixed-sign parity columns.
    sign_weighted_consensus: bool = True

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=np.float64)
        t = np.asarray(self.t, dtype=np.float64)
        if np.any(beta < 0) or np.any(beta > 1):
            raise ValueError("beta must lie in [0, 1]")
        if np.any(t <= 0):
            raise ValueError("t must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.eps_zero is not None and self.eps_zero < 0:
            raise ValueError("eps_zero must be >= 0")


@dataclass
class DecodeResult:
    x_hat: np.ndarray
    converged: bool
    iterations: int
    final_syndrome_l1: float
    stalled: bool = False


@dataclass
class BatchResult:
    """Per-frame outcomes of :func:`decode_batch`, one entry per row of ``y``."""

    x_hat: np.ndarray
    converged: np.ndarray
    iterations: np.ndarray
    final_syndrome_l1: np.ndarray
    stalled: np.ndarray
    overflow: np.ndarray = None

    def __len__(self):
        return len(self.converged)

    def __getitem__(self, i) -> DecodeResult:
        return DecodeResult(self.x_hat[i], bool(self.converged[i]), int(self.iterations[i]),
                            float(self.final_syndrome_l1[i]), bool(self.stalled[i]))


def default_eps(y) -> np.ndarray:
    """0 for integer frames, ``1e-9 * (1 + max|y|)`` per frame otherwise."""
    y = np.asarray(y)
    if np.issubdtype(y.dtype, np.integer):
        return np.zeros(y.shape[:-1])
    return 1e-9 * (1.0 + np.max(np.abs(y), axis=-1, initial=0.0))


def _eps_col(eps, ndim):
    eps = np.asarray(eps, dtype=np.float64)
    return eps.reshape(eps.shape + (1,) * (ndim - eps.ndim)) if ndim > eps.ndim else eps


def _gather_cols(h: SparseParityMatrix, v: np.ndarray) -> np.ndarray:
    pad = np.zeros(v.shape[:-1] + (1,), dtype=v.dtype)
    return np.concatenate([v, pad], axis=-1)[..., h.col_idx]


def binarize_syndrome(s, eps_zero=0.0) -> np.ndarray:
    """+1 where the check is unsatisfied (``|s| > eps``), -1 otherwise."""
    s = np.asarray(s)
    return np.where(np.abs(s) > _eps_col(eps_zero, s.ndim), 1, -1).astype(np.int64)


def local_energy(x, y, s_bin, h: SparseParityMatrix, eps_zero=0.0) -> np.ndarray:
    x, y = np.asarray(x), np.asarray(y)
    moved = np.abs(x - y) > _eps_col(eps_zero, x.ndim)
    return np.where(moved, 1, -1) + _gather_cols(h, np.asarray(s_bin)).sum(axis=-1)


def sign_consensus(s, h: SparseParityMatrix, eps_zero=0.0, sign_weighted=True) -> np.ndarray:
    """Sum of the signs of each symbol's incident syndromes (0 for satisfied checks).

    With ``sign_weighted`` each term is multiplied by the entry sign, so the
    result is the direction in which symbol ``k`` has to move.
    """
    s = np.asarray(s)
    sg = np.where(np.abs(s) > _eps_col(eps_zero, s.ndim), np.sign(s), 0).astype(np.int64)
    g = _gather_cols(h, sg)
    if sign_weighted:
        g = g * h.col_sign
    return g.sum(axis=-1)


def scores(e_bin, d, beta=1.0) -> np.ndarray:
    return np.asarray(e_bin) + np.asarray(beta) * np.abs(np.asarray(d))


def objective(score) -> float:
    """Half the squared top score; diagnostic only, the decoder never reads it."""
    return 0.5 * float(np.max(score)) ** 2


def _has_unsatisfied(s, h, eps_zero):
    s = np.asarray(s)
    nz = (np.abs(s) > _eps_col(eps_zero, s.ndim)).astype(np.int8)
    return _gather_cols(h, nz).any(axis=-1)


def active_mask(score, s, h: SparseParityMatrix, eps_zero=0.0) -> np.ndarray:
    score = np.asarray(score)
    top = score == score.max(axis=-1, keepdims=True)
    return top & _has_unsatisfied(s, h, eps_zero)


def active_set(score, s, h: SparseParityMatrix, eps_zero=0.0) -> list:
    """Indices attaining the top score, minus those whose checks are all satisfied."""
    return np.flatnonzero(active_mask(score, s, h, eps_zero)).tolist()


def majority_vote(d, y) -> np.ndarray:
    """sign(D) where D != 0, else sign(y) with sign(0) taken as +1."""
    d, y = np.asarray(d), np.asarray(y)
    fallback = np.where(y < 0, -1, 1)
    return np.where(d != 0, np.sign(d), fallback).astype(np.int64)


def _magnitudes(s, h, eps_zero):
    s = np.asarray(s)
    a = np.abs(s)
    big = np.iinfo(np.int64).max if np.issubdtype(a.dtype, np.integer) else np.inf
    a = np.where(a > _eps_col(eps_zero, s.ndim), a, big)
    pad = np.full(a.shape[:-1] + (1,), big, dtype=a.dtype)
    return np.concatenate([a, pad], axis=-1)[..., h.col_idx].min(axis=-1)


def correction_magnitude(k: int, s, h: SparseParityMatrix, eps_zero=0.0):
    """Smallest ``|s_m|`` above ``eps_zero`` among the checks of symbol ``k``."""
    s = np.asarray(s)
    best = None
    for m, _ in h.cols[k]:  # row order, so ties keep the smallest row index
        v = abs(s[m])
        if v > eps_zero and (best is None or v < best):
            best = v
    if best is None:
        raise ValueError(f"symbol {k} has no unsatisfied check")
    return best


def _per_symbol(v, n, dtype):
    v = np.asarray(v)
    return np.broadcast_to(v.astype(dtype), (n,)) if v.ndim else v.astype(dtype)


def decode_batch(y, h: SparseParityMatrix, params: DecoderParams = DecoderParams(),
                 eps_zero=None, trace: Optional[Callable] = None,
                 limit: Optional[tuple] = None) -> BatchResult:
    """Decode every row of ``y`` independently.

    ``limit = (symbol_max, syndrome_max)`` bounds register contents for
    integer decoding. A frame that exceeds either bound stops right there,
    unconverged, and is flagged in ``overflow``; nothing is ever wrapped or
    saturated.
    """
    y = np.atleast_2d(np.asarray(y))
    if h.variant != "real":
        raise ValueError("GDSU decodes the real variant")
    if y.shape[-1] != h.n:
        raise ValueError(f"expected {h.n} symbols, got {y.shape[-1]}")
    integer = np.issubdtype(y.dtype, np.integer)
    if not integer:
        y = y.astype(np.float64)
    B = y.shape[0]
    if eps_zero is None:
        eps_zero = params.eps_zero
    eps = default_eps(y) if eps_zero is None else np.broadcast_to(
        np.asarray(eps_zero, dtype=np.float64), (B,))
    beta = _per_symbol(params.beta, h.n, np.float64)
    t = _per_symbol(params.t, h.n, np.float64)
    if integer:
        if np.any(t != np.round(t)):
            raise ValueError("integer decoding needs integral step factors t")
        t = t.astype(np.int64)

    x = y.copy()
    s = syndrome(h, x)
    iters = np.zeros(B, dtype=np.int64)
    stalled = np.zeros(B, dtype=bool)
    overflow = np.zeros(B, dtype=bool)
    live = np.flatnonzero(np.any(np.abs(s) > eps[:, None], axis=-1))
    if limit is not None:
        overflow = _over(x, s, limit)
        live = live[~overflow[live]]
    for it in range(params.max_iters):
        if live.size == 0:
            break
        xs, ys, ss, es = x[live], y[live], s[live], eps[live]
        e_bin = local_energy(xs, ys, binarize_syndrome(ss, es), h, es)
        d = sign_consensus(ss, h, es, params.sign_weighted_consensus)
        sc = scores(e_bin, d, beta)
        act = active_mask(sc, ss, h, es)
        stuck = ~act.any(axis=-1)
        if stuck.any():
            stalled[live[stuck]] = True
        delta = np.where(act, t * majority_vote(d, ys) * _magnitudes(ss, h, es), 0)
        xs = xs - delta
        if trace is not None:
            trace(it, dict(frames=live, syndrome=ss, e_bin=e_bin, d=d, scores=sc, active=act,
                           delta=delta, objective=[objective(r) for r in sc]))
        ss = syndrome(h, xs)
        x[live], s[live] = xs, ss
        iters[live[~stuck]] += 1
        still = np.any(np.abs(ss) > es[:, None], axis=-1) & ~stuck
        if limit is not None:
            over = _over(xs, ss, limit)
            overflow[live[over]] = True
            still &= ~over
        live = live[still]

    ok = ~np.any(np.abs(s) > eps[:, None], axis=-1)
    l1 = np.abs(s).sum(axis=-1).astype(np.float64)
    return BatchResult(x, ok & ~overflow, iters, l1, stalled, overflow)


def _over(x, s, limit):
    return (np.abs(x) > limit[0]).any(axis=-1) | (np.abs(s) > limit[1]).any(axis=-1)


def decode(y, h: SparseParityMatrix, params: DecoderParams = DecoderParams(),
           trace: Optional[list] = None) -> DecodeResult:
    """Decode one received frame.

    If ``trace`` is a list, one dict per iteration is appended with the
    syndrome, ``e_bin``, ``d``, ``scores``, the active set, the applied
    corrections and the objective value.
    """
    y = np.asarray(y)
    if y.ndim != 1:
        raise ValueError("decode takes a single frame; use decode_batch for stacks")
    hook = None
    if trace is not None:
        def hook(it, st):
            trace.append(dict(
                iteration=it + 1,
                syndrome=st["syndrome"][0],
                e_bin=st["e_bin"][0],
                d=st["d"][0],
                scores=st["scores"][0],
                active=np.flatnonzero(st["active"][0]).tolist(),
                delta=st["delta"][0],
                objective=st["objective"][0],
            ))
    return decode_batch(y[None, :], h, params, trace=hook)[0]
