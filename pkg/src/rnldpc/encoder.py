"""Two-step, addition-only systematic encoding over the dual-diagonal parity part.

All functions accept a single frame (last axis = symbols) or a batch of
frames stacked along leading axes. Block-level vectors have shape
``(..., m_rows, z)``.

Only additions, negations and cyclic shifts are used. Pass a
``collections.Counter`` as ``ops`` to have them tallied.
"""
from __future__ import annotations

from collections import Counter
from typing import Optional

import numpy as np

from .qc_code import ParityStructure, SparseParityMatrix, StructureError


def _binary(h: SparseParityMatrix) -> bool:
    return h.variant == "binary"


def _tally(ops, key, count=1):
    if ops is not None:
        ops[key] += count


def _shift(v: np.ndarray, s: int, ops=None) -> np.ndarray:
    """Apply the circulant with shift ``s``: ``out[i] = v[(i + s) mod z]``."""
    if s == 0:
        return v
    _tally(ops, "shift")
    return np.roll(v, -s, axis=-1)


def _unshift(v: np.ndarray, s: int, ops=None) -> np.ndarray:
    if s == 0:
        return v
    _tally(ops, "shift")
    return np.roll(v, s, axis=-1)


def _add(a, b, binary, ops=None):
    _tally(ops, "xor" if binary else "add")
    return np.bitwise_xor(a, b) if binary else a + b


def _signed(v, sign, binary, ops=None):
    if binary or sign > 0:
        return v
    _tally(ops, "neg")
    return -v


def syndrome(h: SparseParityMatrix, x) -> np.ndarray:
    """``H x`` for every check; modulo 2 for the binary variant."""
    x = np.asarray(x)
    if x.shape[-1] != h.n:
        raise ValueError(f"expected {h.n} symbols, got {x.shape[-1]}")
    pad = np.zeros(x.shape[:-1] + (1,), dtype=x.dtype)
    xe = np.concatenate([x, pad], axis=-1)
    if _binary(h):
        return (xe[..., h.row_idx].astype(np.int64).sum(axis=-1) & 1).astype(np.uint8)
    return (xe[..., h.row_idx] * h.row_sign).sum(axis=-1)


def compute_lambda(h: SparseParityMatrix, s, ops: Optional[Counter] = None) -> np.ndarray:
    """Signed row sums of the source part, grouped as ``(..., m_rows, z)`` blocks."""
    s = np.asarray(s)
    if s.shape[-1] != h.k:
        raise ValueError(f"expected {h.k} source symbols, got {s.shape[-1]}")
    binary = _binary(h)
    idx = np.where(h.row_idx < h.k, h.row_idx, h.k)
    pad = np.zeros(s.shape[:-1] + (1,), dtype=s.dtype)
    g = np.concatenate([s, pad], axis=-1)[..., idx]
    if binary:
        lam = np.bitwise_xor.reduce(g, axis=-1)
    else:
        g = np.where(h.row_sign < 0, -g, g)
        lam = g.sum(axis=-1)
    _tally(ops, "xor" if binary else "add", int((idx < h.k).sum()) - h.m)
    return lam.reshape(s.shape[:-1] + (h.base.m_rows, h.z))


def _row_signs(structure: ParityStructure):
    """Sign of each staircase column in the two rows it couples, as seen from row j."""
    stair = structure.staircase
    signs = []
    for j in range(1, len(stair)):
        col = stair[j - 1][2]
        below = structure.diag_sign if stair[j][2] == col else 1
        signs.append((structure.diag_sign, below))
    return signs


def combination_coefficients(structure: ParityStructure) -> list:
    """Coefficients ``c_r`` in {+1, -1} whose row combination cancels every staircase block."""
    c = [1]
    for above, below in _row_signs(structure):
        c.append(-c[-1] * above * below)
    return c


def _residual(structure: ParityStructure, binary: bool):
    coeff = {}
    for (r, shift), c in zip(structure.hb_rows, (combination_coefficients(structure)[r]
                                                 for r, _ in structure.hb_rows)):
        coeff[shift] = coeff.get(shift, 0) + c
    if binary:
        coeff = {s: v % 2 for s, v in coeff.items()}
    coeff = {s: v for s, v in coeff.items() if v != 0}
    if not coeff:
        raise StructureError("h_b blocks cancel in the row combination: structure unusable",
                             structure.hb_col)
    if len(coeff) != 1 or abs(next(iter(coeff.values()))) != 1:
        raise StructureError(f"h_b row combination is not a single cyclic shift: {coeff}",
                             structure.hb_col)
    return next(iter(coeff.items()))


def compute_first_parity(lam: np.ndarray, structure: ParityStructure, binary: bool = False,
                         ops: Optional[Counter] = None) -> np.ndarray:
    """Solve the first parity block ``p(0)`` from the block syndromes ``lam``.

    With an h_b column, ``p(0)`` is the h_b block: the signed sum of all
    block rows removes the staircase, leaving one shifted copy of ``p(0)``.
    Without one, ``p(0)`` is the first staircase block, fixed by row 0 alone.
    """
    lam = np.asarray(lam)
    if structure.hb_col is None:
        return _signed(lam[..., 0, :], -structure.diag_sign, binary, ops)
    c = combination_coefficients(structure)
    acc = _signed(lam[..., 0, :], c[0], binary, ops)
    for r in range(1, lam.shape[-2]):
        acc = _add(acc, _signed(lam[..., r, :], c[r], binary, ops), binary, ops)
    shift, coeff = _residual(structure, binary)
    return _signed(_unshift(acc, shift, ops), -coeff, binary, ops)


def back_substitute(lam: np.ndarray, p0: np.ndarray, structure: ParityStructure,
                    binary: bool = False, ops: Optional[Counter] = None) -> np.ndarray:
    """Walk the staircase row by row; returns all parity blocks ``(..., m_rows, z)``.

    Blocks are ordered by parity block column, so the result flattens
    straight into the parity half of the codeword.
    """
    lam = np.asarray(lam)
    m_rows = lam.shape[-2]
    k_b = structure.k_b
    par = np.zeros(lam.shape, dtype=np.result_type(lam, p0))
    known = set()
    hb = dict(structure.hb_rows)
    if structure.hb_col is not None:
        par[..., structure.hb_col - k_b, :] = p0
        known.add(structure.hb_col)
        rows = range(m_rows)
    else:
        first = structure.staircase[0][2]
        par[..., first - k_b, :] = p0
        known.add(first)
        rows = range(1, m_rows)
    for r in rows:
        _, lower, upper = structure.staircase[r]
        if upper in known:
            continue  # terminal row of the h_b layout: redundant check
        acc = lam[..., r, :]
        if r in hb:
            acc = _add(acc, _shift(p0, hb[r], ops), binary, ops)
        if lower is not None:
            acc = _add(acc, par[..., lower - k_b, :], binary, ops)
        par[..., upper - k_b, :] = _signed(acc, -structure.diag_sign, binary, ops)
        known.add(upper)
    return par


def encode(h: SparseParityMatrix, structure: Optional[ParityStructure], s,
           ops: Optional[Counter] = None) -> np.ndarray:
    """Systematic codeword ``[s | p]`` with zero syndrome.

    Integer input stays integer (exact); floating input is encoded in floating
    point. The binary variant works over GF(2) and expects 0/1 symbols.
    """
    structure = structure if structure is not None else h.structure
    if structure is None:
        raise StructureError("code has no dual-diagonal parity structure")
    s = np.asarray(s)
    binary = _binary(h)
    if binary:
        s = s.astype(np.uint8)
    lam = compute_lambda(h, s, ops)
    p0 = compute_first_parity(lam, structure, binary, ops)
    par = back_substitute(lam, p0, structure, binary, ops)
    return np.concatenate([s, par.reshape(s.shape[:-1] + (h.m,))], axis=-1)


def syndrome_tolerance(x) -> float:
    """Scale-aware absolute tolerance for floating-point syndromes."""
    x = np.asarray(x)
    return 1e-9 * (1.0 + float(np.max(np.abs(x), initial=0.0)))


def read_vectors(fh) -> list:
    """One frame per non-blank line of whitespace-separated decimals."""
    frames = []
    for line in fh:
        if line.strip():
            frames.append(np.array([float(t) for t in line.split()]))
    return frames


def format_vector(v) -> str:
    out = []
    for a in np.asarray(v).ravel():
        a = float(a)
        out.append(str(int(a)) if a.is_integer() else repr(a))
    return " ".join(out)
