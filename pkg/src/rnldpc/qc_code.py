"""Quasi-cyclic LDPC base matrices and their expansion into signed parity-check matrices.

A base matrix entry ``s >= 0`` expands to the ``z x z`` identity cyclically
shifted so that local row ``i`` has its nonzero at column ``(i + s) mod z``;
``-1`` expands to the zero block.

The ``real`` variant negates the rightmost staircase block of every block row
of the parity part (the bold diagonal of the 802.11n tables), which is what
makes addition-only encoding over the reals possible.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Optional, TextIO, Union

import numpy as np

VARIANTS = ("binary", "real")


class BaseMatrixError(ValueError):
    """Malformed base-matrix text, reported with a 1-based line/column position."""

    def __init__(self, msg: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + msg)


class StructureError(ValueError):
    """The parity part of a base matrix has no usable dual-diagonal staircase."""

    def __init__(self, msg: str, block_col: Optional[int] = None):
        self.block_col = block_col
        super().__init__(msg)


@dataclass(frozen=True)
class BaseMatrix:
    z: int
    entries: tuple  # tuple of row tuples, -1 = zero block

    def __post_init__(self):
        entries = tuple(tuple(int(e) for e in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        if self.z < 1:
            raise BaseMatrixError(f"expansion factor must be positive, got {self.z}")
        if not entries or not entries[0]:
            raise BaseMatrixError("base matrix is empty")
        width = len(entries[0])
        for r, row in enumerate(entries):
            if len(row) != width:
                raise BaseMatrixError(f"row {r} has {len(row)} entries, expected {width}")
            for c, e in enumerate(row):
                if not -1 <= e <= self.z - 1:
                    raise BaseMatrixError(
                        f"entry ({r}, {c}) = {e} outside [-1, {self.z - 1}]")
        if len(entries) >= width:
            raise BaseMatrixError(
                f"{len(entries)} block rows for {width} block columns: code has no positive rate")

    @property
    def m_rows(self) -> int:
        return len(self.entries)

    @property
    def n_b(self) -> int:
        return len(self.entries[0])

    @property
    def k_b(self) -> int:
        """Number of source block columns."""
        return self.n_b - self.m_rows

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def nonzero_blocks(self) -> int:
        return sum(e >= 0 for row in self.entries for e in row)


@dataclass(frozen=True)
class CodeParams:
    n: int
    m: int
    k: int
    col_degrees: np.ndarray = field(repr=False, compare=False)
    row_degrees: np.ndarray = field(repr=False, compare=False)

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def nnz(self) -> int:
        return int(self.row_degrees.sum())


@dataclass(frozen=True)
class ParityStructure:
    """Block-level layout of the parity part.

    ``staircase`` holds one ``(block_row, lower_col, upper_col)`` triple per
    block row; ``upper_col`` is the rightmost staircase block of that row and
    carries ``diag_sign``. ``lower_col`` is ``None`` where the row has a single
    staircase block. ``hb_col`` is ``None`` for codes without the extra parity
    column (a pure lower-bidiagonal parity part).
    """

    hb_col: Optional[int]
    hb_rows: tuple
    staircase: tuple
    diag_sign: int = -1
    k_b: int = 0

    def with_sign(self, diag_sign: int) -> "ParityStructure":
        return ParityStructure(self.hb_col, self.hb_rows, self.staircase, diag_sign, self.k_b)

    def upper_entries(self) -> set:
        return {(r, up) for r, _, up in self.staircase}


def _padded(lists, fill_index: int):
    width = max((len(l) for l in lists), default=0)
    idx = np.full((len(lists), max(width, 1)), fill_index, dtype=np.int64)
    sgn = np.zeros((len(lists), max(width, 1)), dtype=np.int64)
    for i, l in enumerate(lists):
        for j, (t, s) in enumerate(l):
            idx[i, j] = t
            sgn[i, j] = s
    return idx, sgn


@dataclass(frozen=True)
class SparseParityMatrix:
    """Expanded signed parity-check matrix with row and column adjacency.

    ``rows[m]`` lists ``(col, sign)`` of check ``m`` in column order and
    ``cols[k]`` lists ``(row, sign)`` of symbol ``k`` in row order. The padded
    ``row_idx``/``col_idx`` arrays point their padding at index ``n``
    (resp. ``m``) with sign 0, so a vector extended by one trailing zero can
    be gathered without masking.
    """

    rows: tuple = field(repr=False)
    cols: tuple = field(repr=False)
    params: CodeParams
    variant: str
    base: BaseMatrix = field(repr=False)
    structure: Optional[ParityStructure] = field(default=None, repr=False)
    row_idx: np.ndarray = field(init=False, repr=False, compare=False)
    row_sign: np.ndarray = field(init=False, repr=False, compare=False)
    col_idx: np.ndarray = field(init=False, repr=False, compare=False)
    col_sign: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ri, rs = _padded(self.rows, self.params.n)
        ci, cs = _padded(self.cols, self.params.m)
        for name, arr in (("row_idx", ri), ("row_sign", rs), ("col_idx", ci), ("col_sign", cs)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def z(self) -> int:
        return self.base.z

    @property
    def nnz(self) -> int:
        return self.params.nnz

    def triples(self):
        """Yield ``(row, col, sign)`` for every nonzero, row-major."""
        for r, row in enumerate(self.rows):
            for c, s in row:
                yield r, c, s

    def to_dense(self) -> np.ndarray:
        H = np.zeros((self.m, self.n), dtype=np.int64)
        for r, c, s in self.triples():
            H[r, c] = s
        return H

    def to_scipy(self):
        from scipy import sparse

        r, c, s = zip(*self.triples())
        return sparse.csr_matrix((np.array(s, dtype=np.float64), (r, c)), shape=(self.m, self.n))


def parse_base_matrix(text: Union[str, TextIO]) -> BaseMatrix:
    """Parse the ``z N_B M_ROWS`` header followed by ``M_ROWS`` rows of shifts.

    ``-`` and ``-1`` both denote the zero block; ``#`` starts a comment line.
    """
    if isinstance(text, str):
        text = io.StringIO(text)
    header = None
    rows = []
    for lineno, raw in enumerate(text, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 3:
                raise BaseMatrixError(f"header needs 3 integers 'z N_B M_ROWS', got {len(tokens)}", lineno)
            vals = []
            for tok in tokens:
                try:
                    vals.append(int(tok))
                except ValueError:
                    raise BaseMatrixError(f"non-integer header token {tok!r}", lineno,
                                          line.find(tok) + 1) from None
            if min(vals) < 1:
                raise BaseMatrixError("header values must be positive", lineno)
            header = vals
            continue
        z, n_b, m_rows = header
        if len(rows) == m_rows:
            raise BaseMatrixError(f"more than {m_rows} rows", lineno)
        if len(tokens) != n_b:
            raise BaseMatrixError(f"expected {n_b} entries, got {len(tokens)}", lineno)
        row = []
        pos = 0
        for tok in tokens:
            col = line.find(tok, pos) + 1
            pos = col - 1 + len(tok)
            if tok == "-":
                row.append(-1)
                continue
            try:
                e = int(tok)
            except ValueError:
                raise BaseMatrixError(f"non-integer token {tok!r}", lineno, col) from None
            if e >= z:
                raise BaseMatrixError(f"shift {e} >= z={z}", lineno, col)
            if e < -1:
                raise BaseMatrixError(f"shift {e} < -1", lineno, col)
            row.append(e)
        rows.append(row)
    if header is None:
        raise BaseMatrixError("missing header")
    if len(rows) != header[2]:
        raise BaseMatrixError(f"expected {header[2]} rows, got {len(rows)}")
    return BaseMatrix(header[0], rows)


def write_base_matrix(base: BaseMatrix, out: Optional[TextIO] = None) -> str:
    """Inverse of :func:`parse_base_matrix`; zero blocks are written as ``-``."""
    lines = [f"{base.z} {base.n_b} {base.m_rows}"]
    for row in base.entries:
        lines.append(" ".join("-" if e < 0 else str(e) for e in row))
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write(text)
    return text


def detect_structure(base: BaseMatrix) -> ParityStructure:
    """Locate the h_b column and the dual-diagonal staircase of the parity part.

    Two layouts are accepted. With an h_b column, the first parity block
    column holds the h_b blocks and each of the remaining ``m_rows - 1``
    columns holds two zero shifts in consecutive rows ``(j, j+1)``. Without
    one, the first ``m_rows - 1`` parity columns have that two-block pattern
    and the last column a single zero shift in the last row.
    """
    B = base.as_array()
    m, k_b = base.m_rows, base.k_b
    if m < 2:
        raise StructureError("a single block row has no dual diagonal", k_b)

    def stair_ok(col, j, single=False):
        rows = np.flatnonzero(B[:, col] >= 0).tolist()
        want = [j] if single else [j, j + 1]
        return rows == want and all(B[r, col] == 0 for r in want)

    first = B[:, k_b]
    hb_free = stair_ok(k_b, 0) and all(stair_ok(k_b + j, j) for j in range(m - 1)) \
        and stair_ok(k_b + m - 1, m - 1, single=True)
    if hb_free:
        staircase = [(0, None, k_b)]
        staircase += [(j, k_b + j - 1, k_b + j) for j in range(1, m)]
        return ParityStructure(None, (), tuple(staircase), -1, k_b)

    for j in range(m - 1):
        col = k_b + 1 + j
        if not stair_ok(col, j):
            raise StructureError(
                f"block column {col} is not a dual-diagonal column with zero shifts in rows {j},{j + 1}",
                col)
    hb_rows = tuple((int(r), int(first[r])) for r in np.flatnonzero(first >= 0))
    if len(hb_rows) < 2:
        raise StructureError(f"h_b block column {k_b} has fewer than two blocks", k_b)
    staircase = [(0, None, k_b + 1)]
    staircase += [(j, k_b + j, k_b + j + 1) for j in range(1, m - 1)]
    staircase.append((m - 1, None, k_b + m - 1))
    return ParityStructure(k_b, hb_rows, tuple(staircase), -1, k_b)


def _params(rows, cols, n, m) -> CodeParams:
    return CodeParams(
        n=n, m=m, k=n - m,
        col_degrees=np.array([len(c) for c in cols], dtype=np.int64),
        row_degrees=np.array([len(r) for r in rows], dtype=np.int64),
    )


def expand(base: BaseMatrix, variant: str = "real") -> SparseParityMatrix:
    """Expand every block into its circulant and attach signs for ``variant``."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    structure = detect_structure(base) if variant == "real" else _try_structure(base)
    negate = structure.upper_entries() if variant == "real" else set()
    if structure is not None:
        structure = structure.with_sign(-1 if variant == "real" else 1)

    z = base.z
    n, m = z * base.n_b, z * base.m_rows
    rows = [[] for _ in range(m)]
    cols = [[] for _ in range(n)]
    for br, brow in enumerate(base.entries):
        for bc, shift in enumerate(brow):
            if shift < 0:
                continue
            sign = -1 if (br, bc) in negate else 1
            for i in range(z):
                r, c = br * z + i, bc * z + (i + shift) % z
                rows[r].append((c, sign))
                cols[c].append((r, sign))
    rows = tuple(tuple(sorted(r)) for r in rows)
    cols = tuple(tuple(sorted(c)) for c in cols)
    return SparseParityMatrix(rows, cols, _params(rows, cols, n, m), variant, base, structure)


def _try_structure(base):
    try:
        return detect_structure(base)
    except StructureError:
        return None


# IEEE 802.11n, n = 648 (z = 27). The rate 2/3 table keeps entry (1, 9) = 1,
# which adds one 4-cycle; rates 1/2 and 3/4 follow the standard.
_WIFI_R12 = """\
27 24 12
0 - - - 0 0 - - 0 - - 0 1 0 - - - - - - - - - -
22 0 - - 17 - 0 0 12 - - - - 0 0 - - - - - - - - -
6 - 0 - 10 - - - 24 - 0 - - - 0 0 - - - - - - - -
2 - - 0 20 - - - 25 0 - - - - - 0 0 - - - - - - -
23 - - - 3 - - - 0 - 9 11 - - - - 0 0 - - - - - -
24 - 23 1 17 - 3 - 10 - - - - - - - - 0 0 - - - - -
25 - - - 8 - - - 7 18 - - 0 - - - - - 0 0 - - - -
13 24 - - 0 - 8 - 6 - - - - - - - - - - 0 0 - - -
7 20 - 16 22 10 - - 23 - - - - - - - - - - - 0 0 - -
11 - - - 19 - - - 13 - 3 17 - - - - - - - - - 0 0 -
25 - 8 - 23 18 - 14 9 - - - - - - - - - - - - - 0 0
3 - - - 16 - - 2 25 5 - - 1 - - - - - - - - - - 0
"""

_WIFI_R23 = """\
27 24 8
25 26 14 - 20 - 2 - 4 - - 8 - 16 - 18 1 0 - - - - - -
10 9 15 11 - 0 - 1 - 1 18 - 8 - 10 - - 0 0 - - - - -
16 2 20 26 21 - 6 - 1 26 - 7 - - - - - - 0 0 - - - -
10 13 5 0 - 3 - 7 - - 26 - - 13 - 16 - - - 0 0 - - -
23 14 24 - 12 - 19 - 17 - - - 20 - 21 - 0 - - - 0 0 - -
6 22 9 20 - 25 - 17 - 8 - 14 - 18 - - - - - - - 0 0 -
14 23 21 11 20 - 24 - 18 - 19 - - - - 22 - - - - - - 0 0
17 11 11 20 - 21 - 26 - 3 - - 18 - 26 - 1 - - - - - - 0
"""

_WIFI_R34 = """\
27 24 6
16 17 22 24 9 3 14 - 4 2 7 - 26 - 2 - 21 - 1 0 - - - -
25 12 12 3 3 26 6 21 - 15 22 - 15 - 4 - - 16 - 0 0 - - -
25 18 26 16 22 23 9 - 0 - 4 - 4 - 8 23 11 - - - 0 0 - -
9 7 0 1 17 - - 7 3 - 3 23 - 16 - - 21 - 0 - - 0 0 -
24 5 26 7 1 - - 15 24 15 - 8 - 13 - 13 - 11 - - - - 0 0
2 2 19 14 24 1 15 19 - 21 - 2 - 24 - 3 - 2 1 - - - - 0
"""

# Toy 3x6 code, z = 1: pure staircase parity part, source rows s0+s1, s1+s2, s0+s2.
_T1 = """\
1 6 3
0 0 - 0 - -
- 0 0 0 0 -
0 - 0 - 0 0
"""

BUILTIN_CODES = {
    "t1": _T1,
    "wifi-r12": _WIFI_R12,
    "wifi-r23": _WIFI_R23,
    "wifi-r34": _WIFI_R34,
}


def builtin_code(name: str) -> BaseMatrix:
    try:
        return parse_base_matrix(BUILTIN_CODES[name])
    except KeyError:
        raise KeyError(f"unknown code {name!r}; built-ins are {sorted(BUILTIN_CODES)}") from None


def load_base(name_or_path: str) -> BaseMatrix:
    """Resolve a built-in code name, falling back to a base-matrix file path."""
    if name_or_path in BUILTIN_CODES:
        return builtin_code(name_or_path)
    with open(name_or_path, encoding="ascii") as fh:
        return parse_base_matrix(fh)

