"""
Systematic binary linear block codes.

Every code is held in the systematic form ``G = [I_k | P]``,
``H = [P^T | I_m]``, so rows ``1..k`` of ``H^T`` are ``P`` and rows
``k+1..n`` are the identity.  Partitioning only ever touches the ``P`` rows.
Decoding is bounded-distance through a precomputed syndrome table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from os import PathLike
from typing import Mapping

import numpy as np

from .errors import ConstructionError, UndecodableSyndrome, UsageError
from .gf2 import BinaryMatrix, BitBlock, _mul_rows, rank, row_reduce, vec_mat_mul

__all__ = [
    "LinearBlockCode",
    "CorrectionResult",
    "build_hamming",
    "build_from_parity",
    "syndrome",
    "correct",
    "encode",
    "gray_encode",
    "gray_decode",
    "load_parity_file",
    "save_parity_file",
    "code_from_spec",
]

# brute-force syndrome tables beyond single errors
MAX_TABLE_LENGTH = 24


@dataclass(frozen=True)
class LinearBlockCode:
    n: int
    k: int
    t: int
    G: BinaryMatrix
    H: BinaryMatrix
    P: BinaryMatrix
    name: str = ""
    # syndrome (packed int) -> minimum-weight error pattern (packed int)
    table: Mapping[int, int] = field(default_factory=dict, repr=False, compare=False)
    # position j of the systematic code came from column column_map[j] of the raw H
    column_map: tuple[int, ...] = field(default=(), repr=False, compare=False)
    ht_rows: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @property
    def m(self) -> int:
        return self.n - self.k

    @property
    def Ht(self) -> BinaryMatrix:
        return self.H.T

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def syndrome_map(self) -> dict[BitBlock, BitBlock]:
        m, n = self.m, self.n
        return {BitBlock(s, m): BitBlock(e, n) for s, e in self.table.items()}

    def __str__(self) -> str:
        return self.name or f"({self.n},{self.k}) code"

    def syndrome_int(self, value: int) -> int:
        return _mul_rows(value, self.n, self.ht_rows)


@dataclass(frozen=True, slots=True)
class CorrectionResult:
    codeword: BitBlock
    error_pattern: BitBlock
    corrected_bits: int


def _assemble(Pt: np.ndarray, t: int, name: str, column_map=()) -> LinearBlockCode:
    m, k = Pt.shape
    n = k + m
    H = BinaryMatrix(np.hstack([Pt, np.eye(m, dtype=np.uint8)]), n)
    P = BinaryMatrix(Pt.T, m)
    G = BinaryMatrix(np.hstack([np.eye(k, dtype=np.uint8), Pt.T]), n)
    ht_rows = H.T.row_ints
    table = _syndrome_table(ht_rows, n, t)
    return LinearBlockCode(
        n, k, t, G, H, P, name, table, tuple(column_map) or tuple(range(n)), ht_rows
    )


def _syndrome_table(ht_rows, n: int, t: int) -> dict[int, int]:
    if t >= 2 and n > MAX_TABLE_LENGTH:
        raise UsageError(f"syndrome tables for t >= 2 are limited to n <= {MAX_TABLE_LENGTH}")
    table = {0: 0}
    for w in range(1, t + 1):
        for positions in itertools.combinations(range(n), w):
            s = 0
            e = 0
            for p in positions:
                s ^= ht_rows[p]
                e |= 1 << (n - 1 - p)
            if s in table:
                clash = BitBlock(table[s], n)
                raise ConstructionError(
                    f"patterns {clash} and {BitBlock(e, n)} share a syndrome; "
                    f"the code cannot correct {t} error(s)"
                )
            table[s] = e
    return table


def build_hamming(order: int) -> LinearBlockCode:
    """Hamming(2^order - 1, 2^order - 1 - order) in canonical systematic form.

    Columns of ``H`` are the nonzero ``order``-bit words, written with the
    least significant bit in row 1.  Words of weight >= 2 in increasing order
    make up ``P^T``; the weight-1 words give the trailing identity.
    """
    if order < 2:
        raise UsageError("Hamming order must be at least 2")
    n = (1 << order) - 1
    cols = [v for v in range(1, n + 1) if v.bit_count() >= 2]
    Pt = np.array([[(v >> r) & 1 for v in cols] for r in range(order)], dtype=np.uint8)
    Pt = Pt.reshape(order, len(cols))
    return _assemble(Pt, 1, f"Hamming({n},{n - order})")


def build_from_parity(H_raw: BinaryMatrix, t: int) -> LinearBlockCode:
    """Systematic code equivalent to the one defined by ``H_raw``.

    Rows are reduced to echelon form choosing pivots from the rightmost
    columns first, then pivot columns are moved to the end.  A matrix already
    in ``[P^T | I_m]`` form comes back unchanged.
    """
    if t < 0:
        raise UsageError("t must be non-negative")
    m, n = H_raw.shape
    if m == 0 or m > n:
        raise ConstructionError(f"parity-check matrix shape {H_raw.shape} is not usable")
    if rank(H_raw) != m:
        raise ConstructionError("parity-check matrix is rank deficient")
    reduced, pivots = row_reduce(H_raw, column_order=range(n - 1, -1, -1))
    row_order = sorted(range(m), key=lambda r: pivots[r])
    pivot_cols = sorted(pivots)
    free_cols = [c for c in range(n) if c not in set(pivots)]
    perm = free_cols + pivot_cols
    Hs = reduced.array[row_order][:, perm]
    if not np.array_equal(Hs[:, n - m :], np.eye(m, dtype=np.uint8)):
        raise ConstructionError("failed to bring parity-check matrix to systematic form")
    return _assemble(Hs[:, : n - m].copy(), t, f"({n},{n - m}) code, t={t}", perm)


def syndrome(code: LinearBlockCode, block: BitBlock) -> BitBlock:
    if block.length != code.n:
        raise UsageError(f"block length {block.length} != n={code.n}")
    return BitBlock(code.syndrome_int(block.value), code.m)


def correct(code: LinearBlockCode, block: BitBlock) -> CorrectionResult:
    """Bounded-distance correction of ``block`` to the nearest codeword."""
    if block.length != code.n:
        raise UsageError(f"block length {block.length} != n={code.n}")
    s = code.syndrome_int(block.value)
    try:
        e = code.table[s]
    except KeyError:
        raise UndecodableSyndrome(BitBlock(s, code.m)) from None
    return CorrectionResult(
        BitBlock(block.value ^ e, code.n), BitBlock(e, code.n), e.bit_count()
    )


def encode(code: LinearBlockCode, data: BitBlock) -> BitBlock:
    """Systematic codeword ``data @ G``."""
    return vec_mat_mul(data, code.G)


def gray_encode(value: int, width: int) -> BitBlock:
    if width < 0 or not 0 <= value < (1 << width):
        raise UsageError(f"value {value} does not fit in {width} bits")
    return BitBlock(value ^ (value >> 1), width)


def gray_decode(block: BitBlock) -> int:
    g = block.value
    v = 0
    while g:
        v ^= g
        g >>= 1
    return v


def load_parity_file(path: str | PathLike) -> tuple[BinaryMatrix, int]:
    """Read ``m n t`` followed by ``m`` rows of ``n`` '0'/'1' characters."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise UsageError(f"{path}: empty parity-check file")
    try:
        m, n, t = (int(x) for x in lines[0].split())
    except ValueError:
        raise UsageError(f"{path}: header must be 'm n t'") from None
    rows = lines[1:]
    if len(rows) != m or any(len(r) != n for r in rows):
        raise UsageError(f"{path}: expected {m} rows of {n} bits")
    return BinaryMatrix.from_rows(rows), t


def save_parity_file(path: str | PathLike, H: BinaryMatrix, t: int) -> None:
    with open(path, "w") as fh:
        fh.write(f"{H.rows} {H.cols} {t}\n")
        for i in range(1, H.rows + 1):
            fh.write(f"{H.row(i)}\n")


def code_from_spec(spec: str) -> LinearBlockCode:
    """Parse ``hamming:<order>`` or ``file:<path>`` (a bare path also works)."""
    family, _, arg = spec.partition(":")
    if family == "hamming":
        try:
            order = int(arg)
        except ValueError:
            raise UsageError(f"bad Hamming order in {spec!r}") from None
        return build_hamming(order)
    path = arg if family == "file" else spec
    H_raw, t = load_parity_file(path)
    return build_from_parity(H_raw, t)
