"""
Bit vectors and matrices over GF(2).

Bit positions are 1-based and position 1 is the first transmitted bit.  A
:class:`BitBlock` packs its bits into a Python ``int`` with position 1 as the
most significant bit, so ``str(block)`` reads left to right in transmission
order.  :class:`BinaryMatrix` keeps a read-only ``numpy`` array for bulk work
(elimination, products) alongside packed row integers for the hot path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import UsageError

__all__ = [
    "BitBlock",
    "BinaryMatrix",
    "xor",
    "vec_mat_mul",
    "hamming_weight",
    "submatrix_rows",
    "concat",
    "row_reduce",
    "rank",
    "nullspace",
]


@dataclass(frozen=True, slots=True)
class BitBlock:
    """Fixed-length, immutable bit vector."""

    value: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise UsageError("BitBlock length must be non-negative")
        if self.value < 0 or self.value >> self.length:
            raise UsageError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def zeros(cls, length: int) -> BitBlock:
        return cls(0, length)

    @classmethod
    def from_str(cls, text: str) -> BitBlock:
        text = text.strip()
        if any(ch not in "01" for ch in text):
            raise UsageError(f"not a bit string: {text!r}")
        return cls(int(text, 2) if text else 0, len(text))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitBlock:
        value = 0
        length = 0
        for b in bits:
            b = int(b)
            if b not in (0, 1):
                raise UsageError(f"bit values must be 0 or 1, got {b}")
            value = (value << 1) | b
            length += 1
        return cls(value, length)

    @classmethod
    def unit(cls, position: int, length: int) -> BitBlock:
        """Block with a single 1 at ``position`` (1-based)."""
        if not 1 <= position <= length:
            raise UsageError(f"position {position} outside 1..{length}")
        return cls(1 << (length - position), length)

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def __xor__(self, other: BitBlock) -> BitBlock:
        return xor(self, other)

    def __add__(self, other: BitBlock) -> BitBlock:
        return concat(self, other)

    def bit(self, position: int) -> int:
        if not 1 <= position <= self.length:
            raise UsageError(f"position {position} outside 1..{self.length}")
        return (self.value >> (self.length - position)) & 1

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> (self.length - i)) & 1 for i in range(1, self.length + 1))

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    def segment(self, start: int, count: int) -> BitBlock:
        """Bits ``start .. start+count-1`` (1-based, inclusive)."""
        if count < 0 or start < 1 or start + count - 1 > self.length:
            raise UsageError(f"segment ({start}, {count}) outside block of length {self.length}")
        shift = self.length - (start + count - 1)
        return BitBlock((self.value >> shift) & ((1 << count) - 1), count)

    def flip(self, positions: Iterable[int]) -> BitBlock:
        value = self.value
        for p in positions:
            if not 1 <= p <= self.length:
                raise UsageError(f"position {p} outside 1..{self.length}")
            value ^= 1 << (self.length - p)
        return BitBlock(value, self.length)

    def to_array(self) -> np.ndarray:
        return np.array(self.bits, dtype=np.uint8)


def xor(a: BitBlock, b: BitBlock) -> BitBlock:
    if a.length != b.length:
        raise UsageError(f"length mismatch: {a.length} vs {b.length}")
    return BitBlock(a.value ^ b.value, a.length)


def hamming_weight(a: BitBlock) -> int:
    return a.value.bit_count()


def concat(*blocks: BitBlock) -> BitBlock:
    value = 0
    length = 0
    for blk in blocks:
        value = (value << blk.length) | blk.value
        length += blk.length
    return BitBlock(value, length)


class BinaryMatrix:
    """Immutable ``rows x cols`` matrix over GF(2)."""

    __slots__ = ("_array", "_row_ints")

    def __init__(self, entries, cols: int | None = None):
        arr = np.array(entries, dtype=np.uint8)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0 if cols is None else cols)
        if arr.ndim != 2:
            raise UsageError("BinaryMatrix needs a 2-D array of bits")
        if cols is not None and arr.shape[1] != cols:
            raise UsageError(f"expected {cols} columns, got {arr.shape[1]}")
        if np.any(arr > 1):
            raise UsageError("matrix entries must be 0 or 1")
        arr.setflags(write=False)
        self._array = arr
        weights = 1 << np.arange(arr.shape[1] - 1, -1, -1, dtype=object)
        self._row_ints = tuple(int(np.dot(row.astype(object), weights)) for row in arr)

    @classmethod
    def from_rows(cls, rows: Sequence[BitBlock | str], cols: int | None = None) -> BinaryMatrix:
        blocks = [BitBlock.from_str(r) if isinstance(r, str) else r for r in rows]
        if not blocks:
            return cls(np.zeros((0, cols or 0), dtype=np.uint8))
        width = blocks[0].length
        if any(b.length != width for b in blocks):
            raise UsageError("rows have different lengths")
        return cls([b.bits for b in blocks], cols)

    @classmethod
    def identity(cls, size: int) -> BinaryMatrix:
        return cls(np.eye(size, dtype=np.uint8))

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def rows(self) -> int:
        return self._array.shape[0]

    @property
    def cols(self) -> int:
        return self._array.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._array.shape

    @property
    def row_ints(self) -> tuple[int, ...]:
        return self._row_ints

    @property
    def T(self) -> BinaryMatrix:
        return BinaryMatrix(self._array.T)

    def row(self, index: int) -> BitBlock:
        """Row ``index`` (1-based) as a BitBlock."""
        if not 1 <= index <= self.rows:
            raise UsageError(f"row {index} outside 1..{self.rows}")
        return BitBlock(self._row_ints[index - 1], self.cols)

    def __matmul__(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.cols != other.rows:
            raise UsageError(f"cannot multiply {self.shape} by {other.shape}")
        prod = self._array.astype(np.int64) @ other._array.astype(np.int64)
        return BinaryMatrix(prod % 2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._array, other._array))

    def __hash__(self) -> int:
        return hash((self.shape, self._row_ints))

    def __repr__(self) -> str:
        return f"BinaryMatrix({[str(self.row(i + 1)) for i in range(self.rows)]})"

    def is_zero(self) -> bool:
        return not self._array.any()


def vec_mat_mul(v: BitBlock, M: BinaryMatrix) -> BitBlock:
    """``v @ M`` over GF(2): the XOR of the rows of ``M`` picked by the 1-bits of ``v``."""
    if v.length != M.rows:
        raise UsageError(f"vector length {v.length} != matrix rows {M.rows}")
    return BitBlock(_mul_rows(v.value, v.length, M.row_ints), M.cols)


def _mul_rows(value: int, length: int, row_ints: Sequence[int]) -> int:
    acc = 0
    i = length - 1
    while value:
        if value & 1:
            acc ^= row_ints[i]
        value >>= 1
        i -= 1
    return acc


def submatrix_rows(M: BinaryMatrix, start: int, count: int) -> BinaryMatrix:
    """Contiguous band of ``count`` rows beginning at row ``start`` (1-based)."""
    if count < 0 or start < 1 or start + count - 1 > M.rows:
        raise UsageError(f"row band ({start}, {count}) outside 1..{M.rows}")
    return BinaryMatrix(M.array[start - 1 : start - 1 + count, :], M.cols)


def row_reduce(M: BinaryMatrix, column_order: Sequence[int] | None = None):
    """Reduced row echelon form by Gauss-Jordan elimination mod 2.

    Columns are scanned in ``column_order`` (0-based indices, default left to
    right).  Returns ``(reduced, pivots)`` where ``pivots[i]`` is the column
    holding the leading 1 of reduced row ``i``.
    """
    work = M.array.copy()
    n_rows, n_cols = work.shape
    order = range(n_cols) if column_order is None else column_order
    pivots = []
    r = 0
    for c in order:
        if r == n_rows:
            break
        hits = np.nonzero(work[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            work[[r, p]] = work[[p, r]]
        others = np.nonzero(work[:, c])[0]
        others = others[others != r]
        work[others] ^= work[r]
        pivots.append(c)
        r += 1
    return BinaryMatrix(work), pivots


def rank(M: BinaryMatrix) -> int:
    return len(row_reduce(M)[1])


def nullspace(M: BinaryMatrix) -> BinaryMatrix:
    """Basis (as rows) of ``{x : M x^T = 0}``."""
    reduced, pivots = row_reduce(M)
    arr = reduced.array
    free = [c for c in range(M.cols) if c not in pivots]
    basis = np.zeros((len(free), M.cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, p in enumerate(pivots):
            basis[i, p] = arr[r, f]
    return BinaryMatrix(basis, M.cols)
