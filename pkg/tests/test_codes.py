import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from edgedsc.codes import (
    build_from_parity,
    build_hamming,
    code_from_spec,
    correct,
    encode,
    gray_decode,
    gray_encode,
    load_parity_file,
    save_parity_file,
    syndrome,
)
from edgedsc.errors import ConstructionError, UndecodableSyndrome, UsageError
from edgedsc.gf2 import BinaryMatrix, BitBlock, rank

from .conftest import bch15_parity
from .reference import HT74, codewords

B = BitBlock.from_str


@pytest.mark.parametrize("order, nkmt", [(2, (3, 1, 2, 1)), (3, (7, 4, 3, 1)), (6, (63, 57, 6, 1))])
def test_hamming_parameters(order, nkmt):
    c = build_hamming(order)
    assert (c.n, c.k, c.m, c.t) == nkmt


def test_hamming_rejects_small_order():
    with pytest.raises(UsageError):
        build_hamming(1)


@pytest.mark.parametrize("order", range(2, 7))
def test_hamming_structure(order):
    c = build_hamming(order)
    assert (c.G @ c.Ht).is_zero()
    Ht = c.Ht.array
    assert np.array_equal(Ht[: c.k], c.P.array)
    assert np.array_equal(Ht[c.k :], np.eye(c.m, dtype=np.uint8))
    cols = {tuple(row) for row in Ht}
    assert len(cols) == c.n and (0,) * c.m not in cols
    assert len(c.table) == 2**c.m


def test_canonical_hamming74_matches_reference(ham3):
    assert [tuple(ham3.Ht.row(i).bits) for i in range(1, 8)] == list(HT74)


def test_syndrome_examples(ham3):
    assert str(syndrome(ham3, B("1011110"))) == "100"
    assert str(syndrome(ham3, B("0000000"))) == "000"
    for i in range(1, ham3.k + 1):
        assert syndrome(ham3, ham3.G.row(i)).value == 0
    with pytest.raises(UsageError):
        syndrome(ham3, B("101"))


def test_correct_examples(ham3):
    cw = ham3.G.row(2)
    r = correct(ham3, cw)
    assert r.codeword == cw and r.error_pattern.value == 0 and r.corrected_bits == 0
    r = correct(ham3, B("1011110"))
    assert str(r.error_pattern) == "0000100"
    assert r.codeword ^ r.error_pattern == B("1011110")


def test_single_errors_exhaustive_hamming74(ham3):
    # reference codeword list comes from brute-force enumeration, not from G
    ref = {BitBlock.from_bits(c) for c in codewords(HT74)}
    assert ref == {encode(ham3, BitBlock(d, 4)) for d in range(16)}
    for cw in ref:
        for p in range(1, 8):
            assert correct(ham3, cw.flip([p])).codeword == cw


@pytest.mark.parametrize("order", [3, 4])
def test_correct_every_pattern_within_t(order):
    c = build_hamming(order)
    for d in range(1 << c.k):
        cw = encode(c, BitBlock(d, c.k))
        for e in [0] + [1 << i for i in range(c.n)]:
            assert correct(c, BitBlock(cw.value ^ e, c.n)).codeword == cw


def test_build_from_parity_reproduces_canonical(ham3):
    c = build_from_parity(ham3.H, 1)
    assert c.H == ham3.H and c.syndrome_map == ham3.syndrome_map


def test_build_from_parity_after_row_operations(ham3):
    rows = ham3.H.array.copy()
    rows[0] ^= rows[1]
    rows = rows[[2, 0, 1]]
    c = build_from_parity(BinaryMatrix(rows), 1)
    assert c.H == ham3.H


def test_build_from_parity_permutes_to_systematic():
    natural = BinaryMatrix([[(col >> r) & 1 for col in range(1, 8)] for r in range(3)])
    c = build_from_parity(natural, 1)
    assert (c.n, c.k, c.m) == (7, 4, 3)
    assert (c.G @ c.Ht).is_zero()
    assert sorted(c.column_map) == list(range(7))
    # permuting the raw columns by column_map gives a row-equivalent matrix
    permuted = BinaryMatrix(natural.array[:, list(c.column_map)])
    assert rank(BinaryMatrix(np.vstack([permuted.array, c.H.array]))) == 3


def test_parity_only_code_t0():
    c = build_from_parity(BinaryMatrix.from_rows(["111"]), 0)
    assert (c.n, c.k, c.m) == (3, 2, 1)
    assert c.syndrome_map == {BitBlock(0, 1): BitBlock(0, 3)}
    with pytest.raises(UndecodableSyndrome):
        correct(c, B("100"))


def test_zero_column_rejected():
    # last column is all zero: an error there is invisible
    H = BinaryMatrix.from_rows(["1100100", "1010010", "0110000"])
    assert rank(H) == 3
    with pytest.raises(ConstructionError):
        build_from_parity(H, 1)


def test_rank_deficient_rejected():
    with pytest.raises(ConstructionError):
        build_from_parity(BinaryMatrix.from_rows(["1101100", "1101100", "0111001"]), 1)


def test_capability_overclaim_rejected(ham3):
    with pytest.raises(ConstructionError):
        build_from_parity(ham3.H, 2)


def test_bch15_t2(bch15):
    assert (bch15.n, bch15.k, bch15.t) == (15, 7, 2)
    assert (bch15.G @ bch15.Ht).is_zero()
    assert len(bch15.table) == 1 + 15 + 105
    weights = [encode(bch15, BitBlock(d, 7)).weight for d in range(1, 128)]
    assert min(weights) == 5
    cw = encode(bch15, BitBlock(0b1010011, 7))
    for i, j in itertools.combinations(range(1, 16), 2):
        assert correct(bch15, cw.flip([i, j])).codeword == cw


def test_large_t_table_refused():
    H = BinaryMatrix(np.ones((1, 30), dtype=np.uint8))
    with pytest.raises(UsageError):
        build_from_parity(H, 2)


def test_gray_examples():
    assert str(gray_encode(0, 4)) == "0000"
    assert str(gray_encode(5, 3)) == "111"
    with pytest.raises(UsageError):
        gray_encode(8, 3)


@pytest.mark.parametrize("w", range(1, 13))
def test_gray_adjacency_and_roundtrip_exhaustive(w):
    prev = gray_encode(0, w)
    assert gray_decode(prev) == 0
    for v in range(1, 1 << w):
        g = gray_encode(v, w)
        assert gray_decode(g) == v
        assert (g ^ prev).weight == 1
        prev = g


@given(st.integers(1, 16).flatmap(lambda w: st.tuples(st.just(w), st.integers(0, (1 << w) - 1))))
def test_gray_roundtrip_property(case):
    w, v = case
    assert gray_decode(gray_encode(v, w)) == v


@given(st.integers(0, 127), st.integers(0, 127))
def test_syndrome_linear(a, b):
    c = build_hamming(3)
    A, Bb = BitBlock(a, 7), BitBlock(b, 7)
    assert syndrome(c, A ^ Bb) == syndrome(c, A) ^ syndrome(c, Bb)


def test_parity_file_roundtrip(tmp_path):
    H = bch15_parity()
    path = tmp_path / "bch.txt"
    save_parity_file(path, H, 2)
    H2, t = load_parity_file(path)
    assert H2 == H and t == 2
    assert code_from_spec(f"file:{path}").k == 7
    assert code_from_spec("hamming:4").n == 15


def test_parity_file_errors(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 3 1\n111\n")
    with pytest.raises(UsageError):
        load_parity_file(bad)
    with pytest.raises(UsageError):
        code_from_spec("hamming:x")
