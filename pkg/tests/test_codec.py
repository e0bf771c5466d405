import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgedsc.codec import (
    CompressedPayload,
    compress,
    compress_all,
    decode,
    dg_decode,
    fg_decode,
    pair_decode,
    pair_decode_detail,
    restore,
    zero_pad,
)
from edgedsc.codes import build_hamming, encode, syndrome
from edgedsc.errors import DecodeFailure, UsageError
from edgedsc.gf2 import BitBlock
from edgedsc.netsim import inject_tamper
from edgedsc.schemes import NodePartition, build_dg, build_fg

from . import reference as ref

B = BitBlock.from_str


@pytest.fixture
def dg2(ham3):
    return build_dg(ham3, 2)


def test_worked_example_matches_oracle(ham3, dg2):
    x, y = B("1011010"), B("1011110")
    p1, p2 = dg2.partition(1), dg2.partition(2)
    c1, c2 = compress(ham3, p1, x), compress(ham3, p2, y)
    assert str(c1.body) == "11100" and str(c2.body) == "10010"
    trace = pair_decode_detail(ham3, c1, p1, c2, p2)
    assert str(trace.padded_first) == "0011100"
    assert str(trace.padded_second) == "1000010"
    assert str(trace.c) == "1011110"
    assert str(trace.syndrome) == "100"
    assert str(trace.correction.error_pattern) == "0000100"
    assert (trace.first, trace.second) == (x, y)

    # the oracle walks the same example with list arithmetic and nearest-codeword search
    bx, by = ref.bits("1011010"), ref.bits("1011110")
    rb1 = ref.compress(bx, 0, 2, ref.HT74, 4)
    rb2 = ref.compress(by, 2, 2, ref.HT74, 4)
    assert ref.text(rb1) == "11100" and ref.text(rb2) == "10010"
    c, C, rx, ry = ref.pair_decode(rb1, (0, 2), rb2, (2, 2), ref.HT74, 4)
    assert ref.text(c) == "1011110" and ref.text(C) == "1011010"
    assert (rx, ry) == (bx, by)


def test_zero_pad_and_restore_examples(ham3, dg2):
    p1 = dg2.partition(1)
    payload = compress(ham3, p1, B("1011010"))
    assert str(zero_pad(payload, p1, ham3)) == "0011100"
    assert restore(payload, p1, ham3, B("1011010")) == B("1011010")
    with pytest.raises(UsageError):
        zero_pad(payload, dg2.partition(2), ham3)


def test_compress_sizes(ham3):
    for N in range(1, 5):
        s = build_dg(ham3, N)
        for p in s.partitions:
            assert len(compress(ham3, p, B("1100110"))) == ham3.n - p.a
    with pytest.raises(UsageError):
        compress(ham3, NodePartition(1, 0, 2, 2), B("101"))


def test_compress_with_empty_band_is_identity(ham3):
    p = NodePartition(1, 0, 0, 4)
    for v in range(128):
        assert compress(ham3, p, BitBlock(v, 7)).body == BitBlock(v, 7)


def test_compress_matches_oracle_exhaustive(ham3):
    for u, a in [(0, 1), (1, 2), (0, 4), (2, 2), (3, 1)]:
        p = NodePartition(1, u, a, 4 - u - a)
        for v in range(128):
            msg = BitBlock(v, 7)
            expected = ref.compress(list(msg.bits), u, a, ref.HT74, 4)
            assert list(compress(ham3, p, msg).body.bits) == expected


@pytest.mark.parametrize("order", [3, 4])
def test_zero_padding_preserves_syndrome(order):
    code = build_hamming(order)
    rng = np.random.default_rng(7)
    s = build_dg(code, 3)
    for _ in range(300):
        msg = BitBlock(int(rng.integers(0, 1 << code.n)), code.n)
        for p in s.partitions:
            padded = zero_pad(compress(code, p, msg), p, code)
            assert syndrome(code, padded) == syndrome(code, msg)


def _offsets(n, t):
    for w in range(t + 1):
        for pos in itertools.combinations(range(n), w):
            yield sum(1 << i for i in pos)


def test_pair_roundtrip_exhaustive_hamming74(ham3, dg2):
    p1, p2 = dg2.partition(1), dg2.partition(2)
    count = 0
    for v in range(128):
        x = BitBlock(v, 7)
        for e in _offsets(7, 1):
            y = BitBlock(v ^ e, 7)
            got = pair_decode(ham3, compress(ham3, p1, x), p1, compress(ham3, p2, y), p2)
            assert got == (x, y)
            count += 1
    assert count == 1024


def test_pair_roundtrip_t2_code(bch15):
    s = build_dg(bch15, 2)
    p1, p2 = s.partition(1), s.partition(2)
    rng = np.random.default_rng(3)
    for _ in range(40):
        v = int(rng.integers(0, 1 << 15))
        x = BitBlock(v, 15)
        for e in _offsets(15, 2):
            y = BitBlock(v ^ e, 15)
            got = pair_decode(bch15, compress(bch15, p1, x), p1, compress(bch15, p2, y), p2)
            assert got == (x, y)


@pytest.mark.parametrize("order", [3, 4, 5])
def test_pair_decode_is_order_independent(order):
    code = build_hamming(order)
    s = build_dg(code, 3)
    rng = np.random.default_rng(order)
    a, b = s.partition(1), s.partition(3)
    for _ in range(200):
        v = int(rng.integers(0, 1 << code.n))
        e = 1 << int(rng.integers(0, code.n))
        x, y = BitBlock(v, code.n), BitBlock(v ^ e, code.n)
        cx, cy = compress(code, a, x), compress(code, b, y)
        assert pair_decode(code, cx, a, cy, b) == (x, y)
        assert pair_decode(code, cy, b, cx, a) == (y, x)


def test_pair_decode_rejects_overlapping_bands(ham3):
    p = NodePartition(1, 0, 2, 2)
    q = NodePartition(2, 1, 2, 1)
    m = B("1011010")
    with pytest.raises(UsageError):
        pair_decode(ham3, compress(ham3, p, m), p, compress(ham3, q, m), q)


def test_weight_two_difference_is_miscorrected(ham3, dg2):
    # outside the guarantee: the decoder returns a wrong answer rather than failing
    p1, p2 = dg2.partition(1), dg2.partition(2)
    x = B("1011010")
    y = x.flip([1, 2])
    got = pair_decode(ham3, compress(ham3, p1, x), p1, compress(ham3, p2, y), p2)
    assert got != (x, y)


@st.composite
def within_t(draw, order_range=(3, 5)):
    order = draw(st.integers(*order_range))
    code = build_hamming(order)
    N = draw(st.integers(2, min(5, code.k)))
    base = draw(st.integers(0, (1 << code.n) - 1))
    # all nodes within one bit of a shared base: pairwise distance at most 2,
    # so pick a single deviant node to keep every pair within t = 1
    deviant = draw(st.integers(0, N - 1))
    flip = draw(st.integers(-1, code.n - 1))
    msgs = [BitBlock(base, code.n)] * N
    if flip >= 0:
        msgs[deviant] = BitBlock(base ^ (1 << flip), code.n)
    return code, N, msgs


@settings(max_examples=300, deadline=None)
@given(within_t())
def test_dg_roundtrip_property(case):
    code, N, msgs = case
    s = build_dg(code, N)
    report = dg_decode(s, compress_all(s, msgs))
    assert list(report.recovered.values()) == msgs
    assert not report.integrity_alert and not report.failed


@settings(max_examples=300, deadline=None)
@given(within_t(), st.sampled_from(["single", "vote"]), st.data())
def test_fg_roundtrip_property(case, mode, data):
    code, N, msgs = case
    if N < 2:
        return
    g1 = data.draw(st.integers(1, N - 1))
    r1 = data.draw(st.integers(0, code.k))
    s = build_fg(code, N, r_g1=r1, group_sizes=(g1, N - g1))
    report = fg_decode(s, compress_all(s, msgs), mode)
    assert list(report.recovered.values()) == msgs


def test_seeded_roundtrip_bulk():
    # 2 * 30000 seeded pair roundtrips; each pair differs in at most t bits
    rng = np.random.default_rng(2024)
    checked = 0
    for order in (3, 5):
        code = build_hamming(order)
        s = build_dg(code, min(4, code.k))
        parts = s.partitions
        for _ in range(30000):
            v = int(rng.integers(0, 1 << code.n))
            e = 0 if rng.random() < 0.1 else 1 << int(rng.integers(0, code.n))
            i, j = rng.choice(len(parts), size=2, replace=False)
            pi, pj = parts[i], parts[j]
            x, y = BitBlock(v, code.n), BitBlock(v ^ e, code.n)
            assert pair_decode(code, compress(code, pi, x), pi, compress(code, pj, y), pj) == (x, y)
            checked += 1
    assert checked == 60000


def test_dg_decode_four_nodes(ham3):
    s = build_dg(ham3, 4)
    msgs = [B("1011010"), B("1011110"), B("1011010"), B("1011011")]
    # node 2 and node 4 differ in two bits, so their pair decodes wrongly
    report = dg_decode(s, compress_all(s, msgs))
    assert report.pairs_attempted == 6
    assert report.recovered[1] == msgs[0] and report.recovered[3] == msgs[2]
    assert report.nodes[1].unanimous
    assert report.nodes[2].integrity_alert
    # nodes 2 and 4 still win their votes
    assert report.recovered[2] == msgs[1] and report.recovered[4] == msgs[3]


def test_dg_decode_requires_two_nodes_and_all_payloads(ham3):
    one = build_dg(ham3, 1)
    with pytest.raises(UsageError):
        dg_decode(one, compress_all(one, [B("0000000")]))
    s = build_dg(ham3, 3)
    payloads = compress_all(s, [B("0000000")] * 3)
    with pytest.raises(UsageError):
        dg_decode(s, payloads[:2])
    with pytest.raises(UsageError):
        dg_decode(s, payloads + payloads[:1])


def test_fg_decode_modes(ham3):
    s = build_fg(ham3, 4, 0.5, 2)
    msgs = [B("1011010")] * 2 + [B("1011110")] * 2
    payloads = compress_all(s, msgs)
    single = fg_decode(s, payloads, "single")
    assert single.pairs_attempted == 3
    assert all(len(nd.tentative) == 1 for nd in single.nodes.values())
    vote = fg_decode(s, payloads, "vote")
    assert vote.pairs_attempted == 4
    assert list(single.recovered.values()) == msgs == list(vote.recovered.values())
    with pytest.raises(UsageError):
        fg_decode(s, payloads, "nope")


def test_fg_single_trusts_the_group_leader(ham3):
    s = build_fg(ham3, 6, 0.5, 2)
    msg = B("1100110")
    payloads = compress_all(s, [msg] * 6)
    leader2 = s.group(2)[0]
    bad = inject_tamper(payloads, leader2, [1, 2])
    single = fg_decode(s, bad, "single")
    vote = fg_decode(s, bad, "vote")
    honest_g1 = s.group(1)
    assert any(single.recovered[i] != msg for i in honest_g1)
    assert all(vote.recovered[i] == msg for i in honest_g1)
    assert vote.integrity_alert


def test_decode_dispatch(ham3):
    dg = build_dg(ham3, 2)
    fg = build_fg(ham3, 2, 0.5, 2)
    msgs = [B("0101010"), B("0101011")]
    assert list(decode(dg, compress_all(dg, msgs)).recovered.values()) == msgs
    assert list(decode(fg, compress_all(fg, msgs), "single").recovered.values()) == msgs


def test_report_failure_semantics(ham3):
    # parity-only code: any nonzero syndrome is undecodable
    from edgedsc.codes import build_from_parity
    from edgedsc.gf2 import BinaryMatrix

    code = build_from_parity(BinaryMatrix.from_rows(["111"]), 0)
    s = build_dg(code, 2)
    report = dg_decode(s, compress_all(s, [B("100"), B("000")]))
    assert report.pairs_undecodable == 1
    assert report.failed == [1, 2]
    assert report.nodes[1].undecodable_partners == (2,)
    with pytest.raises(DecodeFailure):
        report.value(1)
    with pytest.raises(DecodeFailure):
        report.raise_for_failures()
    assert report.consensus() is None


@pytest.mark.parametrize("N, f", [(3, 0), (4, 1), (5, 1), (6, 2), (7, 2), (8, 3)])
def test_vote_survives_honest_majority(N, f):
    # f <= (N - 2) // 2 tampered nodes: each honest node has a strict majority of honest partners
    code = build_hamming(5)
    s = build_dg(code, N)
    rng = np.random.default_rng(N * 10 + f)
    for _ in range(200):
        base = int(rng.integers(0, 1 << code.n))
        msgs = [BitBlock(base, code.n)] * N
        payloads = compress_all(s, msgs)
        bad = [s.node_ids[i] for i in rng.choice(N, size=f, replace=False)]
        for nid in bad:
            body_len = len(next(p for p in payloads if p.node_id == nid))
            k = int(rng.integers(1, 4))
            payloads = inject_tamper(payloads, nid, (rng.choice(body_len, k, replace=False) + 1).tolist())
        report = dg_decode(s, payloads)
        for nid, m in zip(s.node_ids, msgs):
            if nid not in bad:
                assert report.recovered[nid] == m


def test_vote_tie_with_two_of_five_tampered():
    # N = 5 with two tampered nodes: an honest node sees two honest and two
    # tampered partners. When both tampered decodes land on the same wrong
    # value the vote ties 2-2 and the tie-break can pick it.
    code = build_hamming(4)
    s = build_dg(code, 5)
    msg = B("010000100011110")
    payloads = compress_all(s, [msg] * 5)
    payloads = inject_tamper(payloads, 4, [7, 4])
    payloads = inject_tamper(payloads, 5, [12, 11, 7])
    node = dg_decode(s, payloads).nodes[3]
    wrong = B("010000000010011")
    assert node.vote_tally == {msg: 2, wrong: 2}
    assert node.integrity_alert
    assert node.recovered == wrong  # lexicographically smaller of the tied values


def test_consistent_majority_attack_flips_consensus(ham3):
    # ceil(N/2) colluding nodes that send a consistent alternative reading
    # move the consensus value; this is the documented limit of voting
    s = build_dg(ham3, 4)
    honest = B("1011010")
    forged = B("0100101")
    report = dg_decode(s, compress_all(s, [honest, forged, forged, forged]))
    assert report.integrity_alert
    assert report.consensus() == forged
    assert report.recovered[1] != honest


def test_payload_from_body_roundtrip(ham3, dg2):
    p2 = dg2.partition(2)
    payload = compress(ham3, p2, B("1011110"))
    assert CompressedPayload.from_body(2, payload.body, p2, ham3) == payload
    with pytest.raises(UsageError):
        CompressedPayload.from_body(2, B("101"), p2, ham3)


def test_encode_decode_consistency(ham3):
    # codeword-level sanity: encoding then compressing then padding never leaves the coset
    for d in range(16):
        cw = encode(ham3, BitBlock(d, 4))
        for p in build_dg(ham3, 4).partitions:
            assert syndrome(ham3, zero_pad(compress(ham3, p, cw), p, ham3)).value == 0
