"""
Node-side compression and server-side joint decoding.

A node with partition ``(u, a, v)`` drops its ``a`` owned data bits and
folds them into the tail: ``m_bar = tail ^ (owned bits @ P[u+1 .. u+a])``.
The server zero-pads two payloads back to ``n`` bits, XORs them, corrects the
sum to a codeword, reads each node's dropped bits out of that codeword and
undoes the fold.  Zero padding preserves the syndrome, so the XOR carries the
syndrome of ``x ^ y`` and the correction succeeds whenever the two messages
differ in at most ``t`` bits.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .codes import CorrectionResult, LinearBlockCode, correct
from .errors import DecodeFailure, UndecodableSyndrome, UsageError, WireFormatError
from .gf2 import BitBlock, _mul_rows, concat
from .schemes import DGScheme, FGScheme, NodePartition

__all__ = [
    "CompressedPayload",
    "PairTrace",
    "NodeDecode",
    "DecodeReport",
    "compress",
    "zero_pad",
    "restore",
    "pair_decode",
    "pair_decode_detail",
    "dg_decode",
    "fg_decode",
    "decode",
    "compress_all",
    "encode_payload",
    "decode_payload",
    "WIRE_MAGIC",
    "WIRE_VERSION",
]


@dataclass(frozen=True, slots=True)
class CompressedPayload:
    node_id: int
    kept_prefix: BitBlock
    kept_suffix: BitBlock
    m_bar: BitBlock

    @property
    def body(self) -> BitBlock:
        return concat(self.kept_prefix, self.kept_suffix, self.m_bar)

    def __len__(self) -> int:
        return self.kept_prefix.length + self.kept_suffix.length + self.m_bar.length

    @classmethod
    def from_body(cls, node_id: int, body: BitBlock, part: NodePartition, code: LinearBlockCode):
        if body.length != code.n - part.a:
            raise UsageError(f"body length {body.length} != n - a = {code.n - part.a}")
        return cls(
            node_id,
            body.segment(1, part.u),
            body.segment(part.u + 1, part.v),
            body.segment(part.u + part.v + 1, code.m),
        )


def _band_product(code: LinearBlockCode, part: NodePartition, bits: BitBlock) -> int:
    return _mul_rows(bits.value, part.a, code.P.row_ints[part.u : part.u + part.a])


def compress(code: LinearBlockCode, part: NodePartition, message: BitBlock) -> CompressedPayload:
    """Drop the owned data bits and fold their partial syndrome into the tail."""
    part.check(code)
    if message.length != code.n:
        raise UsageError(f"message length {message.length} != n={code.n}")
    owned = message.segment(part.u + 1, part.a)
    tail = message.segment(code.k + 1, code.m)
    m_bar = BitBlock(tail.value ^ _band_product(code, part, owned), code.m)
    return CompressedPayload(
        part.node_id,
        message.segment(1, part.u),
        message.segment(part.u + part.a + 1, part.v),
        m_bar,
    )


def _check_payload(payload: CompressedPayload, part: NodePartition, code: LinearBlockCode):
    if (
        payload.kept_prefix.length != part.u
        or payload.kept_suffix.length != part.v
        or payload.m_bar.length != code.m
    ):
        raise UsageError(
            f"payload of node {payload.node_id} does not match partition "
            f"(u={part.u}, a={part.a}, v={part.v})"
        )


def zero_pad(payload: CompressedPayload, part: NodePartition, code: LinearBlockCode) -> BitBlock:
    """Re-insert zeros where the owned bits were dropped."""
    _check_payload(payload, part, code)
    return concat(payload.kept_prefix, BitBlock.zeros(part.a), payload.kept_suffix, payload.m_bar)


def restore(
    payload: CompressedPayload, part: NodePartition, code: LinearBlockCode, codeword: BitBlock
) -> BitBlock:
    """Rebuild the full message using the owned bits found in ``codeword``."""
    owned = codeword.segment(part.u + 1, part.a)
    tail = BitBlock(payload.m_bar.value ^ _band_product(code, part, owned), code.m)
    return concat(payload.kept_prefix, owned, payload.kept_suffix, tail)


@dataclass(frozen=True)
class PairTrace:
    """Intermediate values of one grouped decode."""

    padded_first: BitBlock
    padded_second: BitBlock
    c: BitBlock
    syndrome: BitBlock
    correction: CorrectionResult
    first: BitBlock
    second: BitBlock


def pair_decode_detail(
    code: LinearBlockCode,
    payload_i: CompressedPayload,
    part_i: NodePartition,
    payload_j: CompressedPayload,
    part_j: NodePartition,
) -> PairTrace:
    if set(part_i.band) & set(part_j.band):
        raise UsageError(
            f"nodes {part_i.node_id} and {part_j.node_id} own overlapping rows"
        )
    pi = zero_pad(payload_i, part_i, code)
    pj = zero_pad(payload_j, part_j, code)
    c = pi ^ pj
    s = BitBlock(code.syndrome_int(c.value), code.m)
    result = correct(code, c)
    C = result.codeword
    return PairTrace(
        pi, pj, c, s, result,
        restore(payload_i, part_i, code, C),
        restore(payload_j, part_j, code, C),
    )


def pair_decode(code, payload_i, part_i, payload_j, part_j) -> tuple[BitBlock, BitBlock]:
    """Grouped decode of two payloads; returns both reconstructed messages."""
    trace = pair_decode_detail(code, payload_i, part_i, payload_j, part_j)
    return trace.first, trace.second


@dataclass(frozen=True)
class NodeDecode:
    node_id: int
    recovered: BitBlock | None
    tentative: tuple[tuple[int, BitBlock], ...]
    vote_tally: Mapping[BitBlock, int]
    unanimous: bool
    integrity_alert: bool
    undecodable_partners: tuple[int, ...] = ()

    @property
    def failed(self) -> bool:
        return self.recovered is None


@dataclass(frozen=True)
class DecodeReport:
    nodes: Mapping[int, NodeDecode]
    pairs_attempted: int = 0
    pairs_undecodable: int = 0
    mode: str = "vote"

    @property
    def recovered(self) -> dict[int, BitBlock | None]:
        return {nid: nd.recovered for nid, nd in self.nodes.items()}

    @property
    def failed(self) -> list[int]:
        return [nid for nid, nd in self.nodes.items() if nd.failed]

    @property
    def integrity_alert(self) -> bool:
        return any(nd.integrity_alert for nd in self.nodes.values())

    @property
    def alerts(self) -> list[int]:
        return [nid for nid, nd in self.nodes.items() if nd.integrity_alert]

    def value(self, node_id: int) -> BitBlock:
        nd = self.nodes[node_id]
        if nd.recovered is None:
            raise DecodeFailure([node_id])
        return nd.recovered

    def raise_for_failures(self) -> None:
        if self.failed:
            raise DecodeFailure(self.failed)

    def consensus(self) -> BitBlock | None:
        """Most common recovered value across nodes (ties: smallest bit string)."""
        return _pick(Counter(v for v in self.recovered.values() if v is not None))


def _pick(tally: Counter) -> BitBlock | None:
    if not tally:
        return None
    best = max(tally.values())
    return min((b for b, c in tally.items() if c == best), key=str)


def _vote(node_id, tentative, undecodable) -> NodeDecode:
    tally = Counter(block for _, block in tentative)
    return NodeDecode(
        node_id,
        _pick(tally),
        tuple(tentative),
        dict(tally),
        unanimous=len(tally) == 1,
        integrity_alert=len(tally) > 1,
        undecodable_partners=tuple(undecodable),
    )


def _index_payloads(scheme, payloads: Iterable[CompressedPayload]) -> dict[int, CompressedPayload]:
    by_id: dict[int, CompressedPayload] = {}
    for p in payloads:
        if p.node_id in by_id:
            raise UsageError(f"duplicate payload for node {p.node_id}")
        by_id[p.node_id] = p
    expected = set(scheme.node_ids)
    if set(by_id) != expected:
        missing = sorted(expected - set(by_id))
        extra = sorted(set(by_id) - expected)
        raise UsageError(f"payload set mismatch: missing {missing}, unexpected {extra}")
    return by_id


def _run_pairs(scheme, by_id, pairs, tentative, undecodable):
    code = scheme.code
    failed_pairs = 0
    for i, j in pairs:
        try:
            xi, xj = pair_decode(
                code, by_id[i], scheme.partition(i), by_id[j], scheme.partition(j)
            )
        except UndecodableSyndrome:
            failed_pairs += 1
            undecodable[i].append(j)
            undecodable[j].append(i)
            continue
        tentative[i].append((j, xi))
        tentative[j].append((i, xj))
    return failed_pairs


def dg_decode(scheme: DGScheme, payloads: Sequence[CompressedPayload]) -> DecodeReport:
    """Grouped decode over every unordered node pair, then a per-node vote."""
    if scheme.N < 2:
        raise UsageError("joint decoding needs at least two nodes")
    by_id = _index_payloads(scheme, payloads)
    ids = scheme.node_ids
    tentative = {nid: [] for nid in ids}
    undecodable = {nid: [] for nid in ids}
    pairs = list(itertools.combinations(ids, 2))
    bad = _run_pairs(scheme, by_id, pairs, tentative, undecodable)
    nodes = {nid: _vote(nid, tentative[nid], undecodable[nid]) for nid in ids}
    return DecodeReport(nodes, len(pairs), bad, "vote")


def fg_decode(
    scheme: FGScheme, payloads: Sequence[CompressedPayload], mode: str = "single"
) -> DecodeReport:
    """Cross-group decoding.

    ``single`` pairs each node once with the lowest-index node of the other
    group.  ``vote`` decodes every cross-group pair and takes a majority.
    """
    g1, g2 = scheme.group(1), scheme.group(2)
    if not g1 or not g2:
        raise UsageError("both FG groups need at least one node")
    by_id = _index_payloads(scheme, payloads)
    ids = scheme.node_ids
    tentative = {nid: [] for nid in ids}
    undecodable = {nid: [] for nid in ids}
    if mode == "vote":
        pairs = [(i, j) for i in g1 for j in g2]
    elif mode == "single":
        lead1, lead2 = g1[0], g2[0]
        pairs = [(i, lead2) for i in g1] + [(lead1, j) for j in g2[1:]]
    else:
        raise UsageError(f"unknown FG decode mode {mode!r}")
    bad = _run_pairs(scheme, by_id, pairs, tentative, undecodable)
    if mode == "single":
        # each node keeps only the decode from its designated partner
        for nid in ids:
            partner = g2[0] if scheme.membership[nid] == 1 else g1[0]
            tentative[nid] = [(p, b) for p, b in tentative[nid] if p == partner]
            undecodable[nid] = [p for p in undecodable[nid] if p == partner]
    nodes = {nid: _vote(nid, tentative[nid], undecodable[nid]) for nid in ids}
    return DecodeReport(nodes, len(pairs), bad, mode)


def decode(scheme, payloads, mode: str = "vote") -> DecodeReport:
    """Dispatch to :func:`dg_decode` or :func:`fg_decode`."""
    if isinstance(scheme, DGScheme):
        return dg_decode(scheme, payloads)
    return fg_decode(scheme, payloads, mode)


def compress_all(scheme, messages: Mapping[int, BitBlock] | Sequence[BitBlock]):
    """Compress one message per node, in scheme node order."""
    if not isinstance(messages, Mapping):
        if len(messages) != scheme.N:
            raise UsageError(f"{len(messages)} messages for {scheme.N} nodes")
        messages = dict(zip(scheme.node_ids, messages))
    return [compress(scheme.code, scheme.partition(nid), messages[nid]) for nid in scheme.node_ids]


# -- wire format -------------------------------------------------------------
#
#   byte 0     magic 0xC5
#   byte 1     version (high nibble) | scheme (low nibble: 0 = DG, 1 = FG)
#   bytes 2-3  node_id, big-endian
#   byte 4     u
#   byte 5     a
#   body       prefix | suffix | m_bar, MSB first, zero-padded to a byte

WIRE_MAGIC = 0xC5
WIRE_VERSION = 1
_SCHEME_CODES = {"dg": 0, "fg": 1}
_HEADER_LEN = 6


def encode_payload(payload: CompressedPayload, part: NodePartition, scheme_kind: str) -> bytes:
    if scheme_kind not in _SCHEME_CODES:
        raise UsageError(f"unknown scheme kind {scheme_kind!r}")
    if not 0 <= payload.node_id <= 0xFFFF:
        raise UsageError(f"node id {payload.node_id} does not fit in 16 bits")
    if part.u > 0xFF or part.a > 0xFF:
        raise UsageError("u and a must fit in one byte each")
    if payload.kept_prefix.length != part.u:
        raise UsageError("payload prefix length does not match u")
    body = payload.body
    nbytes = (body.length + 7) // 8
    packed = (body.value << (nbytes * 8 - body.length)).to_bytes(nbytes, "big")
    header = bytes(
        [WIRE_MAGIC, (WIRE_VERSION << 4) | _SCHEME_CODES[scheme_kind]]
    ) + payload.node_id.to_bytes(2, "big") + bytes([part.u, part.a])
    return header + packed


def decode_payload(
    data: bytes, code: LinearBlockCode
) -> tuple[CompressedPayload, NodePartition, str]:
    """Parse a framed payload; returns ``(payload, partition, scheme_kind)``."""
    if len(data) < _HEADER_LEN:
        raise WireFormatError("payload shorter than its header")
    if data[0] != WIRE_MAGIC:
        raise WireFormatError(f"bad magic byte 0x{data[0]:02X}")
    version, scheme_code = data[1] >> 4, data[1] & 0x0F
    if version != WIRE_VERSION:
        raise WireFormatError(f"unsupported wire version {version}")
    kinds = {v: k for k, v in _SCHEME_CODES.items()}
    if scheme_code not in kinds:
        raise WireFormatError(f"unknown scheme code {scheme_code}")
    node_id = int.from_bytes(data[2:4], "big")
    u, a = data[4], data[5]
    if u + a > code.k:
        raise WireFormatError(f"u={u}, a={a} exceed k={code.k}")
    part = NodePartition(node_id, u, a, code.k - u - a)
    nbits = code.n - a
    nbytes = (nbits + 7) // 8
    raw = data[_HEADER_LEN:]
    if len(raw) != nbytes:
        raise WireFormatError(f"expected {nbytes} body bytes, got {len(raw)}")
    as_int = int.from_bytes(raw, "big")
    pad = nbytes * 8 - nbits
    if as_int & ((1 << pad) - 1):
        raise WireFormatError("nonzero padding bits")
    body = BitBlock(as_int >> pad, nbits)
    return CompressedPayload.from_body(node_id, body, part, code), part, kinds[scheme_code]
