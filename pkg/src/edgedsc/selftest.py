"""Built-in consistency checks run by ``edgedsc selftest``."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterator

from .codec import compress_all, decode, pair_decode_detail
from .codes import build_hamming
from .gf2 import BitBlock
from .metrics import css_dg, css_fg, css_of_scheme, css_empirical
from .schemes import build_dg, build_fg


def _roundtrip(scheme, base_range, offsets) -> int:
    """Count failures over every base message and node-offset assignment."""
    n = scheme.code.n
    failures = 0
    for base in base_range:
        for offs in offsets:
            msgs = [BitBlock(base ^ o, n) for o in offs]
            rep = decode(scheme, compress_all(scheme, msgs), "vote")
            failures += any(rep.nodes[nid].recovered != m for nid, m in zip(scheme.node_ids, msgs))
    return failures


def _weight_le1(n: int) -> list[int]:
    return [0] + [1 << i for i in range(n)]


def check_dg2_exhaustive() -> str:
    code = build_hamming(3)
    scheme = build_dg(code, 2)
    offsets = [(0, e) for e in _weight_le1(code.n)]
    bad = _roundtrip(scheme, range(1 << code.n), offsets)
    assert bad == 0, f"{bad} of 1024 two-node DG cases failed"
    return "1024 cases"


def _single_bit_offsets(n: int, N: int):
    # all nodes share a base or sit one fixed bit away from it
    for flip in range(n):
        for mask in range(1 << N):
            yield tuple((1 << flip) if (mask >> i) & 1 else 0 for i in range(N))


def check_dg4_exhaustive() -> str:
    code = build_hamming(3)
    scheme = build_dg(code, 4)
    offsets = list(_single_bit_offsets(code.n, 4))
    bad = _roundtrip(scheme, range(1 << code.n), offsets)
    assert bad == 0, f"{bad} four-node DG cases failed"
    return f"{(1 << code.n) * len(offsets)} cases"


def check_fg22_exhaustive() -> str:
    code = build_hamming(3)
    scheme = build_fg(code, 4, 0.5, 2)
    offsets = list(_single_bit_offsets(code.n, 4))
    bad = _roundtrip(scheme, range(1 << code.n), offsets)
    assert bad == 0, f"{bad} 2/2 FG cases failed"
    return f"{(1 << code.n) * len(offsets)} cases"


def check_worked_example() -> str:
    code = build_hamming(3)
    scheme = build_dg(code, 2)
    x, y = BitBlock.from_str("1011010"), BitBlock.from_str("1011110")
    px, py = compress_all(scheme, [x, y])
    assert str(px.body) == "11100" and str(py.body) == "10010"
    tr = pair_decode_detail(code, px, scheme.partition(1), py, scheme.partition(2))
    assert str(tr.c) == "1011110" and str(tr.syndrome) == "100"
    assert str(tr.correction.error_pattern) == "0000100"
    assert (tr.first, tr.second) == (x, y)
    return "c=1011110 s=100 e@5"


def check_css_identities() -> str:
    code = build_hamming(3)
    assert css_dg(code, 4) == Fraction(1, 7)
    assert css_fg(code, 2, 2, 2) == Fraction(2, 7)
    assert css_fg(code, 1, 3, 0) == Fraction(3, 7)
    for order in range(2, 7):
        c = build_hamming(order)
        k, n = c.k, c.n
        for N in range(2, 201, 2):
            assert css_fg(c, N // 2, N // 2, k // 2) == Fraction(k, 2 * n)
            assert css_fg(c, 1, N - 1, 0) == Fraction(k * N - k, N * n)
    for scheme in (build_dg(code, 4), build_fg(code, 4, 0.5, 2), build_fg(code, 4, r_g1=0, group_sizes=(1, 3))):
        msgs = [BitBlock(0, code.n)] * scheme.N
        body = sum(len(p) for p in compress_all(scheme, msgs))
        assert css_empirical(scheme.N * code.n, body) == css_of_scheme(scheme)
    return "closed forms agree"


CHECKS: dict[str, Callable[[], str]] = {
    "worked example": check_worked_example,
    "css identities": check_css_identities,
    "2-node DG exhaustive roundtrip": check_dg2_exhaustive,
    "4-node DG exhaustive roundtrip": check_dg4_exhaustive,
    "2/2 FG exhaustive roundtrip": check_fg22_exhaustive,
}


def run() -> Iterator[tuple[str, bool, str]]:
    for name, fn in CHECKS.items():
        try:
            yield name, True, fn()
        except AssertionError as exc:
            yield name, False, str(exc)
