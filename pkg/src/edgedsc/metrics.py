"""
Compression space saving (CSS), lossless decoding range and rate-region checks.

CSS values are returned as exact :class:`~fractions.Fraction` objects; all
accounting is in whole bits, so closed forms and measured payload sizes can be
compared with ``==``.
"""

from __future__ import annotations

import csv
import itertools
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .codec import compress_all, decode
from .codes import LinearBlockCode, gray_encode
from .errors import UsageError
from .schemes import DGScheme, FGScheme

__all__ = [
    "CssPoint",
    "CssSurface",
    "RatePoint",
    "css_empirical",
    "css_dg",
    "css_fg",
    "css_fg_limit",
    "css_of_scheme",
    "css_surface",
    "ldr_probe",
    "ldr_success_fraction",
    "sw_admissible",
    "format_css",
]


@dataclass(frozen=True, slots=True)
class CssPoint:
    N: int
    css: Fraction
    N_g1: int | None = None
    N_g2: int | None = None
    r_g1: int | None = None
    r_g2: int | None = None

    @property
    def scheme(self) -> str:
        return "dg" if self.N_g1 is None else "fg"


def css_empirical(uncompressed_bits: int, compressed_bits: int) -> Fraction:
    if uncompressed_bits <= 0:
        raise UsageError("uncompressed size must be positive")
    return 1 - Fraction(compressed_bits, uncompressed_bits)


def css_dg(code: LinearBlockCode, N: int) -> Fraction:
    if not 1 <= N <= code.k:
        raise UsageError(f"DG node count must lie in 1..{code.k}, got {N}")
    return Fraction(code.k, code.n * N)


def css_fg(code: LinearBlockCode, N_g1: int, N_g2: int, r_g1: int) -> Fraction:
    if N_g1 < 1 or N_g2 < 1:
        raise UsageError("each FG group needs at least one node")
    if not 0 <= r_g1 <= code.k:
        raise UsageError(f"r_g1 must lie in 0..{code.k}, got {r_g1}")
    saved = N_g1 * r_g1 + N_g2 * (code.k - r_g1)
    return Fraction(saved, (N_g1 + N_g2) * code.n)


def css_fg_limit(code: LinearBlockCode) -> Fraction:
    return Fraction(code.k, code.n)


def css_of_scheme(scheme: DGScheme | FGScheme) -> Fraction:
    if isinstance(scheme, DGScheme):
        return css_dg(scheme.code, scheme.N)
    return css_fg(scheme.code, scheme.N_g1, scheme.N_g2, scheme.r_g1)


def format_css(value: Fraction, denominator: int | None = None) -> str:
    """``0.1429 (4/28)``; the rational part is shown over ``denominator`` if given."""
    if denominator is None:
        rational = f"{value.numerator}/{value.denominator}"
    else:
        num = value * denominator
        rational = f"{int(num)}/{denominator}" if num.denominator == 1 else str(value)
    return f"{float(value):.4f} ({rational})"


@dataclass(frozen=True)
class CssSurface:
    """FG CSS over ``N_g1 in 1..N-1`` x ``r_g1 in 0..k``.

    ``saved[i, j]`` is the number of omitted bits for ``N_g1 = g1[i]`` and
    ``r_g1 = r1[j]``; every cell has the common denominator ``N * n``.
    """

    code: LinearBlockCode
    N: int
    g1: np.ndarray
    r1: np.ndarray
    saved: np.ndarray

    @property
    def denominator(self) -> int:
        return self.N * self.code.n

    @property
    def values(self) -> np.ndarray:
        return self.saved / self.denominator

    def at(self, N_g1: int, r_g1: int) -> Fraction:
        return Fraction(int(self.saved[N_g1 - 1, r_g1]), self.denominator)

    def argmax(self) -> tuple[int, int]:
        i, j = np.unravel_index(np.argmax(self.saved), self.saved.shape)
        return int(self.g1[i]), int(self.r1[j])

    def argmin(self) -> tuple[int, int]:
        i, j = np.unravel_index(np.argmin(self.saved), self.saved.shape)
        return int(self.g1[i]), int(self.r1[j])

    def points(self) -> Iterator[CssPoint]:
        k = self.code.k
        for i, g in enumerate(self.g1):
            for j, r in enumerate(self.r1):
                yield CssPoint(
                    self.N,
                    Fraction(int(self.saved[i, j]), self.denominator),
                    int(g), self.N - int(g), int(r), k - int(r),
                )

    def to_csv(self, fh=None) -> str | None:
        """Write ``N_g1,r_g1,css,css_exact`` rows; returns the text if no file given."""
        out = io.StringIO() if fh is None else fh
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["N_g1", "r_g1", "css", "css_exact"])
        den = self.denominator
        for i, g in enumerate(self.g1):
            for j, r in enumerate(self.r1):
                s = int(self.saved[i, j])
                writer.writerow([int(g), int(r), f"{s / den:.4f}", f"{s}/{den}"])
        return out.getvalue() if fh is None else None


def css_surface(code: LinearBlockCode, N: int) -> CssSurface:
    if N < 2:
        raise UsageError("the FG surface needs at least two nodes")
    g1 = np.arange(1, N, dtype=np.int64)
    r1 = np.arange(0, code.k + 1, dtype=np.int64)
    G, R = np.meshgrid(g1, r1, indexing="ij")
    saved = G * R + (N - G) * (code.k - R)
    return CssSurface(code, N, g1, r1, saved)


# -- lossless decoding range -------------------------------------------------


def _spread_cases(bases, N: int, d: int):
    for b in bases:
        for combo in itertools.product(range(b, b + d + 1), repeat=N):
            if min(combo) == b and max(combo) == b + d:
                yield combo


def _lossless(scheme, values, width: int, mode: str) -> bool:
    messages = [gray_encode(v, width) for v in values]
    report = decode(scheme, compress_all(scheme, messages), mode)
    return all(report.nodes[nid].recovered == msg for nid, msg in zip(scheme.node_ids, messages))


def _bases(width: int, d: int, exhaustive_limit: int, samples: int, rng):
    top = (1 << width) - d  # exclusive
    if top <= 0:
        return []
    if width <= exhaustive_limit:
        return range(top)
    return sorted(set(int(x) for x in rng.integers(0, top, size=samples)))


def ldr_success_fraction(
    scheme,
    d: int,
    *,
    mode: str = "vote",
    exhaustive_limit: int = 10,
    samples: int = 2000,
    seed: int = 0,
) -> float:
    """Fraction of readings with spread exactly ``d`` that decode losslessly."""
    width = scheme.code.n
    rng = np.random.default_rng(seed)
    cases = ok = 0
    for combo in _spread_cases(_bases(width, d, exhaustive_limit, samples, rng), scheme.N, d):
        cases += 1
        ok += _lossless(scheme, combo, width, mode)
    return ok / cases if cases else 0.0


def ldr_probe(
    code: LinearBlockCode,
    scheme,
    width: int | None = None,
    max_offset: int = 4,
    *,
    mode: str = "vote",
    exhaustive_limit: int = 10,
    samples: int = 2000,
    seed: int = 0,
) -> int:
    """Largest spread ``d`` of Gray-coded node readings that always decodes.

    Readings are ``width``-bit integers (``width == n``), Gray coded, with all
    node values inside ``[b, b + d]``.  Spreads are checked in increasing
    order; spread ``d`` only needs the assignments whose minimum is ``b`` and
    maximum ``b + d`` since narrower ones were covered earlier.  All bases are
    enumerated when ``width <= exhaustive_limit``, otherwise ``samples`` bases
    are drawn from a PRNG seeded with ``seed``.
    """
    if scheme.code is not code:
        raise UsageError("scheme was built for a different code")
    width = code.n if width is None else width
    if width != code.n:
        raise UsageError(f"readings must be n={code.n} bits wide, got {width}")
    if max_offset < 1:
        raise UsageError("max_offset must be at least 1")
    rng = np.random.default_rng(seed)
    for d in range(1, max_offset + 1):
        bases = _bases(width, d, exhaustive_limit, samples, rng)
        for combo in _spread_cases(bases, scheme.N, d):
            if not _lossless(scheme, combo, width, mode):
                return d - 1
    return max_offset


# -- Slepian-Wolf rate region --------------------------------------------------

_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class RatePoint:
    R_x: float
    R_y: float
    H_X_given_Y: float
    H_Y_given_X: float
    H_XY: float

    def __post_init__(self):
        if min(self.H_X_given_Y, self.H_Y_given_X, self.H_XY) < 0:
            raise UsageError("entropies must be non-negative")
        if self.H_XY + _TOL < max(self.H_X_given_Y, self.H_Y_given_X):
            raise UsageError("joint entropy cannot be below a conditional entropy")


def sw_admissible(p: RatePoint) -> bool:
    """Whether ``(R_x, R_y)`` lies in the closed Slepian-Wolf region."""
    return (
        p.R_x + _TOL >= p.H_X_given_Y
        and p.R_y + _TOL >= p.H_Y_given_X
        and p.R_x + p.R_y + _TOL >= p.H_XY
    )
