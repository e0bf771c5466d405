"""
Desk-scale edge network simulation.

Readings follow a shared base value that drifts step to step; each node
reports a value within ``window`` of the base.  Values are Gray coded at the
full block width so neighbouring readings differ in a single bit.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .codec import CompressedPayload, compress_all, decode
from .codes import LinearBlockCode, gray_decode, gray_encode
from .errors import UsageError
from .gf2 import BitBlock
from .metrics import css_empirical
from .schemes import (
    DGScheme,
    FGScheme,
    ManagementLog,
    build_dg,
    build_fg,
    dg_rebuild_on_churn,
    fg_join,
    fg_leave,
)

__all__ = [
    "RNG_ALGORITHM",
    "CorrelationModel",
    "Trace",
    "SimReport",
    "TamperStats",
    "ChurnError",
    "generate_trace",
    "run_simulation",
    "inject_tamper",
    "run_tamper_trials",
    "parse_events",
    "run_churn",
]

RNG_ALGORITHM = "numpy.random.PCG64"


@dataclass(frozen=True)
class CorrelationModel:
    width: int
    window: int = 1
    drift: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.window < 0 or self.drift < 0:
            raise UsageError("window and drift must be non-negative")
        if self.width > 24:
            raise UsageError("reading width is limited to 24 bits")
        if self.window >= (1 << self.width):
            raise UsageError(f"window {self.window} does not fit {self.width}-bit readings")


@dataclass(frozen=True)
class Trace:
    """``values[step, node]`` integer readings; blocks are their Gray codes."""

    width: int
    values: np.ndarray

    @property
    def steps(self) -> int:
        return self.values.shape[0]

    @property
    def nodes(self) -> int:
        return self.values.shape[1]

    def blocks(self, step: int) -> list[BitBlock]:
        return [gray_encode(int(v), self.width) for v in self.values[step]]

    def __len__(self) -> int:
        return self.steps

    def __iter__(self) -> Iterator[list[BitBlock]]:
        for s in range(self.steps):
            yield self.blocks(s)

    def to_csv(self, path, node_ids: Sequence[int] | None = None) -> None:
        ids = list(node_ids) if node_ids is not None else list(range(1, self.nodes + 1))
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["step", "node_id", "value", "gray_bits"])
            for s in range(self.steps):
                for nid, v in zip(ids, self.values[s]):
                    w.writerow([s, nid, int(v), str(gray_encode(int(v), self.width))])

    @classmethod
    def from_csv(cls, path) -> Trace:
        rows: dict[int, list[int]] = {}
        width = None
        with open(path, newline="") as fh:
            for rec in csv.DictReader(fh):
                bits = BitBlock.from_str(rec["gray_bits"])
                if width is None:
                    width = bits.length
                value = int(rec["value"])
                if gray_decode(bits) != value:
                    raise UsageError(f"row {rec}: gray_bits do not encode value")
                rows.setdefault(int(rec["step"]), []).append(value)
        if not rows:
            raise UsageError(f"{path}: empty trace")
        values = np.array([rows[s] for s in sorted(rows)], dtype=np.int64)
        return cls(width, values)


def generate_trace(model: CorrelationModel, N: int, steps: int) -> Trace:
    """Bounded random walk of a common base plus per-node offsets in the window."""
    if N < 1 or steps < 0:
        raise UsageError("need at least one node and a non-negative step count")
    rng = np.random.default_rng(model.seed)
    top = (1 << model.width) - 1 - model.window
    values = np.empty((steps, N), dtype=np.int64)
    base = int(rng.integers(0, top + 1))
    for s in range(steps):
        if s and model.drift:
            base = min(max(base + int(rng.integers(-model.drift, model.drift + 1)), 0), top)
        values[s] = base + rng.integers(0, model.window + 1, size=N)
    return Trace(model.width, values)


def inject_tamper(
    payloads: Sequence[CompressedPayload], node_id: int, flip_positions: Iterable[int]
) -> list[CompressedPayload]:
    """Flip body bits (1-based) of one node's payload; others are untouched."""
    out = list(payloads)
    for i, p in enumerate(out):
        if p.node_id == node_id:
            body = p.body.flip(flip_positions)
            u, v = p.kept_prefix.length, p.kept_suffix.length
            out[i] = CompressedPayload(
                node_id,
                body.segment(1, u),
                body.segment(u + 1, v),
                body.segment(u + v + 1, p.m_bar.length),
            )
            return out
    raise UsageError(f"no payload for node {node_id}")


@dataclass
class SimReport:
    steps: int
    decode_success_rate: float
    lossless_steps: int
    empirical_css: Fraction
    integrity_alerts: int
    management_messages: int = 0
    honest_success_rate: float | None = None
    rng_algorithm: str = RNG_ALGORITHM
    seed: int | None = None
    log: list[dict] = field(default_factory=list)

    def to_json(self, **kwargs) -> str:
        d = asdict(self)
        d["empirical_css"] = f"{self.empirical_css.numerator}/{self.empirical_css.denominator}"
        return json.dumps(d, **kwargs)

    def table(self) -> str:
        rows = [
            ("steps", self.steps),
            ("decode success rate", f"{self.decode_success_rate:.4f}"),
            ("lossless steps", self.lossless_steps),
            ("empirical CSS", f"{float(self.empirical_css):.4f} ({self.empirical_css})"),
            ("integrity alerts", self.integrity_alerts),
        ]
        if self.honest_success_rate is not None:
            rows.append(("honest success rate", f"{self.honest_success_rate:.4f}"))
        rows.append(("rng", f"{self.rng_algorithm} seed={self.seed}"))
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


def run_simulation(
    scheme: DGScheme | FGScheme,
    trace: Trace,
    decode_mode: str = "vote",
    *,
    tamper_node: int | None = None,
    tamper_bits: int = 1,
    seed: int = 0,
) -> SimReport:
    """Compress and jointly decode every step of ``trace``.

    Trace column ``i`` belongs to ``scheme.node_ids[i]``.  With
    ``tamper_node`` set, that node's payload gets ``tamper_bits`` random body
    flips each step and ``honest_success_rate`` covers the other nodes.
    """
    if trace.nodes != scheme.N:
        raise UsageError(f"trace has {trace.nodes} nodes, scheme has {scheme.N}")
    if trace.width != scheme.code.n:
        raise UsageError(f"trace width {trace.width} != n={scheme.code.n}")
    rng = np.random.default_rng(seed)
    ids = scheme.node_ids
    ok = honest_ok = honest_total = lossless = alerts = 0
    raw_bits = body_bits = 0
    log = []
    for s, messages in enumerate(trace):
        payloads = compress_all(scheme, messages)
        raw_bits += scheme.N * scheme.code.n
        body_bits += sum(len(p) for p in payloads)
        if tamper_node is not None:
            body_len = len(next(p for p in payloads if p.node_id == tamper_node))
            flips = rng.choice(body_len, size=min(tamper_bits, body_len), replace=False) + 1
            payloads = inject_tamper(payloads, tamper_node, flips.tolist())
        report = decode(scheme, payloads, decode_mode)
        correct_ids = [nid for nid, m in zip(ids, messages) if report.nodes[nid].recovered == m]
        ok += len(correct_ids)
        honest = [nid for nid in ids if nid != tamper_node]
        honest_total += len(honest)
        honest_ok += sum(nid in correct_ids for nid in honest)
        step_lossless = len(correct_ids) == scheme.N
        lossless += step_lossless
        alerts += len(report.alerts)
        log.append(
            {
                "step": s,
                "lossless": step_lossless,
                "alerts": report.alerts,
                "failed": report.failed,
            }
        )
    total = trace.steps * scheme.N
    return SimReport(
        steps=trace.steps,
        decode_success_rate=ok / total if total else 1.0,
        lossless_steps=lossless,
        empirical_css=css_empirical(raw_bits, body_bits) if raw_bits else Fraction(0),
        integrity_alerts=alerts,
        honest_success_rate=(honest_ok / honest_total if honest_total else 1.0)
        if tamper_node is not None
        else None,
        seed=seed,
        log=log,
    )


@dataclass
class TamperStats:
    trials: int
    honest_correct: int
    honest_total: int
    trials_with_alert: int
    trials_with_disagreement: int
    alert_mismatches: int
    seed: int

    @property
    def honest_rate(self) -> float:
        return self.honest_correct / self.honest_total if self.honest_total else 1.0


def run_tamper_trials(
    scheme: DGScheme | FGScheme,
    trials: int,
    *,
    flips: tuple[int, int] = (1, 3),
    tampered: int = 1,
    window: int = 1,
    mode: str = "vote",
    seed: int = 0,
) -> TamperStats:
    """Random single-step trials with ``tampered`` nodes corrupting their payloads.

    Each trial draws a base reading, gives every node a Gray-coded value in
    ``[base, base + window]``, then flips between ``flips[0]`` and
    ``flips[1]`` distinct body bits of each tampered payload.
    """
    code = scheme.code
    rng = np.random.default_rng(seed)
    ids = scheme.node_ids
    top = (1 << code.n) - 1 - window
    stats = TamperStats(trials, 0, 0, 0, 0, 0, seed)
    for _ in range(trials):
        base = int(rng.integers(0, top + 1))
        msgs = [gray_encode(base + int(o), code.n) for o in rng.integers(0, window + 1, len(ids))]
        payloads = compress_all(scheme, msgs)
        bad = [ids[i] for i in rng.choice(len(ids), size=tampered, replace=False)]
        for nid in bad:
            body_len = len(next(p for p in payloads if p.node_id == nid))
            count = int(rng.integers(flips[0], flips[1] + 1))
            pos = rng.choice(body_len, size=min(count, body_len), replace=False) + 1
            payloads = inject_tamper(payloads, nid, pos.tolist())
        report = decode(scheme, payloads, mode)
        for nid, m in zip(ids, msgs):
            if nid in bad:
                continue
            stats.honest_total += 1
            stats.honest_correct += report.nodes[nid].recovered == m
        disagree = False
        for nd in report.nodes.values():
            split = len({b for _, b in nd.tentative}) > 1
            disagree |= split
            stats.alert_mismatches += split != nd.integrity_alert
        stats.trials_with_disagreement += disagree
        stats.trials_with_alert += report.integrity_alert
    return stats


# -- churn ------------------------------------------------------------------


class ChurnError(UsageError):
    """A churn event could not be applied."""

    def __init__(self, index: int, event, cause: Exception):
        super().__init__(f"event #{index} {event}: {cause}")
        self.index = index
        self.event = event
        self.cause = cause


def parse_events(text: str, initial_ids: Sequence[int]) -> list[tuple[str, int]]:
    """Expand ``"joins:10,leaves:5"`` into explicit ``(kind, node_id)`` events.

    Joins take fresh ids above the current maximum; leaves remove the most
    recently added node first.
    """
    live = list(initial_ids)
    next_id = max(live, default=0) + 1
    events = []
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        kind, _, count = chunk.partition(":")
        try:
            count = int(count) if count else 1
        except ValueError:
            raise UsageError(f"bad event count in {chunk!r}") from None
        if kind in ("join", "joins"):
            for _ in range(count):
                events.append(("join", next_id))
                live.append(next_id)
                next_id += 1
        elif kind in ("leave", "leaves"):
            for _ in range(count):
                if not live:
                    raise UsageError("more leaves than nodes")
                events.append(("leave", live.pop()))
        else:
            raise UsageError(f"unknown event kind {kind!r}")
    return events


def run_churn(
    scheme_kind: str,
    events: Sequence[tuple[str, int]],
    code: LinearBlockCode,
    initial_nodes: int,
    *,
    split_ratio: float = 0.5,
    r_g1: int | None = None,
) -> ManagementLog:
    """Replay join/leave events and return the configuration-message log."""
    if scheme_kind == "dg":
        scheme = build_dg(code, initial_nodes)
    elif scheme_kind == "fg":
        scheme = build_fg(code, initial_nodes, split_ratio, r_g1)
    else:
        raise UsageError(f"unknown scheme kind {scheme_kind!r}")
    log = ManagementLog()
    for i, (kind, nid) in enumerate(events):
        try:
            if scheme_kind == "dg":
                scheme, entry = dg_rebuild_on_churn(scheme, kind, nid)
            elif kind == "join":
                scheme, entry = fg_join(scheme, nid)
            elif kind == "leave":
                scheme, entry = fg_leave(scheme, nid)
            else:
                raise UsageError(f"unknown churn event {kind!r}")
        except UsageError as exc:
            raise ChurnError(i, (kind, nid), exc) from exc
        log = log.add(entry)
    return log
