"""
Row-partition assignments for the Disjoint Grouping (DG) and Flexible
Grouping (FG) schemes, plus join/leave bookkeeping.

A node's partition ``(u, a, v)`` says it skips ``u`` systematic rows of
``H^T``, owns the next ``a``, and skips the final ``v``; ``u + a + v == k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .codes import LinearBlockCode
from .errors import CapacityExceeded, GroupEmptied, UsageError

__all__ = [
    "NodePartition",
    "DGScheme",
    "FGScheme",
    "ManagementEntry",
    "ManagementLog",
    "build_dg",
    "validate_dg",
    "build_fg",
    "fg_join",
    "fg_leave",
    "dg_rebuild_on_churn",
]


@dataclass(frozen=True, slots=True)
class NodePartition:
    node_id: int
    u: int
    a: int
    v: int

    @property
    def k(self) -> int:
        return self.u + self.a + self.v

    @property
    def band(self) -> range:
        """Owned rows of ``H^T`` (1-based)."""
        return range(self.u + 1, self.u + self.a + 1)

    def check(self, code: LinearBlockCode) -> None:
        if min(self.u, self.a, self.v) < 0 or self.k != code.k:
            raise UsageError(
                f"partition (u={self.u}, a={self.a}, v={self.v}) does not fit k={code.k}"
            )


@dataclass(frozen=True)
class DGScheme:
    code: LinearBlockCode
    partitions: tuple[NodePartition, ...]

    kind = "dg"

    @property
    def N(self) -> int:
        return len(self.partitions)

    @property
    def node_ids(self) -> tuple[int, ...]:
        return tuple(p.node_id for p in self.partitions)

    def partition(self, node_id: int) -> NodePartition:
        for p in self.partitions:
            if p.node_id == node_id:
                return p
        raise UsageError(f"node {node_id} is not part of this scheme")


@dataclass(frozen=True)
class FGScheme:
    """Two groups: group 1 owns rows ``1..r_g1``, group 2 owns the rest."""

    code: LinearBlockCode
    r_g1: int
    split_ratio: Fraction
    # (node_id, group) in node-index order
    members: tuple[tuple[int, int], ...]

    kind = "fg"

    @property
    def r_g2(self) -> int:
        return self.code.k - self.r_g1

    @property
    def N(self) -> int:
        return len(self.members)

    @property
    def node_ids(self) -> tuple[int, ...]:
        return tuple(nid for nid, _ in self.members)

    @property
    def membership(self) -> dict[int, int]:
        return dict(self.members)

    def group(self, g: int) -> tuple[int, ...]:
        return tuple(nid for nid, grp in self.members if grp == g)

    @property
    def N_g1(self) -> int:
        return len(self.group(1))

    @property
    def N_g2(self) -> int:
        return len(self.group(2))

    def partition(self, node_id: int) -> NodePartition:
        grp = self.membership.get(node_id)
        if grp is None:
            raise UsageError(f"node {node_id} is not part of this scheme")
        if grp == 1:
            return NodePartition(node_id, 0, self.r_g1, self.r_g2)
        return NodePartition(node_id, self.r_g1, self.r_g2, 0)

    @property
    def partitions(self) -> tuple[NodePartition, ...]:
        return tuple(self.partition(nid) for nid in self.node_ids)


@dataclass(frozen=True, slots=True)
class ManagementEntry:
    kind: str  # "join" | "leave" | "rebuild"
    node_ids: tuple[int, ...]
    messages: int


@dataclass(frozen=True)
class ManagementLog:
    entries: tuple[ManagementEntry, ...] = field(default=())

    def add(self, entry: ManagementEntry) -> ManagementLog:
        return ManagementLog(self.entries + (entry,))

    @property
    def total_messages(self) -> int:
        return sum(e.messages for e in self.entries)


def _default_ids(N: int, node_ids: Sequence[int] | None) -> tuple[int, ...]:
    ids = tuple(range(1, N + 1)) if node_ids is None else tuple(node_ids)
    if len(ids) != N:
        raise UsageError(f"{len(ids)} node ids supplied for {N} nodes")
    if len(set(ids)) != len(ids):
        raise UsageError("node ids must be unique")
    return ids


def build_dg(code: LinearBlockCode, N: int, node_ids: Sequence[int] | None = None) -> DGScheme:
    """Split the ``k`` systematic rows into ``N`` contiguous bands.

    The first ``k mod N`` nodes get one extra row.
    """
    if N < 1:
        raise UsageError("a DG scheme needs at least one node")
    if N > code.k:
        raise CapacityExceeded(f"DG supports at most k={code.k} nodes, got {N}")
    ids = _default_ids(N, node_ids)
    base, extra = divmod(code.k, N)
    parts = []
    u = 0
    for i, nid in enumerate(ids):
        a = base + (1 if i < extra else 0)
        parts.append(NodePartition(nid, u, a, code.k - u - a))
        u += a
    return DGScheme(code, tuple(parts))


def validate_dg(scheme: DGScheme) -> list[str]:
    """Every violated DG invariant as a message; an empty list means valid."""
    k = scheme.code.k
    problems = []
    if scheme.N > k:
        problems.append(f"node count {scheme.N} exceeds k={k}")
    if len(set(scheme.node_ids)) != scheme.N:
        problems.append("duplicate node ids")
    owner: dict[int, int] = {}
    for p in scheme.partitions:
        if p.u + p.a + p.v != k:
            problems.append(f"node {p.node_id}: u+a+v = {p.u + p.a + p.v} != k={k}")
        if p.a < 1:
            problems.append(f"node {p.node_id}: owns no rows")
        for row in p.band:
            if row < 1 or row > k:
                problems.append(f"node {p.node_id}: row {row} outside the systematic part")
            elif row in owner:
                problems.append(f"row {row} owned by nodes {owner[row]} and {p.node_id} (overlap)")
            else:
                owner[row] = p.node_id
    missing = [r for r in range(1, k + 1) if r not in owner]
    if missing:
        problems.append(f"rows {missing} not owned by any node (gap)")
    expected_u = 0
    for p in scheme.partitions:
        if p.u != expected_u:
            problems.append(f"node {p.node_id}: band does not follow the previous node")
            break
        expected_u = p.u + p.a
    return problems


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(str(x))


def build_fg(
    code: LinearBlockCode,
    N: int,
    split_ratio: float | Fraction = 0.5,
    r_g1: int | None = None,
    *,
    group_sizes: tuple[int, int] | None = None,
    node_ids: Sequence[int] | None = None,
) -> FGScheme:
    """Two-group scheme; the first ``N_g1`` nodes (by index) form group 1.

    ``N_g1`` is ``split_ratio * N`` rounded half up and clamped so each group
    has at least one node, unless ``group_sizes`` is given.  ``r_g1`` defaults
    to ``k // 2``.
    """
    if N < 2:
        raise UsageError("FG needs at least two nodes for a cross-group pair")
    if r_g1 is None:
        r_g1 = code.k // 2
    if not 0 <= r_g1 <= code.k:
        raise UsageError(f"r_g1={r_g1} outside 0..{code.k}")
    ids = _default_ids(N, node_ids)
    if group_sizes is not None:
        g1, g2 = group_sizes
        if g1 < 1 or g2 < 1 or g1 + g2 != N:
            raise UsageError(f"group sizes {group_sizes} invalid for N={N}")
        ratio = Fraction(g1, N)
    else:
        ratio = _as_fraction(split_ratio)
        if not 0 < ratio < 1:
            raise UsageError("split_ratio must lie strictly between 0 and 1")
        g1 = min(max(math.floor(ratio * N + Fraction(1, 2)), 1), N - 1)
    members = tuple((nid, 1 if i < g1 else 2) for i, nid in enumerate(ids))
    return FGScheme(code, r_g1, ratio, members)


def fg_join(scheme: FGScheme, node_id: int) -> tuple[FGScheme, ManagementEntry]:
    """Add one node to whichever group sits at or below its target share.

    Only the new node receives a configuration message.
    """
    if node_id in scheme.membership:
        raise UsageError(f"node {node_id} already present")
    share_g1 = Fraction(scheme.N_g1, scheme.N) if scheme.N else Fraction(0)
    grp = 1 if share_g1 <= scheme.split_ratio else 2
    new = replace(scheme, members=scheme.members + ((node_id, grp),))
    return new, ManagementEntry("join", (node_id,), 1)


def fg_leave(scheme: FGScheme, node_id: int) -> tuple[FGScheme, ManagementEntry]:
    grp = scheme.membership.get(node_id)
    if grp is None:
        raise UsageError(f"node {node_id} is not part of this scheme")
    if len(scheme.group(grp)) == 1:
        raise GroupEmptied(f"node {node_id} is the last member of group {grp}")
    members = tuple(m for m in scheme.members if m[0] != node_id)
    return replace(scheme, members=members), ManagementEntry("leave", (node_id,), 0)


def dg_rebuild_on_churn(
    scheme: DGScheme, event: str, node_id: int
) -> tuple[DGScheme, ManagementEntry]:
    """Rebuild the whole DG assignment after a join or leave.

    Every surviving node is sent a fresh configuration.
    """
    ids = list(scheme.node_ids)
    if event == "join":
        if node_id in ids:
            raise UsageError(f"node {node_id} already present")
        ids.append(node_id)
    elif event == "leave":
        if node_id not in ids:
            raise UsageError(f"node {node_id} is not part of this scheme")
        ids.remove(node_id)
    else:
        raise UsageError(f"unknown churn event {event!r}")
    new = build_dg(scheme.code, len(ids), ids)
    return new, ManagementEntry(event, (node_id,), new.N)
