"""Partition capture candidates into co-observable groups.

Each track contributes one coverage candidate: a disc of the grouping
radius centered on its own predicted position. Greedy set cover picks
candidates by descending coverage of still-uncovered tracks; every track
is assigned exclusively to the first selected group that covers it, so
the result is a partition of the input ids.
"""

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class CoverageCandidate:
    anchor_id: int
    center: tuple[float, float]
    covered_ids: frozenset[int]


@dataclass
class GroupNode:
    """One capture target: a set of tracks observable in a single view."""

    id: int
    member_ids: tuple[int, ...]
    anchor_id: int
    focus: tuple[float, float]
    exit_time: float = math.inf
    focus_per_period: tuple[tuple[float, float], ...] = field(default_factory=tuple)
    facing: tuple[float, float] | None = None  # mean member velocity, ground plane

    @property
    def size(self) -> int:
        return len(self.member_ids)


def candidate_coverages(
    predicted: dict[int, tuple[float, float]], group_radius: float
) -> list[CoverageCandidate]:
    """One candidate per track, centered at its predicted position,
    covering every track id within group_radius of that center."""
    if group_radius <= 0:
        raise ValueError("group_radius must be positive")
    ids = sorted(predicted)
    out = []
    for tid in ids:
        cx, cy = predicted[tid]
        covered = frozenset(
            other
            for other in ids
            if math.hypot(predicted[other][0] - cx, predicted[other][1] - cy)
            <= group_radius + 1e-9
        )
        out.append(CoverageCandidate(tid, (cx, cy), covered))
    return out


def greedy_set_cover(candidates: list[CoverageCandidate]) -> list[GroupNode]:
    """Cover all candidate anchors; ties break toward the lowest anchor id.

    Tracks covered by several selected candidates are assigned to the
    earliest-selected one, so member sets are disjoint.
    """
    uncovered = {c.anchor_id for c in candidates}
    by_anchor = sorted(candidates, key=lambda c: c.anchor_id)
    groups: list[GroupNode] = []
    while uncovered:
        best = max(by_anchor, key=lambda c: (len(c.covered_ids & uncovered), -c.anchor_id))
        members = tuple(sorted(best.covered_ids & uncovered))
        if not members:
            raise RuntimeError("set cover stalled: uncovered ids unreachable")
        uncovered.difference_update(members)
        groups.append(
            GroupNode(
                id=len(groups),
                member_ids=members,
                anchor_id=best.anchor_id,
                focus=best.center,
            )
        )
    return groups


def group_exit_time(group: GroupNode, exit_times: dict[int, float]) -> float:
    """Earliest member exit: the whole group is only capturable until then."""
    return min(exit_times[tid] for tid in group.member_ids)
