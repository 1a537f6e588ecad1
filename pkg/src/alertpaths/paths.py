"""Maximal simple path enumeration and score ranking.

A path is maximal when it cannot be extended at either end: every
predecessor of its head and every successor of its tail already lies on
the path (which also handles cycles).  Enumeration is exhaustive DFS and
exponential in the worst case, so a configurable cap aborts loudly instead
of silently truncating.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import AlertGraph
from .reduction import SuperAlert
from .scoring import HostScore, path_score


class PathExplosion(RuntimeError):
    """Enumeration exceeded the configured path cap."""

    def __init__(self, cap: int):
        super().__init__(f"more than {cap} maximal paths; raise the cap or prune the graph")
        self.cap = cap


@dataclass(frozen=True)
class AttackPath:
    """Ordered super-alert sequence along graph edges, with its score."""

    nodes: tuple[SuperAlert, ...]
    score: float = 0.0

    @property
    def length(self) -> int:
        return len(self.nodes)

    @property
    def node_ids(self) -> tuple[int, ...]:
        return tuple(sa.id for sa in self.nodes)


def enumerate_paths(g: AlertGraph, min_nodes: int = 3, cap: int = 10_000) -> list[AttackPath]:
    """All maximal simple paths with at least ``min_nodes`` nodes, in
    lexicographic node-id order (ranking happens separately).

    Raises PathExplosion once more than ``cap`` maximal paths (of any
    length) have been found.
    """
    if min_nodes < 1:
        raise ValueError(f"min_nodes must be >= 1, got {min_nodes}")

    # A node can only start a maximal path if each of its predecessors can
    # be re-absorbed via a cycle, i.e. is reachable from it.  Anything else
    # would always be extendable at the head.
    reach = {nid: _reachable_from(g, nid) for nid in g.node_ids()}
    starts = [
        nid
        for nid in g.node_ids()
        if all(p in reach[nid] for p in g.predecessors(nid))
    ]

    found: list[tuple[int, ...]] = []
    for start in sorted(starts):
        _dfs(g, start, found, cap)

    results = [
        AttackPath(tuple(g.node(nid) for nid in ids))
        for ids in sorted(found)
        if len(ids) >= min_nodes
    ]
    return results


def _reachable_from(g: AlertGraph, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        for nxt in g.successors(stack.pop()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def _dfs(g: AlertGraph, start: int, found: list[tuple[int, ...]], cap: int) -> None:
    path = [start]
    on_path = {start}
    # each stack frame tracks which successor index to try next
    pending = [0]
    while pending:
        node = path[-1]
        succs = g.successors(node)
        idx = pending[-1]
        advanced = False
        while idx < len(succs):
            nxt = succs[idx]
            idx += 1
            if nxt not in on_path:
                pending[-1] = idx
                path.append(nxt)
                on_path.add(nxt)
                pending.append(0)
                advanced = True
                break
        if advanced:
            continue
        if all(s in on_path for s in succs):
            # tail unextendable; the start filter was only a necessary
            # condition, so head-maximality still needs the real check
            if all(p in on_path for p in g.predecessors(start)):
                found.append(tuple(path))
                if len(found) > cap:
                    raise PathExplosion(cap)
        on_path.discard(path.pop())
        pending.pop()


def rank_paths(
    paths: Sequence[AttackPath], scores: Mapping[str, HostScore]
) -> list[AttackPath]:
    """Score each path and sort descending; ties broken by longer path
    first, then lexicographic node ids, for a total deterministic order."""
    scored = [AttackPath(p.nodes, path_score(p.nodes, scores)) for p in paths]
    scored.sort(key=lambda p: (-p.score, -p.length, p.node_ids))
    return scored
