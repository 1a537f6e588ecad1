"""Directed alert-correlation graph over classified super-alerts.

Two edge kinds:

* intra-source: super-alerts sharing a source address are chained in
  chronological order, one chain per source.
* cross-host: each get-access-privilege alert on a host anchors edges to
  the earliest later alert *originating from* that host, one edge per
  destination host.  This is what stitches a lateral movement together.

The built graph is immutable; cycles are allowed (bidirectional attacks),
self-edges and duplicate edges are not.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .alerts import AttackStage
from .reduction import SuperAlert


class EdgeKind(Enum):
    INTRA_SOURCE = "intra_source"
    CROSS_HOST = "cross_host"


@dataclass(frozen=True)
class Edge:
    src_id: int
    dst_id: int
    kind: EdgeKind


class AlertGraph:
    """Immutable directed graph; nodes are super-alerts keyed by id, with
    adjacency indexed in both directions."""

    def __init__(self, nodes: Iterable[SuperAlert], edges: Iterable[Edge]):
        self.nodes: dict[int, SuperAlert] = {sa.id: sa for sa in sorted(nodes, key=lambda s: s.id)}
        deduped = set(edges)
        for edge in deduped:
            if edge.src_id == edge.dst_id:
                raise ValueError(f"self-edge on node {edge.src_id}")
            if edge.src_id not in self.nodes or edge.dst_id not in self.nodes:
                raise ValueError(f"edge references unknown node: {edge}")
        self.edges: frozenset[Edge] = frozenset(deduped)
        succ: dict[int, set[int]] = {nid: set() for nid in self.nodes}
        pred: dict[int, set[int]] = {nid: set() for nid in self.nodes}
        for edge in self.edges:
            succ[edge.src_id].add(edge.dst_id)
            pred[edge.dst_id].add(edge.src_id)
        self._succ = {nid: tuple(sorted(ids)) for nid, ids in succ.items()}
        self._pred = {nid: tuple(sorted(ids)) for nid, ids in pred.items()}

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> SuperAlert:
        return self.nodes[node_id]

    def node_ids(self) -> tuple[int, ...]:
        return tuple(self.nodes)

    def successors(self, node_id: int) -> tuple[int, ...]:
        return self._succ[node_id]

    def predecessors(self, node_id: int) -> tuple[int, ...]:
        return self._pred[node_id]


def chain_intra_source(alerts: Sequence[SuperAlert]) -> set[Edge]:
    """Chain each source's super-alerts consecutively in time order.
    Alerts without a source address are not chained."""
    by_src: dict[str, list[SuperAlert]] = {}
    for sa in alerts:
        if sa.src_ip is not None:
            by_src.setdefault(sa.src_ip, []).append(sa)
    edges: set[Edge] = set()
    for chain in by_src.values():
        chain.sort(key=lambda sa: (sa.start_time, sa.id))
        for a, b in zip(chain, chain[1:]):
            edges.add(Edge(a.id, b.id, EdgeKind.INTRA_SOURCE))
    return edges


def link_cross_host(alerts: Sequence[SuperAlert]) -> set[Edge]:
    """Anchor cross-host edges on get-access-privilege alerts.

    For an anchor on host H at time T: for every other destination host,
    link the anchor to the earliest alert there whose source is H and whose
    time is strictly after T.  At most one edge per (anchor, host) pair.
    """
    by_dst: dict[str, list[SuperAlert]] = {}
    for sa in alerts:
        by_dst.setdefault(sa.dst_ip, []).append(sa)
    for group in by_dst.values():
        group.sort(key=lambda sa: (sa.start_time, sa.id))

    edges: set[Edge] = set()
    for anchor in alerts:
        if anchor.stage is not AttackStage.GET_ACCESS_PRIVILEGE:
            continue
        compromised = anchor.dst_ip
        for host, group in by_dst.items():
            if host == compromised:
                continue
            for candidate in group:
                if candidate.src_ip == compromised and candidate.start_time > anchor.start_time:
                    edges.add(Edge(anchor.id, candidate.id, EdgeKind.CROSS_HOST))
                    break
    return edges


def build_graph(alerts: Sequence[SuperAlert]) -> AlertGraph:
    """Nodes are all given super-alerts; edges are the union of the
    intra-source chains and the cross-host links."""
    return AlertGraph(alerts, chain_intra_source(alerts) | link_cross_host(alerts))


@dataclass(frozen=True)
class HostGraph:
    """Host-level directed multigraph: one edge per super-alert with a
    source address, parallel edges folded into integer weights."""

    hosts: tuple[str, ...]
    edge_weights: dict[tuple[str, str], int]

    def out_weight(self, host: str) -> int:
        return sum(w for (src, _), w in self.edge_weights.items() if src == host)

    def in_degree(self, host: str) -> int:
        return sum(w for (_, dst), w in self.edge_weights.items() if dst == host)


def derive_host_graph(g: AlertGraph, weight_by_repeats: bool = False) -> HostGraph:
    """Project the alert graph onto hosts.  Every super-alert with a source
    contributes one src->dst edge (or repeat_count edges when
    ``weight_by_repeats`` is set); source-less alerts contribute only their
    destination node."""
    hosts: set[str] = set()
    weights: dict[tuple[str, str], int] = {}
    for sa in g.nodes.values():
        hosts.add(sa.dst_ip)
        if sa.src_ip is None:
            continue
        hosts.add(sa.src_ip)
        key = (sa.src_ip, sa.dst_ip)
        weights[key] = weights.get(key, 0) + (sa.repeat_count if weight_by_repeats else 1)
    return HostGraph(tuple(sorted(hosts)), weights)


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(g: AlertGraph) -> str:
    """Render the alert graph in DOT format with stable node ordering.
    Node label: msg, stage, xrepeat_count; cross-host edges drawn bold."""
    lines = ["digraph alerts {"]
    for nid in sorted(g.nodes):
        sa = g.nodes[nid]
        stage = sa.stage.short_name if sa.stage is not None else "unclassified"
        label = "\\n".join([_dot_escape(sa.msg), stage, f"x{sa.repeat_count}"])
        lines.append(f'  n{nid} [label="{label}"];')
    for edge in sorted(g.edges, key=lambda e: (e.src_id, e.dst_id, e.kind.value)):
        style = ' [style=bold]' if edge.kind is EdgeKind.CROSS_HOST else ""
        lines.append(f"  n{edge.src_id} -> n{edge.dst_id}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"
