"""Host suspiciousness and alert reliability scoring.

Host suspiciousness is the host's PageRank in the host graph plus its
count of distinct attack stages seen against it (as destination).  Alert
reliability is source suspiciousness + destination suspiciousness + the
stage base score; host-based alerts with no source count the destination
host once.  A path's score is the plain sum of its members' reliabilities,
so all sums here are evaluated left to right and reproduce bit-exactly
from a table of host scores.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .graph import HostGraph
from .reduction import SuperAlert


class EmptyGraph(ValueError):
    """PageRank is undefined on a graph with no hosts."""


class UnknownHost(KeyError):
    """Reliability asked for a host missing from the score table."""


def pagerank(
    host_graph: HostGraph,
    damping: float = 0.85,
    epsilon: float = 1e-8,
    max_iters: int = 100,
) -> dict[str, float]:
    """Standard power-iteration PageRank over the host multigraph.

    Parallel edges weight transitions proportionally; dangling hosts
    redistribute their mass uniformly.  Iteration stops when the L1 change
    drops below epsilon or after max_iters sweeps.  Scores sum to 1.
    """
    if not host_graph.hosts:
        raise EmptyGraph("host graph has no hosts")
    if not 0.0 < damping < 1.0:
        raise ValueError(f"damping must be in (0, 1), got {damping}")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")

    hosts = host_graph.hosts
    n = len(hosts)
    out_weight = {h: 0 for h in hosts}
    incoming: dict[str, list[tuple[str, int]]] = {h: [] for h in hosts}
    for (src, dst), weight in sorted(host_graph.edge_weights.items()):
        out_weight[src] += weight
        incoming[dst].append((src, weight))

    rank = {h: 1.0 / n for h in hosts}
    for _ in range(max_iters):
        dangling = sum(rank[h] for h in hosts if out_weight[h] == 0)
        base = (1.0 - damping) / n + damping * dangling / n
        new_rank = {}
        for h in hosts:
            flow = 0.0
            for src, weight in incoming[h]:
                flow += rank[src] * weight / out_weight[src]
            new_rank[h] = base + damping * flow
        delta = sum(abs(new_rank[h] - rank[h]) for h in hosts)
        rank = new_rank
        if delta < epsilon:
            break
    return rank


@dataclass(frozen=True)
class HostScore:
    host: str
    pagerank: float
    alert_type_count: int
    suspiciousness: float


def host_suspiciousness(
    pagerank_value: float,
    alert_type_count: int,
    weight_pagerank: float = 1.0,
    weight_types: float = 1.0,
) -> float:
    """PageRank plus distinct-stage count.  The optional weights tilt the
    two terms; the defaults (1, 1) give the exact sum."""
    return weight_pagerank * pagerank_value + weight_types * alert_type_count


def score_hosts(
    alerts: Sequence[SuperAlert],
    host_graph: HostGraph,
    damping: float = 0.85,
    epsilon: float = 1e-8,
    max_iters: int = 100,
    weight_pagerank: float = 1.0,
    weight_types: float = 1.0,
) -> dict[str, HostScore]:
    """Full host score table for every host in the host graph."""
    ranks = pagerank(host_graph, damping=damping, epsilon=epsilon, max_iters=max_iters)
    stages_by_dst: dict[str, set] = {}
    for sa in alerts:
        if sa.stage is not None:
            stages_by_dst.setdefault(sa.dst_ip, set()).add(sa.stage)
    scores = {}
    for host in host_graph.hosts:
        count = len(stages_by_dst.get(host, ()))
        scores[host] = HostScore(
            host=host,
            pagerank=ranks[host],
            alert_type_count=count,
            suspiciousness=host_suspiciousness(ranks[host], count, weight_pagerank, weight_types),
        )
    return scores


def alert_reliability(alert: SuperAlert, scores: Mapping[str, HostScore]) -> float:
    """Source suspiciousness + destination suspiciousness + stage base score.
    With no source address, only the destination host contributes."""
    if alert.stage is None:
        raise ValueError(f"super-alert {alert.id} is unclassified")
    try:
        dst_score = scores[alert.dst_ip].suspiciousness
        if alert.src_ip is None:
            return dst_score + alert.stage.score
        src_score = scores[alert.src_ip].suspiciousness
    except KeyError as exc:
        raise UnknownHost(f"no score for host {exc.args[0]!r}") from None
    return src_score + dst_score + alert.stage.score


def path_score(path: Sequence[SuperAlert], scores: Mapping[str, HostScore]) -> float:
    """Left-to-right sum of member reliabilities."""
    total = 0.0
    for alert in path:
        total += alert_reliability(alert, scores)
    return total
