"""Small factories shared across test modules."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

from alertpaths import AlertGraph, AttackStage, Edge, EdgeKind, RawAlert, SuperAlert

T0 = datetime(2000, 3, 7, 8, 0, 0, tzinfo=timezone.utc)


def raw(
    alert_id: int,
    seconds: float = 0.0,
    msg: str = "ICMP PING",
    dst: str = "10.0.0.1",
    src: str | None = "10.9.9.9",
    **kwargs,
) -> RawAlert:
    return RawAlert(
        id=alert_id,
        timestamp=T0 + timedelta(seconds=seconds),
        msg=msg,
        dst_ip=dst,
        src_ip=src,
        proto=kwargs.pop("proto", "TCP"),
        **kwargs,
    )


def super_alert(
    alert_id: int,
    seconds: float = 0.0,
    msg: str = "ICMP PING",
    dst: str = "10.0.0.1",
    src: str | None = "10.9.9.9",
    stage: AttackStage | None = AttackStage.SCAN,
    repeat: int = 1,
) -> SuperAlert:
    rep = raw(alert_id, seconds, msg, dst, src)
    return SuperAlert(
        representative=rep,
        repeat_count=repeat,
        member_ids=tuple(range(alert_id, alert_id + repeat)),
        start_time=rep.timestamp,
        end_time=rep.timestamp + timedelta(seconds=repeat - 1),
        stage=stage,
    )


def graph_of(n: int, edge_pairs: set[tuple[int, int]]) -> AlertGraph:
    """AlertGraph with n plain nodes (ids 1..n) and the given edges; edge
    kind is irrelevant to traversal."""
    nodes = [super_alert(i, seconds=i) for i in range(1, n + 1)]
    edges = [Edge(a, b, EdgeKind.INTRA_SOURCE) for a, b in edge_pairs]
    return AlertGraph(nodes, edges)
