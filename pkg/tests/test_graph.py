import random
from datetime import timedelta

import pytest

from alertpaths import (
    AlertGraph,
    AttackStage,
    Edge,
    EdgeKind,
    build_graph,
    chain_intra_source,
    derive_host_graph,
    link_cross_host,
    to_dot,
)

from .helpers import super_alert


def test_chain_links_same_source_chronologically():
    sqli = super_alert(1, seconds=0, msg="SQL injection attempt", dst="10.0.0.5",
                       src="10.9.9.9", stage=AttackStage.EXPLOIT)
    xss = super_alert(2, seconds=30, msg="XSS attempt", dst="10.0.0.5",
                      src="10.9.9.9", stage=AttackStage.EXPLOIT)
    assert chain_intra_source([xss, sqli]) == {Edge(1, 2, EdgeKind.INTRA_SOURCE)}


def test_single_alert_no_chain_edges():
    assert chain_intra_source([super_alert(1)]) == set()


def test_three_alerts_two_edges():
    alerts = [super_alert(i, seconds=i) for i in (1, 2, 3)]
    assert chain_intra_source(alerts) == {
        Edge(1, 2, EdgeKind.INTRA_SOURCE),
        Edge(2, 3, EdgeKind.INTRA_SOURCE),
    }


def test_sourceless_alerts_not_chained():
    alerts = [super_alert(1, seconds=0, src=None), super_alert(2, seconds=1, src=None)]
    assert chain_intra_source(alerts) == set()


def test_cross_host_picks_earliest_only():
    anchor = super_alert(1, seconds=0, msg="RSERVICES rsh root", dst="10.0.0.1",
                         src="10.9.9.9", stage=AttackStage.GET_ACCESS_PRIVILEGE)
    later = super_alert(2, seconds=5, msg="DDOS mstream handler to agent", dst="10.0.0.2",
                        src="10.0.0.1", stage=AttackStage.POST_ATTACK)
    latest = super_alert(3, seconds=9, msg="DDOS mstream handler to agent", dst="10.0.0.2",
                         src="10.0.0.1", stage=AttackStage.POST_ATTACK)
    edges = link_cross_host([anchor, later, latest])
    assert edges == {Edge(1, 2, EdgeKind.CROSS_HOST)}


def test_cross_host_requires_strictly_later_time():
    anchor = super_alert(1, seconds=10, dst="10.0.0.1", src="10.9.9.9",
                         stage=AttackStage.GET_ACCESS_PRIVILEGE)
    earlier = super_alert(2, seconds=9, dst="10.0.0.2", src="10.0.0.1",
                          stage=AttackStage.POST_ATTACK)
    assert link_cross_host([anchor, earlier]) == set()


def test_cross_host_requires_matching_source():
    anchor = super_alert(1, seconds=0, dst="10.0.0.1", src="10.9.9.9",
                         stage=AttackStage.GET_ACCESS_PRIVILEGE)
    unrelated = super_alert(2, seconds=5, dst="10.0.0.2", src="10.3.3.3",
                            stage=AttackStage.POST_ATTACK)
    assert link_cross_host([anchor, unrelated]) == set()


def test_no_privilege_alerts_no_cross_edges():
    alerts = [super_alert(i, seconds=i, stage=AttackStage.SCAN) for i in (1, 2, 3)]
    assert link_cross_host(alerts) == set()


def test_multiple_anchors_link_independently():
    a1 = super_alert(1, seconds=0, dst="h1", src="att", stage=AttackStage.GET_ACCESS_PRIVILEGE)
    a2 = super_alert(2, seconds=1, dst="h1", src="att", stage=AttackStage.GET_ACCESS_PRIVILEGE)
    out = super_alert(3, seconds=5, dst="h2", src="h1", stage=AttackStage.POST_ATTACK)
    edges = link_cross_host([a1, a2, out])
    assert edges == {Edge(1, 3, EdgeKind.CROSS_HOST), Edge(2, 3, EdgeKind.CROSS_HOST)}


def test_build_graph_empty():
    g = build_graph([])
    assert len(g) == 0
    assert g.edges == frozenset()


def test_build_graph_union_and_adjacency():
    anchor = super_alert(1, seconds=0, dst="10.0.0.1", src="10.9.9.9",
                         stage=AttackStage.GET_ACCESS_PRIVILEGE)
    mid = super_alert(2, seconds=3, dst="10.0.0.1", src="10.9.9.9",
                      stage=AttackStage.POST_ATTACK)
    out = super_alert(3, seconds=5, dst="10.0.0.2", src="10.0.0.1",
                      stage=AttackStage.POST_ATTACK)
    g = build_graph([anchor, mid, out])
    assert g.successors(1) == (2, 3)
    assert g.predecessors(3) == (1,)
    assert g.predecessors(2) == (1,)


def test_graph_rejects_self_edges():
    node = super_alert(1)
    with pytest.raises(ValueError):
        AlertGraph([node], [Edge(1, 1, EdgeKind.INTRA_SOURCE)])


def test_cross_host_invariant_fuzz():
    rng = random.Random(2024)
    for _ in range(50):
        alerts = []
        hosts = [f"10.0.0.{i}" for i in range(1, 6)]
        for i in range(rng.randint(2, 40)):
            src = rng.choice(hosts + [None])
            dst = rng.choice([h for h in hosts if h != src])
            alerts.append(super_alert(
                i + 1, seconds=rng.uniform(0, 500), dst=dst, src=src,
                stage=rng.choice(list(AttackStage)),
            ))
        by_id = {sa.id: sa for sa in alerts}
        for edge in link_cross_host(alerts):
            a, b = by_id[edge.src_id], by_id[edge.dst_id]
            assert a.stage is AttackStage.GET_ACCESS_PRIVILEGE
            assert b.start_time > a.start_time
            assert b.src_ip == a.dst_ip
            # time-minimal among candidates on b's host
            for other in alerts:
                if (other.dst_ip == b.dst_ip and other.src_ip == a.dst_ip
                        and other.start_time > a.start_time):
                    assert (b.start_time, b.id) <= (other.start_time, other.id)


def test_derive_host_graph_weights():
    alerts = [
        super_alert(1, seconds=0, src="A", dst="B"),
        super_alert(2, seconds=1, src="A", dst="B"),
        super_alert(3, seconds=2, src="B", dst="C"),
    ]
    hg = derive_host_graph(build_graph(alerts))
    assert hg.hosts == ("A", "B", "C")
    assert hg.edge_weights == {("A", "B"): 2, ("B", "C"): 1}


def test_derive_host_graph_sourceless_alerts_only_add_nodes():
    alerts = [super_alert(1, src=None, dst="H1"), super_alert(2, seconds=1, src=None, dst="H2")]
    hg = derive_host_graph(build_graph(alerts))
    assert hg.hosts == ("H1", "H2")
    assert hg.edge_weights == {}


def test_derive_host_graph_repeat_weighting():
    alerts = [super_alert(1, src="A", dst="B", repeat=7)]
    assert derive_host_graph(build_graph(alerts)).edge_weights == {("A", "B"): 1}
    assert derive_host_graph(build_graph(alerts), weight_by_repeats=True).edge_weights == {
        ("A", "B"): 7
    }


def test_dot_output_stable_and_styled():
    anchor = super_alert(1, seconds=0, dst="10.0.0.1", src="10.9.9.9",
                         stage=AttackStage.GET_ACCESS_PRIVILEGE, msg='rsh "root"')
    out = super_alert(2, seconds=5, dst="10.0.0.2", src="10.0.0.1",
                      stage=AttackStage.POST_ATTACK, repeat=3)
    g = build_graph([anchor, out])
    dot = to_dot(g)
    assert dot == to_dot(build_graph([out, anchor]))
    assert 'n1 [label="rsh \\"root\\"\\ngap\\nx1"];' in dot
    assert "n1 -> n2 [style=bold];" in dot


def test_graph_deterministic_under_timestamp_ties():
    a = super_alert(1, seconds=0, src="S", dst="D1")
    b = super_alert(2, seconds=0, src="S", dst="D2")
    g1 = build_graph([a, b])
    g2 = build_graph([b, a])
    assert g1.edges == g2.edges == frozenset({Edge(1, 2, EdgeKind.INTRA_SOURCE)})
