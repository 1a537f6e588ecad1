"""End-to-end batch pipeline: ingest -> reduce -> classify -> graph ->
score -> paths -> report.

The pipeline is pure: given the same configuration and input lines it
produces byte-identical report and DOT text.  Machine-facing float fields
are printed with repr() so they round-trip exactly; the trailing
human-readable section rounds for the eye.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .alerts import IngestDiagnostic, RawAlert, ingest
from .config import PipelineConfig
from .embedding import HashingEmbedder
from .graph import AlertGraph, EdgeKind, HostGraph, build_graph, derive_host_graph, to_dot
from .paths import AttackPath, enumerate_paths, rank_paths
from .reduction import SuperAlert, compression_rate, reduce
from .scenario import ScenarioGroundTruth, detect_rate, false_path_rate, path_matches
from .scoring import HostScore, score_hosts
from .stages import classify_super_alerts, default_rules


@dataclass(frozen=True)
class InputSpec:
    """One input stream: its lines, format name, and sensor tag."""

    lines: Sequence[str]
    fmt: str
    sensor: str = ""


@dataclass
class PipelineResult:
    raw_alerts: list[RawAlert]
    diagnostics: list[IngestDiagnostic]
    super_alerts: list[SuperAlert]
    graph: AlertGraph
    host_graph: HostGraph
    host_scores: dict[str, HostScore]
    all_paths: list[AttackPath]
    ranked_paths: list[AttackPath]
    metrics: dict[str, float] = field(default_factory=dict)
    report_text: str = ""
    dot_text: str = ""


def run_pipeline(
    cfg: PipelineConfig,
    inputs: Sequence[InputSpec],
    truth: ScenarioGroundTruth | None = None,
) -> PipelineResult:
    """Run the full correlation pipeline over the given inputs."""
    embedder = HashingEmbedder(cfg.dimension)
    rules = default_rules(embedder)

    raw_alerts: list[RawAlert] = []
    diagnostics: list[IngestDiagnostic] = []
    for spec in inputs:
        result = ingest(
            spec.lines, spec.fmt,
            base_year=cfg.base_year, sensor=spec.sensor,
            start_id=len(raw_alerts) + 1,
        )
        raw_alerts.extend(result.alerts)
        diagnostics.extend(result.diagnostics)

    supers = reduce(raw_alerts, threshold=cfg.threshold, window=cfg.window, embedder=embedder)
    supers = classify_super_alerts(supers, rules)
    graph = build_graph(supers)
    host_graph = derive_host_graph(graph, weight_by_repeats=cfg.weight_by_repeats)

    host_scores: dict[str, HostScore] = {}
    if host_graph.hosts:
        host_scores = score_hosts(
            supers, host_graph,
            damping=cfg.damping, epsilon=cfg.epsilon, max_iters=cfg.max_iters,
            weight_pagerank=cfg.weight_pagerank, weight_types=cfg.weight_types,
        )

    all_paths = enumerate_paths(graph, min_nodes=1, cap=cfg.path_cap)
    reported = [p for p in all_paths if p.length >= cfg.min_nodes]
    ranked = rank_paths(reported, host_scores) if host_scores else []

    metrics: dict[str, float] = {}
    if truth is not None and truth.true_paths:
        top_k = ranked[: cfg.top_k]
        false_in_top_k = sum(
            1 for p in top_k if not any(path_matches(p, tp) for tp in truth.true_paths)
        )
        metrics = {
            "true_paths": float(len(truth.true_paths)),
            "detect_rate": detect_rate(ranked, truth),
            "false_path_rate_topk": false_path_rate(top_k, truth),
            "false_path_rate_all": false_path_rate(ranked, truth),
            "false_in_topk_over_reported": (
                false_in_top_k / len(ranked) if ranked else 0.0
            ),
        }

    result = PipelineResult(
        raw_alerts=raw_alerts,
        diagnostics=diagnostics,
        super_alerts=supers,
        graph=graph,
        host_graph=host_graph,
        host_scores=host_scores,
        all_paths=all_paths,
        ranked_paths=ranked,
        metrics=metrics,
    )
    result.report_text = _render_report(cfg, result)
    result.dot_text = to_dot(graph)
    return result


def _quote(msg: str) -> str:
    return '"' + msg.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _render_report(cfg: PipelineConfig, res: PipelineResult) -> str:
    lines: list[str] = ["# alertpaths report", "format=1", ""]

    raw_count = len(res.raw_alerts)
    repeat_total = sum(sa.repeat_count for sa in res.super_alerts)
    intra = sum(1 for e in res.graph.edges if e.kind is EdgeKind.INTRA_SOURCE)
    cross = sum(1 for e in res.graph.edges if e.kind is EdgeKind.CROSS_HOST)

    lines.append("[summary]")
    lines.append(f"raw_alerts={raw_count}")
    lines.append(f"malformed_lines={len(res.diagnostics)}")
    lines.append(f"super_alerts={len(res.super_alerts)}")
    lines.append(f"repeat_total={repeat_total}")
    rate = compression_rate(raw_count, len(res.super_alerts)) if raw_count else None
    lines.append(f"compression_rate={rate!r}" if rate is not None else "compression_rate=-")
    lines.append(f"graph_nodes={len(res.graph)}")
    lines.append(f"intra_source_edges={intra}")
    lines.append(f"cross_host_edges={cross}")
    lines.append(f"hosts={len(res.host_graph.hosts)}")
    lines.append(f"paths_total={len(res.all_paths)}")
    lines.append(f"min_nodes={cfg.min_nodes}")
    lines.append(f"paths_reported={len(res.ranked_paths)}")
    lines.append(f"top_k={cfg.top_k}")
    lines.append("")

    lines.append("[super_alerts]")
    for sa in res.super_alerts:
        src = sa.src_ip if sa.src_ip is not None else "-"
        stage = sa.stage.short_name if sa.stage is not None else "-"
        lines.append(
            f"id={sa.id} src={src} dst={sa.dst_ip} stage={stage} repeat={sa.repeat_count}"
            f" start={sa.start_time.isoformat()} end={sa.end_time.isoformat()}"
            f" msg={_quote(sa.msg)}"
        )
    lines.append("")

    lines.append("[hosts]")
    ordered = sorted(res.host_scores.values(), key=lambda h: (-h.suspiciousness, h.host))
    for score in ordered:
        lines.append(
            f"host={score.host} pagerank={score.pagerank!r}"
            f" types={score.alert_type_count} suspiciousness={score.suspiciousness!r}"
        )
    lines.append("")

    lines.append("[paths]")
    for rank, path in enumerate(res.ranked_paths, start=1):
        ids = ",".join(str(i) for i in path.node_ids)
        lines.append(f"rank={rank} score={path.score!r} length={path.length} ids={ids}")
    lines.append("")

    if res.metrics:
        lines.append("[metrics]")
        lines.append(f"true_paths={int(res.metrics['true_paths'])}")
        for key in (
            "detect_rate",
            "false_path_rate_topk",
            "false_path_rate_all",
            "false_in_topk_over_reported",
        ):
            lines.append(f"{key}={res.metrics[key]!r}")
        lines.append("")

    lines.append("[readable]")
    if raw_count:
        pct = 100.0 * (rate if rate is not None else 0.0)
        lines.append(
            f"{raw_count} raw alerts reduced to {len(res.super_alerts)} super-alerts"
            f" ({pct:.1f}% compression)."
        )
    else:
        lines.append("no input alerts.")
    lines.append(
        f"{len(res.all_paths)} maximal paths in the correlation graph,"
        f" {len(res.ranked_paths)} with >= {cfg.min_nodes} nodes."
    )
    for rank, path in enumerate(res.ranked_paths[: cfg.top_k], start=1):
        hops = " -> ".join(_condense(path))
        lines.append(f"top {rank} (score {path.score:.2f}, {path.length} nodes): {hops}")
    lines.append("")
    return "\n".join(lines)


def _condense(path: AttackPath) -> list[str]:
    """Fold consecutive same-stage runs so the narrative line stays
    readable on long scan prefixes."""
    out: list[str] = []
    nodes = path.nodes
    i = 0
    while i < len(nodes):
        j = i
        while j < len(nodes) and nodes[j].stage is nodes[i].stage:
            j += 1
        stage = nodes[i].stage.short_name if nodes[i].stage is not None else "-"
        if j - i == 1:
            out.append(f"{stage}[{nodes[i].dst_ip}]")
        else:
            out.append(f"{stage} x{j - i}")
        i = j
    return out
