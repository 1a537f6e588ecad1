"""Batch alert-correlation engine.

Reduces duplicated IDS/EDR alerts into weighted super-alerts, builds a
stage-aware correlation graph, and extracts and ranks multi-step attack
paths across hosts.
"""

from .alerts import (
    AttackStage,
    IngestDiagnostic,
    IngestResult,
    MalformedLine,
    RawAlert,
    UnknownField,
    UnsupportedFormat,
    format_record_line,
    ingest,
    parse_fast_line,
    parse_record_line,
)
from .config import ConfigError, PipelineConfig, format_config, parse_config
from .embedding import DimensionMismatch, HashingEmbedder, MsgVector, similarity, tokenize
from .graph import (
    AlertGraph,
    Edge,
    EdgeKind,
    HostGraph,
    build_graph,
    chain_intra_source,
    derive_host_graph,
    link_cross_host,
    to_dot,
)
from .paths import AttackPath, PathExplosion, enumerate_paths, rank_paths
from .pipeline import InputSpec, PipelineResult, run_pipeline
from .reduction import EmptyInput, SuperAlert, compression_rate, reduce
from .scenario import (
    EmptyTruth,
    InvalidProfile,
    ScenarioGroundTruth,
    ScenarioProfile,
    TruePath,
    detect_rate,
    false_path_rate,
    format_truth_lines,
    generate_scenario,
    parse_truth_lines,
    path_matches,
)
from .scoring import (
    EmptyGraph,
    HostScore,
    UnknownHost,
    alert_reliability,
    host_suspiciousness,
    pagerank,
    path_score,
    score_hosts,
)
from .stages import StageRule, StageRuleSet, classify, classify_super_alerts, default_rules, load_rules

__version__ = "0.1.0"

__all__ = [
    "AlertGraph",
    "AttackPath",
    "AttackStage",
    "ConfigError",
    "DimensionMismatch",
    "Edge",
    "EdgeKind",
    "EmptyGraph",
    "EmptyInput",
    "EmptyTruth",
    "HashingEmbedder",
    "HostGraph",
    "HostScore",
    "IngestDiagnostic",
    "IngestResult",
    "InputSpec",
    "InvalidProfile",
    "MalformedLine",
    "MsgVector",
    "PathExplosion",
    "PipelineConfig",
    "PipelineResult",
    "RawAlert",
    "ScenarioGroundTruth",
    "ScenarioProfile",
    "StageRule",
    "StageRuleSet",
    "SuperAlert",
    "TruePath",
    "UnknownField",
    "UnknownHost",
    "UnsupportedFormat",
    "alert_reliability",
    "build_graph",
    "chain_intra_source",
    "classify",
    "classify_super_alerts",
    "compression_rate",
    "default_rules",
    "derive_host_graph",
    "detect_rate",
    "enumerate_paths",
    "false_path_rate",
    "format_config",
    "format_record_line",
    "format_truth_lines",
    "generate_scenario",
    "host_suspiciousness",
    "ingest",
    "link_cross_host",
    "load_rules",
    "pagerank",
    "parse_config",
    "parse_fast_line",
    "parse_record_line",
    "parse_truth_lines",
    "path_matches",
    "path_score",
    "rank_paths",
    "reduce",
    "run_pipeline",
    "score_hosts",
    "similarity",
    "to_dot",
    "tokenize",
]
