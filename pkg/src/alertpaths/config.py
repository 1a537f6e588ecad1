"""Pipeline configuration: a flat key=value text file.

Every engine tunable lives here with its default.  Unknown keys and
unparseable values are configuration errors, never silently ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterable


class ConfigError(ValueError):
    """Bad configuration key or value."""


@dataclass
class PipelineConfig:
    threshold: float = 0.7          # msg similarity needed to join a run
    window: float = 120.0           # max seconds between consecutive run members
    dimension: int = 256            # embedding vector size
    damping: float = 0.85           # pagerank damping factor
    epsilon: float = 1e-8           # pagerank L1 convergence bound
    max_iters: int = 100            # pagerank iteration cap
    min_nodes: int = 3              # shortest path worth reporting
    path_cap: int = 10000           # abort enumeration beyond this many paths
    weight_pagerank: float = 1.0    # suspiciousness term weights
    weight_types: float = 1.0
    weight_by_repeats: bool = False  # scale host-graph edges by repeat counts
    base_year: int = 2000           # year assumed for year-less fast timestamps
    top_k: int = 3                  # reporting cut for the ranked paths
    seed: int = 42                  # scenario generator seed
    hosts: int = 128                # scenario profile
    noise_rate: float = 0.2405
    storm_size: int = 7
    exploit_attempts: int = 6


_FIELD_TYPES = {f.name: f.type for f in fields(PipelineConfig)}


def _coerce(key: str, value: str):
    kind = _FIELD_TYPES[key]
    try:
        if kind == "bool":
            lowered = value.strip().lower()
            if lowered in ("true", "1", "yes"):
                return True
            if lowered in ("false", "0", "no"):
                return False
            raise ValueError(value)
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None
    raise ConfigError(f"unhandled config field type for {key}")


def parse_config(lines: Iterable[str]) -> PipelineConfig:
    """Parse key=value lines; blanks and '#' comments are skipped."""
    cfg = PipelineConfig()
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"config line {line_no}: expected key=value, got {stripped!r}")
        if key not in _FIELD_TYPES:
            raise ConfigError(f"config line {line_no}: unknown key {key!r}")
        setattr(cfg, key, _coerce(key, value.strip()))
    return cfg


def format_config(cfg: PipelineConfig | None = None) -> str:
    """Render a config (default if none given) as parseable text."""
    if cfg is None:
        cfg = PipelineConfig()
    lines = [f"{f.name}={getattr(cfg, f.name)}" for f in fields(PipelineConfig)]
    return "\n".join(lines) + "\n"
