"""Command-line front end.

Typical runs::

    # correlate an existing alert log
    alertpaths --input alerts.log --format fast --out results/

    # regenerate the built-in scenario, then correlate it against its truth
    alertpaths --gen-scenario 42 --out results/ --emit-dot

Writes ``report.txt`` (and ``graph.dot`` with --emit-dot) into the output
directory; --gen-scenario additionally writes ``scenario.log`` and
``scenario.truth``.  Exit status 0 on success, 1 for I/O or path-explosion
failures, 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .alerts import FORMATS, UnsupportedFormat
from .config import ConfigError, PipelineConfig, parse_config
from .paths import PathExplosion
from .pipeline import InputSpec, run_pipeline
from .scenario import (
    ScenarioGroundTruth,
    ScenarioProfile,
    format_truth_lines,
    generate_scenario,
    parse_truth_lines,
)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alertpaths",
        description="Correlate IDS/EDR alerts into ranked multi-step attack paths.",
    )
    parser.add_argument("--input", action="append", default=[], metavar="FILE",
                        help="alert log to ingest (repeatable)")
    parser.add_argument("--format", default="fast", metavar="NAME",
                        help="input format: fast|records (default: fast)")
    parser.add_argument("--config", metavar="FILE", help="key=value configuration file")
    parser.add_argument("--truth", metavar="FILE", help="ground-truth paths for metrics")
    parser.add_argument("--out", default="alertpaths_out", metavar="DIR",
                        help="output directory (default: alertpaths_out)")
    parser.add_argument("--top-k", type=int, default=None, metavar="N",
                        help="reporting cut for ranked paths (default: 3)")
    parser.add_argument("--emit-dot", action="store_true",
                        help="also write the correlation graph as graph.dot")
    parser.add_argument("--gen-scenario", type=int, default=None, metavar="SEED",
                        help="generate the synthetic scenario with this seed; "
                             "with no --input, correlate it immediately")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)

    try:
        cfg = PipelineConfig()
        if args.config:
            cfg = parse_config(Path(args.config).read_text().splitlines())
        if args.top_k is not None:
            cfg.top_k = args.top_k
        if args.format not in FORMATS:
            raise ConfigError(f"unknown format: {args.format!r} (expected one of {FORMATS})")
        if not args.input and args.gen_scenario is None:
            raise ConfigError("no input: give --input or --gen-scenario")
    except (ConfigError, OSError) as exc:
        print(f"alertpaths: error: {exc}", file=sys.stderr)
        return 2

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)

        truth: ScenarioGroundTruth | None = None
        inputs: list[InputSpec] = []

        if args.gen_scenario is not None:
            profile = ScenarioProfile(
                hosts=cfg.hosts,
                noise_rate=cfg.noise_rate,
                storm_size=cfg.storm_size,
                exploit_attempts=cfg.exploit_attempts,
            )
            lines, scenario_truth = generate_scenario(args.gen_scenario, profile)
            (out_dir / "scenario.log").write_text("\n".join(lines) + "\n")
            (out_dir / "scenario.truth").write_text(
                "\n".join(format_truth_lines(scenario_truth)) + "\n"
            )
            print(f"wrote {out_dir / 'scenario.log'} ({len(lines)} alerts)", file=sys.stderr)
            if not args.input:
                inputs.append(InputSpec(lines, "fast", sensor="scenario"))
                truth = scenario_truth

        for path_text in args.input:
            path = Path(path_text)
            inputs.append(InputSpec(path.read_text().splitlines(), args.format,
                                    sensor=path.stem))

        if args.truth:
            truth = parse_truth_lines(Path(args.truth).read_text().splitlines())

        result = run_pipeline(cfg, inputs, truth)

        report_path = out_dir / "report.txt"
        report_path.write_text(result.report_text)
        if args.emit_dot:
            (out_dir / "graph.dot").write_text(result.dot_text)

    except (UnsupportedFormat, ConfigError, ValueError) as exc:
        print(f"alertpaths: error: {exc}", file=sys.stderr)
        return 2
    except PathExplosion as exc:
        print(f"alertpaths: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"alertpaths: i/o error: {exc}", file=sys.stderr)
        return 1

    for diag in result.diagnostics[:20]:
        print(f"alertpaths: skipped line {diag.line_no}: {diag.reason}", file=sys.stderr)
    if len(result.diagnostics) > 20:
        print(f"alertpaths: ... {len(result.diagnostics) - 20} more skipped lines",
              file=sys.stderr)

    print(f"report: {report_path}", file=sys.stderr)
    # the [readable] tail of the report doubles as the console summary
    readable = result.report_text.split("[readable]\n", 1)[-1]
    print(readable.rstrip())
    return 0


if __name__ == "__main__":
    sys.exit(main())
