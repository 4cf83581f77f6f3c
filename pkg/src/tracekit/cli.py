"""Command-line front end.

Exit codes: 0 clean, 1 findings at or above ``--fail-on``, 2 parse/resolve
failure, 3 usage, configuration or I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from tracekit.dsl import load_text
from tracekit.dsl.lexer import Severity
from tracekit.errors import DslError, UnknownReference
from tracekit.graph import KIND_FILTERS, Direction, build_graph, kind_filter, trace_matrix
from tracekit.impact import default_propagation, impact
from tracekit.model import LinkKind, Model
from tracekit import report
from tracekit.rules import RULES, RuleConfig, coverage_stats, validate

EXIT_OK, EXIT_FINDINGS, EXIT_PARSE, EXIT_USAGE = 0, 1, 2, 3
CONFIG_NAME = "tracekit.conf"
PROPAGATION_KINDS = [k.value for k in LinkKind]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    input_path: Path
    rule_config: RuleConfig = field(default_factory=RuleConfig)
    propagation_overrides: dict[str, str] = field(default_factory=dict)
    output_format: str = "text"
    fail_on: str = "error"


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("model", type=Path, help="model file (.sreq)")
    p.add_argument("--format", choices=["text", "json"], default=None)
    p.add_argument("--fail-on", choices=["error", "warning", "never"], default=None)
    p.add_argument("--config", type=Path, default=None, help=f"config file (default: {CONFIG_NAME} next to the model)")
    p.add_argument("--disable", default=None, help="comma-separated rule ids to disable, e.g. R4,R11")
    p.add_argument("--severity", action="append", default=[], metavar="RULE=LEVEL",
                   help="override a rule's severity, e.g. R4=error (repeatable)")
    p.add_argument("--no-criticality-monotone", dest="criticality_monotone", action="store_const",
                   const="false", default=None, help="turn off rule R11")
    for kind in PROPAGATION_KINDS:
        p.add_argument(f"--propagate.{kind}", dest=f"propagate_{kind}", default=None,
                       choices=["forward", "reverse", "both", "off"], metavar="DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tracekit", description="Safety requirements traceability checker.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a model against rules R1-R12")
    _common(p)

    p = sub.add_parser("impact", help="change-impact analysis")
    _common(p)
    p.add_argument("--changed", action="append", required=True,
                   help="changed entity ids (comma-separated, repeatable)")

    p = sub.add_parser("matrix", help="traceability matrix")
    _common(p)
    p.add_argument("--rows", required=True, help="row kind: " + ", ".join(KIND_FILTERS))
    p.add_argument("--cols", required=True, help="column kind")
    p.add_argument("--relation", required=True,
                   help="comma-separated link kinds with optional direction, e.g. derive,satisfy:reverse")
    p.add_argument("--transitive", action="store_true")

    p = sub.add_parser("stats", help="coverage percentages and counts")
    _common(p)

    p = sub.add_parser("export-dot", help="traceability graph in Graphviz DOT")
    _common(p)
    return parser


def read_config_file(path: Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror or exc}") from None
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip().lstrip("-")] = value.strip()
    return values


def _settings(args: argparse.Namespace) -> dict[str, str]:
    """Config-file values overlaid with command-line flags (flags win)."""
    settings: dict[str, str] = {}
    config_path = args.config
    if config_path is None:
        candidate = args.model.parent / CONFIG_NAME
        config_path = candidate if candidate.is_file() else None
    if config_path is not None:
        settings.update(read_config_file(config_path))
    flags = {
        "format": args.format,
        "fail-on": args.fail_on,
        "disable": args.disable,
        "criticality-monotone": args.criticality_monotone,
    }
    for kind in PROPAGATION_KINDS:
        flags[f"propagate.{kind}"] = getattr(args, f"propagate_{kind}")
    settings.update({k: v for k, v in flags.items() if v is not None})
    for item in args.severity:
        rule, sep, level = item.partition("=")
        if not sep:
            raise UsageError(f"--severity expects RULE=LEVEL, got '{item}'")
        settings[f"severity.{rule.strip()}"] = level.strip()
    return settings


def run_config(args: argparse.Namespace) -> RunConfig:
    settings = _settings(args)
    known = {"format", "fail-on", "disable", "criticality-monotone"}
    overrides: dict[str, str] = {}
    severities: dict[str, Severity] = {}
    for key, value in settings.items():
        if key.startswith("propagate."):
            kind = key.split(".", 1)[1]
            if kind not in PROPAGATION_KINDS:
                raise UsageError(f"unknown link kind in '{key}'")
            if value not in ("forward", "reverse", "both", "off"):
                raise UsageError(f"'{key}' must be forward, reverse, both or off")
            overrides[kind] = value
        elif key.startswith("severity."):
            rule = key.split(".", 1)[1]
            if rule not in RULES:
                raise UsageError(f"unknown rule id '{rule}'")
            try:
                severities[rule] = Severity(value)
            except ValueError:
                raise UsageError(f"severity for {rule} must be error or warning") from None
        elif key not in known:
            raise UsageError(f"unknown config key '{key}'")

    output_format = settings.get("format", "text")
    if output_format not in ("text", "json"):
        raise UsageError(f"format must be text or json, not '{output_format}'")
    fail_on = settings.get("fail-on", "error")
    if fail_on not in ("error", "warning", "never"):
        raise UsageError(f"fail-on must be error, warning or never, not '{fail_on}'")
    disabled = {r.strip() for r in settings.get("disable", "").split(",") if r.strip()}
    unknown = disabled - set(RULES)
    if unknown:
        raise UsageError(f"unknown rule id(s) in disable: {', '.join(sorted(unknown))}")
    monotone = settings.get("criticality-monotone", "true").lower()
    if monotone not in ("true", "false"):
        raise UsageError("criticality-monotone must be true or false")
    rule_config = RuleConfig(
        enabled=frozenset(RULES) - disabled,
        severity_overrides=severities,
        criticality_monotone=monotone == "true",
    )
    return RunConfig(args.model, rule_config, overrides, output_format, fail_on)


def load_model(config: RunConfig) -> Model:
    try:
        text = config.input_path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise UsageError(f"cannot read {config.input_path}: {getattr(exc, 'strerror', None) or exc}") from None
    return load_text(text, str(config.input_path))


def _exit_for(findings, fail_on: str) -> int:
    errors, warnings, _ = report.finding_counts(findings)
    if fail_on == "error" and errors:
        return EXIT_FINDINGS
    if fail_on == "warning" and (errors or warnings):
        return EXIT_FINDINGS
    return EXIT_OK


def cmd_check(config: RunConfig, out) -> int:
    model = load_model(config)
    graph = build_graph(model)
    findings = validate(model, graph, config.rule_config)
    stats = coverage_stats(model, graph)
    if config.output_format == "json":
        out.write(report.dumps(report.json_report(model, findings, stats)))
    else:
        out.write(report.check_text(findings, stats, str(config.input_path)))
    return _exit_for(findings, config.fail_on)


def cmd_impact(config: RunConfig, changed: list[str], out) -> int:
    model = load_model(config)
    graph = build_graph(model)
    if not changed:
        raise UsageError("--changed needs at least one entity id")
    for entity_id in changed:
        if entity_id not in model:
            raise UsageError(f"unknown entity '{entity_id}'")
    try:
        table = default_propagation().override(config.propagation_overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = impact(model, graph, changed, table)
    if config.output_format == "json":
        findings = validate(model, graph, config.rule_config)
        out.write(report.dumps(report.json_report(model, findings, coverage_stats(model, graph), result)))
    else:
        out.write(report.impact_text(result, model))
    return EXIT_OK


def parse_relation(text: str) -> list[tuple[LinkKind, Direction]]:
    steps = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        kind_name, _, direction = part.partition(":")
        try:
            steps.append((LinkKind(kind_name), Direction(direction or "forward")))
        except ValueError:
            raise UsageError(f"invalid relation '{part}' (expected kind[:forward|reverse|both])") from None
    if not steps:
        raise UsageError("relation must name at least one link kind")
    return steps


def cmd_matrix(config: RunConfig, row_kind: str, column_kind: str, relation: str, transitive: bool, out) -> int:
    steps = parse_relation(relation)
    for name in (row_kind, column_kind):
        try:
            kind_filter(name)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    model = load_model(config)
    matrix = trace_matrix(build_graph(model), row_kind, column_kind, steps, transitive)
    if config.output_format == "json":
        out.write(report.dumps(report.matrix_json(matrix)))
    else:
        out.write(report.matrix_text(matrix))
    return EXIT_OK


def cmd_stats(config: RunConfig, out) -> int:
    model = load_model(config)
    graph = build_graph(model)
    stats = coverage_stats(model, graph)
    if config.output_format == "json":
        out.write(report.dumps({"schema_version": report.SCHEMA_VERSION,
                                "model_summary": report.model_summary(model, stats),
                                "coverage": report.coverage_json(stats)}))
    else:
        out.write(report.stats_text(stats))
    return EXIT_OK


def cmd_export_dot(config: RunConfig, out) -> int:
    out.write(report.export_dot(build_graph(load_model(config))))
    return EXIT_OK


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = run_config(args)
        if args.command == "check":
            return cmd_check(config, stdout)
        if args.command == "impact":
            changed = [c.strip() for item in args.changed for c in item.split(",") if c.strip()]
            return cmd_impact(config, changed, stdout)
        if args.command == "matrix":
            return cmd_matrix(config, args.rows, args.cols, args.relation, args.transitive, stdout)
        if args.command == "stats":
            return cmd_stats(config, stdout)
        return cmd_export_dot(config, stdout)
    except UsageError as exc:
        print(f"tracekit: error: {exc}", file=stderr)
        return EXIT_USAGE
    except UnknownReference as exc:
        print(f"tracekit: error: unknown entity '{exc.entity_id}'", file=stderr)
        return EXIT_USAGE
    except DslError as exc:
        for diag in exc.diagnostics:
            print(diag.render(), file=stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
