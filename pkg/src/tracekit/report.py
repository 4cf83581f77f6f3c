"""Rendering of findings, coverage, impact and matrices as text, JSON and DOT."""

from __future__ import annotations

import json
from importlib import resources

from tracekit.dsl.lexer import Severity, SourceSpan
from tracekit.graph import TraceGraph, TraceMatrix
from tracekit.impact import ImpactResult, impact_report
from tracekit.model import KIND_ORDER, LINK_ORDER, EntityKind, Model
from tracekit.rules import CoverageStats, Finding

SCHEMA_VERSION = "1"

DOT_SHAPES = {
    EntityKind.ACQUIRER: "box",
    EntityKind.STAKEHOLDER: "box",
    EntityKind.TECHNICAL: "box",
    EntityKind.SPECIFIED: "box",
    EntityKind.LOGICAL: "ellipse",
    EntityKind.PHYSICAL: "component",
    EntityKind.INTERFACE: "diamond",
    EntityKind.TESTCASE: "note",
    EntityKind.RISK: "octagon",
}


def load_schema() -> dict:
    return json.loads(resources.files("tracekit").joinpath("report.schema.json").read_text(encoding="utf-8"))


# JSON


def finding_json(finding: Finding) -> dict:
    span = finding.span
    location = None
    if isinstance(span, SourceSpan):
        location = {"file": span.file, "line": span.line, "column": span.column}
    return {
        "rule_id": finding.rule_id,
        "severity": finding.severity.value,
        "subjects": list(finding.subjects),
        "message": finding.message,
        "location": location,
        "suppressed": finding.suppressed,
    }


def coverage_json(stats: CoverageStats) -> dict:
    out: dict = dict(stats.percentages())
    out["entity_counts"] = dict(stats.entity_counts)
    out["link_counts"] = dict(stats.link_counts)
    return out


def impact_json(result: ImpactResult, model: Model) -> dict:
    report = impact_report(result, model)
    return {
        "changed": list(result.changed),
        "impacted": [{"id": i.id, "distance": i.distance, "path": list(i.path)} for i in result.impacted],
        "challenged_risks": list(result.challenged_risks),
        "stale_testcases": list(result.stale_testcases),
        "report": report,
    }


def model_summary(model: Model, stats: CoverageStats) -> dict:
    return {
        "entities": dict(stats.entity_counts),
        "links": dict(stats.link_counts),
        "entity_total": len(model),
        "link_total": len(model.links),
    }


def json_report(
    model: Model,
    findings: list[Finding],
    stats: CoverageStats,
    result: ImpactResult | None = None,
) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "model_summary": model_summary(model, stats),
        "findings": [finding_json(f) for f in findings],
        "coverage": coverage_json(stats),
        "impact": impact_json(result, model) if result is not None else None,
    }


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# text


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" + ("" if n == 1 else "s")


def finding_line(finding: Finding, file: str) -> str:
    span = finding.span
    where = str(span) if isinstance(span, SourceSpan) else f"{file}:0:0"
    severity = "suppressed" if finding.suppressed else finding.severity.value
    return f"{where}: {severity}[{finding.rule_id}]: {finding.message} ({', '.join(finding.subjects)})"


def finding_counts(findings: list[Finding]) -> tuple[int, int, int]:
    active = [f for f in findings if not f.suppressed]
    errors = sum(f.severity is Severity.ERROR for f in active)
    return errors, len(active) - errors, len(findings) - len(active)


def coverage_text(stats: CoverageStats) -> list[str]:
    return [f"{name.replace('_', ' ')}: {value:.1f}%" for name, value in stats.percentages().items()]


def counts_text(stats: CoverageStats) -> list[str]:
    lines = ["entities: " + ", ".join(f"{k}={v}" for k, v in stats.entity_counts.items())]
    lines.append("links: " + ", ".join(f"{k}={v}" for k, v in stats.link_counts.items()))
    return lines


def check_text(findings: list[Finding], stats: CoverageStats, file: str) -> str:
    lines = [finding_line(f, file) for f in findings]
    errors, warnings, suppressed = finding_counts(findings)
    summary = f"{_plural(errors, 'error')}, {_plural(warnings, 'warning')}"
    if suppressed:
        summary += f", {suppressed} suppressed"
    lines.append(summary)
    lines.append("coverage:")
    lines += ["  " + line for line in coverage_text(stats)]
    return "\n".join(lines) + "\n"


def stats_text(stats: CoverageStats) -> str:
    return "\n".join(coverage_text(stats) + counts_text(stats)) + "\n"


def impact_text(result: ImpactResult, model: Model) -> str:
    report = impact_report(result, model)
    lines = ["changed: " + ", ".join(report["changed"])]
    if not result.impacted:
        lines.append("no downstream impact")
    else:
        lines.append(report["summary"] + ":")
        for kind, rows in report["impacted"].items():
            lines.append(f"  {kind}:")
            for row in rows:
                lines.append(
                    f"    {row['id']}  d={row['distance']}  via {' -> '.join(row['path'])}  \"{row['label']}\""
                )
    if report["challenged_risks"]:
        lines.append("challenged risks:")
        for risk in report["challenged_risks"]:
            marker = "!!" if risk["unacceptable"] else "  "
            lines.append(
                f"  {marker} {risk['id']}  [{risk['tolerability'].upper() if risk['unacceptable'] else risk['tolerability']}]"
                f"  severity={risk['severity']}  likelihood={risk['likelihood']}  \"{risk['description']}\""
            )
    else:
        lines.append("challenged risks: none")
    lines.append("stale test cases: " + (", ".join(report["stale_testcases"]) or "none"))
    return "\n".join(lines) + "\n"


def matrix_text(matrix: TraceMatrix) -> str:
    header = f"{len(matrix.rows)}×{len(matrix.columns)} matrix"
    if not matrix.rows or not matrix.columns:
        return header + "\n"
    width = max(len(r) for r in matrix.rows)
    col_w = [max(len(c), 1) for c in matrix.columns]
    lines = [header, " " * width + " | " + " ".join(c.ljust(w) for c, w in zip(matrix.columns, col_w))]
    lines.append("-" * width + "-+-" + "-".join("-" * w for w in col_w))
    for r, cells in zip(matrix.rows, matrix.cells):
        marks = " ".join(("x" if on else ".").ljust(w) for on, w in zip(cells, col_w))
        lines.append(r.ljust(width) + " | " + marks.rstrip())
    return "\n".join(lines) + "\n"


def matrix_json(matrix: TraceMatrix) -> dict:
    return {
        "rows": list(matrix.rows),
        "columns": list(matrix.columns),
        "cells": [list(row) for row in matrix.cells],
        "row_kind": matrix.row_kind,
        "column_kind": matrix.column_kind,
        "relation": [{"kind": k.value, "direction": d.value} for k, d in matrix.relation],
        "transitive": matrix.transitive,
    }


# DOT


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: TraceGraph) -> str:
    lines = ["digraph trace {"]
    for node in sorted(graph.nodes, key=lambda n: (KIND_ORDER[graph.node_kinds[n]], n)):
        kind = graph.node_kinds[node]
        lines.append(f"  {_quote(node)} [shape={DOT_SHAPES[kind]}, label={_quote(node)}];")
    for edge in sorted(set(graph.edges), key=lambda e: (LINK_ORDER[e.kind], e.source, e.target, e.link_index or -1)):
        style = ", style=dashed" if edge.kind.value == "parent" else ""
        lines.append(f"  {_quote(edge.source)} -> {_quote(edge.target)} [label={_quote(edge.kind.value)}{style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
