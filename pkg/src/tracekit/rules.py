"""Validation rule catalog R1-R12 and coverage statistics.

Every rule is a pure function ``(model, graph, config) -> list[Finding]``.
Rules never raise on model content; problems are findings.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping

from tracekit.dsl.lexer import Severity
from tracekit.graph import Direction, TraceGraph, find_cycles, reachable
from tracekit.model import (
    DECLARABLE_LINK_KINDS,
    ELEMENT_KINDS,
    EntityKind,
    Link,
    LinkKind,
    Model,
    ReqClass,
    Requirement,
    SolutionElement,
    link_allowed,
)


@dataclass(frozen=True)
class Finding:
    rule_id: str
    severity: Severity
    subjects: tuple[str, ...]
    message: str
    span: object = None
    # index of the link the finding is about, for link-level rules
    link_index: int | None = None
    suppressed: bool = False

    def sort_key(self) -> tuple:
        return (rule_number(self.rule_id), self.subjects[0], self.subjects, self.message)


@dataclass(frozen=True)
class RuleConfig:
    enabled: frozenset[str] = field(default_factory=lambda: frozenset(RULES))
    severity_overrides: Mapping[str, Severity] = field(default_factory=dict)
    criticality_monotone: bool = True

    def __post_init__(self) -> None:
        unknown = (set(self.enabled) | set(self.severity_overrides)) - set(RULES)
        if unknown:
            raise ValueError(f"unknown rule id(s): {', '.join(sorted(unknown))}")
        object.__setattr__(self, "enabled", frozenset(self.enabled))

    def disable(self, *rule_ids: str) -> RuleConfig:
        return replace(self, enabled=self.enabled - set(rule_ids))


def rule_number(rule_id: str) -> int:
    return int(rule_id[1:])


@dataclass(frozen=True)
class Rule:
    id: str
    name: str
    severity: Severity
    check: Callable[[Model, TraceGraph, RuleConfig], list[Finding]]


# shared predicates; coverage_stats uses the same ones so the two views agree


def _requirements(model: Model, *classes: ReqClass) -> list[Requirement]:
    reqs = [r for r in model.requirements if not classes or r.req_class in classes]
    return sorted(reqs, key=lambda r: r.id)


def _is_transformed(graph: TraceGraph, req: Requirement) -> bool:
    downstream = reachable(graph, [req.id], [(LinkKind.DERIVE, Direction.FORWARD)])
    return any(graph.node_kinds[n] is EntityKind.TECHNICAL for n in downstream)


def _is_satisfied(graph: TraceGraph, req: Requirement) -> bool:
    return bool(
        graph.predecessors(req.id, LinkKind.SATISFY)
        or graph.successors(req.id, LinkKind.DERIVE)
        or graph.successors(req.id, LinkKind.REFINE)
    )


def _is_verified(graph: TraceGraph, req: Requirement) -> bool:
    return any(graph.node_kinds[s] is EntityKind.TESTCASE for s in graph.predecessors(req.id, LinkKind.VERIFY))


def _is_covered(graph: TraceGraph, risk_id: str) -> bool:
    return bool(graph.predecessors(risk_id, LinkKind.COVERS))


def _is_allocated(graph: TraceGraph, elem: SolutionElement) -> bool:
    return any(graph.node_kinds[t] is EntityKind.PHYSICAL for t in graph.successors(elem.id, LinkKind.ALLOCATE))


def _covers_risk(graph: TraceGraph, node: str) -> bool:
    return any(graph.node_kinds[t] is EntityKind.RISK for t in graph.successors(node, LinkKind.COVERS))


def _finding(rule: str, subjects: Iterable[str], message: str, link_index: int | None = None) -> Finding:
    return Finding(rule, RULES[rule].severity, tuple(subjects), message, link_index=link_index)


def _links(model: Model) -> Iterable[tuple[int, Link]]:
    return enumerate(model.links)


# the catalog


def r1_source_consistency(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    return [
        _finding("R1", [r.id], f"stakeholder requirement {r.id} has no source; the requirement source "
                 "must be consistent with its stereotype and name the concerned stakeholder")
        for r in _requirements(model, ReqClass.OTHER_STAKEHOLDER)
        if not (r.source or "").strip()
    ]


def r2_stakeholder_transformation(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    return [
        _finding("R2", [r.id], f"{r.req_class.value} requirement {r.id} is not transformed into any "
                 "system technical requirement (no derive path)")
        for r in _requirements(model, ReqClass.ACQUIRER, ReqClass.OTHER_STAKEHOLDER)
        if not _is_transformed(graph, r)
    ]


def r3_technical_satisfaction(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    return [
        _finding("R3", [r.id], f"technical requirement {r.id} is neither satisfied by a solution element "
                 "nor derived/refined further")
        for r in _requirements(model, ReqClass.SYSTEM_TECHNICAL)
        if not _is_satisfied(graph, r)
    ]


def r4_verification_coverage(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    out = []
    for r in _requirements(model):
        if _is_verified(graph, r):
            continue
        finding = _finding("R4", [r.id], f"requirement {r.id} is not verified by any test case")
        if r.safety:
            finding = replace(finding, severity=Severity.ERROR,
                              message=f"safety requirement {r.id} is not verified by any test case")
        out.append(finding)
    return out


def r5_risk_coverage(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    return [
        _finding("R5", [risk.id], f"risk {risk.id} is not covered by any safety requirement")
        for risk in sorted(model.risks, key=lambda k: k.id)
        if not _is_covered(graph, risk.id)
    ]


def r6_safety_grounding(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    upstream_steps = [(LinkKind.DERIVE, Direction.REVERSE), (LinkKind.REFINE, Direction.REVERSE)]
    out = []
    for r in _requirements(model):
        if not r.safety or _covers_risk(graph, r.id):
            continue
        if any(_covers_risk(graph, a) for a in reachable(graph, [r.id], upstream_steps)):
            continue
        out.append(_finding("R6", [r.id], f"safety requirement {r.id} is not linked to any risk, "
                            "directly or through the requirements it derives from"))
    return out


def r7_link_type_check(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    out = []
    for i, link in _links(model):
        src, dst = model.get(link.source), model.get(link.target)
        if link_allowed(link.kind, src, dst):
            continue
        what = f"{src.kind.value} -> {dst.kind.value}"
        if link.kind is LinkKind.COVERS and src.kind.is_requirement and dst.kind is EntityKind.RISK:
            what = f"non-safety {src.kind.value} -> risk"
        out.append(_finding("R7", [link.source, link.target],
                            f"link '{link}' is not allowed: {link.kind.value} cannot join {what}", i))
    return out


def r8_acyclic_derivation(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    return [
        _finding("R8", cycle, "derivation cycle: " + " -> ".join(cycle + [cycle[0]]))
        for cycle in find_cycles(graph, [LinkKind.DERIVE, LinkKind.REFINE])
    ]


def r9_interface_arity(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    out = []
    for elem in sorted(model.elements, key=lambda e: e.id):
        if elem.kind is not EntityKind.INTERFACE:
            continue
        others = sorted({c for c in elem.connects if graph.node_kinds.get(c) is not EntityKind.PHYSICAL})
        physical = {c for c in elem.connects if graph.node_kinds.get(c) is EntityKind.PHYSICAL}
        if others:
            out.append(_finding("R9", [elem.id] + others,
                                f"interface {elem.id} connects non-physical element(s): {', '.join(others)}"))
        elif len(physical) < 2:
            out.append(_finding("R9", [elem.id],
                                f"interface {elem.id} connects {len(physical)} distinct physical "
                                "component(s); at least 2 are required"))
    return out


def r10_concept_separation(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    out = []
    for i, link in _links(model):
        src, dst = model.get(link.source).kind, model.get(link.target).kind
        reasons = []
        if src is EntityKind.TESTCASE and link.kind is not LinkKind.VERIFY:
            reasons.append(f"test case {link.source} may only be the source of verify links")
        if dst is EntityKind.TESTCASE:
            reasons.append(f"test case {link.target} may only be the source of verify links")
        if dst is EntityKind.RISK and link.kind is not LinkKind.COVERS:
            reasons.append(f"risk {link.target} may only be the target of covers links")
        if src is EntityKind.RISK:
            reasons.append(f"risk {link.source} may only be the target of covers links")
        vv = {EntityKind.TESTCASE, EntityKind.RISK}
        if (src in vv and dst in ELEMENT_KINDS) or (dst in vv and src in ELEMENT_KINDS):
            reasons.append("V&V and risk elements must not be linked directly to the design solution")
        if reasons:
            out.append(_finding("R10", [link.source, link.target],
                                f"link '{link}' breaks concept separation: " + "; ".join(reasons), i))
    return out


def r11_criticality_monotone(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    if not config.criticality_monotone:
        return []
    out = []
    for i, link in _links(model):
        if link.kind not in (LinkKind.DERIVE, LinkKind.REFINE):
            continue
        src, dst = model.get(link.source), model.get(link.target)
        if not (isinstance(src, Requirement) and isinstance(dst, Requirement) and src.safety and dst.safety):
            continue
        if dst.criticality < src.criticality:  # type: ignore[operator]
            out.append(_finding("R11", [link.source, link.target],
                                f"criticality decreases along '{link}': "
                                f"{src.criticality.keyword} -> {dst.criticality.keyword}", i))  # type: ignore[union-attr]
    return out


def r12_allocation_completeness(model: Model, graph: TraceGraph, config: RuleConfig) -> list[Finding]:
    return [
        _finding("R12", [e.id], f"logical element {e.id} is not allocated to any physical element")
        for e in sorted(model.elements, key=lambda e: e.id)
        if e.kind is EntityKind.LOGICAL and not _is_allocated(graph, e)
    ]


RULES: dict[str, Rule] = {
    r.id: r
    for r in [
        Rule("R1", "SourceConsistency", Severity.ERROR, r1_source_consistency),
        Rule("R2", "StakeholderTransformation", Severity.WARNING, r2_stakeholder_transformation),
        Rule("R3", "TechnicalSatisfaction", Severity.WARNING, r3_technical_satisfaction),
        Rule("R4", "VerificationCoverage", Severity.WARNING, r4_verification_coverage),
        Rule("R5", "RiskCoverage", Severity.ERROR, r5_risk_coverage),
        Rule("R6", "SafetyGrounding", Severity.WARNING, r6_safety_grounding),
        Rule("R7", "LinkTypeCheck", Severity.ERROR, r7_link_type_check),
        Rule("R8", "AcyclicDerivation", Severity.ERROR, r8_acyclic_derivation),
        Rule("R9", "InterfaceArity", Severity.ERROR, r9_interface_arity),
        Rule("R10", "ConceptSeparation", Severity.ERROR, r10_concept_separation),
        Rule("R11", "CriticalityMonotone", Severity.WARNING, r11_criticality_monotone),
        Rule("R12", "AllocationCompleteness", Severity.WARNING, r12_allocation_completeness),
    ]
}


def _locate(model: Model, finding: Finding) -> Finding:
    key: str | int = finding.link_index if finding.link_index is not None else finding.subjects[0]
    allowed = model.suppressions.get(key, frozenset())
    return replace(finding, span=model.location(key), suppressed=finding.rule_id in allowed)


def validate(model: Model, graph: TraceGraph, config: RuleConfig | None = None) -> list[Finding]:
    """Run every enabled rule and return findings sorted by (rule number, first subject)."""
    config = config or RuleConfig()
    findings: list[Finding] = []
    for rule_id, rule in RULES.items():
        if rule_id not in config.enabled:
            continue
        for finding in rule.check(model, graph, config):
            if rule_id in config.severity_overrides:
                finding = replace(finding, severity=config.severity_overrides[rule_id])
            findings.append(_locate(model, finding))
    return sorted(findings, key=Finding.sort_key)


@dataclass(frozen=True)
class CoverageStats:
    verification_coverage: float
    risk_coverage: float
    transformation_coverage: float
    satisfaction_coverage: float
    allocation_coverage: float
    entity_counts: dict[str, int]
    link_counts: dict[str, int]

    def percentages(self) -> dict[str, float]:
        return {
            "verification_coverage": self.verification_coverage,
            "risk_coverage": self.risk_coverage,
            "transformation_coverage": self.transformation_coverage,
            "satisfaction_coverage": self.satisfaction_coverage,
            "allocation_coverage": self.allocation_coverage,
        }


def _percent(done: int, total: int) -> float:
    return 100.0 if total == 0 else 100.0 * done / total


def coverage_stats(model: Model, graph: TraceGraph) -> CoverageStats:
    reqs = _requirements(model)
    stakeholder = _requirements(model, ReqClass.ACQUIRER, ReqClass.OTHER_STAKEHOLDER)
    technical = _requirements(model, ReqClass.SYSTEM_TECHNICAL)
    logical = [e for e in model.elements if e.kind is EntityKind.LOGICAL]
    entity_counts = {k.value: 0 for k in EntityKind}
    for entity in model.entities():
        entity_counts[entity.kind.value] += 1
    link_counts = {k.value: 0 for k in DECLARABLE_LINK_KINDS}
    for link in model.links:
        link_counts[link.kind.value] += 1
    return CoverageStats(
        verification_coverage=_percent(sum(_is_verified(graph, r) for r in reqs), len(reqs)),
        risk_coverage=_percent(sum(_is_covered(graph, k.id) for k in model.risks), len(model.risks)),
        transformation_coverage=_percent(sum(_is_transformed(graph, r) for r in stakeholder), len(stakeholder)),
        satisfaction_coverage=_percent(sum(_is_satisfied(graph, r) for r in technical), len(technical)),
        allocation_coverage=_percent(sum(_is_allocated(graph, e) for e in logical), len(logical)),
        entity_counts=entity_counts,
        link_counts=link_counts,
    )
