"""Change-impact analysis over the traceability graph."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from tracekit.errors import EmptyChangeSet, UnknownReference
from tracekit.graph import Direction, Step, TraceGraph, expand_steps, witness_paths
from tracekit.model import (
    KIND_ORDER,
    EntityKind,
    LinkKind,
    Model,
    Requirement,
    Risk,
    SolutionElement,
    TestCase,
    Tolerability,
)


@dataclass(frozen=True)
class PropagationTable:
    """How a change travels along each edge kind; kinds absent from ``entries`` are off."""

    entries: Mapping[LinkKind, Direction] = field(default_factory=dict)

    def steps(self) -> frozenset[Step]:
        return expand_steps(self.entries.items())

    def direction(self, kind: LinkKind) -> Direction | None:
        return self.entries.get(kind)

    def override(self, overrides: Mapping[str, str]) -> PropagationTable:
        """Apply ``{kind: forward|reverse|both|off}`` overrides, e.g. from the CLI."""
        entries = dict(self.entries)
        for kind_name, value in overrides.items():
            try:
                kind = LinkKind(kind_name)
            except ValueError:
                raise ValueError(f"unknown link kind '{kind_name}' in propagation override") from None
            if value == "off":
                entries.pop(kind, None)
                continue
            try:
                entries[kind] = Direction(value)
            except ValueError:
                raise ValueError(
                    f"propagation for '{kind_name}' must be forward, reverse, both or off, not '{value}'"
                ) from None
        return replace(self, entries=entries)


def default_propagation() -> PropagationTable:
    return PropagationTable(
        {
            LinkKind.DERIVE: Direction.FORWARD,
            LinkKind.REFINE: Direction.FORWARD,
            LinkKind.PARENT: Direction.FORWARD,
            LinkKind.SATISFY: Direction.REVERSE,
            LinkKind.VERIFY: Direction.REVERSE,
            LinkKind.SPECIFY: Direction.BOTH,
            LinkKind.ALLOCATE: Direction.FORWARD,
            LinkKind.COVERS: Direction.FORWARD,
        }
    )


@dataclass(frozen=True)
class Impacted:
    id: str
    distance: int
    path: tuple[str, ...]


@dataclass(frozen=True)
class ImpactResult:
    changed: tuple[str, ...]
    impacted: tuple[Impacted, ...]
    challenged_risks: tuple[str, ...]
    stale_testcases: tuple[str, ...]

    def impacted_ids(self) -> list[str]:
        return sorted(i.id for i in self.impacted)

    def distances(self) -> dict[str, int]:
        return {i.id: i.distance for i in self.impacted}


def impact(
    model: Model,
    graph: TraceGraph,
    changed: Iterable[str],
    table: PropagationTable | None = None,
) -> ImpactResult:
    """Entities affected by changing ``changed``, with risks challenged and tests gone stale."""
    table = table or default_propagation()
    changed = sorted(set(changed))
    if not changed:
        raise EmptyChangeSet()
    for entity_id in changed:
        if entity_id not in model:
            raise UnknownReference(entity_id)

    paths = witness_paths(graph, changed, table.steps())
    impacted = tuple(
        sorted(
            (Impacted(n, len(p) - 1, p) for n, p in paths.items() if n not in changed),
            key=lambda i: (i.distance, i.id),
        )
    )
    touched = set(changed) | {i.id for i in impacted}

    risks = {i.id for i in impacted if graph.node_kinds[i.id] is EntityKind.RISK}
    if table.direction(LinkKind.COVERS) is not None:
        for entity_id in touched:
            entity = model.get(entity_id)
            if isinstance(entity, Requirement) and entity.safety:
                risks.update(
                    t for t in graph.successors(entity_id, LinkKind.COVERS)
                    if graph.node_kinds[t] is EntityKind.RISK
                )

    stale = {
        s
        for entity_id in touched
        if graph.node_kinds[entity_id].is_requirement
        for s in graph.predecessors(entity_id, LinkKind.VERIFY)
        if graph.node_kinds[s] is EntityKind.TESTCASE
    }
    return ImpactResult(tuple(changed), impacted, tuple(sorted(risks)), tuple(sorted(stale)))


def _label(entity) -> str:
    if isinstance(entity, Requirement):
        text = entity.text
    elif isinstance(entity, SolutionElement):
        text = entity.name
    elif isinstance(entity, TestCase):
        text = entity.description or entity.method.value
    else:
        text = entity.description
    return text if len(text) <= 60 else text[:57] + "..."


def impact_report(result: ImpactResult, model: Model) -> dict:
    """Structured, deterministically ordered view of an ImpactResult."""
    groups: dict[str, list[dict]] = {}
    for item in sorted(result.impacted, key=lambda i: (KIND_ORDER[model.get(i.id).kind], i.distance, i.id)):
        entity = model.get(item.id)
        groups.setdefault(entity.kind.value, []).append(
            {"id": item.id, "distance": item.distance, "path": list(item.path), "label": _label(entity)}
        )
    risks = []
    for risk_id in result.challenged_risks:
        risk: Risk = model.get(risk_id)  # type: ignore[assignment]
        risks.append(
            {
                "id": risk_id,
                "description": risk.description,
                "severity": risk.severity.value,
                "likelihood": risk.likelihood.value,
                "tolerability": risk.tolerability.value,
                "unacceptable": risk.tolerability is Tolerability.UNACCEPTABLE,
            }
        )
    n = len(result.impacted)
    summary = "no downstream impact" if n == 0 else f"{n} impacted entit{'y' if n == 1 else 'ies'}"
    return {
        "changed": list(result.changed),
        "summary": summary,
        "impacted": groups,
        "challenged_risks": risks,
        "stale_testcases": list(result.stale_testcases),
    }
