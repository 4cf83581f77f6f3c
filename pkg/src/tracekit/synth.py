"""Seeded random model generator for property checks and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from tracekit.model import (
    LINK_CONSTRAINTS,
    Criticality,
    DECLARABLE_LINK_KINDS,
    ElementKind,
    EntityKind,
    Likelihood,
    Link,
    LinkKind,
    Model,
    ReqClass,
    Requirement,
    Risk,
    RiskSeverity,
    SolutionElement,
    TestCase,
    TestMethod,
    Tolerability,
    build_model,
    link_allowed,
)

_PREFIX = {
    EntityKind.ACQUIRER: "AR",
    EntityKind.STAKEHOLDER: "OS",
    EntityKind.TECHNICAL: "STR",
    EntityKind.SPECIFIED: "SR",
    EntityKind.LOGICAL: "F",
    EntityKind.PHYSICAL: "P",
    EntityKind.INTERFACE: "I",
    EntityKind.TESTCASE: "TC",
    EntityKind.RISK: "RK",
}

# exercises escaping and non-ASCII handling in the printer
_WORDS = ["brake", "stop", "sensor", 'the "main" bus', "back\\slash", "débit", "≥ 6 m/s²", "valve", "  spaced  "]


@dataclass
class SynthConfig:
    max_entities: int = 100
    min_entities: int = 0
    link_factor: float = 1.5
    legal_links_only: bool = True
    safety_ratio: float = 0.5
    parent_ratio: float = 0.2


def _text(rng: random.Random) -> str:
    return " ".join(rng.choice(_WORDS) for _ in range(rng.randint(1, 4))).strip() or "x"


def _real(rng: random.Random) -> float:
    # spans many magnitudes so positional printing of tiny/huge values is exercised
    return rng.choice([rng.uniform(0.5, 1e5), 10 ** rng.uniform(-9, -3), float(rng.randint(1, 10**6))])


def random_model(rng: random.Random, config: SynthConfig | None = None) -> Model:
    config = config or SynthConfig()
    n = rng.randint(config.min_entities, config.max_entities)
    kinds = [rng.choice(list(EntityKind)) for _ in range(n)]
    counters: dict[EntityKind, int] = {}
    reqs: list[Requirement] = []
    elems: list[SolutionElement] = []
    tcs: list[TestCase] = []
    risks: list[Risk] = []
    physical: list[str] = []

    for kind in sorted(kinds, key=lambda k: k.value != "physical"):  # physical first, for interfaces
        counters[kind] = counters.get(kind, 0) + 1
        eid = f"{_PREFIX[kind]}-{counters[kind]}"
        if kind.is_requirement:
            safety = rng.random() < config.safety_ratio
            fields: dict = {}
            if safety:
                fields["criticality"] = rng.choice(list(Criticality))
                if rng.random() < 0.5:
                    fields["sil"] = rng.randint(1, 4)
                for name in ("mtbf_hours", "mtbr_hours", "failure_rate_per_hour"):
                    if rng.random() < 0.3:
                        fields[name] = _real(rng)
            if kind is EntityKind.STAKEHOLDER or rng.random() < 0.2:
                if rng.random() < 0.85:
                    fields["source"] = _text(rng)
            if reqs and rng.random() < config.parent_ratio:
                # parents only point backwards, so chains stay acyclic
                fields["parent"] = rng.choice(reqs).id
            reqs.append(Requirement(eid, ReqClass(kind.value), _text(rng), safety=safety, **fields))
        elif kind is EntityKind.INTERFACE:
            pool = physical or []
            connects = tuple(rng.sample(pool, min(len(pool), rng.randint(0, 3)))) if pool else ()
            elems.append(SolutionElement(eid, ElementKind.INTERFACE, _text(rng), connects))
        elif kind.is_element:
            elems.append(SolutionElement(eid, ElementKind(kind.value), _text(rng)))
            if kind is EntityKind.PHYSICAL:
                physical.append(eid)
        elif kind is EntityKind.TESTCASE:
            desc = _text(rng) if rng.random() < 0.7 else None
            tcs.append(TestCase(eid, rng.choice(list(TestMethod)), desc))
        else:
            risks.append(
                Risk(eid, _text(rng), rng.choice(list(RiskSeverity)), rng.choice(list(Likelihood)),
                     rng.choice(list(Tolerability)))
            )

    entities = {e.id: e for e in [*reqs, *elems, *tcs, *risks]}
    links = _random_links(rng, entities, int(config.link_factor * n), config.legal_links_only)
    rng.shuffle(reqs)
    rng.shuffle(links)
    return build_model(reqs, elems, tcs, risks, links)


def _random_links(rng: random.Random, entities: dict, count: int, legal_only: bool) -> list[Link]:
    ids = sorted(entities)
    if len(ids) < 2:
        return []
    by_kind: dict[EntityKind, list[str]] = {}
    for eid in ids:
        by_kind.setdefault(entities[eid].kind, []).append(eid)
    links: set[Link] = set()
    for _ in range(count * 3):
        if len(links) >= count:
            break
        kind = rng.choice(DECLARABLE_LINK_KINDS)
        if legal_only:
            pairs = [p for p in LINK_CONSTRAINTS[kind] if p[0] in by_kind and p[1] in by_kind]
            if not pairs:
                continue
            src_kind, dst_kind = rng.choice(sorted(pairs, key=lambda p: (p[0].value, p[1].value)))
            src, dst = rng.choice(by_kind[src_kind]), rng.choice(by_kind[dst_kind])
            if src == dst or not link_allowed(kind, entities[src], entities[dst]):
                continue
        else:
            src, dst = rng.sample(ids, 2)
        links.add(Link(kind, src, dst))
    return sorted(links, key=Link.sort_key)


def random_change_set(rng: random.Random, model: Model, max_size: int = 4) -> list[str]:
    ids = model.ids()
    return rng.sample(ids, rng.randint(1, min(max_size, len(ids)))) if ids else []


def safety_covers(model: Model) -> list[Link]:
    """Covers links whose source is a safety requirement."""
    return [
        link for link in model.links
        if link.kind is LinkKind.COVERS
        and isinstance(model.get(link.source), Requirement)
        and model.get(link.source).safety  # type: ignore[union-attr]
    ]
