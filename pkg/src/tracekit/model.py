"""Core information model: requirements, solution elements, test cases, risks and links.

Entities are frozen dataclasses. A :class:`Model` is assembled with
:func:`build_model`, which rejects structural errors (duplicate ids, dangling
references, duplicate links, parent cycles). Semantic problems such as an
ill-typed link are representable and left to the rule engine.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from tracekit.errors import (
    CyclicParentChain,
    DuplicateId,
    DuplicateLink,
    InvariantViolation,
    ModelError,
    NotARequirement,
    UnknownReference,
)

ID_PATTERN = re.compile(r"[A-Za-z][A-Za-z0-9_-]*\Z")


class ReqClass(enum.Enum):
    ACQUIRER = "acquirer"
    OTHER_STAKEHOLDER = "stakeholder"
    SYSTEM_TECHNICAL = "technical"
    SPECIFIED = "specified"

    @property
    def kind(self) -> EntityKind:
        return EntityKind(self.value)


class Criticality(enum.IntEnum):
    LOW = 1
    MEDIUM = 2
    HIGH = 3
    CATASTROPHIC = 4

    @property
    def keyword(self) -> str:
        return self.name.lower()


class ElementKind(enum.Enum):
    LOGICAL = "logical"
    PHYSICAL = "physical"
    INTERFACE = "interface"

    @property
    def kind(self) -> EntityKind:
        return EntityKind(self.value)


class TestMethod(enum.Enum):
    __test__ = False  # keep pytest from collecting this

    SIMULATION = "simulation"
    TEST = "test"
    PROTOTYPING = "prototyping"
    MODEL_CHECKING = "model_checking"
    REVIEW = "review"


class RiskSeverity(enum.Enum):
    MINOR = "minor"
    MAJOR = "major"
    HAZARDOUS = "hazardous"
    CATASTROPHIC = "catastrophic"


class Likelihood(enum.Enum):
    FREQUENT = "frequent"
    PROBABLE = "probable"
    REMOTE = "remote"
    EXTREMELY_REMOTE = "extremely_remote"


class Tolerability(enum.Enum):
    ACCEPTABLE = "acceptable"
    TOLERABLE = "tolerable"
    UNACCEPTABLE = "unacceptable"


class EntityKind(enum.Enum):
    """Fine-grained entity kind; requirement classes are kinds of their own."""

    ACQUIRER = "acquirer"
    STAKEHOLDER = "stakeholder"
    TECHNICAL = "technical"
    SPECIFIED = "specified"
    LOGICAL = "logical"
    PHYSICAL = "physical"
    INTERFACE = "interface"
    TESTCASE = "testcase"
    RISK = "risk"

    @property
    def is_requirement(self) -> bool:
        return self in REQUIREMENT_KINDS

    @property
    def is_element(self) -> bool:
        return self in ELEMENT_KINDS


REQUIREMENT_KINDS = frozenset(
    {EntityKind.ACQUIRER, EntityKind.STAKEHOLDER, EntityKind.TECHNICAL, EntityKind.SPECIFIED}
)
ELEMENT_KINDS = frozenset({EntityKind.LOGICAL, EntityKind.PHYSICAL, EntityKind.INTERFACE})
# canonical ordering used by the printer and by reports
KIND_ORDER = {k: i for i, k in enumerate(EntityKind)}


class LinkKind(enum.Enum):
    DERIVE = "derive"
    REFINE = "refine"
    SATISFY = "satisfy"
    VERIFY = "verify"
    SPECIFY = "specify"
    ALLOCATE = "allocate"
    COVERS = "covers"
    # hierarchy edge synthesized from Requirement.parent; never a declared link
    PARENT = "parent"


DECLARABLE_LINK_KINDS = tuple(k for k in LinkKind if k is not LinkKind.PARENT)
LINK_ORDER = {k: i for i, k in enumerate(LinkKind)}


def _check_id(value: object, what: str = "id") -> None:
    if not isinstance(value, str) or not ID_PATTERN.match(value):
        raise InvariantViolation(f"{what} {value!r} is not a valid identifier", what)


def _check_line(value: str, attribute: str, *, required: bool) -> None:
    if not isinstance(value, str):
        raise InvariantViolation(f"{attribute} must be a string", attribute)
    if required and not value.strip():
        raise InvariantViolation(f"{attribute} must not be empty", attribute)
    if any(ch in value for ch in "\r\n") or any(ord(ch) < 0x20 and ch != "\t" for ch in value):
        raise InvariantViolation(f"{attribute} must be a single line without control characters", attribute)


def _check_positive(value: float | None, attribute: str) -> None:
    if value is None:
        return
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvariantViolation(f"{attribute} must be a number", attribute)
    if not math.isfinite(value) or value <= 0:
        raise InvariantViolation(f"{attribute} must be a positive finite number", attribute)


@dataclass(frozen=True)
class Requirement:
    id: str
    req_class: ReqClass
    text: str
    source: str | None = None
    safety: bool = False
    criticality: Criticality | None = None
    sil: int | None = None
    mtbf_hours: float | None = None
    mtbr_hours: float | None = None
    failure_rate_per_hour: float | None = None
    parent: str | None = None

    def __post_init__(self) -> None:
        _check_id(self.id)
        if not isinstance(self.req_class, ReqClass):
            raise InvariantViolation(f"unknown requirement class {self.req_class!r}", "class")
        _check_line(self.text, "text", required=True)
        if self.source is not None:
            _check_line(self.source, "source", required=False)
        if not isinstance(self.safety, bool):
            raise InvariantViolation("safety must be a boolean", "safety")
        if self.criticality is not None and not isinstance(self.criticality, Criticality):
            raise InvariantViolation(f"unknown criticality {self.criticality!r}", "criticality")
        if self.sil is not None and (
            isinstance(self.sil, bool) or not isinstance(self.sil, int) or not 1 <= self.sil <= 4
        ):
            raise InvariantViolation("sil must be an integer in [1, 4]", "sil")
        for name in ("mtbf_hours", "mtbr_hours", "failure_rate_per_hour"):
            _check_positive(getattr(self, name), name)
        if not self.safety:
            for name in ("sil", "mtbf_hours", "mtbr_hours", "failure_rate_per_hour"):
                if getattr(self, name) is not None:
                    raise InvariantViolation(
                        f"{name} is only allowed on a safety requirement (safety: true)", name
                    )
        elif self.criticality is None:
            raise InvariantViolation("a safety requirement must declare its criticality", "criticality")
        if self.parent is not None:
            _check_id(self.parent, "parent")
            if self.parent == self.id:
                raise InvariantViolation(f"requirement '{self.id}' cannot be its own parent", "parent")

    @property
    def kind(self) -> EntityKind:
        return self.req_class.kind


@dataclass(frozen=True)
class SolutionElement:
    id: str
    kind_of: ElementKind
    name: str
    connects: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        _check_id(self.id)
        if not isinstance(self.kind_of, ElementKind):
            raise InvariantViolation(f"unknown element kind {self.kind_of!r}", "kind")
        _check_line(self.name, "name", required=False)
        object.__setattr__(self, "connects", tuple(self.connects))
        for ref in self.connects:
            _check_id(ref, "connects")
        # arity and target kinds of an interface are checked by rule R9
        if self.connects and self.kind_of is not ElementKind.INTERFACE:
            raise InvariantViolation("only interface elements may declare connects", "connects")

    @property
    def kind(self) -> EntityKind:
        return self.kind_of.kind


@dataclass(frozen=True)
class TestCase:
    __test__ = False

    id: str
    method: TestMethod
    description: str | None = None

    def __post_init__(self) -> None:
        _check_id(self.id)
        if not isinstance(self.method, TestMethod):
            raise InvariantViolation(f"unknown test method {self.method!r}", "method")
        if self.description is not None:
            _check_line(self.description, "description", required=False)

    @property
    def kind(self) -> EntityKind:
        return EntityKind.TESTCASE


@dataclass(frozen=True)
class Risk:
    id: str
    description: str
    severity: RiskSeverity
    likelihood: Likelihood
    tolerability: Tolerability

    def __post_init__(self) -> None:
        _check_id(self.id)
        _check_line(self.description, "description", required=False)
        for name, cls in (
            ("severity", RiskSeverity),
            ("likelihood", Likelihood),
            ("tolerability", Tolerability),
        ):
            if not isinstance(getattr(self, name), cls):
                raise InvariantViolation(f"risk {name} must be a {cls.__name__}", name)

    @property
    def kind(self) -> EntityKind:
        return EntityKind.RISK


Entity = Union[Requirement, SolutionElement, TestCase, Risk]


@dataclass(frozen=True)
class Link:
    kind: LinkKind
    source: str
    target: str

    def __post_init__(self) -> None:
        if not isinstance(self.kind, LinkKind) or self.kind is LinkKind.PARENT:
            raise InvariantViolation(f"{self.kind!r} is not a declarable link kind", "kind")
        _check_id(self.source, "source")
        _check_id(self.target, "target")
        if self.source == self.target:
            raise InvariantViolation(f"link source and target are both '{self.source}'", "target")

    def sort_key(self) -> tuple[int, str, str]:
        return (LINK_ORDER[self.kind], self.source, self.target)

    def __str__(self) -> str:
        return f"{self.kind.value} {self.source} -> {self.target}"


# Legal (source kind, target kind) pairs per link kind. Covers additionally
# requires the source requirement to be a safety requirement.
_STAKEHOLDER_SIDE = (EntityKind.ACQUIRER, EntityKind.STAKEHOLDER, EntityKind.TECHNICAL)
LINK_CONSTRAINTS: dict[LinkKind, frozenset[tuple[EntityKind, EntityKind]]] = {
    LinkKind.DERIVE: frozenset(
        [(s, EntityKind.TECHNICAL) for s in _STAKEHOLDER_SIDE]
        + [(EntityKind.TECHNICAL, EntityKind.SPECIFIED)]
    ),
    LinkKind.REFINE: frozenset((k, k) for k in REQUIREMENT_KINDS),
    LinkKind.SATISFY: frozenset(
        {(EntityKind.LOGICAL, EntityKind.TECHNICAL), (EntityKind.PHYSICAL, EntityKind.TECHNICAL)}
    ),
    LinkKind.VERIFY: frozenset((EntityKind.TESTCASE, k) for k in REQUIREMENT_KINDS),
    LinkKind.SPECIFY: frozenset((EntityKind.SPECIFIED, k) for k in ELEMENT_KINDS),
    LinkKind.ALLOCATE: frozenset({(EntityKind.LOGICAL, EntityKind.PHYSICAL)}),
    LinkKind.COVERS: frozenset((k, EntityKind.RISK) for k in REQUIREMENT_KINDS),
}


def link_allowed(kind: LinkKind, source: Entity, target: Entity) -> bool:
    """True iff the link kind may join these two entities."""
    if (source.kind, target.kind) not in LINK_CONSTRAINTS.get(kind, frozenset()):
        return False
    if kind is LinkKind.COVERS:
        return isinstance(source, Requirement) and source.safety
    return True


@dataclass(frozen=True, eq=False)
class Model:
    """Resolved system description.

    Equality is structural: entity collections and links compare as sets and
    ``source_locations``/``suppressions`` are ignored.
    """

    requirements: tuple[Requirement, ...] = ()
    elements: tuple[SolutionElement, ...] = ()
    testcases: tuple[TestCase, ...] = ()
    risks: tuple[Risk, ...] = ()
    links: tuple[Link, ...] = ()
    # keys are entity ids or link indexes
    source_locations: Mapping[str | int, object] = field(default_factory=dict)
    suppressions: Mapping[str | int, frozenset[str]] = field(default_factory=dict)
    _index: dict[str, Entity] = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("requirements", "elements", "testcases", "risks", "links"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        index: dict[str, Entity] = {}
        for entity in self.entities():
            index.setdefault(entity.id, entity)
        object.__setattr__(self, "_index", index)

    def entities(self) -> Iterable[Entity]:
        yield from self.requirements
        yield from self.elements
        yield from self.testcases
        yield from self.risks

    def ids(self) -> list[str]:
        return sorted(self._index)

    def get(self, entity_id: str) -> Entity:
        try:
            return self._index[entity_id]
        except KeyError:
            raise UnknownReference(entity_id) from None

    def __contains__(self, entity_id: object) -> bool:
        return entity_id in self._index

    def __len__(self) -> int:
        return len(self._index)

    def _structure(self) -> tuple[frozenset, ...]:
        return (
            frozenset(self.requirements),
            frozenset(self.elements),
            frozenset(self.testcases),
            frozenset(self.risks),
            frozenset(self.links),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Model):
            return NotImplemented
        return self._structure() == other._structure()

    __hash__ = None  # type: ignore[assignment]

    def location(self, key: str | int):
        return self.source_locations.get(key)


def check_structure(
    requirements: Iterable[Requirement] = (),
    elements: Iterable[SolutionElement] = (),
    testcases: Iterable[TestCase] = (),
    risks: Iterable[Risk] = (),
    links: Iterable[Link] = (),
) -> list[ModelError]:
    """Return every structural problem in the inputs, in a deterministic order.

    Problems are returned, not raised; :func:`build_model` raises the first.
    """
    requirements, elements = list(requirements), list(elements)
    testcases, risks, links = list(testcases), list(risks), list(links)
    problems: list[ModelError] = []
    seen: dict[str, Entity] = {}
    for collection, items in (
        ("requirements", requirements),
        ("elements", elements),
        ("testcases", testcases),
        ("risks", risks),
    ):
        for i, entity in enumerate(items):
            if entity.id in seen:
                problems.append(DuplicateId(entity.id, (collection, i)))
            else:
                seen[entity.id] = entity

    for i, req in enumerate(requirements):
        if req.parent is None:
            continue
        if req.parent not in seen:
            problems.append(UnknownReference(req.parent, f"parent of {req.id}", ("requirements", i)))
        elif not isinstance(seen[req.parent], Requirement):
            problems.append(NotARequirement(req.parent, ("requirements", i)))

    for i, elem in enumerate(elements):
        for ref in elem.connects:
            if ref not in seen:
                problems.append(UnknownReference(ref, f"connects of {elem.id}", ("elements", i)))

    link_seen: set[Link] = set()
    for i, link in enumerate(links):
        for end in (link.source, link.target):
            if end not in seen:
                problems.append(UnknownReference(end, f"link {link}", ("links", i)))
        if link in link_seen:
            problems.append(DuplicateLink(link.kind.value, link.source, link.target, ("links", i)))
        link_seen.add(link)

    problems.extend(_parent_cycles(requirements, seen))
    return problems


def _parent_cycles(requirements: list[Requirement], seen: Mapping[str, Entity]) -> list[ModelError]:
    parent_of = {
        r.id: r.parent
        for r in requirements
        if r.parent is not None and isinstance(seen.get(r.parent), Requirement) and seen[r.id] is r
    }
    position = {r.id: i for i, r in enumerate(requirements) if seen.get(r.id) is r}
    problems: list[ModelError] = []
    reported: set[str] = set()
    for start in sorted(parent_of):
        chain: list[str] = []
        node: str | None = start
        on_chain: set[str] = set()
        while node is not None and node not in on_chain and node not in reported:
            on_chain.add(node)
            chain.append(node)
            node = parent_of.get(node)
        if node is not None and node in on_chain:
            cycle = chain[chain.index(node):]
            pivot = cycle.index(min(cycle))
            cycle = cycle[pivot:] + cycle[:pivot]
            reported.update(cycle)
            problems.append(CyclicParentChain(cycle + [cycle[0]], ("requirements", position[cycle[0]])))
        reported.update(chain)
    return problems


def build_model(
    requirements: Iterable[Requirement] = (),
    elements: Iterable[SolutionElement] = (),
    testcases: Iterable[TestCase] = (),
    risks: Iterable[Risk] = (),
    links: Iterable[Link] = (),
    *,
    source_locations: Mapping[str | int, object] | None = None,
    suppressions: Mapping[str | int, frozenset[str]] | None = None,
) -> Model:
    """Assemble a Model, raising the first structural :class:`ModelError` found."""
    parts = [tuple(requirements), tuple(elements), tuple(testcases), tuple(risks), tuple(links)]
    problems = check_structure(*parts)
    if problems:
        raise problems[0]
    return Model(
        *parts,
        source_locations=dict(source_locations or {}),
        suppressions=dict(suppressions or {}),
    )


def entity_kind(model: Model, entity_id: str) -> EntityKind:
    return model.get(entity_id).kind


def is_safety_requirement(model: Model, entity_id: str) -> bool:
    """False for anything that is not a requirement; unknown ids raise."""
    entity = model.get(entity_id)
    return isinstance(entity, Requirement) and entity.safety
