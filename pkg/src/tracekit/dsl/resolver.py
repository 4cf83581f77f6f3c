"""Map a :class:`SyntaxTree` onto core-model entities and build the Model."""

from __future__ import annotations

import enum
from typing import Callable

from tracekit.dsl.lexer import ParseDiagnostic, Severity, SourceSpan
from tracekit.dsl.parser import Attribute, EntityDecl, LinkDecl, SyntaxTree
from tracekit.errors import (
    CyclicParentChain,
    DslError,
    DuplicateId,
    DuplicateLink,
    InvariantViolation,
    ModelError,
    NotARequirement,
    UnknownReference,
)
from tracekit.model import (
    Criticality,
    ElementKind,
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
    check_structure,
)

_MODEL_ERROR_CODES: list[tuple[type[ModelError], str]] = [
    (DuplicateId, "P030"),
    (UnknownReference, "P031"),
    (DuplicateLink, "P032"),
    (CyclicParentChain, "P033"),
    (NotARequirement, "P034"),
]


class _Mismatch(Exception):
    def __init__(self, attr: Attribute, expected: str):
        super().__init__(f"attribute '{attr.name}' expects {expected}, got {attr.value.kind} {attr.value.text}")
        self.attr = attr


def _string(attr: Attribute) -> str:
    if attr.value.kind != "string":
        raise _Mismatch(attr, "a string")
    return attr.value.value  # type: ignore[return-value]


def _bool(attr: Attribute) -> bool:
    if attr.value.kind != "bool":
        raise _Mismatch(attr, "a boolean (true or false)")
    return attr.value.value  # type: ignore[return-value]


def _integer(attr: Attribute) -> int:
    if attr.value.kind != "number" or not isinstance(attr.value.value, int):
        raise _Mismatch(attr, "an integer")
    return attr.value.value


def _real(attr: Attribute) -> float:
    if attr.value.kind != "number":
        raise _Mismatch(attr, "a number")
    return float(attr.value.value)  # type: ignore[arg-type]


def _ident(attr: Attribute) -> str:
    # entity ids may collide with keywords or booleans; the source text is the id
    if attr.value.kind not in ("name", "bool"):
        raise _Mismatch(attr, "an identifier")
    return attr.value.text


def _ident_list(attr: Attribute) -> tuple[str, ...]:
    if attr.value.kind != "list":
        raise _Mismatch(attr, "a list of identifiers [A, B]")
    return attr.value.value  # type: ignore[return-value]


def _enum(cls: type[enum.Enum]) -> Callable[[Attribute], enum.Enum]:
    names = {m.name.lower(): m for m in cls}

    def convert(attr: Attribute) -> enum.Enum:
        if attr.value.kind == "name" and attr.value.text.lower() in names:
            return names[attr.value.text.lower()]
        raise _Mismatch(attr, "one of " + ", ".join(names))

    return convert


_CONVERTERS: dict[str, Callable[[Attribute], object]] = {
    "text": _string,
    "source": _string,
    "safety": _bool,
    "criticality": _enum(Criticality),
    "sil": _integer,
    "mtbf_hours": _real,
    "mtbr_hours": _real,
    "failure_rate_per_hour": _real,
    "parent": _ident,
    "name": _string,
    "connects": _ident_list,
    "method": _enum(TestMethod),
    "description": _string,
    "severity": _enum(RiskSeverity),
    "likelihood": _enum(Likelihood),
    "tolerability": _enum(Tolerability),
}


def _entity(decl: EntityDecl, values: dict[str, object]):
    if decl.keyword == "requirement":
        return Requirement(id=decl.id, req_class=ReqClass(decl.category), **values)
    if decl.keyword == "element":
        return SolutionElement(id=decl.id, kind_of=ElementKind(decl.category), **values)
    if decl.keyword == "testcase":
        return TestCase(id=decl.id, **values)
    return Risk(id=decl.id, **values)


def resolve(tree: SyntaxTree) -> Model:
    """Build a Model from ``tree``; raise :class:`DslError` with every problem found."""
    diags: list[ParseDiagnostic] = []

    def error(code: str, message: str, span: SourceSpan) -> None:
        diags.append(ParseDiagnostic(Severity.ERROR, message, span, code))

    buckets: dict[str, list] = {"requirements": [], "elements": [], "testcases": [], "risks": []}
    bucket_decls: dict[str, list[EntityDecl]] = {k: [] for k in buckets}
    links: list[Link] = []
    link_decls: list[LinkDecl] = []
    broken: set[str] = set()

    for decl in tree.declarations:
        if isinstance(decl, LinkDecl):
            try:
                link = Link(LinkKind(decl.kind), decl.source, decl.target)
            except InvariantViolation as exc:
                error("P021", exc.message, decl.span)
                continue
            links.append(link)
            link_decls.append(decl)
            continue

        values: dict[str, object] = {}
        failed = False
        for attr in decl.attributes:
            try:
                values[attr.name] = _CONVERTERS[attr.name](attr)
            except _Mismatch as exc:
                error("P020", str(exc), exc.attr.value.span)
                failed = True
        if failed:
            broken.add(decl.id)
            continue
        try:
            entity = _entity(decl, values)
        except InvariantViolation as exc:
            attr = decl.attribute(exc.attribute) if exc.attribute else None
            error("P021", f"{decl.keyword} {decl.id}: {exc.message}", attr.span if attr else decl.span)
            broken.add(decl.id)
            continue
        bucket = {
            "requirement": "requirements",
            "element": "elements",
            "testcase": "testcases",
            "risk": "risks",
        }[decl.keyword]
        buckets[bucket].append(entity)
        bucket_decls[bucket].append(decl)

    parts = (buckets["requirements"], buckets["elements"], buckets["testcases"], buckets["risks"], links)
    for problem in check_structure(*parts):
        if isinstance(problem, UnknownReference) and problem.entity_id in broken:
            continue  # already reported where that entity was declared
        code = next(c for cls, c in _MODEL_ERROR_CODES if isinstance(problem, cls))
        collection, index = problem.site  # type: ignore[misc]
        if collection == "links":
            ldecl = link_decls[index]
            span = ldecl.span
            if isinstance(problem, UnknownReference):
                span = ldecl.source_span if problem.entity_id == ldecl.source else ldecl.target_span
        else:
            span = bucket_decls[collection][index].span
        error(code, problem.message, span)

    if diags:
        raise DslError(diags)

    locations: dict[str | int, SourceSpan] = {}
    suppressions: dict[str | int, frozenset[str]] = {}
    for decls in bucket_decls.values():
        for decl in decls:
            locations[decl.id] = decl.span
            if decl.allow:
                suppressions[decl.id] = decl.allow
    for i, ldecl in enumerate(link_decls):
        locations[i] = ldecl.span
        if ldecl.allow:
            suppressions[i] = ldecl.allow
    return build_model(*parts, source_locations=locations, suppressions=suppressions)
