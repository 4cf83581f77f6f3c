"""Canonical text form of a Model."""

from __future__ import annotations

from decimal import Decimal

from tracekit.model import KIND_ORDER, Model, Requirement, Risk, SolutionElement, TestCase


def _string(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _number(value: float) -> str:
    # positional notation only: the grammar has no exponent form
    return format(Decimal(repr(float(value))), "f")


def _requirement(req: Requirement) -> list[str]:
    attrs = [("text", _string(req.text))]
    if req.source is not None:
        attrs.append(("source", _string(req.source)))
    attrs.append(("safety", "true" if req.safety else "false"))
    if req.criticality is not None:
        attrs.append(("criticality", req.criticality.keyword))
    if req.sil is not None:
        attrs.append(("sil", str(req.sil)))
    for name in ("mtbf_hours", "mtbr_hours", "failure_rate_per_hour"):
        value = getattr(req, name)
        if value is not None:
            attrs.append((name, _number(value)))
    if req.parent is not None:
        attrs.append(("parent", req.parent))
    return _block(f"requirement {req.id} : {req.req_class.value}", attrs)


def _element(elem: SolutionElement) -> list[str]:
    attrs = [("name", _string(elem.name))]
    if elem.connects:
        attrs.append(("connects", "[" + ", ".join(elem.connects) + "]"))
    return _block(f"element {elem.id} : {elem.kind_of.value}", attrs)


def _testcase(tc: TestCase) -> list[str]:
    attrs = [("method", tc.method.value)]
    if tc.description is not None:
        attrs.append(("description", _string(tc.description)))
    return _block(f"testcase {tc.id}", attrs)


def _risk(risk: Risk) -> list[str]:
    attrs = [
        ("description", _string(risk.description)),
        ("severity", risk.severity.value),
        ("likelihood", risk.likelihood.value),
        ("tolerability", risk.tolerability.value),
    ]
    return _block(f"risk {risk.id}", attrs)


def _block(header: str, attrs: list[tuple[str, str]]) -> list[str]:
    return [header + " {"] + [f"  {name}: {value}" for name, value in attrs] + ["}"]


def print_canonical(model: Model) -> str:
    """Render ``model`` as DSL text with sorted entities, fixed attribute order and sorted links."""
    blocks: list[list[str]] = []
    for entity in sorted(model.entities(), key=lambda e: (KIND_ORDER[e.kind], e.id)):
        if isinstance(entity, Requirement):
            blocks.append(_requirement(entity))
        elif isinstance(entity, SolutionElement):
            blocks.append(_element(entity))
        elif isinstance(entity, TestCase):
            blocks.append(_testcase(entity))
        else:
            blocks.append(_risk(entity))
    links = sorted(model.links, key=lambda link: link.sort_key())
    if links:
        blocks.append([f"link {link.kind.value} {link.source} -> {link.target}" for link in links])
    if not blocks:
        return ""
    return "\n\n".join("\n".join(block) for block in blocks) + "\n"
