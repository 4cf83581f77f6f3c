"""Exception hierarchy shared by the model, the DSL front end and the engines."""

from __future__ import annotations


class TracekitError(Exception):
    """Base class for every error raised by tracekit."""


class ModelError(TracekitError):
    """A structural problem that prevents building a Model.

    ``site`` locates the offending input as ``(collection, index)``, e.g.
    ``("links", 3)``, so that callers holding source spans can point at the
    right declaration.
    """

    def __init__(self, message: str, site: tuple[str, int] | None = None):
        super().__init__(message)
        self.message = message
        self.site = site


class DuplicateId(ModelError):
    def __init__(self, entity_id: str, site: tuple[str, int] | None = None):
        super().__init__(f"duplicate id '{entity_id}'", site)
        self.entity_id = entity_id


class UnknownReference(ModelError):
    def __init__(self, entity_id: str, referenced_from: str = "", site: tuple[str, int] | None = None):
        where = f" (referenced from {referenced_from})" if referenced_from else ""
        super().__init__(f"unknown entity '{entity_id}'{where}", site)
        self.entity_id = entity_id
        self.referenced_from = referenced_from


class DuplicateLink(ModelError):
    def __init__(self, kind: str, source: str, target: str, site: tuple[str, int] | None = None):
        super().__init__(f"duplicate link {kind} {source} -> {target}", site)
        self.kind = kind
        self.source = source
        self.target = target


class CyclicParentChain(ModelError):
    def __init__(self, ids: list[str], site: tuple[str, int] | None = None):
        super().__init__("cyclic parent chain: " + " -> ".join(ids), site)
        self.ids = list(ids)


class NotARequirement(ModelError):
    def __init__(self, entity_id: str, site: tuple[str, int] | None = None):
        super().__init__(f"'{entity_id}' is not a requirement", site)
        self.entity_id = entity_id


class InvariantViolation(ModelError, ValueError):
    """An entity was constructed with field values breaking one of its invariants.

    ``attribute`` names the field at fault when there is a single culprit.
    """

    def __init__(self, message: str, attribute: str | None = None):
        super().__init__(message)
        self.attribute = attribute


class EmptyChangeSet(TracekitError):
    def __init__(self) -> None:
        super().__init__("change set is empty")


class DslError(TracekitError):
    """Raised by lex/parse/resolve; carries every diagnostic collected."""

    def __init__(self, diagnostics: list):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0].render() if self.diagnostics else "no diagnostics"
        more = f" (+{len(self.diagnostics) - 1} more)" if len(self.diagnostics) > 1 else ""
        super().__init__(first + more)
