"""Recursive-descent parser producing a :class:`SyntaxTree`.

Grammar::

    model       := decl*
    decl        := req | elem | tc | risk | link
    req         := "requirement" ID ":" reqclass "{" attr* "}"
    reqclass    := "acquirer" | "stakeholder" | "technical" | "specified"
    elem        := "element" ID ":" ("logical"|"physical"|"interface") "{" attr* "}"
    tc          := "testcase" ID "{" attr* "}"
    risk        := "risk" ID "{" attr* "}"
    link        := "link" linkkind ID "->" ID
    linkkind    := "derive"|"refine"|"satisfy"|"verify"|"specify"|"allocate"|"covers"
    attr        := NAME ":" value
    value       := STRING | NUMBER | BOOL | NAME | "[" ID ("," ID)* "]"

On a syntax error the parser records a diagnostic and skips to the next
declaration keyword, so one run reports every broken declaration.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from tracekit.dsl.lexer import (
    DECL_KEYWORDS,
    ParseDiagnostic,
    Severity,
    SourceSpan,
    Token,
    TokenType,
)
from tracekit.errors import DslError

REQ_CLASSES = ("acquirer", "stakeholder", "technical", "specified")
ELEMENT_KINDS = ("logical", "physical", "interface")
LINK_KINDS = ("derive", "refine", "satisfy", "verify", "specify", "allocate", "covers")

# attribute vocabulary per declaration keyword: name -> required?
ATTRIBUTES: dict[str, dict[str, bool]] = {
    "requirement": {
        "text": True,
        "source": False,
        "safety": False,
        "criticality": False,
        "sil": False,
        "mtbf_hours": False,
        "mtbr_hours": False,
        "failure_rate_per_hour": False,
        "parent": False,
    },
    "element": {"name": True, "connects": False},
    "testcase": {"method": True, "description": False},
    "risk": {"description": True, "severity": True, "likelihood": True, "tolerability": True},
}

RULE_IDS = frozenset(f"R{i}" for i in range(1, 13))

_WORDS = (TokenType.IDENT, TokenType.KEYWORD, TokenType.BOOL)


@dataclass(frozen=True)
class Value:
    kind: str  # "string", "number", "bool", "name" or "list"
    value: object
    text: str
    span: SourceSpan


@dataclass(frozen=True)
class Attribute:
    name: str
    value: Value
    span: SourceSpan


@dataclass(frozen=True)
class EntityDecl:
    keyword: str
    id: str
    category: str | None
    attributes: tuple[Attribute, ...]
    span: SourceSpan
    allow: frozenset[str] = frozenset()

    def attribute(self, name: str) -> Attribute | None:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        return None


@dataclass(frozen=True)
class LinkDecl:
    kind: str
    source: str
    target: str
    span: SourceSpan
    source_span: SourceSpan
    target_span: SourceSpan
    allow: frozenset[str] = frozenset()


Declaration = EntityDecl | LinkDecl


@dataclass(frozen=True)
class SyntaxTree:
    declarations: tuple[Declaration, ...]
    file: str = "<input>"
    # warnings only; errors abort parsing with DslError
    diagnostics: tuple[ParseDiagnostic, ...] = field(default=())


class _Sync(Exception):
    """Unwinds to the top level after a syntax error has been recorded."""


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.pragmas = [t for t in tokens if t.type is TokenType.PRAGMA]
        self.tokens = [t for t in tokens if t.type is not TokenType.PRAGMA]
        if not self.tokens or self.tokens[-1].type is not TokenType.EOF:
            last = self.tokens[-1].span if self.tokens else SourceSpan("<input>", 1, 1)
            self.tokens.append(Token(TokenType.EOF, "", SourceSpan(last.file, last.line, last.column)))
        self.pos = 0
        self.diags: list[ParseDiagnostic] = []

    # token helpers

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type is not TokenType.EOF:
            self.pos += 1
        return tok

    def error(self, code: str, message: str, span: SourceSpan) -> None:
        self.diags.append(ParseDiagnostic(Severity.ERROR, message, span, code))

    def warn(self, code: str, message: str, span: SourceSpan) -> None:
        self.diags.append(ParseDiagnostic(Severity.WARNING, message, span, code))

    def unexpected(self, expected: str) -> _Sync:
        tok = self.peek()
        self.error("P010", f"expected {expected}, found {tok.describe()}", tok.span)
        return _Sync()

    def expect(self, ttype: TokenType, expected: str | None = None) -> Token:
        if self.peek().type is not ttype:
            raise self.unexpected(expected or f"'{ttype.value}'")
        return self.advance()

    def expect_word(self, expected: str) -> Token:
        if self.peek().type not in _WORDS:
            raise self.unexpected(expected)
        return self.advance()

    def expect_keyword(self, choices: tuple[str, ...], expected: str) -> Token:
        tok = self.peek()
        if tok.type is not TokenType.KEYWORD or tok.text not in choices:
            raise self.unexpected(expected)
        return self.advance()

    def synchronize(self, start: int) -> None:
        if self.pos == start:
            self.advance()
        while True:
            tok = self.peek()
            if tok.type is TokenType.EOF:
                return
            if tok.type is TokenType.KEYWORD and tok.text in DECL_KEYWORDS:
                return
            self.advance()

    # grammar

    def parse_model(self) -> list[Declaration]:
        decls: list[Declaration] = []
        while self.peek().type is not TokenType.EOF:
            start = self.pos
            try:
                decls.append(self.parse_decl())
            except _Sync:
                self.synchronize(start)
        return decls

    def parse_decl(self) -> Declaration:
        tok = self.peek()
        if tok.type is not TokenType.KEYWORD or tok.text not in DECL_KEYWORDS:
            raise self.unexpected("a declaration (requirement, element, testcase, risk or link)")
        if tok.text == "link":
            return self.parse_link()
        return self.parse_entity()

    def parse_link(self) -> LinkDecl:
        kw = self.advance()
        kind = self.expect_keyword(LINK_KINDS, "a link kind (" + ", ".join(LINK_KINDS) + ")")
        src = self.expect_word("a source identifier")
        self.expect(TokenType.ARROW, "'->'")
        dst = self.expect_word("a target identifier")
        return LinkDecl(kind.text, src.text, dst.text, kw.span, src.span, dst.span)

    def parse_entity(self) -> EntityDecl:
        kw = self.advance()
        ident = self.expect_word("an identifier")
        category = None
        if kw.text == "requirement":
            self.expect(TokenType.COLON, "':'")
            category = self.expect_keyword(REQ_CLASSES, "a requirement class (" + ", ".join(REQ_CLASSES) + ")").text
        elif kw.text == "element":
            self.expect(TokenType.COLON, "':'")
            category = self.expect_keyword(ELEMENT_KINDS, "an element kind (" + ", ".join(ELEMENT_KINDS) + ")").text
        self.expect(TokenType.LBRACE, "'{'")
        vocabulary = ATTRIBUTES[kw.text]
        attrs: list[Attribute] = []
        seen: set[str] = set()
        while self.peek().type is not TokenType.RBRACE:
            name_tok = self.peek()
            if name_tok.type is not TokenType.IDENT:
                raise self.unexpected("an attribute name or '}'")
            self.advance()
            self.expect(TokenType.COLON, "':'")
            value = self.parse_value()
            if name_tok.text not in vocabulary:
                self.error(
                    "P011",
                    f"unknown attribute '{name_tok.text}' for {kw.text} "
                    f"(allowed: {', '.join(vocabulary)})",
                    name_tok.span,
                )
            elif name_tok.text in seen:
                self.error("P013", f"attribute '{name_tok.text}' given twice", name_tok.span)
            else:
                seen.add(name_tok.text)
                attrs.append(Attribute(name_tok.text, value, name_tok.span))
        self.advance()
        for name, required in vocabulary.items():
            if required and name not in seen:
                self.error("P012", f"missing attribute '{name}' in {kw.text} {ident.text}", kw.span)
        return EntityDecl(kw.text, ident.text, category, tuple(attrs), kw.span)

    def parse_value(self) -> Value:
        tok = self.peek()
        if tok.type is TokenType.STRING:
            self.advance()
            return Value("string", tok.value, tok.text, tok.span)
        if tok.type is TokenType.NUMBER:
            self.advance()
            return Value("number", tok.value, tok.text, tok.span)
        if tok.type is TokenType.BOOL:
            self.advance()
            return Value("bool", tok.value, tok.text, tok.span)
        if tok.type in (TokenType.IDENT, TokenType.KEYWORD):
            self.advance()
            return Value("name", tok.text, tok.text, tok.span)
        if tok.type is TokenType.LBRACKET:
            self.advance()
            items = [self.expect_word("an identifier").text]
            while self.peek().type is TokenType.COMMA:
                self.advance()
                items.append(self.expect_word("an identifier").text)
            self.expect(TokenType.RBRACKET, "',' or ']'")
            return Value("list", tuple(items), "[" + ", ".join(items) + "]", tok.span)
        raise self.unexpected("a value (string, number, boolean, name or [list])")

    # suppression pragmas

    def attach_pragmas(self, decls: list[Declaration]) -> list[Declaration]:
        by_line: dict[int, int] = {}
        for i, decl in enumerate(decls):
            by_line.setdefault(decl.span.line, i)
        allow: dict[int, set[str]] = {}
        for pragma in self.pragmas:
            rules = set(pragma.value)  # type: ignore[arg-type]
            for rule in sorted(rules - RULE_IDS):
                self.warn("P040", f"unknown rule id '{rule}' in suppression", pragma.span)
            rules &= RULE_IDS
            target = by_line.get(pragma.span.line)
            if target is None:
                target = self._next_decl_after(decls, pragma.span)
            if target is None:
                self.warn("P041", "suppression comment is not attached to a declaration", pragma.span)
                continue
            allow.setdefault(target, set()).update(rules)
        out: list[Declaration] = []
        for i, decl in enumerate(decls):
            if i in allow:
                decl = _with_allow(decl, frozenset(allow[i]))
            out.append(decl)
        return out

    def _next_decl_after(self, decls: list[Declaration], span: SourceSpan) -> int | None:
        # an own-line pragma attaches to the declaration starting on the next line
        for i, decl in enumerate(decls):
            if decl.span.line == span.line + 1:
                return i
        return None


def _with_allow(decl: Declaration, allow: frozenset[str]) -> Declaration:
    return replace(decl, allow=allow)


def parse(tokens: list[Token]) -> SyntaxTree:
    """Parse a token stream; raise :class:`DslError` listing every error found."""
    parser = _Parser(tokens)
    decls = parser.parse_model()
    decls = parser.attach_pragmas(decls)
    file = parser.tokens[-1].span.file
    if any(d.severity is Severity.ERROR for d in parser.diags):
        raise DslError(parser.diags)
    return SyntaxTree(tuple(decls), file, tuple(parser.diags))
