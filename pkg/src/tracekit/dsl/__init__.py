"""Textual modeling language: lexer, parser, resolver and canonical printer."""

from __future__ import annotations

from pathlib import Path

from tracekit.dsl.lexer import ParseDiagnostic, Severity, SourceSpan, Token, TokenType, lex, tokenize
from tracekit.dsl.parser import EntityDecl, LinkDecl, SyntaxTree, parse
from tracekit.dsl.printer import print_canonical
from tracekit.dsl.resolver import resolve
from tracekit.model import Model


def load_text(text: str, file: str = "<input>") -> Model:
    """lex -> parse -> resolve in one call."""
    return resolve(parse(lex(text, file)))


def load_file(path: str | Path) -> Model:
    path = Path(path)
    return load_text(path.read_text(encoding="utf-8"), str(path))


__all__ = [
    "EntityDecl",
    "LinkDecl",
    "ParseDiagnostic",
    "Severity",
    "SourceSpan",
    "SyntaxTree",
    "Token",
    "TokenType",
    "lex",
    "load_file",
    "load_text",
    "parse",
    "print_canonical",
    "resolve",
    "tokenize",
]
