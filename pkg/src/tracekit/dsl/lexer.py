"""Tokenizer for ``.sreq`` model files."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from tracekit.errors import DslError

KEYWORDS = frozenset(
    {
        "requirement", "element", "interface", "testcase", "risk", "link",
        "derive", "refine", "satisfy", "verify", "specify", "allocate", "covers",
        "acquirer", "stakeholder", "technical", "specified", "logical", "physical",
    }
)
DECL_KEYWORDS = frozenset({"requirement", "element", "testcase", "risk", "link"})

_PRAGMA = re.compile(r"//\s*tracekit:allow\(([^)]*)\)")


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int = 0

    def __post_init__(self) -> None:
        if self.line < 1 or self.column < 1 or self.length < 0:
            raise ValueError(f"invalid span {self!r}")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: Severity
    message: str
    span: SourceSpan
    code: str

    def __post_init__(self) -> None:
        if not self.message:
            raise ValueError("diagnostic message must not be empty")
        if not re.fullmatch(r"P[0-9]{3}", self.code):
            raise ValueError(f"bad diagnostic code {self.code!r}")

    def render(self) -> str:
        return f"{self.span}: {self.severity.value}[{self.code}]: {self.message}"


class TokenType(enum.Enum):
    KEYWORD = "keyword"
    IDENT = "identifier"
    STRING = "string"
    NUMBER = "number"
    BOOL = "boolean"
    LBRACE = "{"
    RBRACE = "}"
    COLON = ":"
    COMMA = ","
    ARROW = "->"
    LBRACKET = "["
    RBRACKET = "]"
    PRAGMA = "pragma"
    EOF = "end of file"


_PUNCT = {
    "{": TokenType.LBRACE,
    "}": TokenType.RBRACE,
    ":": TokenType.COLON,
    ",": TokenType.COMMA,
    "[": TokenType.LBRACKET,
    "]": TokenType.RBRACKET,
}


@dataclass(frozen=True)
class Token:
    type: TokenType
    text: str
    span: SourceSpan
    # decoded payload: str for strings/pragmas, float|int for numbers, bool for booleans
    value: object = None

    def describe(self) -> str:
        if self.type in (TokenType.KEYWORD, TokenType.IDENT):
            return f"'{self.text}'"
        if self.type is TokenType.EOF:
            return "end of file"
        if self.type in (TokenType.STRING, TokenType.NUMBER, TokenType.BOOL):
            return f"{self.type.value} {self.text}"
        return f"'{self.type.value}'"


def _is_word_start(ch: str) -> bool:
    return ("A" <= ch <= "Z") or ("a" <= ch <= "z")


def _is_word_char(ch: str) -> bool:
    return _is_word_start(ch) or ("0" <= ch <= "9") or ch == "_"


def tokenize(text: str, file: str = "<input>") -> tuple[list[Token], list[ParseDiagnostic]]:
    """Scan ``text`` into tokens, collecting diagnostics instead of stopping.

    Invalid characters are skipped; an unterminated string ends at the end of
    its line. The token list always ends with an EOF token.
    """
    text = text.replace("\r\n", "\n")
    tokens: list[Token] = []
    diags: list[ParseDiagnostic] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def error(code: str, message: str, l: int, c: int, length: int) -> None:
        diags.append(ParseDiagnostic(Severity.ERROR, message, SourceSpan(file, l, c, length), code))

    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        start_col = col

        if text.startswith("//", i):
            end = text.find("\n", i)
            end = n if end == -1 else end
            comment = text[i:end]
            m = _PRAGMA.match(comment)
            if m:
                rules = tuple(r.strip() for r in m.group(1).split(",") if r.strip())
                tokens.append(Token(TokenType.PRAGMA, comment, SourceSpan(file, line, start_col, len(comment)), rules))
            col += end - i
            i = end
            continue

        if _is_word_start(ch):
            j = i + 1
            while j < n and (_is_word_char(text[j]) or (text[j] == "-" and not text.startswith("->", j))):
                j += 1
            word = text[i:j]
            span = SourceSpan(file, line, start_col, j - i)
            if word in ("true", "false"):
                tokens.append(Token(TokenType.BOOL, word, span, word == "true"))
            elif word in KEYWORDS:
                tokens.append(Token(TokenType.KEYWORD, word, span, word))
            else:
                tokens.append(Token(TokenType.IDENT, word, span, word))
            col += j - i
            i = j
            continue

        if ch.isdigit() and ch.isascii():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            malformed = False
            if j < n and text[j] == ".":
                j += 1
                frac_start = j
                while j < n and text[j].isascii() and text[j].isdigit():
                    j += 1
                if j == frac_start:
                    malformed = True
            # trailing letters, digits or a second dot glue onto the literal
            while j < n and (_is_word_char(text[j]) or text[j] == "."):
                malformed = True
                j += 1
            literal = text[i:j]
            span = SourceSpan(file, line, start_col, j - i)
            if malformed:
                error("P003", f"malformed number '{literal}'", line, start_col, j - i)
            else:
                value: object = float(literal) if "." in literal else int(literal)
                tokens.append(Token(TokenType.NUMBER, literal, span, value))
            col += j - i
            i = j
            continue

        if ch == '"':
            j = i + 1
            chars: list[str] = []
            closed = False
            while j < n and text[j] != "\n":
                c = text[j]
                if c == "\\" and j + 1 < n and text[j + 1] in '"\\':
                    chars.append(text[j + 1])
                    j += 2
                    continue
                if c == '"':
                    closed = True
                    j += 1
                    break
                chars.append(c)
                j += 1
            if closed:
                tokens.append(Token(TokenType.STRING, text[i:j], SourceSpan(file, line, start_col, j - i), "".join(chars)))
            else:
                error("P002", "unterminated string literal", line, start_col, j - i)
            col += j - i
            i = j
            continue

        if text.startswith("->", i):
            tokens.append(Token(TokenType.ARROW, "->", SourceSpan(file, line, start_col, 2)))
            i, col = i + 2, col + 2
            continue

        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, SourceSpan(file, line, start_col, 1)))
            i, col = i + 1, col + 1
            continue

        error("P001", f"invalid character {ch!r}", line, start_col, 1)
        i, col = i + 1, col + 1

    tokens.append(Token(TokenType.EOF, "", SourceSpan(file, line, col, 0)))
    return tokens, diags


def lex(text: str, file: str = "<input>") -> list[Token]:
    """Tokenize ``text``; raise :class:`DslError` if any lexical error occurred."""
    tokens, diags = tokenize(text, file)
    if diags:
        raise DslError(diags)
    return tokens
