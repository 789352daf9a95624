"""Tokenizer for the BDDL s-expression surface syntax."""

from __future__ import annotations

import re
from dataclasses import dataclass

from bddlkit.errors import BddlParseError

# Identifiers may contain dots (synset names), underscores, and digits.
# A leading '?' marks a variable or an inline constant reference; a
# leading ':' marks a section keyword.  Identifiers are lowercased on
# ingestion so the language is case-insensitive.
_WORD_RE = re.compile(r"[A-Za-z0-9_.?]+")
_INT_RE = re.compile(r"\d+")


@dataclass(frozen=True)
class Token:
    kind: str  # 'lparen' | 'rparen' | 'dash' | 'keyword' | 'word' | 'int' | 'eof'
    value: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    """Split source text into tokens, tracking 1-based line/column."""
    tokens: list[Token] = []
    line = 1
    col = 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "(":
            tokens.append(Token("lparen", "(", line, col))
            i += 1
            col += 1
            continue
        if ch == ")":
            tokens.append(Token("rparen", ")", line, col))
            i += 1
            col += 1
            continue
        if ch == "-":
            tokens.append(Token("dash", "-", line, col))
            i += 1
            col += 1
            continue
        if ch == ":":
            m = _WORD_RE.match(text, i + 1)
            if m is None:
                raise BddlParseError("expected a section name after ':'", line, col)
            tokens.append(Token("keyword", m.group(0).lower(), line, col))
            advance = 1 + len(m.group(0))
            i += advance
            col += advance
            continue
        m = _WORD_RE.match(text, i)
        if m is not None:
            word = m.group(0)
            kind = "int" if _INT_RE.fullmatch(word) else "word"
            tokens.append(Token(kind, word.lower(), line, col))
            i += len(word)
            col += len(word)
            continue
        raise BddlParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens
