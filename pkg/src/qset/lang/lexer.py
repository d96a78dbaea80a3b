"""Tokenizer for the script language.

Spans are byte offsets into the UTF-8 encoding of the source, so the
lexer walks bytes: the language itself is pure ASCII and any byte
outside it is rejected at its exact offset.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import LexError

__all__ = ["Span", "Token", "tokenize", "KEYWORDS"]

KEYWORDS = frozenset({"kind", "matoms", "catom", "let", "check"})

_PUNCT = frozenset(b"{}(),^:=;<>")
_IDENT_START = frozenset(b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | frozenset(b"0123456789")
_DIGITS = frozenset(b"0123456789")
_WS = frozenset(b" \t\r\n")


@dataclass(frozen=True)
class Span:
    start: int
    end: int

    def line_col(self, source: str) -> tuple[int, int]:
        prefix = source.encode("utf-8")[: self.start]
        line = prefix.count(b"\n") + 1
        col = self.start - (prefix.rfind(b"\n") + 1) + 1
        return line, col


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "int" | "keyword" | "punct" | "string" | "eof"
    text: str
    span: Span


def tokenize(source: str) -> list[Token]:
    data = source.encode("utf-8")
    out: list[Token] = []
    i = 0
    n = len(data)
    while i < n:
        b = data[i]
        if b in _WS:
            i += 1
            continue
        if b == ord("#"):
            j = data.find(b"\n", i)
            i = n if j < 0 else j + 1
            continue
        if b in _IDENT_START:
            j = i + 1
            while j < n and data[j] in _IDENT_CONT:
                j += 1
            text = data[i:j].decode("ascii")
            out.append(Token("keyword" if text in KEYWORDS else "ident", text, Span(i, j)))
            i = j
            continue
        if b in _DIGITS:
            j = i + 1
            while j < n and data[j] in _DIGITS:
                j += 1
            out.append(Token("int", data[i:j].decode("ascii"), Span(i, j)))
            i = j
            continue
        if b == ord('"'):
            j = i + 1
            chunks = []
            while True:
                if j >= n or data[j] == ord("\n"):
                    raise LexError("unterminated string", span=Span(i, j))
                c = data[j]
                if c == ord('"'):
                    j += 1
                    break
                if c == ord("\\") and j + 1 < n and data[j + 1] in (ord('"'), ord("\\")):
                    chunks.append(data[j + 1 : j + 2])
                    j += 2
                    continue
                if c >= 0x80:
                    raise LexError("non-ASCII byte 0x%02x in string" % c, span=Span(j, j + 1))
                chunks.append(data[j : j + 1])
                j += 1
            out.append(Token("string", b"".join(chunks).decode("ascii"), Span(i, j)))
            i = j
            continue
        if b in _PUNCT:
            out.append(Token("punct", chr(b), Span(i, i + 1)))
            i += 1
            continue
        raise LexError("unexpected byte 0x%02x" % b, span=Span(i, i + 1))
    out.append(Token("eof", "", Span(n, n)))
    return out
