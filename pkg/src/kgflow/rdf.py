"""RDF substrate: terms, triples, in-memory graphs, and a Turtle subset.

The Turtle dialect understood here is deliberately small: prefix directives,
prefixed names, angle-bracket IRIs, labeled blank nodes, string literals with
the usual escapes, bare integer/decimal/boolean literals, explicit `^^`
datatypes, the `a` keyword, `;` and `,` lists, `.` terminators, and `#`
comments. No collections, no `[...]` property lists, no multiline literals.

Literals compare by lexical form: `"1"^^xsd:integer` and `"01"^^xsd:integer`
are different terms. Serialization is deterministic; equal graphs always
produce identical documents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import TurtleSyntaxError, UnknownPrefixError
from .namespaces import RDF_TYPE, XSD_BOOLEAN, XSD_DOUBLE, XSD_INTEGER, XSD_STRING

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_PN_PREFIX_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_\-]*$")
_PN_LOCAL_RE = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_\-]*$")
_INTEGER_RE = re.compile(r"^[+-]?[0-9]+$")
_DECIMAL_RE = re.compile(r"^[+-]?[0-9]+\.[0-9]+$")


@dataclass(frozen=True)
class Iri:
    """An absolute IRI."""

    value: str

    def __post_init__(self):
        if not _SCHEME_RE.match(self.value):
            raise ValueError(f"IRI is not absolute: {self.value!r}")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BlankNode:
    label: str

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True)
class Literal:
    """Lexical form plus datatype IRI. Equality is lexical, not value-based."""

    lexical: str
    datatype: str = XSD_STRING

    def __str__(self) -> str:
        return f'"{self.lexical}"^^<{self.datatype}>'


Term = Union[Iri, BlankNode, Literal]


def _term_key(t: Term) -> tuple:
    # Stable total order across the three variants, by their string forms.
    if isinstance(t, Iri):
        return (0, t.value, "")
    if isinstance(t, BlankNode):
        return (1, t.label, "")
    return (2, t.lexical, t.datatype)


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Iri
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise ValueError("literal cannot be a triple subject")
        if not isinstance(self.predicate, Iri):
            raise ValueError("predicate must be an IRI")


def _triple_key(t: Triple) -> tuple:
    return (_term_key(t.subject), _term_key(t.predicate), _term_key(t.object))


@dataclass(frozen=True)
class TriplePattern:
    """Triple with optional wildcards (None matches anything)."""

    subject: Optional[Term] = None
    predicate: Optional[Iri] = None
    object: Optional[Term] = None

    def matches(self, t: Triple) -> bool:
        return (
            (self.subject is None or self.subject == t.subject)
            and (self.predicate is None or self.predicate == t.predicate)
            and (self.object is None or self.object == t.object)
        )


class Graph:
    """A mutable set of triples plus prefix bindings.

    Mutation is expected to happen through a single writer (the builder);
    readers treat graphs as immutable values.
    """

    def __init__(self, triples=None, prefixes=None):
        self._triples: set[Triple] = set(triples or ())
        self.prefixes: dict[str, str] = dict(prefixes or {})

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(sorted(self._triples, key=_triple_key))

    def __eq__(self, other) -> bool:
        # Prefixes are presentation, not content.
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __hash__(self):
        raise TypeError("Graph is unhashable")

    @property
    def triples(self) -> frozenset[Triple]:
        return frozenset(self._triples)

    def bind(self, prefix: str, namespace: str) -> None:
        self.prefixes[prefix] = namespace

    def insert(self, t: Triple) -> "Graph":
        self._triples.add(t)
        return self

    def remove(self, t: Triple) -> "Graph":
        self._triples.discard(t)
        return self

    def update(self, triples) -> "Graph":
        self._triples.update(triples)
        return self

    def copy(self) -> "Graph":
        return Graph(self._triples, self.prefixes)

    def match(self, pattern: TriplePattern) -> list[Triple]:
        """All triples matching the pattern, in deterministic sorted order."""
        return sorted((t for t in self._triples if pattern.matches(t)), key=_triple_key)

    # Small conveniences used throughout the library.

    def objects(self, subject: Term, predicate: Iri) -> list[Term]:
        return [t.object for t in self.match(TriplePattern(subject, predicate, None))]

    def subjects(self, predicate: Iri, obj: Term) -> list[Term]:
        return [t.subject for t in self.match(TriplePattern(None, predicate, obj))]

    def value(self, subject: Term, predicate: Iri) -> Optional[Term]:
        found = self.objects(subject, predicate)
        return found[0] if found else None


# ---------------------------------------------------------------------------
# Serializer


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        else:
            out.append(ch)
    return "".join(out)


def _compress(iri: str, prefixes: dict[str, str]) -> Optional[str]:
    best = None
    for prefix, ns in prefixes.items():
        if iri.startswith(ns) and len(ns) > (len(prefixes[best]) if best else -1):
            local = iri[len(ns):]
            if local and _PN_LOCAL_RE.match(local) and _PN_PREFIX_RE.match(prefix):
                best = prefix
    if best is None:
        return None
    return f"{best}:{iri[len(prefixes[best]):]}"


def _render_term(t: Term, prefixes: dict[str, str]) -> str:
    if isinstance(t, Iri):
        short = _compress(t.value, prefixes)
        return short if short is not None else f"<{t.value}>"
    if isinstance(t, BlankNode):
        return f"_:{t.label}"
    # Bare forms keep their lexical representation exactly, so emitting them
    # is lossless whenever the lexical form matches the bare syntax.
    if t.datatype == XSD_INTEGER and _INTEGER_RE.match(t.lexical):
        return t.lexical
    if t.datatype == XSD_DOUBLE and _DECIMAL_RE.match(t.lexical):
        return t.lexical
    if t.datatype == XSD_BOOLEAN and t.lexical in ("true", "false"):
        return t.lexical
    if t.datatype == XSD_STRING:
        return f'"{_escape(t.lexical)}"'
    dt = _compress(t.datatype, prefixes)
    dt = dt if dt is not None else f"<{t.datatype}>"
    return f'"{_escape(t.lexical)}"^^{dt}'


def serialize_turtle(graph: Graph) -> str:
    """Deterministic Turtle: sorted prefix block, then one triple per line
    sorted by (subject, predicate, object) term order."""
    lines = [f"@prefix {p}: <{graph.prefixes[p]}> ." for p in sorted(graph.prefixes)]
    body = []
    for t in graph:
        s = _render_term(t.subject, graph.prefixes)
        p = "a" if t.predicate.value == RDF_TYPE else _render_term(t.predicate, graph.prefixes)
        o = _render_term(t.object, graph.prefixes)
        body.append(f"{s} {p} {o} .")
    if lines and body:
        lines.append("")
    lines.extend(body)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Parser


class _Token:
    __slots__ = ("kind", "value", "line", "col", "extra")

    def __init__(self, kind, value, line, col, extra=None):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col
        self.extra = extra


_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t", "b": "\b", "f": "\f"}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def _error(self, message: str):
        raise TurtleSyntaxError(message, self.line, self.col)

    def _skip_ws_and_comments(self):
        while self.pos < len(self.text):
            ch = self._peek()
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            else:
                return

    def _read_string(self, line, col) -> _Token:
        self._advance()  # opening quote
        out = []
        while True:
            if self.pos >= len(self.text):
                raise TurtleSyntaxError("unterminated string literal", line, col)
            ch = self._advance()
            if ch == '"':
                return _Token("STRING", "".join(out), line, col)
            if ch == "\n":
                raise TurtleSyntaxError("newline inside string literal", line, col)
            if ch == "\\":
                if self.pos >= len(self.text):
                    raise TurtleSyntaxError("dangling escape", line, col)
                esc = self._advance()
                if esc in _ESCAPES:
                    out.append(_ESCAPES[esc])
                elif esc == "u" or esc == "U":
                    width = 4 if esc == "u" else 8
                    hexdigits = self.text[self.pos:self.pos + width]
                    if len(hexdigits) < width or not all(c in "0123456789abcdefABCDEF" for c in hexdigits):
                        self._error(f"bad \\{esc} escape")
                    for _ in range(width):
                        self._advance()
                    out.append(chr(int(hexdigits, 16)))
                else:
                    self._error(f"unknown escape \\{esc}")
            else:
                out.append(ch)

    def tokens(self) -> Iterator["_Token"]:
        word_re = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
        while True:
            self._skip_ws_and_comments()
            line, col = self.line, self.col
            if self.pos >= len(self.text):
                yield _Token("EOF", "", line, col)
                return
            ch = self._peek()
            if ch == "<":
                self._advance()
                start = self.pos
                while self._peek() not in (">", "", "\n"):
                    self._advance()
                if self._peek() != ">":
                    raise TurtleSyntaxError("unterminated IRI", line, col)
                iri = self.text[start:self.pos]
                self._advance()
                yield _Token("IRIREF", iri, line, col)
            elif ch == '"':
                yield self._read_string(line, col)
            elif ch == ".":
                self._advance()
                yield _Token("DOT", ".", line, col)
            elif ch == ";":
                self._advance()
                yield _Token("SEMI", ";", line, col)
            elif ch == ",":
                self._advance()
                yield _Token("COMMA", ",", line, col)
            elif ch == "^":
                self._advance()
                if self._peek() != "^":
                    self._error("expected '^^'")
                self._advance()
                yield _Token("CARETS", "^^", line, col)
            elif ch == "@":
                self._advance()
                m = word_re.match(self.text, self.pos)
                if not m or m.group(0) != "prefix":
                    self._error("only @prefix directives are supported")
                for _ in range(len("prefix")):
                    self._advance()
                yield _Token("PREFIX", "@prefix", line, col)
            elif ch == "_" and self.text[self.pos:self.pos + 2] == "_:":
                self._advance()
                self._advance()
                m = word_re.match(self.text, self.pos)
                if not m:
                    self._error("bad blank node label")
                for _ in range(len(m.group(0))):
                    self._advance()
                yield _Token("BLANK", m.group(0), line, col)
            elif ch.isdigit() or (ch in "+-" and self.text[self.pos + 1:self.pos + 2].isdigit()):
                start = self.pos
                self._advance()
                while self._peek().isdigit():
                    self._advance()
                if self._peek() == "." and self.text[self.pos + 1:self.pos + 2].isdigit():
                    self._advance()
                    while self._peek().isdigit():
                        self._advance()
                    yield _Token("DECIMAL", self.text[start:self.pos], line, col)
                else:
                    yield _Token("INTEGER", self.text[start:self.pos], line, col)
            else:
                m = word_re.match(self.text, self.pos)
                if not m:
                    self._error(f"unexpected character {ch!r}")
                word = m.group(0)
                for _ in range(len(word)):
                    self._advance()
                if self._peek() == ":":
                    self._advance()
                    lm = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_\-]*").match(self.text, self.pos)
                    local = lm.group(0) if lm else ""
                    for _ in range(len(local)):
                        self._advance()
                    yield _Token("PNAME", word, line, col, extra=local)
                elif word == "a":
                    yield _Token("A", "a", line, col)
                elif word in ("true", "false"):
                    yield _Token("BOOLEAN", word, line, col)
                else:
                    self._error(f"unexpected token {word!r}")


class _Parser:
    def __init__(self, text: str):
        self._stream = _Lexer(text).tokens()
        self.tok = next(self._stream)
        self.graph = Graph()

    def _next(self):
        self.tok = next(self._stream)

    def _expect(self, kind: str) -> _Token:
        if self.tok.kind != kind:
            raise TurtleSyntaxError(
                f"expected {kind}, found {self.tok.kind} {self.tok.value!r}",
                self.tok.line, self.tok.col,
            )
        t = self.tok
        self._next()
        return t

    def _resolve(self, tok: _Token) -> Iri:
        ns = self.graph.prefixes.get(tok.value)
        if ns is None:
            raise UnknownPrefixError(tok.value, tok.line, tok.col)
        try:
            return Iri(ns + tok.extra)
        except ValueError as exc:
            raise TurtleSyntaxError(str(exc), tok.line, tok.col)

    def _subject(self) -> Term:
        tok = self.tok
        if tok.kind == "IRIREF":
            self._next()
            try:
                return Iri(tok.value)
            except ValueError as exc:
                raise TurtleSyntaxError(str(exc), tok.line, tok.col)
        if tok.kind == "PNAME":
            self._next()
            return self._resolve(tok)
        if tok.kind == "BLANK":
            self._next()
            return BlankNode(tok.value)
        raise TurtleSyntaxError(f"expected subject, found {tok.value!r}", tok.line, tok.col)

    def _predicate(self) -> Iri:
        tok = self.tok
        if tok.kind == "A":
            self._next()
            return Iri(RDF_TYPE)
        if tok.kind == "IRIREF":
            self._next()
            try:
                return Iri(tok.value)
            except ValueError as exc:
                raise TurtleSyntaxError(str(exc), tok.line, tok.col)
        if tok.kind == "PNAME":
            self._next()
            return self._resolve(tok)
        raise TurtleSyntaxError(f"expected predicate, found {tok.value!r}", tok.line, tok.col)

    def _object(self) -> Term:
        tok = self.tok
        if tok.kind in ("IRIREF", "PNAME", "BLANK"):
            return self._subject()
        if tok.kind == "STRING":
            self._next()
            if self.tok.kind == "CARETS":
                self._next()
                dt_tok = self.tok
                if dt_tok.kind == "IRIREF":
                    self._next()
                    return Literal(tok.value, dt_tok.value)
                if dt_tok.kind == "PNAME":
                    self._next()
                    return Literal(tok.value, self._resolve(dt_tok).value)
                raise TurtleSyntaxError("expected datatype after '^^'", dt_tok.line, dt_tok.col)
            return Literal(tok.value, XSD_STRING)
        if tok.kind == "INTEGER":
            self._next()
            return Literal(tok.value, XSD_INTEGER)
        if tok.kind == "DECIMAL":
            self._next()
            return Literal(tok.value, XSD_DOUBLE)
        if tok.kind == "BOOLEAN":
            self._next()
            return Literal(tok.value, XSD_BOOLEAN)
        raise TurtleSyntaxError(f"expected object, found {tok.value!r}", tok.line, tok.col)

    def _statement(self):
        if self.tok.kind == "PREFIX":
            self._next()
            name = self._expect("PNAME")
            if name.extra:
                raise TurtleSyntaxError("prefix declaration must end with ':'", name.line, name.col)
            iri = self._expect("IRIREF")
            self._expect("DOT")
            self.graph.bind(name.value, iri.value)
            return
        subject = self._subject()
        while True:
            predicate = self._predicate()
            while True:
                obj = self._object()
                self.graph.insert(Triple(subject, predicate, obj))
                if self.tok.kind == "COMMA":
                    self._next()
                    continue
                break
            if self.tok.kind == "SEMI":
                self._next()
                if self.tok.kind == "DOT":  # tolerate a trailing ';'
                    break
                continue
            break
        self._expect("DOT")

    def parse(self) -> Graph:
        while self.tok.kind != "EOF":
            self._statement()
        return self.graph


def parse_turtle(text: str) -> Graph:
    """Parse a Turtle subset document into a Graph.

    Raises:
        TurtleSyntaxError: on malformed input, with 1-based line/column.
        UnknownPrefixError: when a prefixed name has no matching @prefix.
    """
    return _Parser(text).parse()
