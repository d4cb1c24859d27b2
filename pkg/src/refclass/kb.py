"""Knowledge-base text format: parsing, validation and canonical rendering.

One statement per line, ``#`` starts a comment::

    class H
    member m H
    subset (and H D) G
    stat (and H D K) V [0, 1]
    stat H V [0.3, 0.5]
    equiv t (member m V)

Decimals are read exactly (``0.3`` is ``3/10``); ``n/d`` is also accepted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from types import MappingProxyType
from typing import Mapping, Optional, Union

from refclass.core import (
    ClassTerm,
    Intersect,
    Interval,
    Prim,
    TermError,
    intersect,
    nests_in,
)


@dataclass(frozen=True, order=True)
class Diagnostic:
    line: int
    col: int
    kind: str
    message: str

    def __str__(self):
        return "%d:%d: %s: %s" % (self.line, self.col, self.kind, self.message)


class KBError(Exception):
    """Raised when a knowledge base fails to parse or validate."""

    def __init__(self, diagnostics):
        self.diagnostics = sorted(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class Membership:
    """The literal sentence ``x ∈ Z``."""

    individual: str
    term: ClassTerm

    def render(self) -> str:
        return "(member %s %s)" % (self.individual, render_term(self.term))


Sentence = Union[str, Membership]


# -- statements --------------------------------------------------------------

_POS = dict(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class ClassDecl:
    name: str
    pos: tuple[int, int] = field(**_POS)

    def render(self):
        return "class %s" % self.name


@dataclass(frozen=True)
class MemberStmt:
    individual: str
    term: ClassTerm
    pos: tuple[int, int] = field(**_POS)

    def render(self):
        return "member %s %s" % (self.individual, render_term(self.term))


@dataclass(frozen=True)
class SubsetStmt:
    sub: ClassTerm
    sup: ClassTerm
    pos: tuple[int, int] = field(**_POS)

    def render(self):
        return "subset %s %s" % (render_term(self.sub), render_term(self.sup))


@dataclass(frozen=True)
class StatStmt:
    ref: ClassTerm
    target: ClassTerm
    lo: Fraction
    hi: Fraction
    pos: tuple[int, int] = field(**_POS)

    def render(self):
        return "stat %s %s [%s, %s]" % (
            render_term(self.ref), render_term(self.target), self.lo, self.hi)


@dataclass(frozen=True)
class EquivStmt:
    name: str
    sentence: Sentence
    pos: tuple[int, int] = field(**_POS)

    def render(self):
        return "equiv %s %s" % (self.name, render_sentence(self.sentence))


Statement = Union[ClassDecl, MemberStmt, SubsetStmt, StatStmt, EquivStmt]


def render_term(t: ClassTerm) -> str:
    if isinstance(t, Prim):
        return t.name
    if isinstance(t, Intersect):
        return "(and %s)" % " ".join(t.parts)
    raise TermError("no surface syntax for %s" % t)


def render_sentence(s: Sentence) -> str:
    return s if isinstance(s, str) else s.render()


@dataclass(frozen=True)
class KBDocument:
    statements: tuple[Statement, ...]
    diagnostics: tuple[Diagnostic, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    def of_kind(self, kind) -> list:
        return [s for s in self.statements if isinstance(s, kind)]

    def render(self) -> str:
        return "".join(s.render() + "\n" for s in self.statements)


# -- lexer / parser ----------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+\s*/\s*\d+|\d*\.\d+|\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[()\[\],])
""", re.VERBOSE)


class _Syntax(Exception):
    def __init__(self, col, message, kind="syntax"):
        super().__init__(message)
        self.col = col
        self.kind = kind


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(line: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(line):
        m = _TOKEN_RE.match(line, pos)
        if m is None:
            raise _Syntax(pos + 1, "unexpected character %r" % line[pos], "lexical")
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            toks.append(_Tok("punct" if kind == "punct" else kind, text, pos + 1))
        pos = m.end()
    return toks


class _LineParser:
    def __init__(self, toks: list[_Tok], line_len: int):
        self.toks = toks
        self.i = 0
        self.end_col = line_len + 1
        # (name, col) of every class name referenced, for declaration checks
        self.class_refs: list[tuple[str, int]] = []

    def peek(self) -> Optional[_Tok]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def col(self) -> int:
        tok = self.peek()
        return tok.col if tok else self.end_col

    def next(self, kind=None, text=None, what=None) -> _Tok:
        tok = self.peek()
        if tok is None or (kind and tok.kind != kind) or (text and tok.text != text):
            found = "end of line" if tok is None else repr(tok.text)
            raise _Syntax(self.col(), "expected %s, found %s" % (what or text or kind, found))
        self.i += 1
        return tok

    def done(self):
        if self.peek() is not None:
            raise _Syntax(self.col(), "unexpected %r after statement" % self.peek().text)

    def ident(self, what="identifier") -> _Tok:
        return self.next("ident", what=what)

    def classterm(self) -> ClassTerm:
        tok = self.peek()
        if tok is not None and tok.text == "(":
            self.next(text="(")
            self.next("ident", "and", what="'and'")
            parts = [self.classterm()]
            while self.peek() is not None and self.peek().text != ")":
                parts.append(self.classterm())
            self.next(text=")")
            return intersect(*parts)
        name = self.ident("class term")
        self.class_refs.append((name.text, name.col))
        return Prim(name.text)

    def sentence(self) -> Sentence:
        tok = self.peek()
        if tok is not None and tok.text == "(":
            self.next(text="(")
            self.next("ident", "member", what="'member'")
            who = self.ident("individual").text
            term = self.classterm()
            self.next(text=")")
            return Membership(who, term)
        return self.ident("sentence").text

    def rational(self) -> tuple[Fraction, int]:
        tok = self.next("num", what="number")
        return Fraction(tok.text.replace(" ", "")), tok.col


def _parse_statement(toks, line_len, lineno):
    p = _LineParser(toks, line_len)
    head = p.ident("statement keyword")
    pos = (lineno, head.col)
    kw = head.text
    extra = []
    if kw == "class":
        stmt = ClassDecl(p.ident("class name").text, pos)
    elif kw == "member":
        who = p.ident("individual").text
        stmt = MemberStmt(who, p.classterm(), pos)
    elif kw == "subset":
        stmt = SubsetStmt(p.classterm(), p.classterm(), pos)
    elif kw == "stat":
        ref = p.classterm()
        target = p.classterm()
        p.next(text="[")
        lo, lo_col = p.rational()
        p.next(text=",")
        hi, _ = p.rational()
        p.next(text="]")
        if lo > hi:
            extra.append(Diagnostic(lineno, lo_col, "interval-order",
                                    "interval lower bound %s exceeds upper bound %s" % (lo, hi)))
        elif hi > 1:
            extra.append(Diagnostic(lineno, lo_col, "interval-range",
                                    "interval [%s, %s] is not inside [0, 1]" % (lo, hi)))
        stmt = StatStmt(ref, target, lo, hi, pos)
    elif kw == "equiv":
        name = p.ident("sentence name").text
        stmt = EquivStmt(name, p.sentence(), pos)
    else:
        raise _Syntax(head.col, "unknown statement %r" % kw)
    p.done()
    return stmt, p.class_refs, extra


def parse_kb(text: str, minimal: bool = False) -> KBDocument:
    """Parse and validate; problems are reported as diagnostics, not raised."""
    statements: list[Statement] = []
    diags: list[Diagnostic] = []
    refs: list[tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        try:
            toks = _tokenize(line)
            if not toks:
                continue
            stmt, class_refs, extra = _parse_statement(toks, len(line.rstrip()), lineno)
        except _Syntax as e:
            diags.append(Diagnostic(lineno, e.col, e.kind, str(e)))
            continue
        except TermError as e:
            diags.append(Diagnostic(lineno, 1, "syntax", str(e)))
            continue
        statements.append(stmt)
        refs.extend((name, lineno, col) for name, col in class_refs)
        diags.extend(extra)
    diags.extend(_validate(statements, refs, minimal))
    return KBDocument(tuple(statements), tuple(sorted(diags)))


def parse_sentence(text: str) -> Sentence:
    toks = _tokenize(text)
    p = _LineParser(toks, len(text))
    s = p.sentence()
    p.done()
    return s


def _validate(statements, refs, minimal):
    diags = []
    declared = {s.name for s in statements if isinstance(s, ClassDecl)}
    for name, line, col in refs:
        if name not in declared:
            diags.append(Diagnostic(line, col, "undeclared", "undeclared class %s" % name))

    seen: dict = {}
    for s in statements:
        if not isinstance(s, StatStmt) or s.lo > s.hi or s.hi > 1:
            continue
        key = (s.ref, s.target)
        if key in seen:
            other = seen[key]
            a, b = Interval(s.lo, s.hi), Interval(other.lo, other.hi)
            if not (nests_in(a, b) or nests_in(b, a)):
                diags.append(Diagnostic(
                    s.pos[0], s.pos[1], "duplicate-statistic",
                    "statistic for (%s, %s) conflicts with line %d: %s vs %s"
                    % (s.ref, s.target, other.pos[0], a, b)))
                continue
        seen.setdefault(key, s)

    if minimal:
        member_names: dict[str, set] = {}
        for s in statements:
            if isinstance(s, MemberStmt):
                member_names.setdefault(s.individual, set()).update(s.term.names())
        for s in statements:
            if isinstance(s, SubsetStmt):
                diags.append(Diagnostic(s.pos[0], s.pos[1], "minimal",
                                        "subset assertions are not allowed in minimal mode"))
            elif isinstance(s, StatStmt) and isinstance(s.ref, Intersect):
                if not any(s.ref.names() <= ns for ns in member_names.values()):
                    diags.append(Diagnostic(
                        s.pos[0], s.pos[1], "minimal",
                        "minimal mode: reference class %s is not an intersection of "
                        "some individual's membership classes" % s.ref))
    return diags


# -- the validated knowledge base -------------------------------------------


@dataclass(frozen=True)
class KnowledgeBase:
    classes: frozenset
    members: Mapping[str, tuple]
    subsets: tuple
    stats: Mapping[tuple, Interval]
    equivalences: tuple
    document: Optional[KBDocument] = field(default=None, compare=False, repr=False)

    @classmethod
    def from_document(cls, doc: KBDocument) -> "KnowledgeBase":
        if not doc.ok:
            raise KBError(doc.diagnostics)
        members: dict[str, list] = {}
        stats: dict = {}
        for s in doc.statements:
            if isinstance(s, MemberStmt):
                terms = members.setdefault(s.individual, [])
                if s.term not in terms:
                    terms.append(s.term)
            elif isinstance(s, StatStmt):
                iv = Interval(s.lo, s.hi)
                key = (s.ref, s.target)
                # nested duplicates collapse to the strongest
                if key not in stats or nests_in(iv, stats[key]):
                    stats[key] = iv
        return cls(
            classes=frozenset(s.name for s in doc.of_kind(ClassDecl)),
            members=MappingProxyType({k: tuple(v) for k, v in sorted(members.items())}),
            subsets=tuple(dict.fromkeys((s.sub, s.sup) for s in doc.of_kind(SubsetStmt))),
            stats=MappingProxyType(dict(sorted(
                stats.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key())))),
            equivalences=tuple((s.name, s.sentence) for s in doc.of_kind(EquivStmt)),
            document=doc,
        )

    @property
    def individuals(self) -> tuple[str, ...]:
        return tuple(self.members)

    def stat(self, ref: ClassTerm, target: ClassTerm) -> Optional[Interval]:
        return self.stats.get((ref, target))

    def targets(self) -> list[ClassTerm]:
        return sorted({z for _, z in self.stats}, key=ClassTerm.sort_key)

    def sentence_names(self) -> set[str]:
        names = set()
        for name, s in self.equivalences:
            names.add(name)
            if isinstance(s, str):
                names.add(s)
        return names


def load_kb(source: Union[str, Path], minimal: bool = False) -> KnowledgeBase:
    """Load from a path, or from KB text when given a string containing a newline."""
    if isinstance(source, Path) or "\n" not in source:
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    return KnowledgeBase.from_document(parse_kb(text, minimal=minimal))
