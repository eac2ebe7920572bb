"""Syntax of modal formulas and of their clausal form.

Two layers live here.  ``Formula`` is the plain abstract syntax of modal
logic over ``Top``, letters, negation, disjunction, conjunction, diamond and
box.  The clausal layer (``PositiveLiteral``, ``Clause``, ``ClausalFormula``)
is what the decision procedures consume: a conjunction of boxed implications
whose bodies and heads are chains of modalities over an atom.

Concrete syntax (ASCII)::

    atoms     [a-z][a-zA-Z0-9_]*      T  (top)   F  (bottom)
    unary     ~  []  <>  []^k  <>^k   (prefix, bind tightest)
    binary    &  then  |  then  ->    (-> is right-associative, lowest)

A clausal file holds one clause per line, for example ``[]^1 (p & []q -> r)``.
Lines may also be written as a disjunction of signed literals (``~p | q``) or
as a single literal (``[]p``, ``~q``).  ``#`` starts a comment.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

__all__ = [
    "Formula", "Top", "Prop", "Not", "Or", "And", "Dia", "Box", "BOTTOM_F",
    "Modality", "PositiveLiteral", "Clause", "ClausalFormula",
    "FragmentDescriptor", "Logic", "ParseError", "parse", "parse_clausal",
    "parse_literal", "modal_depth", "closure", "classify", "to_text",
    "letters_of", "subformulas", "conj", "disj", "boxes", "TOP_LIT",
    "RESERVED_PREFIX",
]

RESERVED_PREFIX = "_f"


class Logic(enum.Enum):
    """The four frame classes: all, reflexive, transitive, preorders."""

    K = "K"
    T = "T"
    K4 = "K4"
    S4 = "S4"

    @property
    def reflexive(self) -> bool:
        return self in (Logic.T, Logic.S4)

    @property
    def transitive(self) -> bool:
        return self in (Logic.K4, Logic.S4)

    @classmethod
    def from_name(cls, name: str) -> "Logic":
        try:
            return cls(name.upper())
        except ValueError:
            raise ValueError(f"unknown logic {name!r}; expected one of k, t, k4, s4") from None

    def __str__(self) -> str:
        return self.value


# --------------------------------------------------------------------------
# Formula AST


class Formula:
    """Base class of the formula AST.  Instances are immutable and hashable."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self) -> str:
        return "Top()"


@dataclass(frozen=True, repr=False)
class Prop(Formula):
    name: str

    def __repr__(self) -> str:
        return f"Prop({self.name!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self) -> str:
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self) -> str:
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Dia(Formula):
    arg: Formula

    def __repr__(self) -> str:
        return f"Dia({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Box(Formula):
    arg: Formula

    def __repr__(self) -> str:
        return f"Box({self.arg!r})"


BOTTOM_F = Not(Top())


def conj(parts: Sequence[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is Top."""
    if not parts:
        return Top()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Sequence[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is bottom."""
    if not parts:
        return BOTTOM_F
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def boxes(k: int, f: Formula) -> Formula:
    for _ in range(k):
        f = Box(f)
    return f


def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield every node of ``f`` (with repetitions), children first."""
    stack: List[Tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        if isinstance(node, (Not, Dia, Box)):
            stack.append((node.arg, False))
        elif isinstance(node, (Or, And)):
            stack.append((node.right, False))
            stack.append((node.left, False))


def letters_of(f: Formula) -> frozenset:
    return frozenset(n.name for n in subformulas(f) if isinstance(n, Prop))


# --------------------------------------------------------------------------
# Clausal layer


class Modality(enum.Enum):
    BOX = "[]"
    DIA = "<>"

    def __repr__(self) -> str:
        return f"Modality.{self.name}"


@dataclass(frozen=True)
class PositiveLiteral:
    """A chain of modalities over ``T`` (atom None) or a letter."""

    prefix: Tuple[Modality, ...] = ()
    atom: Optional[str] = None

    @property
    def depth(self) -> int:
        return len(self.prefix)

    @property
    def is_top(self) -> bool:
        return not self.prefix and self.atom is None

    @property
    def is_letter(self) -> bool:
        return not self.prefix and self.atom is not None

    @property
    def outer(self) -> Optional[Modality]:
        return self.prefix[0] if self.prefix else None

    def inner(self) -> "PositiveLiteral":
        """Drop the outermost modality."""
        if not self.prefix:
            raise ValueError("literal has no modality to strip")
        return PositiveLiteral(self.prefix[1:], self.atom)

    def under(self, m: Modality) -> "PositiveLiteral":
        return PositiveLiteral((m,) + self.prefix, self.atom)

    def suffixes(self) -> Iterator["PositiveLiteral"]:
        """The literal and every literal obtained by stripping outer modalities."""
        for i in range(len(self.prefix) + 1):
            yield PositiveLiteral(self.prefix[i:], self.atom)

    def to_formula(self) -> Formula:
        f: Formula = Top() if self.atom is None else Prop(self.atom)
        for m in reversed(self.prefix):
            f = Box(f) if m is Modality.BOX else Dia(f)
        return f

    def __str__(self) -> str:
        return "".join(m.value for m in self.prefix) + ("T" if self.atom is None else self.atom)


TOP_LIT = PositiveLiteral()


@dataclass(frozen=True)
class Clause:
    """``[]^s (body_1 & ... & body_n -> head_1 | ... | head_m)``.

    ``head`` is None for bottom (m = 0).  An empty body is never stored; the
    top literal stands in for it.
    """

    prefix_depth: int
    body: Tuple[PositiveLiteral, ...]
    head: Optional[Tuple[PositiveLiteral, ...]]

    def __post_init__(self):
        if self.prefix_depth < 0:
            raise ValueError("negative clause prefix")
        if not self.body:
            raise ValueError("clause body must be nonempty (use the top literal)")
        if self.head is not None and not self.head:
            raise ValueError("clause head must be None (bottom) or nonempty")

    @property
    def n(self) -> int:
        """Number of body literals, not counting a bare top."""
        return sum(1 for b in self.body if not b.is_top)

    @property
    def m(self) -> int:
        return 0 if self.head is None else len(self.head)

    @property
    def literals(self) -> Tuple[PositiveLiteral, ...]:
        return self.body + (self.head or ())

    @property
    def depth(self) -> int:
        return self.prefix_depth + max(l.depth for l in self.literals)

    def unboxed(self) -> "Clause":
        return Clause(self.prefix_depth - 1, self.body, self.head)

    def boxed(self) -> "Clause":
        return Clause(self.prefix_depth + 1, self.body, self.head)

    def implication(self) -> Formula:
        """The clause without its prefix, as ``Or(Not(body), head)``."""
        head = BOTTOM_F if self.head is None else disj([l.to_formula() for l in self.head])
        return Or(Not(conj([l.to_formula() for l in self.body])), head)

    def to_formula(self) -> Formula:
        return boxes(self.prefix_depth, self.implication())

    def __str__(self) -> str:
        body = " & ".join(str(l) for l in self.body)
        head = "F" if self.head is None else " | ".join(str(l) for l in self.head)
        text = f"{body} -> {head}"
        if self.prefix_depth:
            text = f"[]^{self.prefix_depth} ({text})"
        return text


@dataclass(frozen=True)
class ClausalFormula:
    clauses: Tuple[Clause, ...]

    def __init__(self, clauses: Iterable[Clause] = ()):
        object.__setattr__(self, "clauses", tuple(clauses))

    @cached_property
    def alphabet(self) -> frozenset:
        return frozenset(l.atom for c in self.clauses for l in c.literals if l.atom is not None)

    @cached_property
    def length(self) -> int:
        """|f|: weighted token count of the canonical print (see ``_symbol_count``)."""
        if not self.clauses:
            return 0
        return sum(_symbol_count(str(c)) for c in self.clauses) + len(self.clauses) - 1

    @cached_property
    def depth(self) -> int:
        return max((c.depth for c in self.clauses), default=0)

    def to_formula(self) -> Formula:
        return conj([c.to_formula() for c in self.clauses])

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.clauses)


@dataclass(frozen=True)
class FragmentDescriptor:
    horn: bool
    krom: bool
    core: bool
    box_only: bool
    dia_only: bool

    def flags(self) -> List[str]:
        names = ["horn", "krom", "core", "box_only", "dia_only"]
        return [n for n in names if getattr(self, n)]

    def __str__(self) -> str:
        return " ".join(f"{n}={'yes' if getattr(self, n) else 'no'}"
                        for n in ["horn", "krom", "core", "box_only", "dia_only"])


# --------------------------------------------------------------------------
# Lexer


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<box>\[\])|(?P<dia><>)|(?P<imp>->)|(?P<sym>[~&|()^])"
    r"|(?P<int>\d+)|(?P<top>T(?![A-Za-z0-9_]))|(?P<bot>F(?![A-Za-z0-9_]))"
    r"|(?P<atom>[a-z][a-zA-Z0-9_]*)|(?P<reserved>_f\d+(?![A-Za-z0-9_]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str, line_no: int = 1, allow_reserved: bool = False) -> List[_Tok]:
    toks: List[_Tok] = []
    line, col_base, pos = line_no, 0, 0
    while pos < len(text):
        ch = text[pos]
        if ch == "\n":
            line += 1
            pos += 1
            col_base = pos
            continue
        if ch == "#":
            while pos < len(text) and text[pos] != "\n":
                pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        col = pos - col_base + 1
        if not m:
            raise ParseError(f"unknown token {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "reserved":
            if not allow_reserved:
                raise ParseError(f"letter {m.group()!r} uses the reserved prefix "
                                 f"{RESERVED_PREFIX!r}", line, col)
            kind = "atom"
        if kind == "sym":
            kind = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), line, col))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - col_base + 1))
    return toks


class _Parser:
    def __init__(self, toks: List[_Tok]):
        self.toks = toks
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, message: str, tok: Optional[_Tok] = None) -> ParseError:
        tok = tok or self.cur
        return ParseError(message, tok.line, tok.col)

    def expect(self, kind: str, what: str) -> _Tok:
        if self.cur.kind != kind:
            found = "end of input" if self.cur.kind == "eof" else repr(self.cur.text)
            raise self.error(f"expected {what}, found {found}")
        return self.take()

    def repeat_count(self) -> int:
        if self.cur.kind != "^":
            return 1
        self.take()
        k = int(self.expect("int", "an exponent after '^'").text)
        if k < 1:
            raise self.error("modal exponent must be at least 1", self.toks[self.i - 1])
        return k

    # full formula grammar

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.cur.kind == "imp":
            self.take()
            return Or(Not(left), self.formula())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.cur.kind == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.cur.kind == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.cur
        if t.kind == "~":
            self.take()
            return Not(self.unary())
        if t.kind in ("box", "dia"):
            self.take()
            k = self.repeat_count()
            f = self.unary()
            for _ in range(k):
                f = Box(f) if t.kind == "box" else Dia(f)
            return f
        if t.kind == "top":
            self.take()
            return Top()
        if t.kind == "bot":
            self.take()
            return BOTTOM_F
        if t.kind == "atom":
            self.take()
            return Prop(t.text)
        if t.kind == "(":
            self.take()
            f = self.formula()
            if self.cur.kind != ")":
                raise self.error("unbalanced parenthesis", t)
            self.take()
            return f
        if t.kind == "eof":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected token {t.text!r}")

    # clause grammar

    def literal(self) -> PositiveLiteral:
        prefix: List[Modality] = []
        while self.cur.kind in ("box", "dia"):
            m = Modality.BOX if self.take().kind == "box" else Modality.DIA
            prefix.extend([m] * self.repeat_count())
        t = self.cur
        if t.kind == "top":
            self.take()
            return PositiveLiteral(tuple(prefix), None)
        if t.kind == "atom":
            self.take()
            return PositiveLiteral(tuple(prefix), t.text)
        if t.kind == "(":
            self.take()
            inner = self.literal()
            if self.cur.kind != ")":
                raise self.error("unbalanced parenthesis", t)
            self.take()
            return PositiveLiteral(tuple(prefix) + inner.prefix, inner.atom)
        if t.kind == "bot":
            raise self.error("F is not a positive literal here")
        if t.kind == "~":
            raise self.error("negative literal where a positive literal is required")
        raise self.error("expected a positive literal")

    def signed(self) -> Tuple[bool, Optional[PositiveLiteral]]:
        """A disjunct: (True, lit), (False, lit) for ~lit, or (False, None) for F."""
        if self.cur.kind == "~":
            self.take()
            return False, self.literal()
        if self.cur.kind == "bot":
            self.take()
            return False, None
        return True, self.literal()

    def clause_body(self, prefix: int) -> Clause:
        has_arrow = any(t.kind == "imp" for t in self.toks[self.i:])
        if has_arrow:
            body = [self.literal()]
            while self.cur.kind == "&":
                self.take()
                body.append(self.literal())
            if self.cur.kind == "|":
                raise self.error("disjunction is not allowed in a clause body")
            self.expect("imp", "'->'")
            if self.cur.kind == "bot":
                self.take()
                head: Optional[List[PositiveLiteral]] = None
            else:
                if self.cur.kind == "~":
                    raise self.error("negative literal in head position")
                head = [self.literal()]
                while self.cur.kind == "|":
                    self.take()
                    if self.cur.kind == "~":
                        raise self.error("negative literal in head position")
                    head.append(self.literal())
                if self.cur.kind == "&":
                    raise self.error("conjunction is not allowed in a clause head")
            return Clause(prefix, tuple(body), None if head is None else tuple(head))
        parts = [self.signed()]
        while self.cur.kind == "|":
            self.take()
            parts.append(self.signed())
        if self.cur.kind == "&":
            raise self.error("one clause per line: split conjunctions across lines")
        negs = tuple(l for pos, l in parts if not pos and l is not None)
        poss = tuple(l for pos, l in parts if pos)
        return Clause(prefix, negs or (TOP_LIT,), poss or None)

    def clause(self) -> Clause:
        start = self.i
        prefix = 0
        while self.cur.kind == "box":
            self.take()
            prefix += self.repeat_count()
        if self.cur.kind == "(" and self._closes_at_end(self.i):
            self.take()
            c = self.clause_body(prefix)
            self.expect(")", "')'")
        else:
            self.i = start
            c = self.clause_body(0)
        if self.cur.kind != "eof":
            raise self.error(f"unexpected token {self.cur.text!r}")
        return c

    def _closes_at_end(self, j: int) -> bool:
        depth = 0
        for k in range(j, len(self.toks)):
            kind = self.toks[k].kind
            if kind == "(":
                depth += 1
            elif kind == ")":
                depth -= 1
                if depth == 0:
                    return self.toks[k + 1].kind == "eof"
        return False


def parse(text: str, *, allow_reserved: bool = False) -> Formula:
    """Parse a modal formula.  Raises ``ParseError`` with line and column."""
    p = _Parser(_tokenize(text, allow_reserved=allow_reserved))
    if p.cur.kind == "eof":
        raise p.error("empty formula")
    f = p.formula()
    if p.cur.kind == ")":
        raise p.error("unbalanced parenthesis")
    if p.cur.kind != "eof":
        raise p.error(f"unexpected token {p.cur.text!r}")
    return f


def parse_literal(text: str, *, allow_reserved: bool = False) -> PositiveLiteral:
    p = _Parser(_tokenize(text, allow_reserved=allow_reserved))
    lit = p.literal()
    if p.cur.kind != "eof":
        raise p.error(f"unexpected token {p.cur.text!r}")
    return lit


def parse_clausal(text: str, *, allow_reserved: bool = False) -> ClausalFormula:
    """Parse one clause per non-blank, non-comment line."""
    clauses = []
    for no, raw in enumerate(text.splitlines(), start=1):
        toks = _tokenize(raw, no, allow_reserved=allow_reserved)
        if toks[0].kind == "eof":
            continue
        clauses.append(_Parser(toks).clause())
    return ClausalFormula(clauses)


# --------------------------------------------------------------------------
# Printing

_PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3


def _fmt(f: Formula, prec: int) -> str:
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Not):
        if isinstance(f.arg, Top):
            return "F"
        return "~" + _fmt(f.arg, _PREC_UNARY)
    if isinstance(f, Box):
        return "[]" + _fmt(f.arg, _PREC_UNARY)
    if isinstance(f, Dia):
        return "<>" + _fmt(f.arg, _PREC_UNARY)
    if isinstance(f, Or):
        text = f"{_fmt(f.left, _PREC_OR)} | {_fmt(f.right, _PREC_AND)}"
        return f"({text})" if prec > _PREC_OR else text
    if isinstance(f, And):
        text = f"{_fmt(f.left, _PREC_AND)} & {_fmt(f.right, _PREC_UNARY)}"
        return f"({text})" if prec > _PREC_AND else text
    raise TypeError(f"not a formula: {f!r}")


def to_text(f: Union[Formula, ClausalFormula, Clause, PositiveLiteral]) -> str:
    """Canonical text; parsing it back yields an equal value."""
    if isinstance(f, Formula):
        return _fmt(f, 0)
    return str(f)


def _symbol_count(line: str) -> int:
    # '[]^k' weighs k (it abbreviates k boxes); F weighs 2 (it abbreviates ~T).
    total = 0
    toks = _tokenize(line, allow_reserved=True)
    for i, t in enumerate(toks):
        if t.kind in ("eof", "^", "int"):
            continue
        if t.kind in ("box", "dia") and toks[i + 1].kind == "^":
            total += int(toks[i + 2].text)
        elif t.kind == "bot":
            total += 2
        else:
            total += 1
    return total


# --------------------------------------------------------------------------
# Measures and classification


def modal_depth(f: Union[Formula, ClausalFormula, Clause, PositiveLiteral]) -> int:
    if isinstance(f, (ClausalFormula, Clause, PositiveLiteral)):
        return f.depth
    depth = {}
    for node in subformulas(f):
        if isinstance(node, (Top, Prop)):
            depth[node] = 0
        elif isinstance(node, Not):
            depth[node] = depth[node.arg]
        elif isinstance(node, (Box, Dia)):
            depth[node] = depth[node.arg] + 1
        else:
            depth[node] = max(depth[node.left], depth[node.right])
    return depth[f]


def closure(f: ClausalFormula) -> set:
    """Cl(f), reading each clause as an implication with prefix boxes.

    The implication node ``Or(Not(body), head)`` stands for ``body -> head``,
    so the auxiliary ``Not(body)`` is not a member (bottom is, when used as a
    head).
    """
    out = set()
    for c in f.clauses:
        out.update(subformulas(c.to_formula()))
        out.discard(Not(conj([l.to_formula() for l in c.body])))
    if any(c.head is None for c in f.clauses):
        out.add(BOTTOM_F)
    chain = [c.to_formula() for c in f.clauses]
    for i in range(2, len(chain) + 1):
        out.add(conj(chain[:i]))
    return out


def classify(f: ClausalFormula) -> FragmentDescriptor:
    horn = all(c.m <= 1 for c in f.clauses)
    krom = all(c.n + c.m <= 2 for c in f.clauses)
    mods = {m for c in f.clauses for l in c.literals for m in l.prefix}
    return FragmentDescriptor(
        horn=horn,
        krom=krom,
        core=horn and krom,
        box_only=Modality.DIA not in mods,
        dia_only=Modality.BOX not in mods,
    )
