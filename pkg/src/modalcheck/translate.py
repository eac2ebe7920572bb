"""Translations into clausal form and between Krom fragments.

``to_clausal`` turns an arbitrary formula into an equisatisfiable clausal
formula by structural renaming.  ``krom_to_krombox`` and ``krom_to_kromdia``
remove diamonds (resp. boxes) from the positive literals of a Krom formula,
introducing one fresh letter per rewrite.

Every result lists its fresh letters together with a *definition* for each:
a formula over the input letters whose truth value, copied into the fresh
letter at every world, turns a model of the input into a model of the output
on the same frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .formulas import (
    RESERVED_PREFIX, TOP_LIT, And, Box, BOTTOM_F, ClausalFormula, Clause, Dia,
    Formula, Modality, Not, Or, PositiveLiteral, Prop, Top, classify, letters_of,
)
from .kripke import KripkeModel, model_check
from .results import FragmentError


@dataclass
class TranslationResult:
    output: ClausalFormula
    fresh_letters: List[str]
    origin_map: Dict[int, object]
    definitions: Dict[str, Formula] = field(default_factory=dict)

    def extend_model(self, m: KripkeModel) -> KripkeModel:
        """Add the fresh letters to ``m`` according to their definitions."""
        val = {w: set(m.valuation[w]) for w in m.worlds}
        for letter, meaning in self.definitions.items():
            for w in m.worlds:
                if model_check(m, w, meaning):
                    val[w].add(letter)
        return m.with_valuation(val)


class _Fresh:
    """Per-call supply of letters ``_f0, _f1, ...`` avoiding ``taken``."""

    def __init__(self, taken: Set[str]):
        self.taken = set(taken)
        self.counter = 0
        self.issued: List[str] = []

    def __call__(self) -> str:
        while True:
            name = f"{RESERVED_PREFIX}{self.counter}"
            self.counter += 1
            if name not in self.taken:
                self.taken.add(name)
                self.issued.append(name)
                return name


# --------------------------------------------------------------------------
# Arbitrary formulas


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form; negations end up on letters or on Top."""
    if isinstance(f, Top):
        return BOTTOM_F if negate else f
    if isinstance(f, Prop):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    if isinstance(f, And):
        l, r = nnf(f.left, negate), nnf(f.right, negate)
        return Or(l, r) if negate else And(l, r)
    if isinstance(f, Or):
        l, r = nnf(f.left, negate), nnf(f.right, negate)
        return And(l, r) if negate else Or(l, r)
    if isinstance(f, Box):
        a = nnf(f.arg, negate)
        return Dia(a) if negate else Box(a)
    if isinstance(f, Dia):
        a = nnf(f.arg, negate)
        return Box(a) if negate else Dia(a)
    raise TypeError(f"not a formula: {f!r}")


def _chain(f: Formula) -> Tuple[Tuple[Modality, ...], Formula]:
    prefix = []
    while isinstance(f, (Box, Dia)):
        prefix.append(Modality.BOX if isinstance(f, Box) else Modality.DIA)
        f = f.arg
    return tuple(prefix), f


def _dual(prefix: Sequence[Modality]) -> Tuple[Modality, ...]:
    return tuple(Modality.DIA if m is Modality.BOX else Modality.BOX for m in prefix)


def _disjuncts(f: Formula) -> List[Formula]:
    if isinstance(f, Or):
        return _disjuncts(f.left) + _disjuncts(f.right)
    return [f]


class _Clausifier:
    def __init__(self, fresh: _Fresh):
        self.fresh = fresh
        self.clauses: List[Clause] = []
        self.origin: List[Formula] = []
        self.definitions: Dict[str, Formula] = {}

    def define(self, f: Formula, d: int, origin: Formula) -> None:
        """Emit clauses whose conjunction behaves like ``[]^d f`` (f in NNF)."""
        if isinstance(f, And):
            self.define(f.left, d, origin)
            self.define(f.right, d, origin)
            return
        parts = _disjuncts(f)
        conjunctive = [p for p in parts if isinstance(p, And)]
        if len(conjunctive) == 1 and all(self._literal(p) is not None for p in parts
                                          if p is not conjunctive[0]):
            # distribute a single conjunction over literal disjuncts
            rest = [p for p in parts if p is not conjunctive[0]]
            for side in (conjunctive[0].left, conjunctive[0].right):
                self.define(_join(rest + [side]), d, origin)
            return
        lits = [self._literal(p) for p in parts]
        if any(l is not None and l[0] and l[1].is_top for l in lits):
            return                         # tautological clause
        body: List[PositiveLiteral] = []
        head: List[PositiveLiteral] = []
        later = []
        for p, lit in zip(parts, lits):
            if lit is None:
                prefix, core = _chain(p)
                y = self.fresh()
                self.definitions[y] = core
                later.append((Or(Not(Prop(y)), core), d + len(prefix), p))
                lit = (True, PositiveLiteral(prefix, y))
            positive, l = lit
            if not positive and l.is_top:
                continue                   # bottom disjunct
            (head if positive else body).append(l)
        self.clauses.append(Clause(d, tuple(body) or (TOP_LIT,), tuple(head) or None))
        self.origin.append(origin)
        for item in later:
            self.define(*item)

    @staticmethod
    def _literal(p: Formula) -> Optional[Tuple[bool, PositiveLiteral]]:
        prefix, core = _chain(p)
        if isinstance(core, Top):
            return True, PositiveLiteral(prefix, None)
        if isinstance(core, Prop):
            return True, PositiveLiteral(prefix, core.name)
        if isinstance(core, Not) and isinstance(core.arg, (Top, Prop)):
            atom = core.arg.name if isinstance(core.arg, Prop) else None
            return False, PositiveLiteral(_dual(prefix), atom)
        return None


def _join(parts: Sequence[Formula]) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def to_clausal(f: Formula) -> TranslationResult:
    """Equisatisfiable clausal form by structural renaming.

    The formula is put in negation normal form and asserted at depth 0.
    Conjunctions split into separate clauses.  A disjunct that is a modal
    chain over a compound formula ``M1..Mk psi`` becomes the literal
    ``M1..Mk y`` for a fresh ``y`` with ``[]^(d+k) (y -> psi)``.  A single
    conjunction among literal disjuncts is distributed; further conjunctions
    are renamed the same way at depth d.  For example ``<>(p & q)`` gives
    ``T -> <>_f0``, ``[]^1 (_f0 -> p)`` and ``[]^1 (_f0 -> q)``.
    """
    fresh = _Fresh(set(letters_of(f)))
    cl = _Clausifier(fresh)
    cl.define(nnf(f), 0, f)
    return TranslationResult(ClausalFormula(cl.clauses), list(fresh.issued),
                             dict(enumerate(cl.origin)), cl.definitions)


# --------------------------------------------------------------------------
# Krom rewrites

Signed = Tuple[bool, PositiveLiteral]


def _disjunctive(c: Clause) -> List[Signed]:
    return [(False, l) for l in c.body if not l.is_top] + [(True, l) for l in (c.head or ())]


def _implicative(s: int, parts: Sequence[Signed]) -> Clause:
    body = tuple(l for pos, l in parts if not pos) or (TOP_LIT,)
    head = tuple(l for pos, l in parts if pos) or None
    return Clause(s, body, head)


def _negated(l: PositiveLiteral) -> Formula:
    return Not(l.to_formula())


def _krom_rewrite(f: ClausalFormula, target: Modality) -> TranslationResult:
    """Remove modality ``target`` from the positive literals of Krom ``f``."""
    if not classify(f).krom:
        raise FragmentError("Krom translation needs a Krom formula")
    other = Modality.BOX if target is Modality.DIA else Modality.DIA
    fresh = _Fresh(set(f.alphabet))
    definitions: Dict[str, Formula] = {}
    out: List[Clause] = []
    origin: Dict[int, object] = {}
    work: List[Tuple[int, List[Signed], int]] = [
        (c.prefix_depth, _disjunctive(c), i) for i, c in enumerate(f.clauses)]
    work.reverse()
    while work:
        s, parts, src = work.pop()
        hit = next((k for k, (_, l) in enumerate(parts) if target in l.prefix), None)
        if hit is None:
            origin[len(out)] = src
            out.append(_implicative(s, parts))
            continue
        positive, lit = parts[hit]
        j = lit.prefix.index(target)
        rest = parts[:hit] + parts[hit + 1:]
        mu = PositiveLiteral(lit.prefix[j + 1:], lit.atom)
        x = fresh()
        new: List[Tuple[int, List[Signed]]]
        if j > 0:
            # rename the residual M mu under the prefix pi = lit.prefix[:j]
            inner = PositiveLiteral(lit.prefix[j:], lit.atom)
            definitions[x] = inner.to_formula()
            renamed = PositiveLiteral(lit.prefix[:j], x)
            xl = PositiveLiteral((), x)
            if positive:
                defining = [(False, xl), (True, inner)]
            else:
                defining = [(False, inner), (True, xl)]
            new = [(s, rest[:hit] + [(positive, renamed)] + rest[hit:]), (s + j, defining)]
        else:
            # outermost M mu: M mu is equivalent to the dual of (other x) with x := ~mu
            definitions[x] = _negated(mu)
            ox = PositiveLiteral((other,), x)
            xl = PositiveLiteral((), x)
            if positive:
                first = [(False, ox)]
                second = [(True, xl), (True, mu)]
            else:
                first = [(True, ox)]
                second = [(False, xl), (False, mu)]
            new = [(s, rest[:hit] + first + rest[hit:]), (s + 1, second)]
        for item in reversed(new):
            work.append((item[0], item[1], src))
    return TranslationResult(ClausalFormula(out), list(fresh.issued), origin, definitions)


def krom_to_krombox(f: ClausalFormula) -> TranslationResult:
    """Rewrite a Krom formula into box-only Krom.

    Outermost diamonds: the disjunct ``<>mu`` becomes ``~[]x`` with
    ``[] (x | mu)``; ``~<>mu`` becomes ``[]x`` with ``[] (~x | ~mu)``.  A
    diamond under a box prefix ``pi`` is first renamed: ``pi <>mu`` becomes
    ``pi x`` with ``[]^j (x -> <>mu)`` (``<>mu -> x`` for a negative
    occurrence).  Clauses are rewritten until no diamond is left.
    """
    return _krom_rewrite(f, Modality.DIA)


def krom_to_kromdia(f: ClausalFormula) -> TranslationResult:
    """Rewrite a Krom formula into diamond-only Krom (the dual of ``krom_to_krombox``)."""
    return _krom_rewrite(f, Modality.BOX)


def modal_operator_count(f: ClausalFormula) -> int:
    return sum(l.depth for c in f.clauses for l in c.literals)
