"""Seeded generators for formulas and models used by the test suites and the
``random`` CLI subcommand."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, List, Optional, Sequence, Tuple

from .formulas import (
    TOP_LIT, And, Box, ClausalFormula, Clause, Dia, Formula, Modality, Not, Or,
    PositiveLiteral, Prop, Top,
)
from .kripke import KripkeModel, close_relation, world_name
from .formulas import Logic

LETTERS = ("p", "q", "r", "s", "u", "v", "x", "y")


def random_literal(rng: random.Random, letters: Sequence[str], max_depth: int,
                   modalities: Sequence[Modality] = (Modality.BOX,),
                   top_prob: float = 0.1) -> PositiveLiteral:
    depth = min(max_depth, int(rng.expovariate(0.9))) if max_depth > 0 else 0
    prefix = tuple(rng.choice(modalities) for _ in range(depth))
    atom = None if rng.random() < top_prob else rng.choice(letters)
    return PositiveLiteral(prefix, atom)


def random_clause(rng: random.Random, letters: Sequence[str], max_depth: int,
                  modalities: Sequence[Modality] = (Modality.BOX,), max_body: int = 3,
                  max_head: int = 1, bottom_prob: float = 0.3) -> Clause:
    s = min(max_depth, int(rng.expovariate(1.2)))
    rest = max_depth - s
    if rng.random() < 0.25:
        body: Tuple[PositiveLiteral, ...] = (TOP_LIT,)
    else:
        body = tuple(random_literal(rng, letters, rest, modalities, top_prob=0.0)
                     for _ in range(rng.randint(1, max_body)))
    if rng.random() < bottom_prob:
        head = None
    else:
        head = tuple(random_literal(rng, letters, rest, modalities)
                     for _ in range(rng.randint(1, max_head)))
    return Clause(s, body, head)


def random_horn_box(rng: random.Random, max_letters: int = 5, max_depth: int = 4,
                    max_clauses: int = 10, max_body: int = 3) -> ClausalFormula:
    letters = LETTERS[:rng.randint(1, max_letters)]
    depth = rng.randint(0, max_depth)
    n = rng.randint(1, max_clauses)
    return ClausalFormula(random_clause(rng, letters, depth, max_body=max_body) for _ in range(n))


def random_horn(rng: random.Random, modalities: Sequence[Modality], max_letters: int = 3,
                max_depth: int = 2, max_clauses: int = 4) -> ClausalFormula:
    letters = LETTERS[:rng.randint(1, max_letters)]
    depth = rng.randint(0, max_depth)
    return ClausalFormula(random_clause(rng, letters, depth, modalities, max_body=2)
                          for _ in range(rng.randint(1, max_clauses)))


def random_krom(rng: random.Random, max_letters: int = 2, max_depth: int = 2,
                max_clauses: int = 3,
                modalities: Sequence[Modality] = (Modality.BOX, Modality.DIA)) -> ClausalFormula:
    letters = LETTERS[:rng.randint(1, max_letters)]
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        s = rng.randint(0, max_depth)
        lits = [random_literal(rng, letters, max_depth - s, modalities, top_prob=0.0)
                for _ in range(2)]
        shape = rng.randrange(5)
        if shape == 0:
            clauses.append(Clause(s, (TOP_LIT,), (lits[0],)))
        elif shape == 1:
            clauses.append(Clause(s, (lits[0],), None))
        elif shape == 2:
            clauses.append(Clause(s, (lits[0],), (lits[1],)))
        elif shape == 3:
            clauses.append(Clause(s, (TOP_LIT,), (lits[0], lits[1])))
        else:
            clauses.append(Clause(s, (lits[0], lits[1]), None))
    return ClausalFormula(clauses)


def random_formula(rng: random.Random, letters: Sequence[str], max_depth: int,
                   size: int) -> Formula:
    """Random formula with about ``size`` connectives."""
    if size <= 0:
        r = rng.random()
        if r < 0.1:
            return Top()
        if r < 0.15:
            return Not(Top())
        return Prop(rng.choice(letters))
    choices = ["not", "and", "or"] + (["box", "dia"] if max_depth > 0 else [])
    op = rng.choice(choices)
    if op == "not":
        return Not(random_formula(rng, letters, max_depth, size - 1))
    if op in ("box", "dia"):
        sub = random_formula(rng, letters, max_depth - 1, size - 1)
        return Box(sub) if op == "box" else Dia(sub)
    k = rng.randint(0, size - 1)
    left = random_formula(rng, letters, max_depth, k)
    right = random_formula(rng, letters, max_depth, size - 1 - k)
    return And(left, right) if op == "and" else Or(left, right)


def random_frame(rng: random.Random, n: int, logic: Logic, edge_prob: float = 0.4):
    worlds = [world_name(i) for i in range(n)]
    rel = {(u, v) for u in worlds for v in worlds if rng.random() < edge_prob}
    return worlds, close_relation(rel, worlds, logic)


def random_valuation(rng: random.Random, worlds: Sequence[str], letters: Sequence[str],
                     prob: float = 0.5):
    return {w: [p for p in letters if rng.random() < prob] for w in worlds}


def random_model(rng: random.Random, n: int, logic: Logic, letters: Sequence[str]) -> KripkeModel:
    worlds, rel = random_frame(rng, n, logic)
    return KripkeModel(worlds, rel, random_valuation(rng, worlds, letters))


# --------------------------------------------------------------------------
# Exhaustive suites


def box_literals(letters: Sequence[str], max_depth: int, with_top: bool = True) -> List[PositiveLiteral]:
    atoms: List[Optional[str]] = ([None] if with_top else []) + list(letters)
    return [PositiveLiteral((Modality.BOX,) * d, a) for d in range(max_depth + 1) for a in atoms]


def horn_box_clause_pool(letters: Sequence[str] = ("p", "q"), max_depth: int = 2,
                         max_body: int = 2) -> List[Clause]:
    """Every Horn-box clause over ``letters`` with md <= max_depth.

    Literals range over letters and ``T`` under up to ``max_depth`` boxes;
    bodies are sets of at most ``max_body`` literals (a bare ``T`` only as the
    whole body).
    """
    pool = []
    for s in range(max_depth + 1):
        lits = box_literals(letters, max_depth - s)
        nontop = [l for l in lits if not l.is_top]
        bodies: List[Tuple[PositiveLiteral, ...]] = [(TOP_LIT,)]
        for k in range(1, max_body + 1):
            bodies.extend(itertools.combinations(nontop, k))
        heads: List[Optional[Tuple[PositiveLiteral, ...]]] = [None] + [(l,) for l in lits]
        for b in bodies:
            for h in heads:
                pool.append(Clause(s, tuple(b), h))
    return pool


def exhaustive_horn_box(max_size: int, letters: Sequence[str] = ("p", "q"), max_depth: int = 2,
                        max_clauses: int = 3, max_body: int = 2) -> Iterator[ClausalFormula]:
    """All sets of at most ``max_clauses`` distinct pool clauses with |f| <= max_size."""
    pool = [c for c in horn_box_clause_pool(letters, max_depth, max_body)
            if ClausalFormula([c]).length <= max_size]
    sizes = [ClausalFormula([c]).length for c in pool]
    order = sorted(range(len(pool)), key=lambda i: (sizes[i], str(pool[i])))
    pool = [pool[i] for i in order]
    sizes = [sizes[i] for i in order]

    def rec(start: int, chosen: List[int], total: int):
        if chosen:
            yield ClausalFormula(pool[i] for i in chosen)
        if len(chosen) == max_clauses:
            return
        for i in range(start, len(pool)):
            extra = sizes[i] + (1 if chosen else 0)
            if total + extra > max_size:
                break
            chosen.append(i)
            yield from rec(i + 1, chosen, total + extra)
            chosen.pop()

    yield from rec(0, [], 0)


def krom_literals(letters: Sequence[str], max_depth: int) -> List[PositiveLiteral]:
    out = []
    for d in range(max_depth + 1):
        for prefix in itertools.product((Modality.BOX, Modality.DIA), repeat=d):
            for a in letters:
                out.append(PositiveLiteral(prefix, a))
    return out


def krom_clause_pool(letters: Sequence[str] = ("p", "q"), max_depth: int = 1) -> List[Clause]:
    """Krom clauses over ``letters`` (no ``T`` literals) with md <= max_depth.

    Each clause is one or two signed literals, without tautologies or repeats.
    """
    pool = []
    for s in range(max_depth + 1):
        lits = krom_literals(letters, max_depth - s)
        signed = [(True, l) for l in lits] + [(False, l) for l in lits]
        for k in (1, 2):
            for combo in itertools.combinations(signed, k):
                if k == 2 and combo[0][1] == combo[1][1]:
                    continue
                neg = tuple(l for pos, l in combo if not pos)
                posl = tuple(l for pos, l in combo if pos)
                pool.append(Clause(s, neg or (TOP_LIT,), posl or None))
    return pool


def exhaustive_krom(letters: Sequence[str] = ("p", "q"), max_depth: int = 1,
                    max_clauses: int = 2) -> Iterator[ClausalFormula]:
    pool = krom_clause_pool(letters, max_depth)
    for k in range(1, max_clauses + 1):
        for combo in itertools.combinations(pool, k):
            yield ClausalFormula(combo)
