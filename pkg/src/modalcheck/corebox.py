"""Implication graphs for the core-box fragment of K.

A core-box formula is a conjunction of boxed binary disjunctions of signed
box literals.  For a model length D the graph has one vertex per (signed
literal, depth d < D) and edges for

* each clause ``a | b`` at prefix depth d: ``(~a,d) -> (b,d)`` and ``(~b,d) -> (a,d)``;
* box-down jumps ``([]l,d) -> (l,d+1)`` and ``(~[]l,d) -> (~l,d+1)`` for d < D-1;
* box-up jumps ``(l,d) -> ([]l,d-1)`` and ``(~l,d) -> (~[]l,d-1)`` for d > 0.

The formula has a D-world chain model iff no vertex shares a strongly
connected component with its negation (the 2SAT criterion), provided the last
world is treated as a dead end: every box literal holds there vacuously.  We
add that as unit clauses ``T -> []l`` at depth D-1 (``dead_end=True``, the
default).  Without them the graph also accepts labelings in which a box
literal is false at the last world, which no chain model realises.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .formulas import (
    TOP_LIT, ClausalFormula, Clause, Logic, Modality, PositiveLiteral, classify,
)
from .kripke import chain_model, failing_clauses
from .results import FragmentError, SatResult, VerificationError, Verdict


@dataclass(frozen=True, order=True)
class SignedLiteral:
    positive: bool
    literal: PositiveLiteral

    def __neg__(self) -> "SignedLiteral":
        return SignedLiteral(not self.positive, self.literal)

    def __str__(self) -> str:
        return ("+" if self.positive else "-") + str(self.literal)


@dataclass(frozen=True)
class BinaryClause:
    """``[]^depth (a | b)``."""

    depth: int
    a: SignedLiteral
    b: SignedLiteral

    def __str__(self) -> str:
        return f"[]^{self.depth} ({self.a} | {self.b})"


@dataclass(frozen=True)
class CoreFormula:
    """A prepared core-box formula: binary clauses plus the modal depth."""

    clauses: Tuple[BinaryClause, ...]
    depth: int
    source: Optional[ClausalFormula] = None

    def __eq__(self, other):
        return (isinstance(other, CoreFormula) and self.clauses == other.clauses
                and self.depth == other.depth)

    def __hash__(self):
        return hash((self.clauses, self.depth))


def _pos(l: PositiveLiteral) -> SignedLiteral:
    return SignedLiteral(True, l)


def _neg(l: PositiveLiteral) -> SignedLiteral:
    return SignedLiteral(False, l)


BOTTOM_SIGNED = _neg(TOP_LIT)
TOP_SIGNED = _pos(TOP_LIT)


def _to_binary(c: Clause) -> BinaryClause:
    negs = [_neg(l) for l in c.body if not l.is_top]
    poss = [_pos(l) for l in (c.head or ())]
    parts = negs + poss
    while len(parts) < 2:
        parts.append(BOTTOM_SIGNED)
    return BinaryClause(c.prefix_depth, parts[0], parts[1])


def prepare(f: Union[ClausalFormula, CoreFormula]) -> CoreFormula:
    """Binary form of a core-box formula plus ``[]^s (bottom -> T)`` for s <= md.

    Units ``l`` and ``~l`` become ``l | F`` and ``~l | F``.  Idempotent.
    """
    if isinstance(f, CoreFormula):
        clauses, depth, source = list(f.clauses), f.depth, f.source
    else:
        frag = classify(f)
        if not (frag.core and frag.box_only):
            raise FragmentError("corebox needs a core-box formula "
                                f"(core={frag.core}, box_only={frag.box_only})")
        clauses, depth, source = [_to_binary(c) for c in f.clauses], f.depth, f
    clauses += [BinaryClause(s, TOP_SIGNED, TOP_SIGNED) for s in range(depth + 1)]
    seen: Set[BinaryClause] = set()
    out = []
    for c in clauses:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return CoreFormula(tuple(out), depth, source)


def literal_pool(pf: CoreFormula) -> List[PositiveLiteral]:
    """Literals of the prepared formula, closed under stripping modalities.

    Ordered by modal depth, then text, with ``T`` first.
    """
    pool = {TOP_LIT}
    for c in pf.clauses:
        for s in (c.a, c.b):
            pool.update(s.literal.suffixes())
    return sorted(pool, key=lambda l: (l.depth, l.atom is not None, str(l)))


Vertex = Tuple[SignedLiteral, int]


class ImplicationGraph:
    """Vertex ids: ``(literal_index * D + d) * 2 + (0 if positive else 1)``."""

    def __init__(self, pf: CoreFormula, D: int, dead_end: bool = True):
        if D < 1:
            raise ValueError("D must be at least 1")
        self.D = D
        self.formula = pf
        self.pool = literal_pool(pf)
        self.index = {l: i for i, l in enumerate(self.pool)}
        n = 2 * len(self.pool) * D
        self.adj: List[List[int]] = [[] for _ in range(n)]
        self._edges: Set[Tuple[int, int]] = set()
        self.rule_of: Dict[Tuple[int, int], str] = {}
        for c in pf.clauses:
            if c.depth < D:
                self._clause(c.a, c.b, c.depth, "clause")
        for l in self.pool:
            if l.outer is not Modality.BOX:
                continue
            inner = l.inner()
            for d in range(D - 1):
                self._edge(self.vid(_pos(l), d), self.vid(_pos(inner), d + 1), "box-down")
                self._edge(self.vid(_neg(l), d), self.vid(_neg(inner), d + 1), "box-down")
            for d in range(1, D):
                self._edge(self.vid(_pos(inner), d), self.vid(_pos(l), d - 1), "box-up")
                self._edge(self.vid(_neg(inner), d), self.vid(_neg(l), d - 1), "box-up")
            if dead_end:
                self._clause(_pos(l), BOTTOM_SIGNED, D - 1, "dead-end")

    def _clause(self, a: SignedLiteral, b: SignedLiteral, d: int, rule: str) -> None:
        self._edge(self.vid(-a, d), self.vid(b, d), rule)
        self._edge(self.vid(-b, d), self.vid(a, d), rule)

    def _edge(self, u: int, v: int, rule: str) -> None:
        if (u, v) not in self._edges:
            self._edges.add((u, v))
            self.adj[u].append(v)
            self.rule_of[(u, v)] = rule

    def vid(self, s: SignedLiteral, d: int) -> int:
        return (self.index[s.literal] * self.D + d) * 2 + (0 if s.positive else 1)

    def vertex(self, v: int) -> Vertex:
        lit, d = divmod(v >> 1, self.D)
        return SignedLiteral(not (v & 1), self.pool[lit]), d

    @property
    def num_vertices(self) -> int:
        return len(self.adj)

    def vertices(self) -> List[Vertex]:
        return [self.vertex(v) for v in range(len(self.adj))]

    def edges(self) -> List[Tuple[Vertex, Vertex]]:
        return [(self.vertex(u), self.vertex(v)) for u in range(len(self.adj)) for v in self.adj[u]]

    def has_edge(self, a: Vertex, b: Vertex) -> bool:
        return (self.vid(*a), self.vid(*b)) in self._edges

    def reachable(self, a: Vertex, b: Vertex) -> bool:
        return self._path(self.vid(*a), self.vid(*b)) is not None

    def _path(self, u: int, v: int) -> Optional[List[int]]:
        prev = {u: -1}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == v:
                path = [x]
                while prev[path[-1]] >= 0:
                    path.append(prev[path[-1]])
                return path[::-1]
            for y in self.adj[x]:
                if y not in prev:
                    prev[y] = x
                    queue.append(y)
        return None

    def dump(self) -> str:
        def fmt(x: Vertex) -> str:
            return f"({x[0]},{x[1]})"
        return "\n".join(f"{fmt(a)} -> {fmt(b)}" for a, b in self.edges())


def build_implication_graph(f: Union[ClausalFormula, CoreFormula], D: int,
                            dead_end: bool = True) -> ImplicationGraph:
    return ImplicationGraph(prepare(f), D, dead_end)


def strongly_connected_components(adj: Sequence[Sequence[int]]) -> List[int]:
    """Tarjan's algorithm, iterative.  Components are numbered in reverse
    topological order (the first finished component is a sink)."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: List[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


@dataclass(frozen=True)
class CycleWitness:
    anchor: Vertex
    path: Tuple[Vertex, ...]

    def __str__(self) -> str:
        return " -> ".join(f"({s},{d})" for s, d in self.path)


def find_contradictory_cycle(g: ImplicationGraph) -> Optional[CycleWitness]:
    comp = strongly_connected_components(g.adj)
    for v in range(0, g.num_vertices, 2):
        if comp[v] == comp[v + 1]:
            there = g._path(v, v + 1)
            back = g._path(v + 1, v)
            path = there + back[1:]
            return CycleWitness(g.vertex(v), tuple(g.vertex(x) for x in path))
    return None


def assignment(g: ImplicationGraph) -> Optional[Dict[Vertex, bool]]:
    """A satisfying labeling of the positive vertices, or None."""
    comp = strongly_connected_components(g.adj)
    out = {}
    for v in range(0, g.num_vertices, 2):
        if comp[v] == comp[v + 1]:
            return None
        out[g.vertex(v)] = comp[v] < comp[v + 1]
    return out


def core_box_sat(f: ClausalFormula, *, dead_end: bool = True) -> SatResult:
    """Decide K-satisfiability of a core-box formula.

    Tries D = 1 .. md+1 and reports the smallest D without a contradictory
    cycle.  The witness is a D-world chain built from the 2SAT labeling and
    checked by the model checker before it is returned.
    """
    pf = prepare(f)
    trace: List[Tuple[int, Optional[CycleWitness]]] = []
    for D in range(1, pf.depth + 2):
        g = ImplicationGraph(pf, D, dead_end)
        labels = assignment(g)
        if labels is None:
            trace.append((D, find_contradictory_cycle(g)))
            continue
        trace.append((D, None))
        val = [set() for _ in range(D)]
        for (s, d), truth in labels.items():
            if truth and s.literal.is_letter:
                val[d].add(s.literal.atom)
        model = chain_model(val, False, Logic.K)
        bad = failing_clauses(model, "w0", f)
        if bad:
            raise VerificationError(f"corebox witness at D={D} fails clauses {bad}")
        info = {"D": D, "vertices": g.num_vertices, "edges": len(g._edges)}
        return SatResult(Verdict.SAT, model, trace, "w0", "corebox", info)
    return SatResult(Verdict.UNSAT, None, trace, None, "corebox", {"D": None})

