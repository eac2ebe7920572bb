"""Kripke models and their evaluation.

Worlds are opaque strings.  A model owns its world order, its relation and a
valuation; nothing is closed implicitly, so a T model is only reflexive if it
was built that way (``expand`` and the oracle do this per logic).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from .formulas import (
    And, Box, ClausalFormula, Dia, Formula, Logic, Modality, Not, Or,
    PositiveLiteral, Prop, Top, subformulas,
)

Pair = Tuple[str, str]


class UnknownWorldError(KeyError):
    pass


class FrameMismatchError(ValueError):
    pass


class KripkeModel:
    def __init__(self, worlds: Iterable[str], relation: Iterable[Pair] = (),
                 valuation: Optional[Mapping[str, Iterable[str]]] = None):
        self.worlds: Tuple[str, ...] = tuple(worlds)
        if not self.worlds:
            raise ValueError("a Kripke model needs at least one world")
        if len(set(self.worlds)) != len(self.worlds):
            raise ValueError("duplicate world ids")
        known = set(self.worlds)
        self.relation: FrozenSet[Pair] = frozenset((u, v) for u, v in relation)
        for u, v in self.relation:
            if u not in known or v not in known:
                raise ValueError(f"edge ({u}, {v}) leaves the world set")
        valuation = valuation or {}
        extra = set(valuation) - known
        if extra:
            raise ValueError(f"valuation mentions unknown worlds {sorted(extra)}")
        self.valuation: Dict[str, FrozenSet[str]] = {
            w: frozenset(valuation.get(w, ())) for w in self.worlds}
        order = {w: i for i, w in enumerate(self.worlds)}
        succ: Dict[str, List[str]] = {w: [] for w in self.worlds}
        for u, v in sorted(self.relation, key=lambda e: (order[e[0]], order[e[1]])):
            succ[u].append(v)
        self._succ = {w: tuple(vs) for w, vs in succ.items()}

    def successors(self, w: str) -> Tuple[str, ...]:
        try:
            return self._succ[w]
        except KeyError:
            raise UnknownWorldError(w) from None

    def same_frame(self, other: "KripkeModel") -> bool:
        return set(self.worlds) == set(other.worlds) and self.relation == other.relation

    def with_valuation(self, valuation: Mapping[str, Iterable[str]]) -> "KripkeModel":
        return KripkeModel(self.worlds, self.relation, valuation)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return self.same_frame(other) and self.valuation == other.valuation

    def __hash__(self):
        return hash((frozenset(self.worlds), self.relation))

    def __repr__(self) -> str:
        edges = sorted(self.relation)
        val = {w: sorted(v) for w, v in self.valuation.items() if v}
        return f"KripkeModel(worlds={list(self.worlds)}, edges={edges}, valuation={val})"

    # JSON model files: worlds, edges, valuation, optional root
    def to_json(self, root: Optional[str] = None) -> dict:
        order = {w: i for i, w in enumerate(self.worlds)}
        data = {
            "worlds": list(self.worlds),
            "edges": [list(e) for e in sorted(self.relation, key=lambda e: (order[e[0]], order[e[1]]))],
            "valuation": {w: sorted(self.valuation[w]) for w in self.worlds},
        }
        if root is not None:
            data["root"] = root
        return data

    @classmethod
    def from_json(cls, data: dict) -> Tuple["KripkeModel", Optional[str]]:
        try:
            worlds = [str(w) for w in data["worlds"]]
            edges = [(str(u), str(v)) for u, v in data.get("edges", [])]
            valuation = {str(w): [str(p) for p in ps] for w, ps in data.get("valuation", {}).items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed model file: {exc}") from None
        root = data.get("root")
        model = cls(worlds, edges, valuation)
        if root is not None and root not in model.valuation:
            raise UnknownWorldError(root)
        return model, root

    def dumps(self, root: Optional[str] = None) -> str:
        return json.dumps(self.to_json(root), indent=2)

    @classmethod
    def loads(cls, text: str) -> Tuple["KripkeModel", Optional[str]]:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed model file: {exc}") from None
        if not isinstance(data, dict):
            raise ValueError("malformed model file: expected a JSON object")
        return cls.from_json(data)


# --------------------------------------------------------------------------
# Frame closures


def reflexive_closure(relation: Iterable[Pair], worlds: Iterable[str]) -> FrozenSet[Pair]:
    return frozenset(relation) | {(w, w) for w in worlds}


def transitive_closure(relation: Iterable[Pair]) -> FrozenSet[Pair]:
    succ: Dict[str, set] = {}
    for u, v in relation:
        succ.setdefault(u, set()).add(v)
    out = set()
    for start in succ:
        seen, stack = set(), list(succ[start])
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(succ.get(v, ()))
        out.update((start, v) for v in seen)
    return frozenset(out)


def refl_trans_closure(relation: Iterable[Pair], worlds: Iterable[str]) -> FrozenSet[Pair]:
    return reflexive_closure(transitive_closure(relation), worlds)


def close_relation(relation: Iterable[Pair], worlds: Sequence[str], logic: Logic) -> FrozenSet[Pair]:
    rel = frozenset(relation)
    if logic.transitive:
        rel = transitive_closure(rel)
    if logic.reflexive:
        rel = reflexive_closure(rel, worlds)
    return rel


def is_reflexive(m: KripkeModel) -> bool:
    return all((w, w) in m.relation for w in m.worlds)


def is_transitive(m: KripkeModel) -> bool:
    return all((u, x) in m.relation for u, v in m.relation for x in m.successors(v))


def in_frame_class(m: KripkeModel, logic: Logic) -> bool:
    return ((not logic.reflexive or is_reflexive(m))
            and (not logic.transitive or is_transitive(m)))


# --------------------------------------------------------------------------
# Evaluation


def _check_world(m: KripkeModel, w: str) -> None:
    if w not in m.valuation:
        raise UnknownWorldError(w)


def model_check(m: KripkeModel, w: str, f: Formula) -> bool:
    """Truth of ``f`` at ``w``.

    Evaluation is demand-driven from ``w`` and memoized on (world, node), so
    only worlds reachable from ``w`` are ever consulted.
    """
    _check_world(m, w)
    memo: Dict[Tuple[int, str], bool] = {}
    stack = [(f, w)]
    while stack:
        node, u = stack[-1]
        key = (id(node), u)
        if key in memo:
            stack.pop()
            continue
        if isinstance(node, Top):
            memo[key] = True
        elif isinstance(node, Prop):
            memo[key] = node.name in m.valuation[u]
        elif isinstance(node, Not):
            sub = (id(node.arg), u)
            if sub not in memo:
                stack.append((node.arg, u))
                continue
            memo[key] = not memo[sub]
        elif isinstance(node, (And, Or)):
            pending = [(c, u) for c in (node.left, node.right) if (id(c), u) not in memo]
            if pending:
                stack.extend(pending)
                continue
            a, b = memo[(id(node.left), u)], memo[(id(node.right), u)]
            memo[key] = (a and b) if isinstance(node, And) else (a or b)
        elif isinstance(node, (Box, Dia)):
            succ = m.successors(u)
            pending = [(node.arg, v) for v in succ if (id(node.arg), v) not in memo]
            if pending:
                stack.extend(pending)
                continue
            vals = (memo[(id(node.arg), v)] for v in succ)
            memo[key] = all(vals) if isinstance(node, Box) else any(vals)
        else:
            raise TypeError(f"not a formula: {node!r}")
        stack.pop()
    return memo[(id(f), w)]


class _LiteralEvaluator:
    def __init__(self, m: KripkeModel):
        self.m = m
        self.memo: Dict[Tuple[str, PositiveLiteral], bool] = {}

    def __call__(self, u: str, lit: PositiveLiteral) -> bool:
        key = (u, lit)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if not lit.prefix:
            val = lit.atom is None or lit.atom in self.m.valuation[u]
        else:
            inner = lit.inner()
            succ = self.m.successors(u)
            if lit.prefix[0] is Modality.BOX:
                val = all(self(v, inner) for v in succ)
            else:
                val = any(self(v, inner) for v in succ)
        self.memo[key] = val
        return val


def reachable_in(m: KripkeModel, w: str, steps: int) -> FrozenSet[str]:
    """Worlds reachable from ``w`` by paths of exactly ``steps`` edges."""
    frontier = {w}
    for _ in range(steps):
        frontier = {v for u in frontier for v in m.successors(u)}
    return frozenset(frontier)


def failing_clauses(m: KripkeModel, w: str, f: ClausalFormula) -> List[int]:
    """Indices of clauses of ``f`` that are false at ``w``."""
    _check_world(m, w)
    ev = _LiteralEvaluator(m)
    bad = []
    for i, c in enumerate(f.clauses):
        for u in reachable_in(m, w, c.prefix_depth):
            if all(ev(u, b) for b in c.body) and not any(ev(u, h) for h in (c.head or ())):
                bad.append(i)
                break
    return bad


def model_check_clausal(m: KripkeModel, w: str, f: ClausalFormula) -> bool:
    return not failing_clauses(m, w, f)


# --------------------------------------------------------------------------
# Model constructions


def intersect(m1: KripkeModel, m2: KripkeModel) -> KripkeModel:
    if not m1.same_frame(m2):
        raise FrameMismatchError("intersection needs two models on the same frame")
    return KripkeModel(m1.worlds, m1.relation,
                       {w: m1.valuation[w] & m2.valuation[w] for w in m1.worlds})


def pair_world(u: str, v: str) -> str:
    return f"{u}|{v}"


def product(m1: KripkeModel, m2: KripkeModel) -> KripkeModel:
    worlds = [pair_world(u, v) for u in m1.worlds for v in m2.worlds]
    relation = [(pair_world(u1, u2), pair_world(v1, v2))
                for u1, v1 in m1.relation for u2, v2 in m2.relation]
    valuation = {pair_world(u, v): m1.valuation[u] & m2.valuation[v]
                 for u in m1.worlds for v in m2.worlds}
    return KripkeModel(worlds, relation, valuation)


def world_name(i: int) -> str:
    return f"w{i}"


def chain_relation(length: int, loop_last: bool, logic: Logic) -> FrozenSet[Pair]:
    worlds = [world_name(i) for i in range(length)]
    rel = {(worlds[i], worlds[i + 1]) for i in range(length - 1)}
    if loop_last:
        rel.add((worlds[-1], worlds[-1]))
    return close_relation(rel, worlds, logic)


def chain_model(valuation: Sequence[Iterable[str]], loop_last: bool, logic: Logic) -> KripkeModel:
    """Path (or lasso) over ``len(valuation)`` worlds, closed per ``logic``."""
    worlds = [world_name(i) for i in range(len(valuation))]
    return KripkeModel(worlds, chain_relation(len(worlds), loop_last, logic),
                       dict(zip(worlds, valuation)))


@dataclass(frozen=True)
class PreLinearModel:
    length: int
    loop_last: bool
    valuation: Tuple[FrozenSet[str], ...]
    logic: Logic

    def __post_init__(self):
        if self.length < 1 or len(self.valuation) != self.length:
            raise ValueError("valuation must give one letter set per world")
        if self.loop_last and not self.logic.transitive:
            raise ValueError("loop_last is only meaningful for K4 and S4")

    def expand(self) -> KripkeModel:
        return chain_model(self.valuation, self.loop_last, self.logic)


def expand(p: PreLinearModel) -> KripkeModel:
    return p.expand()


# --------------------------------------------------------------------------
# Bit-parallel evaluation over every valuation of a fixed frame


def valuation_patterns(nbits: int) -> List[int]:
    """``P[j]`` has bit ``v`` set iff bit ``j`` of ``v`` is set, for v < 2**nbits."""
    size = 1 << nbits
    mask = (1 << size) - 1
    small = [0xAA, 0xCC, 0xF0]
    nbytes = max(1, size // 8)
    out = []
    for j in range(nbits):
        if j < 3:
            pat = bytes([small[j]]) * nbytes
        else:
            half = (1 << j) // 8
            pat = (b"\x00" * half + b"\xff" * half) * (nbytes // (2 * half))
        out.append(int.from_bytes(pat, "little") & mask)
    return out


class TruthTable:
    """Truth of formulas at every world of a frame, for all valuations at once.

    Valuation index ``v`` encodes letter ``i`` at world ``k`` as bit
    ``k * len(letters) + i``; each truth value is a Python int whose bit ``v``
    is the value under valuation ``v``.
    """

    def __init__(self, worlds: Sequence[str], relation: Iterable[Pair], letters: Sequence[str]):
        self.worlds = list(worlds)
        self.letters = list(letters)
        index = {w: i for i, w in enumerate(self.worlds)}
        self.succ: List[List[int]] = [[] for _ in self.worlds]
        for u, v in relation:
            self.succ[index[u]].append(index[v])
        for s in self.succ:
            s.sort()
        self.nbits = len(self.letters) * len(self.worlds)
        self.full = (1 << (1 << self.nbits)) - 1
        pats = valuation_patterns(self.nbits)
        nl = len(self.letters)
        self.atoms = {p: [pats[k * nl + i] for k in range(len(self.worlds))]
                      for i, p in enumerate(self.letters)}

    def evaluate(self, f: Formula) -> List[int]:
        cache: Dict[Formula, List[int]] = {}
        n = len(self.worlds)
        full = self.full
        for node in subformulas(f):
            if node in cache:
                continue
            if isinstance(node, Top):
                val = [full] * n
            elif isinstance(node, Prop):
                val = self.atoms.get(node.name, [0] * n)
            elif isinstance(node, Not):
                val = [full ^ x for x in cache[node.arg]]
            elif isinstance(node, And):
                val = [a & b for a, b in zip(cache[node.left], cache[node.right])]
            elif isinstance(node, Or):
                val = [a | b for a, b in zip(cache[node.left], cache[node.right])]
            elif isinstance(node, Box):
                arg = cache[node.arg]
                val = []
                for k in range(n):
                    acc = full
                    for j in self.succ[k]:
                        acc &= arg[j]
                    val.append(acc)
            elif isinstance(node, Dia):
                arg = cache[node.arg]
                val = []
                for k in range(n):
                    acc = 0
                    for j in self.succ[k]:
                        acc |= arg[j]
                    val.append(acc)
            else:
                raise TypeError(f"not a formula: {node!r}")
            cache[node] = val
        return cache[f]

    def decode(self, v: int) -> Dict[str, FrozenSet[str]]:
        nl = len(self.letters)
        return {w: frozenset(p for i, p in enumerate(self.letters) if v >> (k * nl + i) & 1)
                for k, w in enumerate(self.worlds)}

