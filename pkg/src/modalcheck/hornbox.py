"""Polynomial satisfiability for the Horn-box fragment of K, T, K4 and S4.

The solver grows a candidate pre-linear model w0 -> w1 -> ... one world at a
time.  Each world carries two label sets: ``H`` (asserted, still to be
processed) and ``L`` (established).  Saturation closes the labels under the
logic's propagation rules; when it derives a violated negative clause the
trailing worlds are removed one by one (``shorten``), each time asserting every
box item of the closure at the new dead end.

Implementation notes
--------------------
Items (literals and clauses of the closure) are interned as integers.  Rule
side conditions test membership in H ∪ L and every rule is re-triggered when a
fact it depends on arrives, so the fixpoint does not depend on the order in
which pending facts are processed.  A saturation that hits a negative clause
still runs to its fixpoint before reporting failure.

Worlds are only added while there are fewer than ``bound`` of them: md+1 for
K and T, ``max(1, |f|)`` for K4 and S4.  When the last world is added the
closing rules for the last world are switched on:

* K4: the last world loops on itself (``□ψ ∈ Cl`` with ψ there gives □ψ,
  and □ξ gives ξ).
* T, S4: the last world sees only itself, so ψ there gives □ψ.

After ``shorten`` the K4 loop is gone (its world was removed) and the new last
world is a dead end for K/K4 and reflexive-only for T/S4.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .formulas import (
    TOP_LIT, ClausalFormula, Clause, Logic, Modality, PositiveLiteral, classify,
)
from .kripke import KripkeModel, PreLinearModel, chain_model, failing_clauses
from .results import FragmentError, SatResult, VerificationError, Verdict

LabelItem = Union[PositiveLiteral, Clause]

_TOP, _LETTER, _BOX, _CLAUSE = range(4)


@dataclass(frozen=True)
class TraceEvent:
    kind: str          # add_world | remove_world | add | settle | conflict | stage
    world: int
    item: Optional[LabelItem] = None
    rule: str = ""


class ItemTable:
    """Interned closure items of a Horn-box formula."""

    def __init__(self, f: ClausalFormula):
        self.items: List[LabelItem] = []
        self.ids: Dict[LabelItem, int] = {}
        self._intern(TOP_LIT)
        for c in f.clauses:
            for j in range(c.prefix_depth, -1, -1):
                self._intern(Clause(j, c.body, c.head))
            for lit in c.literals:
                for suf in lit.suffixes():
                    self._intern(suf)
        n = len(self.items)
        self.kind = [0] * n
        self.inner = [-1] * n
        self.box_of = [-1] * n
        self.body: List[Tuple[int, ...]] = [()] * n
        self.head = [-1] * n
        self.users: List[List[int]] = [[] for _ in range(n)]
        for i, it in enumerate(self.items):
            if isinstance(it, Clause):
                self.box_of[i] = self.ids.get(it.boxed(), -1)
                if it.prefix_depth:
                    self.kind[i] = _BOX
                    self.inner[i] = self.ids[it.unboxed()]
                else:
                    self.kind[i] = _CLAUSE
                    self.body[i] = tuple(self.ids[b] for b in it.body)
                    self.head[i] = -1 if it.head is None else self.ids[it.head[0]]
                    for b in set(self.body[i]):
                        self.users[b].append(i)
            else:
                self.box_of[i] = self.ids.get(it.under(Modality.BOX), -1)
                if it.prefix:
                    self.kind[i] = _BOX
                    self.inner[i] = self.ids[it.inner()]
                else:
                    self.kind[i] = _TOP if it.atom is None else _LETTER
        self.top = 0
        self.clauses = [self.ids[c] for c in f.clauses]
        # every box-prefixed member of the closure, asserted at a new dead end
        self.box_items = [i for i in range(n) if self.kind[i] == _BOX]

    def _intern(self, it: LabelItem) -> int:
        if it not in self.ids:
            self.ids[it] = len(self.items)
            self.items.append(it)
        return self.ids[it]


class Structure:
    """The (W, H, L) structure of one solver run.

    Worlds are the indices ``0 .. len(self) - 1``.  ``facts[k]`` is H ∪ L at
    world k and ``done[k]`` is L.
    """

    def __init__(self, logic: Logic, f: ClausalFormula, bound: Optional[int] = None,
                 record: bool = True, rng: Optional[random.Random] = None):
        self.logic = logic
        self.formula = f
        self.table = ItemTable(f)
        self.bound = bound if bound is not None else solver_bound(logic, f)
        self.facts: List[Set[int]] = []
        self.done: List[Set[int]] = []
        self.loop_world: Optional[int] = None
        self.closed = False
        self.violations: Set[Tuple[int, int]] = set()
        self.pending: deque = deque()
        self.record = record
        self.trace: List[TraceEvent] = []
        self.rng = rng
        self.firings = 0

    def __len__(self) -> int:
        return len(self.facts)

    # views ---------------------------------------------------------------

    def H(self, k: int) -> Set[LabelItem]:
        return {self.table.items[i] for i in self.facts[k] - self.done[k]}

    def L(self, k: int) -> Set[LabelItem]:
        return {self.table.items[i] for i in self.done[k]}

    def labeling(self) -> Tuple[frozenset, ...]:
        """H ∪ L per world, as item objects."""
        items = self.table.items
        return tuple(frozenset(items[i] for i in fs) for fs in self.facts)

    # primitive updates ---------------------------------------------------

    def _log(self, kind: str, k: int, i: int = -1, rule: str = "") -> None:
        if self.record:
            self.trace.append(TraceEvent(kind, k, None if i < 0 else self.table.items[i], rule))

    def assert_item(self, k: int, i: int, rule: str) -> None:
        """Queue item ``i`` for ``H(w_k)`` unless already in H ∪ L."""
        if i not in self.facts[k]:
            self.facts[k].add(i)
            self._log("add", k, i, rule)
            self.pending.append((k, i, rule))

    def settle(self, k: int, i: int) -> None:
        if i not in self.done[k]:
            self.done[k].add(i)
            self._log("settle", k, i)

    def add_world(self) -> int:
        k = len(self.facts)
        self.facts.append(set())
        self.done.append(set())
        self._log("add_world", k)
        self.assert_item(k, self.table.top, "top")
        if k > 0:
            # boxes waiting at the old last world now have a successor
            for i in sorted(self.facts[k - 1]):
                if self.table.kind[i] == _BOX and i not in self.done[k - 1]:
                    self._forward(k - 1, i)
        return k

    def remove_world(self) -> None:
        k = len(self.facts) - 1
        self.facts.pop()
        self.done.pop()
        self.pending = deque(p for p in self.pending if p[0] != k)
        self.violations = {v for v in self.violations if v[0] != k}
        if self.loop_world == k:
            self.loop_world = None
        self._log("remove_world", k)

    def close_last(self) -> None:
        """Switch on the closing rules for the last world (see module notes)."""
        k = len(self.facts) - 1
        self._log("stage", k, rule="close")
        if self.logic is Logic.K4 and not self.closed:
            self.loop_world = k
        elif self.logic.reflexive:
            self.closed = True
        for i in sorted(self.facts[k]):
            self._closing(k, i)

    # rules ---------------------------------------------------------------

    def _forward(self, k: int, i: int) -> None:
        t = self.table
        self.assert_item(k + 1, t.inner[i], "box-forward")
        if self.logic.transitive:
            self.assert_item(k + 1, i, "box-forward")
        self.settle(k, i)

    def _closing(self, k: int, i: int) -> None:
        t = self.table
        if k == self.loop_world:
            if t.kind[i] == _BOX:
                self.assert_item(k, t.inner[i], "loop")
            if t.box_of[i] >= 0:
                self.assert_item(k, t.box_of[i], "loop")
        elif self.closed and self.logic.reflexive and t.box_of[i] >= 0:
            self.assert_item(k, t.box_of[i], "last-reflexive")

    def _process(self, k: int, i: int) -> None:
        t, facts, logic = self.table, self.facts, self.logic
        self.firings += 1
        n = len(facts)
        kind = t.kind[i]
        if kind == _TOP or kind == _LETTER:
            self.settle(k, i)
        elif kind == _BOX:
            if k + 1 < n:
                self._forward(k, i)
            if logic.reflexive:
                self.assert_item(k, t.inner[i], "reflexive")
            j = t.inner[i]
            # i = □j as the boxed side of a backward rule
            if k >= 1:
                if logic is Logic.K4 and j in facts[k]:
                    self.assert_item(k - 1, i, "box-backward")
                elif logic is Logic.S4 and j in facts[k - 1]:
                    self.assert_item(k - 1, i, "box-backward")
        elif kind == _CLAUSE:
            self._try_clause(k, i)
        if k == n - 1:
            self._closing(k, i)
        # clauses at w_k waiting for i
        for c in t.users[i]:
            if c in facts[k]:
                self._try_clause(k, c)
        # i = ψ as the unboxed side of a backward rule
        b = t.box_of[i]
        if b >= 0:
            if logic is Logic.K:
                if k >= 1:
                    self.assert_item(k - 1, b, "box-backward")
            elif logic is Logic.T:
                if k >= 1 and i in facts[k - 1]:
                    self.assert_item(k - 1, b, "box-backward")
                if k + 1 < n and i in facts[k + 1]:
                    self.assert_item(k, b, "box-backward")
            elif logic is Logic.K4:
                if k >= 1 and b in facts[k]:
                    self.assert_item(k - 1, b, "box-backward")
            else:
                if k + 1 < n and b in facts[k + 1]:
                    self.assert_item(k, b, "box-backward")

    def _try_clause(self, k: int, c: int) -> None:
        t = self.table
        if c in self.done[k] or (k, c) in self.violations:
            return
        fk = self.facts[k]
        if all(b in fk for b in t.body[c]):
            h = t.head[c]
            if h < 0:
                self.violations.add((k, c))
                self._log("conflict", k, c)
            else:
                self.assert_item(k, h, "clause")
                self.settle(k, c)

    def run(self) -> bool:
        pending = self.pending
        rng = self.rng
        while pending:
            if rng is not None:
                pending.rotate(-rng.randrange(len(pending)))
            k, i, _ = pending.popleft()
            self._process(k, i)
        return not self.violations


def solver_bound(logic: Logic, f: ClausalFormula) -> int:
    if logic in (Logic.K, Logic.T):
        return f.depth + 1
    return max(1, f.length)


def new_structure(logic: Logic, f: ClausalFormula, **kw) -> Structure:
    s = Structure(logic, f, **kw)
    s.add_world()
    for c in s.table.clauses:
        s.assert_item(0, c, "input")
    return s


def saturate(logic: Logic, s: Structure) -> bool:
    """Run the propagation rules to a fixpoint; False iff a negative clause fired."""
    if logic is not s.logic:
        raise ValueError("structure was built for a different logic")
    return s.run()


def shorten(logic: Logic, s: Structure, d: int) -> bool:
    """Remove trailing worlds until saturation succeeds; False if none is left.

    ``d`` is the index of the last world when saturation failed.
    """
    if logic is not s.logic:
        raise ValueError("structure was built for a different logic")
    for k in range(d, 0, -1):
        while len(s) > k:
            s.remove_world()
        s.closed = True
        last = k - 1
        s._log("stage", last, rule="shorten")
        for i in s.table.box_items:
            s.assert_item(last, i, "shorten")
        for i in sorted(s.facts[last]):
            s._closing(last, i)
        if s.run():
            return True
    return False


def extract_model(s: Structure, logic: Logic, looping: bool, compact: bool = False) -> KripkeModel:
    """Pre-linear model with ``V(w_k)`` = letters in ``L(w_k)``.

    With ``compact``, trailing worlds that repeat their predecessor's
    valuation are merged when the last world sees itself (T, S4, looping K4);
    the merged model is bisimilar to the full one.
    """
    t = s.table
    val = []
    for k in range(len(s)):
        val.append(frozenset(t.items[i].atom for i in s.done[k] if t.kind[i] == _LETTER))
    loop = looping and logic.transitive
    if compact and (logic.reflexive or loop):
        while len(val) > 1 and val[-1] == val[-2]:
            val.pop()
    if logic.transitive:
        return PreLinearModel(len(val), loop, tuple(val), logic).expand()
    return chain_model(val, False, logic)


def check_fragment(f: ClausalFormula) -> None:
    frag = classify(f)
    if not (frag.horn and frag.box_only):
        raise FragmentError("hornbox needs a Horn-box formula "
                            f"(horn={frag.horn}, box_only={frag.box_only})")


def horn_box_sat(logic: Logic, f: ClausalFormula, *, rng: Optional[random.Random] = None,
                 record: bool = True, compact: bool = True,
                 structure_out: Optional[list] = None) -> SatResult:
    """Decide satisfiability of a Horn-box formula in ``logic``.

    ``rng`` randomises the order in which pending facts are processed (the
    result does not depend on it).  The final structure is appended to
    ``structure_out`` when given.  ``compact`` merges redundant trailing
    worlds of the witness (see ``extract_model``).
    """
    check_fragment(f)
    s = new_structure(logic, f, record=record, rng=rng)
    shortened = False
    while True:
        if len(s) == s.bound:
            s.close_last()
        ok = s.run()
        if not ok:
            ok = shorten(logic, s, len(s) - 1)
            shortened = True
            break
        if len(s) == s.bound:
            break
        s.add_world()
    if structure_out is not None:
        structure_out.append(s)
    info = {"worlds": len(s), "bound": s.bound, "shortened": shortened, "firings": s.firings}
    if not ok:
        return SatResult(Verdict.UNSAT, None, s.trace, None, "hornbox", info)
    looping = logic.transitive and not shortened
    model = extract_model(s, logic, looping, compact)
    bad = failing_clauses(model, "w0", f)
    if bad:
        raise VerificationError(f"hornbox witness fails clauses {bad}")
    info["loop_last"] = looping
    return SatResult(Verdict.SAT, model, s.trace, "w0", "hornbox", info)


def replay(trace: Sequence[TraceEvent]) -> Tuple[List[set], List[set]]:
    """Rebuild (H, L) per world from a trace."""
    H: List[set] = []
    L: List[set] = []
    for ev in trace:
        if ev.kind == "add_world":
            H.append(set())
            L.append(set())
        elif ev.kind == "remove_world":
            H.pop()
            L.pop()
        elif ev.kind == "add":
            H[ev.world].add(ev.item)
        elif ev.kind == "settle":
            H[ev.world].discard(ev.item)
            L[ev.world].add(ev.item)
    return H, L
