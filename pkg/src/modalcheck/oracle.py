"""Brute-force ground truth for the differential tests.

Two candidate classes are supported.  ``PRELINEAR`` covers simple paths and
lassos with at most ``max_worlds`` worlds, ``ROOTED_ANY`` covers every digraph
on at most ``max_worlds`` worlds whose worlds are all reachable from ``w0``.
Frames are closed per logic before use.

``enumerate_models`` is the literal enumeration.  ``brute_force_sat`` decides
the same question without materialising every model:

* ``ROOTED_ANY`` evaluates the formula on each frame for all valuations at
  once (``kripke.TruthTable``).
* ``PRELINEAR`` runs a backward search over chain suffixes.  On a path the
  truth of every subformula at position k depends only on the valuation at k
  and on a few subformula values at k+1, so suffixes with equal values there
  are interchangeable.  The search explores every distinct suffix state once,
  layer by layer, which covers every path and lasso up to the bound.

Both methods are checked against ``enumerate_models`` plus ``model_check`` in
the test suite, and every SAT answer is re-verified by the model checker.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .formulas import (
    And, Box, ClausalFormula, Dia, Formula, Logic, Not, Or, Prop, Top, classify,
    subformulas,
)
from .kripke import (
    KripkeModel, TruthTable, chain_model, chain_relation, close_relation,
    failing_clauses, world_name,
)
from .results import SatResult, VerificationError, Verdict

DEFAULT_GUARD = 2 ** 30


class Shape(enum.Enum):
    PRELINEAR = "prelinear"
    ROOTED_ANY = "rooted-any"


class GuardExceeded(RuntimeError):
    pass


def guard_limit() -> int:
    raw = os.environ.get("MODALCHECK_GUARD")
    if raw is None:
        return DEFAULT_GUARD
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"MODALCHECK_GUARD must be an integer, got {raw!r}") from None


@dataclass(frozen=True)
class OracleConfig:
    logic: Logic
    alphabet: Tuple[str, ...]
    max_worlds: int
    shape: Shape = Shape.PRELINEAR

    def __post_init__(self):
        if self.max_worlds < 1:
            raise ValueError("max_worlds must be at least 1")
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))


def theorem_bound(logic: Logic, f: ClausalFormula) -> int:
    """World budget under which pre-linear search is complete for Horn-box input."""
    if logic in (Logic.K, Logic.T):
        return f.depth + 1
    return max(1, f.length)


def config_for(f: ClausalFormula, logic: Logic, max_worlds: Optional[int] = None,
               shape: Shape = Shape.PRELINEAR) -> OracleConfig:
    if max_worlds is None:
        max_worlds = theorem_bound(logic, f)
    return OracleConfig(logic, tuple(f.alphabet), max_worlds, shape)


# --------------------------------------------------------------------------
# Explicit enumeration


def enumerate_frames(cfg: OracleConfig) -> Iterator[Tuple[List[str], frozenset]]:
    """Closed frames in canonical order, each exactly once."""
    for n in range(1, cfg.max_worlds + 1):
        worlds = [world_name(i) for i in range(n)]
        seen = set()
        if cfg.shape is Shape.PRELINEAR:
            for loop in (False, True):
                rel = chain_relation(n, loop, cfg.logic)
                if rel not in seen:
                    seen.add(rel)
                    yield worlds, rel
            continue
        pairs = [(i, j) for i in range(n) for j in range(n)]
        for mask in range(1 << len(pairs)):
            edges = [pairs[b] for b in range(len(pairs)) if mask >> b & 1]
            if not _all_reachable(n, edges):
                continue
            rel = close_relation({(worlds[i], worlds[j]) for i, j in edges}, worlds, cfg.logic)
            if rel not in seen:
                seen.add(rel)
                yield worlds, rel


def _all_reachable(n: int, edges: Sequence[Tuple[int, int]]) -> bool:
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for a, b in edges:
            if a == u and b not in seen:
                seen.add(b)
                stack.append(b)
    return len(seen) == n


def candidate_count(cfg: OracleConfig) -> int:
    """Number of candidates (PRELINEAR) or an upper bound on it (ROOTED_ANY)."""
    nl = len(cfg.alphabet)
    total = 0
    for n in range(1, cfg.max_worlds + 1):
        frames = 2 if cfg.shape is Shape.PRELINEAR else 2 ** (n * n)
        total += frames * 2 ** (nl * n)
    return total


def _guard(count: int) -> None:
    limit = guard_limit()
    if count > limit:
        raise GuardExceeded(f"search space of {count} candidates exceeds the guard {limit} "
                            "(set MODALCHECK_GUARD to override)")


def enumerate_models(cfg: OracleConfig) -> Iterator[Tuple[KripkeModel, str]]:
    _guard(candidate_count(cfg))
    letters = cfg.alphabet
    nl = len(letters)
    for worlds, rel in enumerate_frames(cfg):
        for v in range(1 << (nl * len(worlds))):
            val = {w: [p for i, p in enumerate(letters) if v >> (k * nl + i) & 1]
                   for k, w in enumerate(worlds)}
            yield KripkeModel(worlds, rel, val), "w0"


# --------------------------------------------------------------------------
# Decision


def _verdict_when_unsat(f: ClausalFormula, cfg: OracleConfig) -> Verdict:
    frag = classify(f)
    complete = (frag.horn and frag.box_only and cfg.shape is Shape.PRELINEAR
                and cfg.max_worlds >= theorem_bound(cfg.logic, f))
    return Verdict.UNSAT if complete else Verdict.UNSAT_UP_TO_BOUND


def brute_force_sat(f: ClausalFormula, cfg: OracleConfig, method: str = "auto") -> SatResult:
    """First satisfying (model, root) in the configured class, or UNSAT.

    ``method`` is ``enumerate`` (frame by frame over all valuations),
    ``chain`` (suffix search, PRELINEAR only) or ``auto``.
    """
    missing = f.alphabet - set(cfg.alphabet)
    if missing:
        raise ValueError(f"oracle alphabet lacks letters {sorted(missing)}")
    if method == "auto":
        method = "chain" if cfg.shape is Shape.PRELINEAR else "enumerate"
    if method == "chain":
        if cfg.shape is not Shape.PRELINEAR:
            raise ValueError("the chain method only covers pre-linear models")
        found = _chain_search(f.to_formula(), cfg)
    elif method == "enumerate":
        found = _enumerate_search(f.to_formula(), cfg)
    else:
        raise ValueError(f"unknown oracle method {method!r}")
    model, info = found
    info["method"] = method
    info["max_worlds"] = cfg.max_worlds
    if model is None:
        return SatResult(_verdict_when_unsat(f, cfg), None, [], None, "oracle", info)
    bad = failing_clauses(model, "w0", f)
    if bad:
        raise VerificationError(f"oracle model fails clauses {bad}")
    return SatResult(Verdict.SAT, model, [], "w0", "oracle", info)


def formula_sat(f: Formula, cfg: OracleConfig) -> SatResult:
    """Oracle over an arbitrary (non-clausal) formula; verdicts are bounded."""
    from .kripke import model_check
    if cfg.shape is Shape.PRELINEAR:
        model, info = _chain_search(f, cfg)
    else:
        model, info = _enumerate_search(f, cfg)
    if model is None:
        return SatResult(Verdict.UNSAT_UP_TO_BOUND, None, [], None, "oracle", info)
    if not model_check(model, "w0", f):
        raise VerificationError("oracle model does not satisfy the formula")
    return SatResult(Verdict.SAT, model, [], "w0", "oracle", info)


def _enumerate_search(f: Formula, cfg: OracleConfig):
    letters = cfg.alphabet
    counted = 0
    limit = guard_limit()
    for worlds, rel in enumerate_frames(cfg):
        size = 1 << (len(letters) * len(worlds))
        counted += size
        if counted > limit:
            raise GuardExceeded(f"search space exceeds the guard {limit} "
                                "(set MODALCHECK_GUARD to override)")
        table = TruthTable(worlds, rel, letters)
        root = table.evaluate(f)[0]
        if root:
            v = (root & -root).bit_length() - 1
            return KripkeModel(worlds, rel, table.decode(v)), {"candidates": counted}
    return None, {"candidates": counted}


def _chain_search(f: Formula, cfg: OracleConfig):
    """Exhaustive search over paths and lassos by suffix states."""
    logic = cfg.logic
    nodes: List[Formula] = []
    index: Dict[Formula, int] = {}
    for node in subformulas(f):
        if node not in index:
            index[node] = len(nodes)
            nodes.append(node)
    modal = [i for i, n in enumerate(nodes) if isinstance(n, (Box, Dia))]
    # subformula values a predecessor reads from its successor
    if logic in (Logic.K, Logic.T):
        iface = sorted({index[nodes[i].arg] for i in modal})
    elif logic is Logic.K4:
        iface = sorted({index[nodes[i].arg] for i in modal} | set(modal))
    else:
        iface = sorted(modal)
    iface = iface or [index[f]]
    slot = {c: j for j, c in enumerate(iface)}
    letters = cfg.alphabet
    nv = 1 << len(letters)
    vbits = (np.arange(nv)[:, None] >> np.arange(len(letters))[None, :]) & 1
    root = index[f]
    limit = guard_limit()

    def layer(nxt: Optional[np.ndarray], loop: bool) -> np.ndarray:
        s = 1 if nxt is None else nxt.shape[0]
        rows = nv * s
        vidx = np.repeat(np.arange(nv), s)
        vals = np.zeros((rows, len(nodes)), dtype=bool)
        if nxt is not None:
            nx = np.tile(nxt, (nv, 1))
        for c, node in enumerate(nodes):
            if isinstance(node, Top):
                vals[:, c] = True
            elif isinstance(node, Prop):
                vals[:, c] = vbits[vidx, letters.index(node.name)]
            elif isinstance(node, Not):
                vals[:, c] = ~vals[:, index[node.arg]]
            elif isinstance(node, And):
                vals[:, c] = vals[:, index[node.left]] & vals[:, index[node.right]]
            elif isinstance(node, Or):
                vals[:, c] = vals[:, index[node.left]] | vals[:, index[node.right]]
            else:
                a = index[node.arg]
                box = isinstance(node, Box)
                if nxt is None:
                    if logic.reflexive or loop:
                        vals[:, c] = vals[:, a]
                    else:
                        vals[:, c] = box
                    continue
                if logic is Logic.K:
                    vals[:, c] = nx[:, slot[a]]
                elif logic is Logic.T:
                    vals[:, c] = (vals[:, a] & nx[:, slot[a]]) if box else (vals[:, a] | nx[:, slot[a]])
                elif logic is Logic.K4:
                    vals[:, c] = ((nx[:, slot[a]] & nx[:, slot[c]]) if box
                                  else (nx[:, slot[a]] | nx[:, slot[c]]))
                else:
                    vals[:, c] = (vals[:, a] & nx[:, slot[c]]) if box else (vals[:, a] | nx[:, slot[c]])
        return vals

    visited: Dict[bytes, int] = {}
    parent: List[Tuple[int, int, bool]] = []     # (valuation, next state id or -1, loop)
    states: List[np.ndarray] = []
    explored = 0
    loops = (False,) if logic.reflexive else (False, True)

    def absorb(vals: np.ndarray, nxt_ids: Optional[List[int]], loop: bool):
        """Register new suffix states; return a satisfying row's chain if any."""
        s = 1 if nxt_ids is None else len(nxt_ids)
        hit = np.flatnonzero(vals[:, root])
        sat = None
        if hit.size:
            r = int(hit[0])
            sat = (r // s, -1 if nxt_ids is None else nxt_ids[r % s], loop)
        new_rows = []
        packed = np.packbits(vals[:, iface], axis=1)
        uniq, first = np.unique(packed, axis=0, return_index=True)
        for key_row, r in sorted(zip(uniq, first), key=lambda t: t[1]):
            key = key_row.tobytes()
            if key in visited:
                continue
            visited[key] = len(parent)
            r = int(r)
            parent.append((r // s, -1 if nxt_ids is None else nxt_ids[r % s], loop))
            states.append(vals[r, iface])
            new_rows.append(visited[key])
        return sat, new_rows

    def unwind(step: Tuple[int, int, bool]) -> KripkeModel:
        vals = []
        v, nxt, loop = step
        while True:
            vals.append([p for i, p in enumerate(letters) if v >> i & 1])
            if nxt < 0:
                break
            v, nxt, loop = parent[nxt]
        return chain_model(vals, loop, logic)

    frontier: List[int] = []
    for loop in loops:
        vals = layer(None, loop)
        explored += vals.shape[0]
        sat, new = absorb(vals, None, loop)
        if sat is not None:
            return unwind(sat), {"states": len(parent), "candidates": explored, "worlds": 1}
        frontier.extend(new)
    depth = 1
    while frontier and depth < cfg.max_worlds:
        if nv * len(frontier) > limit:
            raise GuardExceeded(f"suffix layer of {nv * len(frontier)} rows exceeds the guard {limit}")
        nxt = np.array([states[i] for i in frontier], dtype=bool).reshape(len(frontier), len(iface))
        vals = layer(nxt, False)
        explored += vals.shape[0]
        depth += 1
        sat, frontier = absorb(vals, frontier, False)
        if sat is not None:
            return unwind(sat), {"states": len(parent), "candidates": explored, "worlds": depth}
    return None, {"states": len(parent), "candidates": explored}
