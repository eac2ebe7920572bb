import random

import pytest
from hypothesis import given, settings, strategies as st

from modalcheck.corebox import (
    BOTTOM_SIGNED, TOP_SIGNED, BinaryClause, SignedLiteral, assignment,
    build_implication_graph, core_box_sat, find_contradictory_cycle, literal_pool, prepare,
    strongly_connected_components,
)
from modalcheck.formulas import (
    TOP_LIT, ClausalFormula, Clause, Logic, Modality, classify, parse_clausal, parse_literal,
)
from modalcheck.generate import exhaustive_horn_box, random_horn_box
from modalcheck.hornbox import horn_box_sat
from modalcheck.kripke import model_check_clausal
from modalcheck.results import FragmentError, Verdict, VerificationError

from conftest import LETTERS3


def pos(text):
    return SignedLiteral(True, parse_literal(text))


def neg(text):
    return SignedLiteral(False, parse_literal(text))


CLASH = parse_clausal("T -> []p\n[]p -> F")
BOX_NEG = parse_clausal("[]p -> F")
PROP = parse_clausal("T -> p\np -> F")


@st.composite
def core_box(draw):
    lits = st.builds(lambda d, a: parse_literal("[]" * d + a),
                     st.integers(0, 2), st.sampled_from(LETTERS3))
    out = []
    for _ in range(draw(st.integers(1, 5))):
        s = draw(st.integers(0, 2))
        shape = draw(st.integers(0, 3))
        a, b = draw(lits), draw(lits)
        out.append([Clause(s, (TOP_LIT,), (a,)), Clause(s, (a,), None),
                    Clause(s, (a,), (b,)), Clause(s, (TOP_LIT,), None)][shape])
    return ClausalFormula(out)


# prepare ---------------------------------------------------------------

def test_prepare_adds_trivial_clause_per_depth():
    pf = prepare(parse_clausal("T -> p"))
    assert BinaryClause(0, TOP_SIGNED, TOP_SIGNED) in pf.clauses
    pf = prepare(BOX_NEG)
    assert {c.depth for c in pf.clauses if c.a == c.b == TOP_SIGNED} == {0, 1}


def test_units_become_binary():
    pf = prepare(parse_clausal("T -> p\n[]q -> F"))
    assert BinaryClause(0, pos("p"), BOTTOM_SIGNED) in pf.clauses
    assert BinaryClause(0, neg("[]q"), BOTTOM_SIGNED) in pf.clauses


@given(core_box())
def test_prepare_idempotent(f):
    assert prepare(prepare(f)) == prepare(f)


@pytest.mark.parametrize("text", ["T -> p | q", "p & q -> r", "T -> <>p"])
def test_prepare_rejects_non_core_box(text):
    with pytest.raises(FragmentError):
        prepare(parse_clausal(text))


# graph construction -----------------------------------------------------

def test_clash_graph_at_depth_one():
    g = build_implication_graph(CLASH, 1)
    for a, b in [(pos("T"), pos("[]p")), (pos("[]p"), neg("T")), (neg("T"), pos("T"))]:
        assert g.has_edge((a, 0), (b, 0))


def test_jump_edges():
    g = build_implication_graph(BOX_NEG, 2)
    for x, y in [(pos("[]p"), pos("p")), (neg("[]p"), neg("p"))]:
        assert g.has_edge((x, 0), (y, 1)) and g.has_edge((y, 1), (x, 0))


def test_no_jumps_at_depth_one():
    g = build_implication_graph(BOX_NEG, 1)
    assert all(a[1] == b[1] == 0 for a, b in g.edges())


def _independent_edges(f, D):
    """Edge set re-derived from the construction rules, sharing no code with the graph."""
    pf = prepare(f)
    pool = set()
    for c in pf.clauses:
        for s in (c.a, c.b):
            l = s.literal
            while True:
                pool.add(l)
                if not l.prefix:
                    break
                l = l.inner()
    edges = set()
    for c in pf.clauses:
        if c.depth < D:
            edges.add(((-c.a, c.depth), (c.b, c.depth)))
            edges.add(((-c.b, c.depth), (c.a, c.depth)))
    for l in pool:
        if not l.prefix:
            continue
        for sign in (True, False):
            outer, inner = SignedLiteral(sign, l), SignedLiteral(sign, l.inner())
            for d in range(D - 1):
                edges.add(((outer, d), (inner, d + 1)))
                edges.add(((inner, d + 1), (outer, d)))
        edges.add(((SignedLiteral(False, l), D - 1), (BOTTOM_SIGNED, D - 1)))
        edges.add(((TOP_SIGNED, D - 1), (SignedLiteral(True, l), D - 1)))
    return edges


@settings(max_examples=100)
@given(core_box(), st.integers(1, 4))
def test_edges_match_independent_construction(f, D):
    g = build_implication_graph(f, D)
    assert set(g.edges()) == _independent_edges(f, D)
    assert g.num_vertices <= 2 * len(literal_pool(prepare(f))) * D


@settings(max_examples=100)
@given(core_box(), st.integers(1, 4), st.randoms(use_true_random=False))
def test_duality(f, D, rnd):
    g = build_implication_graph(f, D)
    verts = g.vertices()
    for _ in range(30):
        a, b = rnd.choice(verts), rnd.choice(verts)
        if g.reachable(a, b):
            assert g.reachable((-b[0], b[1]), (-a[0], a[1]))


def test_dump_format():
    g = build_implication_graph(CLASH, 1)
    assert "(+T,0) -> (+[]p,0)" in g.dump().splitlines()


# SCC and cycles --------------------------------------------------------

def test_scc_small_graph():
    comp = strongly_connected_components([[1], [2], [0, 3], []])
    assert comp[0] == comp[1] == comp[2] != comp[3]
    assert comp[3] < comp[0]     # sinks are numbered first


@given(st.lists(st.lists(st.integers(0, 7), max_size=3), min_size=8, max_size=8))
def test_scc_matches_mutual_reachability(adj):
    comp = strongly_connected_components(adj)

    def reach(u):
        seen, stack = {u}, [u]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen
    r = [reach(u) for u in range(8)]
    for u in range(8):
        for v in range(8):
            assert (comp[u] == comp[v]) == (v in r[u] and u in r[v])


def test_propositional_cycle():
    w = find_contradictory_cycle(build_implication_graph(PROP, 1))
    assert w is not None
    assert (TOP_SIGNED, 0) in w.path and (BOTTOM_SIGNED, 0) in w.path


def test_box_negation_has_no_cycle_at_two():
    assert find_contradictory_cycle(build_implication_graph(BOX_NEG, 2)) is None


@pytest.mark.parametrize("D", [1, 2])
def test_clash_has_cycle_at_every_admissible_length(D):
    assert find_contradictory_cycle(build_implication_graph(CLASH, D)) is not None


@settings(max_examples=80)
@given(core_box(), st.integers(1, 3))
def test_cycle_witness_is_a_closed_walk(f, D):
    g = build_implication_graph(f, D)
    w = find_contradictory_cycle(g)
    if w is None:
        assert assignment(g) is not None
        return
    assert w.path[0] == w.path[-1] == w.anchor
    assert (-w.anchor[0], w.anchor[1]) in w.path
    for a, b in zip(w.path, w.path[1:]):
        assert g.has_edge(a, b)


# decision --------------------------------------------------------------

def test_decisions():
    assert core_box_sat(PROP).verdict is Verdict.UNSAT
    assert core_box_sat(BOX_NEG).sat
    assert core_box_sat(CLASH).verdict is Verdict.UNSAT


def test_unsat_trace_has_cycle_per_length():
    res = core_box_sat(CLASH)
    assert [d for d, _ in res.trace] == [1, 2]
    assert all(w is not None for _, w in res.trace)


def test_dead_end_edges_are_needed():
    # without them the D=1 graph accepts []p false at a world with no successor
    f = parse_clausal("[]p -> F\n[]^1 (T -> p)")
    assert horn_box_sat(Logic.K, f).verdict is Verdict.UNSAT
    assert core_box_sat(f).verdict is Verdict.UNSAT
    with pytest.raises(VerificationError):
        core_box_sat(f, dead_end=False)


@settings(max_examples=300)
@given(core_box())
def test_agrees_with_hornbox(f):
    a, b = core_box_sat(f), horn_box_sat(Logic.K, f)
    assert a.verdict == b.verdict
    if a.sat:
        assert model_check_clausal(a.witness, "w0", f)
        assert len(a.witness.worlds) <= f.depth + 1


def test_agreement_on_exhaustive_core_instances():
    n = 0
    for f in exhaustive_horn_box(11):
        if classify(f).core:
            n += 1
            assert core_box_sat(f).verdict == horn_box_sat(Logic.K, f).verdict
    assert n > 500


def test_agreement_on_random_core_instances():
    rng = random.Random(7)
    n = 0
    while n < 300:
        f = random_horn_box(rng, max_body=1)
        if classify(f).core:
            n += 1
            assert core_box_sat(f).verdict == horn_box_sat(Logic.K, f).verdict
