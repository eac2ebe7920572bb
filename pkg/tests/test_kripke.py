import pytest
from hypothesis import given, strategies as st

from modalcheck.formulas import (
    Box, ClausalFormula, Dia, Logic, Modality, Not, Prop, Top, parse, parse_clausal,
)
from modalcheck.kripke import (
    FrameMismatchError, KripkeModel, PreLinearModel, TruthTable, UnknownWorldError,
    chain_model, close_relation, expand, failing_clauses, in_frame_class, intersect,
    is_reflexive, is_transitive, model_check, model_check_clausal, product,
    reflexive_closure, refl_trans_closure, transitive_closure,
)

from conftest import clausal_formulas, formulas, models

p, q = Prop("p"), Prop("q")


def one(letters=(), loop=False):
    return KripkeModel(["w"], [("w", "w")] if loop else [], {"w": letters})


# closures ---------------------------------------------------------------

def test_reflexive_closure_of_empty():
    assert reflexive_closure(set(), ["w"]) == {("w", "w")}


def test_transitive_closure_adds_composite():
    assert ("a", "c") in transitive_closure({("a", "b"), ("b", "c")})


@given(models())
def test_closures_idempotent_and_classified(m):
    w = m.worlds
    for logic in Logic:
        rel = close_relation(m.relation, w, logic)
        assert close_relation(rel, w, logic) == rel
        assert in_frame_class(KripkeModel(w, rel), logic)
    assert refl_trans_closure(m.relation, w) == transitive_closure(reflexive_closure(m.relation, w))


# model_check ------------------------------------------------------------

def test_single_world_letters():
    m = one(["p"])
    assert model_check(m, "w", p)
    assert not model_check(m, "w", q)


def test_dead_end_box_vacuous_diamond_false():
    m = one()
    assert model_check(m, "w", Box(q))
    assert not model_check(m, "w", Dia(Top()))


def test_chain_diamond():
    m = chain_model([[], ["p"]], False, Logic.K)
    assert model_check(m, "w0", Dia(p))
    assert not model_check(m, "w1", Dia(p))


def test_unknown_world():
    with pytest.raises(UnknownWorldError):
        model_check(one(), "nowhere", p)


def test_deep_box_nest_is_fast():
    m = chain_model([["p"]] * 30, False, Logic.K4)
    f = p
    for _ in range(200):
        f = Box(Dia(f)) if len(str(f)) % 2 else Box(f)
    model_check(m, "w0", f)


@given(models(), formulas)
def test_unreachable_worlds_are_ignored(m, f):
    # flipping the valuation of a world no path reaches cannot change the verdict
    extra = KripkeModel(list(m.worlds) + ["x"], m.relation | {("x", m.worlds[0])},
                        {**m.valuation, "x": {"p", "q", "r"}})
    flipped = extra.with_valuation({**extra.valuation, "x": set()})
    assert model_check(extra, m.worlds[0], f) == model_check(flipped, m.worlds[0], f)
    assert model_check(extra, m.worlds[0], f) == model_check(m, m.worlds[0], f)


def _expanded(m, w, f):
    """Hand-expanded semantics, independent of the memoised checker."""
    from modalcheck.formulas import And, Or
    if isinstance(f, Top):
        return True
    if isinstance(f, Prop):
        return f.name in m.valuation[w]
    if isinstance(f, Not):
        return not _expanded(m, w, f.arg)
    if isinstance(f, And):
        return _expanded(m, w, f.left) and _expanded(m, w, f.right)
    if isinstance(f, Or):
        return _expanded(m, w, f.left) or _expanded(m, w, f.right)
    succ = [v for u, v in m.relation if u == w]
    if isinstance(f, Box):
        return all(_expanded(m, v, f.arg) for v in succ)
    return any(_expanded(m, v, f.arg) for v in succ)


@given(models(), formulas)
def test_model_check_matches_expanded_semantics(m, f):
    for w in m.worlds:
        assert model_check(m, w, f) == _expanded(m, w, f)


@given(models(), clausal_formulas())
def test_clausal_checker_agrees_with_formula_expansion(m, f):
    for w in m.worlds:
        assert model_check_clausal(m, w, f) == model_check(m, w, f.to_formula())
        assert (failing_clauses(m, w, f) == []) == model_check_clausal(m, w, f)


def test_clausal_examples():
    assert model_check_clausal(one(["p"]), "w", parse_clausal("T -> p"))
    chain = chain_model([[], ["p"]], False, Logic.K)
    assert not model_check_clausal(chain, "w0", parse_clausal("[]^1 (p -> F)"))


@given(models(max_worlds=3), formulas)
def test_truth_table_matches_model_check(m, f):
    letters = ["p", "q", "r"]
    table = TruthTable(m.worlds, m.relation, letters)
    vals = table.evaluate(f)
    nl = len(letters)
    v = sum(1 << (k * nl + i) for k, w in enumerate(m.worlds)
            for i, a in enumerate(letters) if a in m.valuation[w])
    assert table.decode(v) == m.valuation
    for k, w in enumerate(m.worlds):
        assert bool(vals[k] >> v & 1) == model_check(m, w, f)


# intersection / product -------------------------------------------------

def test_intersection_valuation():
    m1, m2 = one(["p", "q"]), one(["q"])
    assert intersect(m1, m2).valuation["w"] == {"q"}


@given(models())
def test_intersection_idempotent(m):
    assert intersect(m, m) == m


def test_intersection_requires_shared_frame():
    with pytest.raises(FrameMismatchError):
        intersect(one(), one(loop=True))


def test_fork_counterexample_for_diamonds():
    worlds, edges = ["w0", "w1", "w2"], [("w0", "w1"), ("w0", "w2")]
    m1 = KripkeModel(worlds, edges, {"w1": ["p"]})
    m2 = KripkeModel(worlds, edges, {"w2": ["p"]})
    assert model_check(m1, "w0", Dia(p)) and model_check(m2, "w0", Dia(p))
    both = intersect(m1, m2)
    assert all(not both.valuation[w] for w in worlds)
    assert not model_check(both, "w0", Dia(p))


def test_product_of_single_worlds():
    m = product(one(["p", "q"]), one(["q"]))
    assert m.worlds == ("w|w",) and not m.relation and m.valuation["w|w"] == {"q"}


def test_product_of_chain_and_point_has_dead_end_root():
    m1 = chain_model([[], []], False, Logic.K)
    m2 = KripkeModel(["v0"], [], {"v0": ["q"]})
    m = product(m1, m2)
    assert m.successors("w0|v0") == ()
    assert "q" not in m.valuation["w0|v0"]


@given(models(), models())
def test_product_size_and_frame_preservation(m1, m2):
    m = product(m1, m2)
    assert len(m.worlds) == len(m1.worlds) * len(m2.worlds)
    if is_reflexive(m1) and is_reflexive(m2):
        assert is_reflexive(m)
    if is_transitive(m1) and is_transitive(m2):
        assert is_transitive(m)


# pre-linear models ------------------------------------------------------

def test_expand_single_reflexive_world():
    m = expand(PreLinearModel(1, False, (frozenset(),), Logic.T))
    assert m.relation == {("w0", "w0")}


def test_expand_k4_chain_adds_transitive_edges():
    m = expand(PreLinearModel(3, False, (frozenset(),) * 3, Logic.K4))
    assert m.relation == {("w0", "w1"), ("w1", "w2"), ("w0", "w2")}


def test_expand_k4_lasso():
    m = expand(PreLinearModel(2, True, (frozenset(),) * 2, Logic.K4))
    assert {("w0", "w1"), ("w1", "w1")} <= m.relation


def test_loop_needs_transitive_logic():
    with pytest.raises(ValueError):
        PreLinearModel(2, True, (frozenset(),) * 2, Logic.T)


# JSON -------------------------------------------------------------------

@given(models())
def test_json_round_trip(m):
    back, root = KripkeModel.loads(m.dumps(root=m.worlds[0]))
    assert back == m and root == m.worlds[0]


def test_json_rejects_bad_edges():
    with pytest.raises(ValueError):
        KripkeModel.loads('{"worlds": ["a"], "edges": [["a", "b"]], "valuation": {}}')
    with pytest.raises(UnknownWorldError):
        KripkeModel.loads('{"worlds": ["a"], "edges": [], "valuation": {}, "root": "z"}')


def test_empty_world_set_rejected():
    with pytest.raises(ValueError):
        KripkeModel([], [])
