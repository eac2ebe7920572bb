import random

from hypothesis import HealthCheck, settings, strategies as st

from modalcheck.formulas import (
    TOP_LIT, And, Box, ClausalFormula, Clause, Dia, Modality, Not, Or, PositiveLiteral,
    Prop, Top,
)
from modalcheck.kripke import KripkeModel, TruthTable, close_relation, world_name

settings.register_profile("default", deadline=None, max_examples=150,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

LETTERS3 = ("p", "q", "r")

formulas = st.recursive(
    st.one_of(st.just(Top()), st.just(Not(Top())), st.sampled_from(LETTERS3).map(Prop)),
    lambda sub: st.one_of(
        sub.map(Not), sub.map(Box), sub.map(Dia),
        st.builds(And, sub, sub), st.builds(Or, sub, sub),
    ),
    max_leaves=8,
)


def literals(modalities=(Modality.BOX, Modality.DIA), max_depth=3, top=True):
    atoms = st.sampled_from(((None,) if top else ()) + LETTERS3)
    return st.builds(PositiveLiteral,
                     st.lists(st.sampled_from(modalities), max_size=max_depth).map(tuple),
                     atoms)


@st.composite
def clauses(draw, modalities=(Modality.BOX, Modality.DIA), max_head=2, max_body=3):
    s = draw(st.integers(0, 2))
    lit = literals(modalities)
    if draw(st.booleans()):
        body = (TOP_LIT,)
    else:
        body = tuple(draw(st.lists(literals(modalities, top=False), min_size=1, max_size=max_body)))
    head = draw(st.one_of(st.none(),
                          st.lists(lit, min_size=1, max_size=max_head).map(tuple)))
    return Clause(s, body, head)


def clausal_formulas(modalities=(Modality.BOX, Modality.DIA), max_head=2, max_clauses=4):
    return st.lists(clauses(modalities, max_head), min_size=1, max_size=max_clauses).map(ClausalFormula)


horn_box_formulas = clausal_formulas((Modality.BOX,), max_head=1)


@st.composite
def models(draw, logic=None, max_worlds=3, letters=LETTERS3):
    n = draw(st.integers(1, max_worlds))
    worlds = [world_name(i) for i in range(n)]
    pairs = [(u, v) for u in worlds for v in worlds]
    rel = {e for e in pairs if draw(st.booleans())}
    if logic is not None:
        rel = close_relation(rel, worlds, logic)
    val = {w: [p for p in letters if draw(st.booleans())] for w in worlds}
    return KripkeModel(worlds, rel, val)


def satisfying_models(f, worlds, rel, letters, root=0):
    """All models on the frame (worlds, rel) satisfying formula ``f`` at ``worlds[root]``."""
    table = TruthTable(worlds, rel, letters)
    bits = table.evaluate(f)[root]
    out = []
    v = 0
    while bits:
        if bits & 1:
            out.append(KripkeModel(worlds, rel, table.decode(v)))
        bits >>= 1
        v += 1
    return out


def rng(seed):
    return random.Random(seed)
