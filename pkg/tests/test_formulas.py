import pytest
from hypothesis import given, strategies as st

from modalcheck.formulas import (
    BOTTOM_F, TOP_LIT, And, Box, ClausalFormula, Clause, Dia, Logic, Modality, Not, Or,
    ParseError, PositiveLiteral, Prop, Top, classify, closure, modal_depth, parse,
    parse_clausal, parse_literal, to_text,
)

from conftest import clausal_formulas, formulas

p, q, r = Prop("p"), Prop("q"), Prop("r")
B, D = Modality.BOX, Modality.DIA


def lit(text):
    return parse_literal(text)


# parse ------------------------------------------------------------------

def test_parse_conjunction_with_box():
    assert parse("p & []q") == And(p, Box(q))


def test_parse_box_exponent_expands():
    assert parse("[]^2 (p -> q)") == Box(Box(Or(Not(p), q)))


def test_parse_unbalanced_parenthesis():
    with pytest.raises(ParseError, match="unbalanced parenthesis"):
        parse("(p | q")


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse("p & $")
    assert info.value.col == 5


def test_implication_is_right_associative_and_lowest():
    assert parse("p -> q -> r") == Or(Not(p), Or(Not(q), r))
    assert parse("p & q -> r") == Or(Not(And(p, q)), r)


def test_bottom_is_not_top():
    assert parse("F") == BOTTOM_F == Not(Top())


def test_reserved_letters_rejected_by_default():
    with pytest.raises(ParseError):
        parse("_f0 & p")
    assert parse("_f0", allow_reserved=True) == Prop("_f0")


def test_diamonds_bind_tighter_than_connectives():
    assert parse("<>p & q") == And(Dia(p), q)
    assert parse("~[]p | q") == Or(Not(Box(p)), q)


# parse_clausal ----------------------------------------------------------

def test_parse_clausal_two_clauses():
    f = parse_clausal("T -> p\np -> F")
    assert f.clauses == (Clause(0, (TOP_LIT,), (lit("p"),)), Clause(0, (lit("p"),), None))


def test_parse_clausal_prefix_form():
    (c,) = parse_clausal("[]^1 (p & []q -> r)").clauses
    assert c.prefix_depth == 1
    assert c.body == (lit("p"), lit("[]q"))
    assert c.head == (lit("r"),)


def test_parse_clausal_counts_n_and_m():
    (c,) = parse_clausal("p -> q | r | s").clauses
    assert (c.n, c.m) == (1, 3)


def test_negative_head_rejected():
    with pytest.raises(ParseError, match="negative literal in head position"):
        parse_clausal("p -> ~q")


def test_units_are_normalised():
    f = parse_clausal("[]p\n~<>q\n# comment\n\n")
    assert f.clauses == (Clause(0, (TOP_LIT,), (lit("[]p"),)), Clause(0, (lit("<>q"),), None))


def test_disjunctive_clause_syntax():
    (c,) = parse_clausal("~p | ~[]q | r").clauses
    assert c == Clause(0, (lit("p"), lit("[]q")), (lit("r"),))


def test_parse_error_reports_line():
    with pytest.raises(ParseError) as info:
        parse_clausal("T -> p\np -> ~q")
    assert info.value.line == 2


def test_alphabet_is_letters_of_clauses():
    f = parse_clausal("[]p -> <>q\nT -> T")
    assert f.alphabet == frozenset({"p", "q"})


# modal depth ------------------------------------------------------------

def test_modal_depth_examples():
    assert modal_depth(p) == 0
    assert modal_depth(Box(Dia(p))) == 2
    assert modal_depth(parse_clausal("[]^1 ([]p -> [][]q)")) == 3


@given(formulas)
def test_modal_depth_at_most_length(f):
    assert modal_depth(f) <= len(to_text(f))


@given(clausal_formulas())
def test_clause_depth_is_prefix_plus_literal(f):
    for c in f.clauses:
        assert c.depth == c.prefix_depth + max(l.depth for l in c.literals)
    assert f.depth == max(c.depth for c in f.clauses)
    assert modal_depth(f) == modal_depth(f.to_formula())
    assert f.depth <= f.length


# closure ----------------------------------------------------------------

def test_closure_of_unit_clause():
    f = parse_clausal("T -> p")
    assert closure(f) == {Top(), p, Or(Not(Top()), p)}


def test_closure_of_negative_box_clause():
    cl = closure(parse_clausal("[]p -> F"))
    assert {Box(p), p, Top()} <= cl


@given(clausal_formulas())
def test_closure_bounded_by_length(f):
    assert len(closure(f)) <= f.length


@given(clausal_formulas())
def test_closure_contains_literals_and_suffixes(f):
    cl = closure(f)
    for c in f.clauses:
        for l in c.literals:
            for s in l.suffixes():
                assert s.to_formula() in cl


# classify ---------------------------------------------------------------

def test_classify_disjunction_is_krom_not_horn():
    d = classify(parse_clausal("T -> p | q"))
    assert d.krom and not d.horn and not d.core


def test_classify_diamond_unit():
    d = classify(parse_clausal("T -> <>p"))
    assert d.horn and d.krom and d.core and d.dia_only and not d.box_only


def test_classify_box_implication():
    d = classify(parse_clausal("[]p -> q"))
    assert d.core and d.box_only and not d.dia_only


def test_classify_prefix_boxes_allowed_in_dia_only():
    d = classify(parse_clausal("[]^3 (<>p -> q)"))
    assert d.dia_only and not d.box_only


def test_classify_modality_free_is_both():
    d = classify(parse_clausal("[]^2 (p & q -> r)"))
    assert d.box_only and d.dia_only and d.horn and not d.krom


def test_top_body_does_not_count():
    (c,) = parse_clausal("T -> p | q").clauses
    assert c.n == 0 and c.m == 2


def test_descriptor_text():
    assert str(classify(parse_clausal("p -> []q"))) == \
        "horn=yes krom=yes core=yes box_only=yes dia_only=no"


@given(clausal_formulas())
def test_core_is_horn_and_krom(f):
    d = classify(f)
    assert d.core == (d.horn and d.krom)
    if d.box_only and d.dia_only:
        assert all(l.depth == 0 for c in f.clauses for l in c.literals)


@given(clausal_formulas())
def test_dropping_head_disjuncts_preserves_horn(f):
    before = classify(f).horn
    trimmed = ClausalFormula(Clause(c.prefix_depth, c.body, c.head[:1] if c.head else None)
                             for c in f.clauses)
    after = classify(trimmed)
    assert after.horn
    assert before <= after.horn


@given(clausal_formulas())
def test_stripping_modalities_preserves_box_and_dia_only(f):
    d = classify(f)
    stripped = ClausalFormula(
        Clause(c.prefix_depth,
               tuple(PositiveLiteral(l.prefix[1:], l.atom) for l in c.body),
               None if c.head is None else tuple(PositiveLiteral(l.prefix[1:], l.atom) for l in c.head))
        for c in f.clauses)
    e = classify(stripped)
    assert d.box_only <= e.box_only and d.dia_only <= e.dia_only


# printing ---------------------------------------------------------------

def test_print_box():
    assert to_text(Box(p)) == "[]p"


def test_print_prefixed_negative_clause():
    assert to_text(ClausalFormula([Clause(2, (lit("p"),), None)])) == "[]^2 (p -> F)"


@given(formulas)
def test_formula_round_trip(f):
    assert parse(to_text(f)) == f


@given(clausal_formulas())
def test_clausal_round_trip(f):
    assert parse_clausal(str(f)) == f


@given(clausal_formulas())
def test_length_matches_printed_symbols(f):
    assert f.length == sum(ClausalFormula([c]).length for c in f.clauses) + len(f) - 1


def test_length_convention():
    # []^2 weighs 2, F weighs 2, parentheses count
    assert parse_clausal("T -> p").length == 3
    assert parse_clausal("[]^2 (p -> F)").length == 8
    assert parse_clausal("T -> p\nT -> q").length == 7


def test_logic_flags():
    assert [l.reflexive for l in Logic] == [False, True, False, True]
    assert [l.transitive for l in Logic] == [False, False, True, True]
    assert Logic.from_name("s4") is Logic.S4
    with pytest.raises(ValueError):
        Logic.from_name("s5")


@given(st.lists(st.sampled_from([B, D]), max_size=4), st.sampled_from([None, "p"]))
def test_literal_suffixes(prefix, atom):
    l = PositiveLiteral(tuple(prefix), atom)
    sufs = list(l.suffixes())
    assert sufs[0] == l and len(sufs) == l.depth + 1
    assert parse_literal(str(l)) == l
