import pytest
from hypothesis import given
from hypothesis import strategies as st

from relik.errors import ParseError
from relik.formulas import (
    CONDITIONAL,
    FALSE,
    LIKELIHOOD,
    PROP,
    TRUE,
    And,
    Cond,
    Likelier,
    Not,
    Or,
    Var,
    conj,
    disj,
    holds_in,
    kind,
    modal_leaves,
    parse_cond,
    parse_formula,
    parse_l,
    parse_prop,
    to_text,
    variables,
)

from support import TWO_COVER_TEXT

p, q, r = Var("p"), Var("q"), Var("r")

props = st.recursive(
    st.sampled_from([p, q, r, TRUE, FALSE]),
    lambda kids: st.one_of(
        kids.map(Not),
        st.tuples(kids, kids).map(lambda t: And(*t)),
        st.tuples(kids, kids).map(lambda t: Or(*t)),
    ),
    max_leaves=6,
)


def over(leaf):
    return st.recursive(
        leaf,
        lambda kids: st.one_of(
            kids.map(Not),
            st.tuples(kids, kids).map(lambda t: And(*t)),
            st.tuples(kids, kids).map(lambda t: Or(*t)),
        ),
        max_leaves=4,
    )


l_formulas = over(st.tuples(props, props).map(lambda t: Likelier(*t)))
cond_formulas = over(st.tuples(props, props).map(lambda t: Cond(*t)))


def test_simple_conjunction():
    assert parse_prop("p & !q") == And(p, Not(q))


def test_example_formula():
    f = parse_l(TWO_COVER_TEXT)
    notp_q = And(Not(p), q)
    assert f == And(
        And(Likelier(p, notp_q), Not(Likelier(And(p, q), notp_q))),
        Not(Likelier(And(p, Not(q)), notp_q)),
    )
    assert len(modal_leaves(f)) == 3


def test_precedence_and_implication_sugar():
    assert parse_prop("p | q & r") == Or(p, And(q, r))
    assert parse_prop("!p & q") == And(Not(p), q)
    assert parse_prop("p -> q -> r") == Or(Not(p), Or(Not(q), r))
    assert parse_prop("p | q -> r") == Or(Not(Or(p, q)), r)
    # >> binds looser than every propositional operator
    assert parse_l("p -> q >> r & p") == Likelier(Or(Not(p), q), And(r, p))
    assert parse_cond("true => p") == Cond(TRUE, p)


def test_constants_and_names():
    assert parse_prop("true") == TRUE and parse_prop("false") == FALSE
    assert parse_prop("x_1") == Var("x_1")
    assert variables(parse_l("(a & b) >> !c")) == {"a", "b", "c"}


@pytest.mark.parametrize(
    "text",
    [
        "p >> (q >> r)",
        "(p >> q) >> r",
        "p >> q >> r",
        "p => (q >> r)",
        "(p >> q) & p",
        "(p >> q) | (p => q)",
        "(p >> q) -> (q >> p)",
        "p &",
        "(p",
        "p)",
        "P",
        "p $ q",
        "",
    ],
)
def test_rejected(text):
    with pytest.raises(ParseError) as info:
        parse_formula(text)
    assert info.value.position is not None


def test_error_reports_expected_tokens():
    with pytest.raises(ParseError) as info:
        parse_formula("p &")
    assert info.value.position == 3
    assert "(" in info.value.expected


def test_layer_specific_parsers():
    with pytest.raises(ParseError):
        parse_l("p & q")
    with pytest.raises(ParseError):
        parse_prop("p >> q")
    with pytest.raises(ParseError):
        parse_cond("p >> q")
    assert kind(parse_formula("p")) == PROP
    assert kind(parse_formula("p >> q")) == LIKELIHOOD
    assert kind(parse_formula("!(p => q)")) == CONDITIONAL


def test_kind_rejects_hand_built_mixtures():
    with pytest.raises(ValueError):
        kind(And(p, Likelier(p, q)))
    with pytest.raises(ValueError):
        kind(Likelier(Likelier(p, q), r))


def test_printer_examples():
    canonical = "(p >> !p & q) & !(p & q >> !p & q) & !(p & !q >> !p & q)"
    assert to_text(parse_l(TWO_COVER_TEXT)) == canonical
    assert parse_l(canonical) == parse_l(TWO_COVER_TEXT)
    assert to_text(Not(And(p, q))) == "!(p & q)"
    assert to_text(And(p, Or(q, r))) == "p & (q | r)"


def test_conj_disj_helpers():
    assert conj() == TRUE and disj() == FALSE
    assert conj(p, q, r) == And(And(p, q), r)
    assert holds_in(disj(p, q), {"q"}) and not holds_in(conj(p, q), {"q"})


@given(props)
def test_prop_round_trip(f):
    assert parse_prop(to_text(f)) == f


@given(l_formulas)
def test_likelihood_round_trip(f):
    assert parse_l(to_text(f)) == f
    assert str(f) == to_text(f)


@given(cond_formulas)
def test_conditional_round_trip(f):
    assert parse_cond(to_text(f)) == f
