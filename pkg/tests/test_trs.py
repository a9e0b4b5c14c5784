import random

import pytest
from hypothesis import given
from strategies import ground_terms, seeds

from irew import fixtures as fx
from irew.errors import FormatError, InvalidPosition, NoMatch, ReplayError, SubstMismatch, TermSyntaxError
from irew.generators import random_sequence
from irew.trs import (
    FiniteReduction,
    Step,
    apply_step,
    format_trs,
    is_left_linear,
    make_trs,
    match_pattern,
    parse_trs,
    redexes_to_depth,
    replay,
    replay_terms,
)


def test_parse_trs_infers_arities():
    trs = parse_trs("(VAR x y) (RULES f(x, x) -> D  a -> C(a))")
    assert trs.signature.symbols == {"f": 2, "D": 0, "a": 0, "C": 1}
    assert len(trs.rules) == 2


@pytest.mark.parametrize(
    "text",
    ["(RULES a -> b)", "(VAR x) (RULES a -> )", "(VAR x) (RULES a -> b) extra", "(VAR x) (RULES a b)"],
)
def test_malformed_trs_files(text):
    with pytest.raises(TermSyntaxError):
        parse_trs(text)


def test_rule_side_conditions():
    with pytest.raises(FormatError):
        make_trs([("x", "a")])
    with pytest.raises(FormatError):
        make_trs([("f(x)", "g(y)")])


@pytest.mark.parametrize("trs", [fx.TRS_GROW, fx.TRS_DIAGONAL, fx.TRS_SWAP, fx.TRS_PROJ])
def test_format_parse_roundtrip(trs):
    again = parse_trs(format_trs(trs))
    assert again.rules == trs.rules


def test_left_linearity():
    assert is_left_linear(fx.TRS_GROW)
    assert not is_left_linear(fx.TRS_DIAGONAL)


def test_non_linear_match_uses_bisimilarity():
    trs = fx.TRS_DIAGONAL
    lhs = trs.rules[0].lhs
    s = trs.parse("f(rec X . C(X), C(rec Y . C(Y)))")
    assert match_pattern(s, lhs)["x"] == trs.parse("rec X . C(X)")
    with pytest.raises(NoMatch):
        match_pattern(trs.parse("f(a, b)"), lhs)


def test_step_with_wrong_substitution():
    trs = fx.TRS_DIAGONAL
    with pytest.raises(SubstMismatch):
        apply_step(trs.parse("f(a, a)"), Step((), 0, {"x": trs.parse("b")}), trs)


def test_positions_are_one_based():
    with pytest.raises(InvalidPosition):
        Step((0,), 0)


def test_replay_reports_failing_index():
    trs = fx.TRS_GROW
    red = FiniteReduction(trs.parse("a"), (Step((), 0), Step((2,), 0)))
    with pytest.raises(ReplayError) as info:
        replay(red, trs)
    assert info.value.index == 1


def test_projection_sequence_replays():
    red = fx.projection_sequence()
    terms = replay_terms(red, fx.TRS_PROJ)
    assert len(terms) == 7
    assert terms[3] == fx.TRS_PROJ.parse("f(a(a(a(c))), b(b(c)))")
    assert terms[4] == fx.TRS_PROJ.parse("f(a(c), b(c))")


def test_redexes_in_lexicographic_then_rule_order():
    trs = fx.TRS_PERM
    s = trs.parse("h(f(a), b)")
    assert redexes_to_depth(s, trs, 2) == [((1,), 0), ((1, 1), 1), ((2,), 2)]
    assert redexes_to_depth(s, trs, 0) == []


def test_redexes_in_infinite_term():
    trs = fx.TRS_FG
    s = trs.parse(fx.F_OMEGA)
    assert [p for p, _ in redexes_to_depth(s, trs, 3)] == [(), (1,), (1, 1), (1, 1, 1)]


@given(ground_terms, seeds)
def test_random_sequences_replay_step_by_step(s, seed):
    trs = fx.TRS_PERM
    red = random_sequence(random.Random(seed), s, trs, 4)
    terms = replay_terms(red, trs)
    for i, st in enumerate(red.steps):
        assert apply_step(terms[i], st, trs) == terms[i + 1]
