import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from blocktf import generators as gen
from blocktf.blockdiag import Feedback, Leaf, Series, Summation
from blocktf.dsl import (parse, parse_coeffs, parse_ratfunc, parse_signal,
                         print_expr)
from blocktf.errors import ParseError
from blocktf.ratfunc import RatFunc
from blocktf.verification import golden_text, model_names, read_model

from conftest import tf


def test_series_literal():
    e = parse("ser[tf(0.05;0.1,1)]")
    assert e == Series((Leaf(tf([F(1, 20)], [F(1, 10), 1])),))
    assert parse(print_expr(e)) == e


def test_feedback_literal():
    assert parse("fb(tf(1;1,1), tf(1;1))") == Feedback(Leaf(tf([1], [1, 1])), Leaf(RatFunc(1)))


def test_empty_list_position():
    with pytest.raises(ParseError) as info:
        parse("ser[]")
    assert info.value.span.line == 1 and info.value.span.column == 5
    assert str(info.value).startswith("1:5:")


def test_error_positions_multiline():
    with pytest.raises(ParseError) as info:
        parse("# comment\nser[\n  tf(1;1),\n  tf(1;)\n]")
    assert info.value.span.line == 4


def test_printer():
    assert print_expr(Leaf(tf([1], [2, 1]))) == "tf(1;2,1)"
    g = Leaf(tf([1], [1, 1]))
    assert print_expr(Summation((g, g))) == "summ[tf(1;1,1),tf(1;1,1)]"


def test_comments_and_whitespace():
    text = "# arms and trunk\nser[ tf(0.05 ; 1) ,   # gain\n tf(1;0.1,1) ]\n"
    assert parse(text) == Series((Leaf(RatFunc(F(1, 20))), Leaf(tf([1], [F(1, 10), 1]))))


@pytest.mark.parametrize("bad", [
    "", "tf(1;0)", "tf(1;)", "ser[tf(1;1)", "ser[tf(1;1)] extra", "pick(tf(1;1))[]",
    "fb(tf(1;1))", "tf(1/0;1)", "foo", "tf(1;1", "summ[,]", "tf(1e5;1)",
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse(bad)


def test_deep_nesting_is_a_parse_error():
    deep = "ser[" * 5000 + "tf(1;1)" + "]" * 5000
    with pytest.raises(ParseError):
        parse(deep)
    with pytest.raises(ParseError):
        parse_signal("(" * 5000 + "step" + ")" * 5000)


def test_random_roundtrip():
    rng = random.Random(17)
    for _ in range(200):
        tree = gen.block_tree(rng, depth=5, max_leaves=12, pickoff=True)
        assert parse(print_expr(tree)) == tree


def test_ratfunc_and_coeffs():
    assert parse_ratfunc("1;0.1,1") == tf([1], [F(1, 10), 1])
    assert parse_ratfunc("tf(1;0.1,1)") == tf([1], [F(1, 10), 1])
    assert parse_coeffs("1/2, -3, 0.25") == [F(1, 2), -3, F(1, 4)]
    with pytest.raises(ParseError):
        parse_coeffs("1,,2")


def test_signal_errors():
    for bad in ("t^", "exp(", "delay(1, )", "step step", "sin(x)", "delay(-1, step)"):
        with pytest.raises(ParseError):
            parse_signal(bad)


def test_golden_models():
    names = model_names()
    assert "arms_trunk" in names
    from importlib import resources
    for name in names:
        golden = (resources.files("blocktf") / "models" / f"{name}.golden").read_text("utf-8")
        assert golden_text(read_model(name)) == golden


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="serumpickfbt()[];,0123456789/.- \n#", max_size=40))
def test_parser_is_total(text):
    try:
        parse(text)
    except ParseError:
        pass


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="stepxcosindlay()^*+-/,0123456789. ", max_size=40))
def test_signal_parser_is_total(text):
    try:
        parse_signal(text)
    except ParseError:
        pass
