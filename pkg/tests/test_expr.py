import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sugeno_hh.errors import EvaluationError, ParseError
from sugeno_hh.expr import (
    FUNCTIONS,
    Binary,
    Const,
    Num,
    Unary,
    Var,
    evaluate,
    evaluate_constant,
    parse,
    to_string,
)


def test_parse_exp_neg_x():
    assert parse("exp(-x)") == Unary("exp", Unary("neg", Var()))


def test_parse_nested_integrand():
    tree = parse("exp(-cos(x)-1)")
    assert tree == Unary("exp", Binary("-", Unary("neg", Unary("cos", Var())), Num(1.0)))


def test_power_is_right_associative():
    assert evaluate(parse("2^3^2"), 0.3) == 512


@pytest.mark.parametrize(
    "text, x, expected",
    [
        ("exp(-x)", 0.5, math.exp(-0.5)),
        ("exp(-sin(x))", 1.0, math.exp(-math.sin(1.0))),
        ("x", 0.0, 0.0),
        ("-x^2", 3.0, -9.0),
        ("2^-1", 0.0, 0.5),
        ("-2^2", 0.0, -4.0),
        ("1 - 2 - 3", 0.0, -4.0),
        ("8/4/2", 0.0, 1.0),
        ("pi/4", 0.0, math.pi / 4),
        ("e^x", 1.0, math.e),
        ("1.5e-3*x", 2.0, 3e-3),
        (".5+x", 1.0, 1.5),
        ("sqrt(abs(x))", -4.0, 2.0),
        ("ln(e)", 0.0, 1.0),
        ("+x", 2.0, 2.0),
    ],
)
def test_evaluate(text, x, expected):
    assert evaluate(parse(text), x) == pytest.approx(expected, rel=1e-15)


def test_reference_sample_values():
    assert evaluate(parse("exp(-x)"), 0.5) == pytest.approx(0.6065, abs=1e-4)
    assert evaluate(parse("exp(-sin(x))"), 1.0) == pytest.approx(0.4311, abs=1e-4)


def test_array_evaluation_matches_scalar():
    tree = parse("exp(-cos(x)-1) + 3")
    xs = np.linspace(0, 1, 11)
    np.testing.assert_array_equal(evaluate(tree, xs), [evaluate(tree, v) for v in xs])


def test_constant_expression_broadcasts_over_arrays():
    out = evaluate(parse("0.25"), np.zeros(5))
    assert out.shape == (5,) and np.all(out == 0.25)


@pytest.mark.parametrize(
    "text, pos",
    [
        ("", 0),
        ("(x", 2),
        ("x)", 1),
        ("x +", 3),
        ("2 * * x", 4),
        ("exp x", 4),
        ("foo(x)", 0),
        ("y + 1", 0),
        ("x $ 2", 2),
        ("sin()", 4),
        ("((x)", 4),
    ],
)
def test_malformed_input_reports_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.position == pos


@pytest.mark.parametrize(
    "text, x",
    [("ln(x)", 0.0), ("ln(x-1)", 0.5), ("1/x", 0.0), ("x^-1", 0.0), ("sqrt(x)", -1.0),
     ("(-8)^(1/3)", 0.0), ("exp(x)", 1000.0)],
)
def test_domain_errors_are_raised_not_nan(text, x):
    with pytest.raises(EvaluationError):
        evaluate(parse(text), x)


def test_domain_error_on_arrays():
    with pytest.raises(EvaluationError, match="x=0.0"):
        evaluate(parse("ln(x)"), np.array([1.0, 0.0, 2.0]))


def test_evaluate_constant_rejects_x():
    assert evaluate_constant("pi/2") == math.pi / 2
    with pytest.raises(ParseError):
        evaluate_constant("x+1")


# random well-formed trees that stay finite on [-2, 2]
_leaves = st.one_of(
    st.floats(-10, 10, allow_nan=False).map(Num),
    st.just(Var()),
    st.sampled_from(["pi", "e"]).map(Const),
)


def _extend(children):
    safe_unary = st.sampled_from(["neg", "sin", "cos", "abs"])
    return st.one_of(
        st.tuples(safe_unary, children).map(lambda t: Unary(*t)),
        st.tuples(st.sampled_from(["+", "-", "*"]), children, children).map(lambda t: Binary(*t)),
        children.map(lambda c: Unary("exp", Unary("sin", c))),
        children.map(lambda c: Unary("sqrt", Unary("abs", c))),
        children.map(lambda c: Unary("ln", Binary("+", Num(1.0), Unary("abs", c)))),
        st.tuples(children, children).map(
            lambda t: Binary("/", t[0], Binary("+", Num(2.0), Unary("sin", t[1])))),
        children.map(lambda c: Binary("^", Binary("+", Num(1.5), Unary("cos", c)), Num(2.0))),
    )


trees = st.recursive(_leaves, _extend, max_leaves=12)


@settings(max_examples=150, deadline=None)
@given(trees)
def test_pretty_print_round_trip(tree):
    again = parse(to_string(tree))
    xs = np.random.default_rng(0).uniform(-2, 2, 100)
    np.testing.assert_allclose(evaluate(again, xs), evaluate(tree, xs), rtol=0, atol=0)


def test_function_set_is_fixed():
    assert set(FUNCTIONS) == {"exp", "ln", "sin", "cos", "sqrt", "abs"}
