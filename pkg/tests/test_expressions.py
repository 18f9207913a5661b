"""Parser, printer, evaluator, and derivative of the expression DSL."""

import math

import pytest
from hypothesis import given, strategies as st

from retrocam.errors import (
    DerivativeUnsupported,
    ExpressionDomainError,
    ExpressionSyntaxError,
    UnknownIdentifier,
)
from retrocam.expressions import parse_expression


def ev(text, value=0.0):
    return parse_expression(text).evaluate(value)


def test_precedence_and_associativity():
    assert ev("2 + 3*4") == 14.0
    assert ev("2*3^2") == 18.0
    assert ev("(2*3)^2") == 36.0
    assert ev("2^3^2") == 512.0  # right associative
    assert ev("-2^2") == -4.0  # unary minus binds looser than the power
    assert ev("6/3/2") == 1.0  # left associative
    assert ev("1 - 2 - 3") == -4.0


def test_functions_and_variable():
    assert ev("sin(0)") == 0.0
    assert ev("cos(0)") == 1.0
    assert math.isclose(ev("exp(1)"), math.e, rel_tol=1e-15)
    assert ev("sqrt(9)") == 3.0
    assert ev("abs(0 - 3)") == 3.0
    assert math.isclose(ev("0.5 + 0.4*sin(0.1*t)", 3.0),
                        0.5 + 0.4 * math.sin(0.3), rel_tol=1e-15)


def test_syntax_error_carries_offset():
    with pytest.raises(ExpressionSyntaxError) as err:
        parse_expression("2 + * x")
    assert err.value.position == 4
    assert "offset 4" in str(err.value)
    for bad in ("", "2 +", "sin(", "2 2", "(1", "1)"):
        with pytest.raises(ExpressionSyntaxError):
            parse_expression(bad)


def test_identifier_errors():
    with pytest.raises(UnknownIdentifier):
        parse_expression("foo(x)")
    with pytest.raises(UnknownIdentifier):
        parse_expression("x + y")  # one free variable only


def test_domain_errors():
    with pytest.raises(ExpressionDomainError):
        ev("1/x")
    with pytest.raises(ExpressionDomainError):
        ev("sqrt(0 - 1)")
    with pytest.raises(ExpressionDomainError):
        ev("x^0.5", -4.0)


def test_printer_is_canonical():
    cases = {
        "2+0.3*sin(x)": "2 + 0.3*sin(x)",
        "x * (y0 + 1)": None,  # second variable, must fail
        "-(x + 1)": "-(x + 1)",
        "x^2 + 2": "x^2 + 2",
        "2^3^2": "2^3^2",
        "(2^3)^2": "(2^3)^2",
    }
    for text, want in cases.items():
        if want is None:
            with pytest.raises(UnknownIdentifier):
                parse_expression(text)
            continue
        assert parse_expression(text).to_string() == want


def test_as_function_matches_evaluate():
    ast = parse_expression("0.5 + 0.4*sin(0.1*t)")
    fn = ast.as_function()
    for t in (-7.0, -1.0, 0.0, 2.5):
        assert fn(t) == ast.evaluate(t)


def test_derivative_basics():
    d = parse_expression("x^3 + 2*x").derivative()
    for x in (-2.0, 0.0, 1.5):
        assert math.isclose(d.evaluate(x), 3 * x * x + 2, rel_tol=1e-14)
    d2 = parse_expression("sin(2*x)").derivative()
    for x in (-1.0, 0.3):
        assert math.isclose(d2.evaluate(x), 2 * math.cos(2 * x), rel_tol=1e-14)
    dabs = parse_expression("abs(x)").derivative()
    assert dabs.evaluate(3.0) == 1.0
    assert dabs.evaluate(-3.0) == -1.0
    with pytest.raises(ExpressionDomainError):
        dabs.evaluate(0.0)


def test_derivative_requires_constant_exponent():
    with pytest.raises(DerivativeUnsupported):
        parse_expression("x^x").derivative()
    with pytest.raises(DerivativeUnsupported):
        parse_expression("2^x").derivative()


_leaf = st.one_of(
    st.floats(min_value=-5, max_value=5, allow_nan=False).map(
        lambda v: f"{round(v, 3)}"
    ),
    st.just("x"),
)


@st.composite
def _expr_text(draw, depth=0):
    if depth >= 3 or draw(st.booleans()):
        return draw(_leaf)
    op = draw(st.sampled_from(["+", "-", "*"]))
    a = draw(_expr_text(depth + 1))
    b = draw(_expr_text(depth + 1))
    shape = draw(st.sampled_from(["{a} {op} {b}", "({a}) {op} {b}", "sin({a}) {op} {b}"]))
    return shape.format(a=a, op=op, b=b)


@given(_expr_text())
def test_print_parse_round_trip(text):
    ast = parse_expression(text)
    printed = ast.to_string()
    again = parse_expression(printed)
    assert again.to_string() == printed
    assert again.root == ast.root
