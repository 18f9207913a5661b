"""Tiny arithmetic expression language for rail shapes and speed profiles.

Grammar (standard precedence, ^ binds tighter than unary minus):

    sum     := product (('+' | '-') product)*
    product := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          right associative
    atom    := NUMBER | IDENT | IDENT '(' sum ')' | '(' sum ')'

Functions: sin cos exp sqrt abs.  At most one free variable per expression.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

from .errors import (
    DerivativeUnsupported,
    ExpressionDomainError,
    ExpressionSyntaxError,
    UnknownIdentifier,
)

FUNCTIONS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "sqrt": math.sqrt,
    "abs": abs,
}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            # skip leading whitespace before reporting
            stripped = pos + len(text[pos:]) - len(text[pos:].lstrip())
            if stripped >= len(text):
                break
            raise ExpressionSyntaxError(f"unexpected character {text[stripped]!r}", stripped)
        if m.lastgroup == "num":
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.lastgroup == "ident":
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0
        self.variable: str | None = None

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.index]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect_op(self, symbol: str) -> None:
        kind, value, pos = self.peek()
        if kind != "op" or value != symbol:
            raise ExpressionSyntaxError(f"expected {symbol!r}", pos)
        self.advance()

    def parse(self) -> Node:
        node = self.parse_sum()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {value!r}", pos)
        return node

    def parse_sum(self) -> Node:
        node = self.parse_product()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                node = BinOp(value, node, self.parse_product())
            else:
                return node

    def parse_product(self) -> Node:
        node = self.parse_unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                node = BinOp(value, node, self.parse_unary())
            else:
                return node

    def parse_unary(self) -> Node:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self) -> Node:
        node = self.parse_atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            return BinOp("^", node, self.parse_unary())
        return node

    def parse_atom(self) -> Node:
        kind, value, pos = self.advance()
        if kind == "num":
            return Num(float(value))
        if kind == "ident":
            nk, nv, _ = self.peek()
            if nk == "op" and nv == "(":
                if value not in FUNCTIONS:
                    raise UnknownIdentifier(f"unknown function {value!r} at offset {pos}")
                self.advance()
                arg = self.parse_sum()
                self.expect_op(")")
                return Call(value, arg)
            if self.variable is None:
                self.variable = value
            elif value != self.variable:
                raise UnknownIdentifier(
                    f"second free variable {value!r} at offset {pos}"
                    f" (already using {self.variable!r})"
                )
            return Var(value)
        if kind == "op" and value == "(":
            node = self.parse_sum()
            self.expect_op(")")
            return node
        raise ExpressionSyntaxError(f"unexpected {value!r}" if value else "unexpected end of input", pos)


@dataclass(frozen=True)
class ExpressionAst:
    """Parsed expression with at most one free variable."""

    root: Node
    variable: str | None

    def evaluate(self, value: float = 0.0) -> float:
        """Evaluate with guards; domain violations raise ExpressionDomainError."""
        try:
            result = _eval(self.root, value)
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            raise ExpressionDomainError(str(exc)) from exc
        if not math.isfinite(result):
            raise ExpressionDomainError(f"expression evaluated to {result}")
        return result

    def as_function(self) -> Callable[[float], float]:
        """Compile to a plain closure.  No guards; use on known-safe domains."""
        return _compile(self.root)

    def derivative(self) -> "ExpressionAst":
        """Symbolic derivative with respect to the free variable."""
        return ExpressionAst(_diff(self.root), self.variable)

    def to_string(self) -> str:
        """Canonical text form; parsing it back reproduces this AST."""
        return _print(self.root, 0)

    def __str__(self) -> str:  # pragma: no cover
        return self.to_string()


def parse_expression(text: str) -> ExpressionAst:
    """Parse expression text; malformed input raises ExpressionSyntaxError
    carrying the 0-based character offset of the offending token."""
    parser = _Parser(text)
    root = parser.parse()
    return ExpressionAst(root, parser.variable)


def _eval(node: Node, value: float) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return value
    if isinstance(node, Neg):
        return -_eval(node.operand, value)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](_eval(node.arg, value))
    left = _eval(node.left, value)
    right = _eval(node.right, value)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        return left / right
    # math.pow rejects negative bases with fractional exponents instead
    # of drifting into complex values like the ** operator
    return math.pow(left, right)


def _compile(node: Node) -> Callable[[float], float]:
    if isinstance(node, Num):
        k = node.value
        return lambda v: k
    if isinstance(node, Var):
        return lambda v: v
    if isinstance(node, Neg):
        f = _compile(node.operand)
        return lambda v: -f(v)
    if isinstance(node, Call):
        fn = FUNCTIONS[node.func]
        f = _compile(node.arg)
        return lambda v: fn(f(v))
    lf = _compile(node.left)
    rf = _compile(node.right)
    op = node.op
    if op == "+":
        return lambda v: lf(v) + rf(v)
    if op == "-":
        return lambda v: lf(v) - rf(v)
    if op == "*":
        return lambda v: lf(v) * rf(v)
    if op == "/":
        return lambda v: lf(v) / rf(v)
    return lambda v: math.pow(lf(v), rf(v))


# light constant folding keeps derivative trees small

def _add(a: Node, b: Node) -> Node:
    if isinstance(a, Num) and a.value == 0.0:
        return b
    if isinstance(b, Num) and b.value == 0.0:
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return BinOp("+", a, b)


def _sub(a: Node, b: Node) -> Node:
    if isinstance(b, Num) and b.value == 0.0:
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    if isinstance(a, Num) and a.value == 0.0:
        return Neg(b)
    return BinOp("-", a, b)


def _mul(a: Node, b: Node) -> Node:
    if isinstance(a, Num):
        if a.value == 0.0:
            return Num(0.0)
        if a.value == 1.0:
            return b
    if isinstance(b, Num):
        if b.value == 0.0:
            return Num(0.0)
        if b.value == 1.0:
            return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return BinOp("*", a, b)


def _div(a: Node, b: Node) -> Node:
    if isinstance(a, Num) and a.value == 0.0:
        return Num(0.0)
    if isinstance(b, Num) and b.value == 1.0:
        return a
    return BinOp("/", a, b)


def _diff(node: Node) -> Node:
    if isinstance(node, Num):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0)
    if isinstance(node, Neg):
        d = _diff(node.operand)
        return Num(0.0) if isinstance(d, Num) and d.value == 0.0 else Neg(d)
    if isinstance(node, Call):
        inner = _diff(node.arg)
        if node.func == "sin":
            outer: Node = Call("cos", node.arg)
        elif node.func == "cos":
            outer = Neg(Call("sin", node.arg))
        elif node.func == "exp":
            outer = Call("exp", node.arg)
        elif node.func == "sqrt":
            outer = _div(Num(0.5), Call("sqrt", node.arg))
        elif node.func == "abs":
            # u/|u| * u'; undefined at u = 0, as is abs itself
            outer = _div(node.arg, Call("abs", node.arg))
        else:  # pragma: no cover
            raise DerivativeUnsupported(f"no derivative rule for {node.func!r}")
        return _mul(outer, inner)
    if node.op == "+":
        return _add(_diff(node.left), _diff(node.right))
    if node.op == "-":
        return _sub(_diff(node.left), _diff(node.right))
    if node.op == "*":
        return _add(_mul(_diff(node.left), node.right), _mul(node.left, _diff(node.right)))
    if node.op == "/":
        num = _sub(_mul(_diff(node.left), node.right), _mul(node.left, _diff(node.right)))
        return _div(num, BinOp("^", node.right, Num(2.0)))
    # power: supported for constant exponents, which covers every rail we build
    if isinstance(node.right, Num):
        n = node.right.value
        return _mul(_mul(Num(n), BinOp("^", node.left, Num(n - 1.0))), _diff(node.left))
    raise DerivativeUnsupported("derivative of a^b needs a constant exponent b")


# printer precedence levels: 1 sum, 2 product, 3 unary, 4 power, 5 atom

def _level(node: Node) -> int:
    if isinstance(node, (Num, Var, Call)):
        return 5
    if isinstance(node, Neg):
        return 3
    return {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}[node.op]


def _print(node: Node, parent_level: int) -> str:
    if isinstance(node, Num):
        text = repr(node.value)
        if text.endswith(".0"):
            text = text[:-2]
        return text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        body = "-" + _print(node.operand, 3)
        return f"({body})" if parent_level > 3 else body
    if isinstance(node, Call):
        return f"{node.func}({_print(node.arg, 0)})"
    if node.op in "+-":
        body = f"{_print(node.left, 1)} {node.op} {_print(node.right, 2)}"
        needs = parent_level > 1
    elif node.op in "*/":
        body = f"{_print(node.left, 2)}{node.op}{_print(node.right, 3)}"
        needs = parent_level > 2
    else:
        body = f"{_print(node.left, 5)}^{_print(node.right, 3)}"
        needs = parent_level > 4
    return f"({body})" if needs else body
